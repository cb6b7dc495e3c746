"""GF(q)-subspaces of GF(q^m).

A subspace is kept as the reduced row-echelon basis of its elements'
internal coordinate vectors, so two subspaces are equal exactly when their
stored bases are.  An extension element and its coordinate vector are the
same array here, which keeps products and memberships cheap.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import matrix_ops as mo
from .errors import NoSolution, ZeroScalar
from .field_tower import FieldContext


class Subspace:
    __slots__ = ("ctx", "basis", "pivots", "_key")

    def __init__(self, ctx: FieldContext, basis, pivots):
        self.ctx = ctx
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, ctx.m)
        basis.flags.writeable = False
        self.basis = basis
        self.pivots = tuple(pivots)
        self._key = (ctx.key, basis.tobytes())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, m={self.ctx.m}, q={self.ctx.q})"

    def __contains__(self, x):
        return contains(self, x)

    def residue(self, X):
        """Reduce vectors against the basis; zero rows are the members."""
        B = self.ctx.base
        X = np.array(X, dtype=np.int64, copy=True)
        for row, c in zip(self.basis, self.pivots):
            X = B.sub(X, B.mul(X[..., c:c + 1], row))
        return X

    def coordinates(self, X):
        """Coefficients of members X in the stored (RREF) basis."""
        X = np.asarray(X, dtype=np.int64)
        if np.any(self.residue(X)):
            raise NoSolution("vector not in subspace")
        return X[..., list(self.pivots)]

    def elements(self):
        """All q^dim members (toy sizes only)."""
        B = self.ctx.base
        if self.dim == 0:
            return self.ctx.zeros((1,))
        coeffs = np.array(list(itertools.product(range(B.q), repeat=self.dim)), dtype=np.int64)
        return B.sum(B.mul(coeffs[:, :, None], self.basis[None]), axis=1)


def zero_space(ctx: FieldContext) -> Subspace:
    return Subspace(ctx, np.zeros((0, ctx.m), dtype=np.int64), ())


def span(ctx: FieldContext, vectors) -> Subspace:
    V = np.asarray(vectors, dtype=np.int64).reshape(-1, ctx.m)
    if V.shape[0] == 0:
        return zero_space(ctx)
    R, piv = mo.rref(ctx.base, V)
    return Subspace(ctx, R[:len(piv)], piv)


def full_space(ctx: FieldContext) -> Subspace:
    return span(ctx, mo.identity(ctx.base, ctx.m))


def add(A: Subspace, B: Subspace) -> Subspace:
    return span(A.ctx, np.concatenate([A.basis, B.basis]))


def product_space(A: Subspace, B: Subspace) -> Subspace:
    ctx = A.ctx
    if A.dim == 0 or B.dim == 0:
        return zero_space(ctx)
    prods = ctx.mul(A.basis[:, None, :], B.basis[None, :, :])
    return span(ctx, prods.reshape(-1, ctx.m))


def scale(x, S: Subspace) -> Subspace:
    ctx = S.ctx
    x = np.asarray(x, dtype=np.int64)
    if not np.any(x):
        raise ZeroScalar("scaling a subspace by zero")
    return span(ctx, ctx.mul(x, S.basis))


def scale_inv(x, S: Subspace) -> Subspace:
    """x^-1 . S"""
    x = np.asarray(x, dtype=np.int64)
    if not np.any(x):
        raise ZeroScalar("inverse of zero scalar")
    return scale(S.ctx.inv(x), S)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: reduce [[A, A], [B, 0]]; rows whose left half vanishes span A n B."""
    ctx = A.ctx
    if A.dim == 0 or B.dim == 0:
        return zero_space(ctx)
    m = ctx.m
    top = np.concatenate([A.basis, A.basis], axis=1)
    bot = np.concatenate([B.basis, np.zeros_like(B.basis)], axis=1)
    R, piv = mo.rref(ctx.base, np.concatenate([top, bot]))
    rows = [i for i, c in enumerate(piv) if c >= m]
    return span(ctx, R[rows, m:])


def contains(A: Subspace, x) -> bool:
    x = np.asarray(x, dtype=np.int64)
    return not np.any(A.residue(x))


def contains_all(A: Subspace, X) -> bool:
    return not np.any(A.residue(np.asarray(X, dtype=np.int64).reshape(-1, A.ctx.m)))


def subspace_of(A: Subspace, B: Subspace) -> bool:
    """A is contained in B."""
    return contains_all(B, A.basis)


def sample_subspace(ctx: FieldContext, dim: int, rng) -> Subspace:
    if not 0 <= dim <= ctx.m:
        raise ValueError(f"dimension {dim} outside [0, {ctx.m}]")
    return sample_superspace(zero_space(ctx), dim, rng)


def sample_superspace(T: Subspace, r: int, rng) -> Subspace:
    """Uniform r-dimensional subspace containing T, grown one vector at a time."""
    ctx = T.ctx
    if not T.dim <= r <= ctx.m:
        raise ValueError(f"cannot extend a {T.dim}-dimensional space to dimension {r}")
    S = T
    while S.dim < r:
        v = ctx.random(rng)
        if not np.any(S.residue(v)):
            continue
        S = span(ctx, np.concatenate([S.basis, v[None]]))
    return S


def sample_vector_in(S: Subspace, n: int, rng):
    """n coordinates drawn independently and uniformly from S."""
    ctx = S.ctx
    if S.dim == 0:
        return ctx.zeros((n,))
    B = ctx.base
    c = B.random(rng, (n, S.dim))
    return B.sum(B.mul(c[:, :, None], S.basis[None]), axis=1)


def basis_coordinates(base, basis, X):
    """Coefficients c with X = c . basis for an independent ``basis``.

    Raises NoSolution if some row of X lies outside the span or the rows of
    ``basis`` are dependent.
    """
    basis = np.asarray(basis, dtype=np.int64)
    X = np.asarray(X, dtype=np.int64)
    k, m = basis.shape
    aug = np.concatenate([basis, mo.identity(base, k)], axis=1)
    R, piv = mo.rref(base, aug, pivot_cols=m)
    if len(piv) < k:
        raise NoSolution("basis vectors are dependent")
    Rb, Tm = R[:, :m], R[:, m:]
    resid = X.copy()
    for row, c in zip(Rb, piv):
        resid = base.sub(resid, base.mul(resid[..., c:c + 1], row))
    if np.any(resid):
        raise NoSolution("vector outside the span")
    lead = X[..., list(piv)]
    return base.sum(base.mul(lead[..., :, None], Tm), axis=-2)

"""Dense linear algebra over GF(q) and GF(q^m).

Every function takes the field first (a :class:`~ranksign.field_tower.BaseField`
or a :class:`~ranksign.field_tower.FieldContext`).  Matrices are numpy arrays
of shape ``(rows, cols) + field.elem_shape``.
"""

from __future__ import annotations

import numpy as np

from .errors import NoSolution, Singular


def _nelem(field) -> int:
    return len(field.elem_shape)


def shape2(field, M) -> tuple[int, int]:
    s = np.shape(M)
    return s[0], s[1]


def identity(field, n: int):
    out = field.zeros((n, n))
    one = field.one()
    for i in range(n):
        out[i, i] = one
    return out


def matmul(field, A, B):
    """A @ B; either operand may also be a vector (a single row / column)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    e = _nelem(field)
    a_vec = A.ndim == 1 + e
    b_vec = B.ndim == 1 + e
    if a_vec:
        A = A[None]
    if b_vec:
        B = B[:, None]
    out = field.mulsum(A[:, :, None], B[None, :, :], axis=1)
    if a_vec:
        out = out[0]
    if b_vec:
        out = out[..., 0, :] if e else out[..., 0]
    return out


def rref(field, M, pivot_cols: int | None = None):
    """Reduced row-echelon form.

    Returns ``(R, pivots)`` where R has the input's shape (zero rows at the
    bottom) and ``pivots`` lists the pivot column of each nonzero row.  Only
    the first ``pivot_cols`` columns are searched for pivots; row operations
    act on the full width.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = shape2(field, R)
    if pivot_cols is None:
        pivot_cols = cols
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        nz = np.nonzero(~field.is_zero(R[r:, c]))[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = field.mul(field.inv(R[r, c]), R[r])
        f = R[:, c].copy()
        f[r] = field.zeros(())
        live = np.nonzero(~field.is_zero(f))[0]
        if live.size:
            R[live] = field.sub(R[live], field.mul(f[live][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field, M) -> int:
    if 0 in shape2(field, M):
        return 0
    return len(rref(field, M)[1])


def solve(field, M, b):
    """One x with M x^T = b; free variables are set to zero.

    Raises NoSolution if b is not in the column space of M.
    """
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    rows, cols = shape2(field, M)
    if b.shape[0] != rows:
        raise ValueError(f"right-hand side has {b.shape[0]} rows, matrix has {rows}")
    aug = np.concatenate([M, b[:, None]], axis=1)
    R, piv = rref(field, aug)
    if piv and piv[-1] == cols:
        raise NoSolution("system is inconsistent")
    x = field.zeros((cols,))
    for i, c in enumerate(piv):
        x[c] = R[i, cols]
    return x


def invert(field, M):
    M = np.asarray(M, dtype=np.int64)
    n, n2 = shape2(field, M)
    if n != n2:
        raise ValueError("only square matrices can be inverted")
    aug = np.concatenate([M, identity(field, n)], axis=1)
    R, piv = rref(field, aug, pivot_cols=n)
    if len(piv) < n:
        raise Singular(f"matrix has rank {len(piv)} < {n}")
    return R[:, n:]


def random_matrix(field, rows: int, cols: int, rng):
    return field.random(rng, (rows, cols))


def sample_invertible_with_inverse(field, dim: int, rng, max_tries: int | None = None):
    """Uniform element of GL_dim by rejection; returns (M, M^-1, tries)."""
    tries = 0
    while max_tries is None or tries < max_tries:
        tries += 1
        M = field.random(rng, (dim, dim))
        try:
            return M, invert(field, M), tries
        except Singular:
            continue
    raise Singular(f"no invertible matrix after {max_tries} draws")


def sample_invertible(field, dim: int, rng):
    return sample_invertible_with_inverse(field, dim, rng)[0]


def batch_rank(field, mats) -> np.ndarray:
    """Ranks of a stack of base-field matrices, shape (batch, rows, cols)."""
    R = np.array(mats, dtype=np.int64, copy=True)
    nb, rows, cols = R.shape
    ranks = np.zeros(nb, dtype=np.int64)
    used = np.zeros((nb, rows), dtype=bool)
    idx = np.arange(nb)
    for c in range(cols):
        cand = (R[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = idx[has]
        p = cand[has].argmax(axis=1)
        prow = R[b, p]
        prow = field.mul(field.inv(prow[:, c])[:, None], prow)
        f = R[b, :, c].copy()
        f[np.arange(b.size), p] = 0
        R[b] = field.sub(R[b], field.mul(f[:, :, None], prow[:, None, :]))
        R[b, p] = prow
        used[b, p] = True
        ranks[b] += 1
    return ranks


def gfq_apply(ctx, X, P):
    """X @ P for X over GF(q^m) (rows, l) and P over GF(q) (l, c); X may be a vector."""
    B = ctx.base
    X = np.asarray(X, dtype=np.int64)
    P = np.asarray(P, dtype=np.int64)
    # contract the position axis of X against the rows of P, digit axis untouched
    return B.sum(B.mul(X[..., :, None, :], P[:, :, None]), axis=-3)

"""LRPC codes and their errors/erasures decoder.

The parity-check matrix H has every entry in a d-dimensional subspace F
with ordered basis F_1 = 1, F_2, ..., F_d.  Writing H[i, l] =
sum_u h[i, l, u] F_u, the decoder only ever needs the GF(q) matrix

    M[(i*d + u), l] = h[i, l, u]

because for a support E with basis E_1..E_r the syndrome equation splits
into r independent copies of M e_{.j} = sigma_{.j}, one per E_j.  The formal
matrix of the whole system is therefore I_r (x) M, and when n = (n-k)d only
M^-1 has to be stored.

The support is recovered as F_1^-1 S n F_2^-1 S.  When r(2d-1) > m that
pairwise intersection is always larger than E, so such codes intersect all
d spaces F_u^-1 S instead (``pairwise=False``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrix_ops as mo
from . import subspace_algebra as sa
from .errors import DecodingFailure, InvalidParams, NoSolution, ResourceExhausted, Singular
from .field_tower import FieldContext, get_field
from .params import CodeParams

RETRY_CAP = 64


@dataclass(eq=False)
class LrpcCode:
    params: CodeParams
    ctx: FieldContext
    F: np.ndarray          # (d, m) ordered basis, F[0] = 1
    coeffs: np.ndarray     # (n-k, n, d) GF(q) coordinates of H over F
    H: np.ndarray = field(init=False)
    M: np.ndarray = field(init=False)
    M_inv: np.ndarray | None = field(init=False)
    pairwise: bool = True
    F_inv: np.ndarray = field(init=False)
    F_space: sa.Subspace = field(init=False)

    def __post_init__(self):
        p, ctx = self.params, self.ctx
        self.F = np.asarray(self.F, dtype=np.int64)
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)
        if self.F.shape != (p.d, ctx.m) or self.coeffs.shape != (p.nk, p.n, p.d):
            raise InvalidParams("F basis or H coefficients have the wrong shape")
        self.F_space = sa.span(ctx, self.F)
        if self.F_space.dim != p.d:
            raise InvalidParams("F basis is not linearly independent")
        B = ctx.base
        self.H = B.sum(B.mul(self.coeffs[..., None], self.F[None, None]), axis=2)
        self.M = self.coeffs.transpose(0, 2, 1).reshape(p.nk * p.d, p.n)
        self.F_inv = ctx.inv(self.F[:2] if self.pairwise else self.F)
        self.M_inv = None
        if p.square:
            self.M_inv = mo.invert(B, self.M)
        elif mo.rank(B, self.M) < p.n:
            raise Singular("H has no left inverse over its F-coordinates")

    @property
    def n(self):
        return self.params.n


@dataclass
class ErasureDecodeResult:
    e: np.ndarray
    E: sa.Subspace


def mixing_dim(ctx: FieldContext, Fb) -> int:
    """dim(F_1^-1 F + F_2^-1 F)."""
    Fs = sa.span(ctx, Fb)
    return sa.add(sa.scale_inv(Fb[0], Fs), sa.scale_inv(Fb[1], Fs)).dim


def sample_f_basis(ctx: FieldContext, d: int, rng, max_tries: int = RETRY_CAP):
    """Basis (1, F_2, ..., F_d) with dim(F + F_2^-1 F) = 2d - 1."""
    if d < 2 or 2 * d - 1 > ctx.m:
        raise InvalidParams(f"need 2 <= d and 2d-1 <= m, got d={d}, m={ctx.m}")
    for _ in range(max_tries):
        Fb = np.concatenate([ctx.one()[None], ctx.random(rng, (d - 1,))])
        if sa.span(ctx, Fb).dim == d and mixing_dim(ctx, Fb) == 2 * d - 1:
            return Fb
    raise ResourceExhausted(f"no admissible F after {max_tries} draws")


def gen_code(params: CodeParams, rng, ctx: FieldContext | None = None,
             allow_rectangular: bool = False) -> LrpcCode:
    p = params
    if not p.square and not allow_rectangular:
        raise InvalidParams(f"n = {p.n} differs from (n-k)d = {p.nk * p.d}")
    if p.square is False and p.n > p.nk * p.d:
        raise InvalidParams("n exceeds (n-k)d; the decoder system would be underdetermined")
    ctx = ctx or get_field(p.q, p.m)
    Fb = sample_f_basis(ctx, p.d, rng)
    pairwise = p.r * (2 * p.d - 1) <= p.m
    for _ in range(RETRY_CAP):
        coeffs = ctx.base.random(rng, (p.nk, p.n, p.d))
        try:
            return LrpcCode(p, ctx, Fb, coeffs, pairwise)
        except Singular:
            continue
    raise ResourceExhausted(f"no full-rank H after {RETRY_CAP} draws")


def build_formal_matrix(code: LrpcCode, r: int | None = None) -> np.ndarray:
    """H_f with nr rows and (n-k)rd columns, acting on row vectors.

    Unknowns e_{lj} are indexed j*n + l and syndrome coordinates
    sigma_{i,u,j} (coefficient of F_u E_j in s_i) are indexed
    j*(n-k)d + i*d + u, so that sigma = e . H_f.
    """
    r = code.params.r if r is None else r
    B = code.ctx.base
    out = B.zeros((r * code.n, r * code.M.shape[0]))
    MT = code.M.T
    for j in range(r):
        out[j * code.n:(j + 1) * code.n, j * MT.shape[1]:(j + 1) * MT.shape[1]] = MT
    return out


def support_from_syndrome(ctx: FieldContext, Fb, T: sa.Subspace, s, r: int, F_inv=None):
    """Recover E from (F, T, s) and test conditions (i)-(iii).

    E is the intersection of the spaces F_u^-1 S over the inverses in
    ``F_inv`` (default: F_1 and F_2 only).  Returns (E, failed) where
    ``failed`` is a set of the condition labels "i", "ii", "iii" that do not
    hold (empty on success).
    """
    Fb = np.asarray(Fb, dtype=np.int64)
    d = Fb.shape[0]
    if F_inv is None:
        F_inv = ctx.inv(Fb[:2])
    s = np.asarray(s, dtype=np.int64).reshape(-1, ctx.m)
    FT = ctx.mul(Fb[:, None], T.basis[None]).reshape(-1, ctx.m)
    S = sa.span(ctx, np.concatenate([FT, s]))
    if S.dim != r * d:
        return None, {"iii"}
    E = _pull_back(F_inv, S)
    if E.dim != r:
        return E, {"ii"}
    failed = set()
    FE = sa.product_space(sa.span(ctx, Fb), E)
    if FE.dim != d * r:
        failed.add("i")
    if _pull_back(F_inv, FE).dim != r:
        failed.add("ii")
    if FE != S:
        failed.add("iii")
    return E, failed


def _pull_back(F_inv, S):
    out = sa.scale(F_inv[0], S)
    for f in F_inv[1:]:
        out = sa.intersect(out, sa.scale(f, S))
    return out


def check_tdecodable(code: LrpcCode, T: sa.Subspace, s):
    """(ok, E or failure labels)."""
    E, failed = support_from_syndrome(code.ctx, code.F, T, s, code.params.r, code.F_inv)
    if failed:
        return False, frozenset(failed)
    return True, E


def decode(code: LrpcCode, T: sa.Subspace, s) -> ErasureDecodeResult:
    """Find e in E^n with H e^T = s and T in E, or raise DecodingFailure."""
    p, ctx = code.params, code.ctx
    B = ctx.base
    if T.dim != p.t:
        raise ValueError(f"erasure space has dimension {T.dim}, expected {p.t}")
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (p.nk, ctx.m):
        raise ValueError(f"syndrome must have shape {(p.nk, ctx.m)}, got {s.shape}")
    ok, E = check_tdecodable(code, T, s)
    if not ok:
        raise DecodingFailure(E)
    r, d = p.r, p.d
    # product basis F_u E_j at index u*r + j
    prod = ctx.mul(code.F[:, None], E.basis[None]).reshape(d * r, ctx.m)
    try:
        sigma = sa.basis_coordinates(B, prod, s)        # (n-k, d*r)
    except NoSolution:
        raise DecodingFailure({"iii"}) from None
    sigma = sigma.reshape(p.nk * d, r)                  # row i*d + u, column j
    if code.M_inv is not None:
        coef = mo.matmul(B, code.M_inv, sigma)          # (n, r)
    else:
        try:
            coef = np.stack([mo.solve(B, code.M, sigma[:, j]) for j in range(r)], axis=1)
        except NoSolution:
            raise DecodingFailure({"solve"}, "syndrome outside the image of H on E^n") from None
    e = B.sum(B.mul(coef[:, :, None], E.basis[None]), axis=1)
    return ErasureDecodeResult(e=e, E=E)


def syndrome(code: LrpcCode, e) -> np.ndarray:
    return mo.matmul(code.ctx, code.H, e)


def planted_instance(code: LrpcCode, rng, max_tries: int = 1000):
    """A random (T, E, e, s) with s = H e^T decodable back to e.

    E contains T and satisfies conditions (i)-(ii); e is uniform in E^n
    conditioned on its syndrome satisfying (iii).
    """
    p, ctx = code.params, code.ctx
    for _ in range(max_tries):
        T = sa.sample_subspace(ctx, p.t, rng)
        E = sa.sample_superspace(T, p.r, rng)
        e = sa.sample_vector_in(E, p.n, rng)
        s = syndrome(code, e)
        ok, got = check_tdecodable(code, T, s)
        if ok and got == E:
            return T, E, e, s
    raise ResourceExhausted("no planted instance found")

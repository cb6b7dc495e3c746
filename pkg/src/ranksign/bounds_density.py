"""Counting in the rank metric, decodable-syndrome density and its oracles.

Everything that is a count is an exact Python integer (or a Fraction for the
one bound with a rational factor).  The brute-force helpers at the bottom
enumerate actual subspaces and syndromes and are only meant for toy sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from . import matrix_ops as mo
from . import subspace_algebra as sa
from .errors import HypothesisViolated, TooLarge
from .field_tower import FieldContext
from .params import CodeParams

BRUTE_FORCE_LIMIT = 1 << 24


def sphere_size(n: int, m: int, q: int, t: int) -> int:
    """Number of n-vectors over GF(q^m) of rank exactly t."""
    if t < 0 or t > min(n, m):
        return 0
    num = den = 1
    for j in range(t):
        num *= (q**n - q**j) * (q**m - q**j)
        den *= q**t - q**j
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def ball_size(n: int, m: int, q: int, t: int) -> int:
    return sum(sphere_size(n, m, q, i) for i in range(min(t, n, m) + 1))


def gvr(n: int, k: int, m: int, q: int) -> int:
    """Smallest t with B(n, m, q, t) >= q^(m(n-k))."""
    target = q ** (m * (n - k))
    ball = 0
    for t in range(min(n, m) + 1):
        ball += sphere_size(n, m, q, t)
        if ball >= target:
            return t
    return min(n, m)  # pragma: no cover - the full ball is q^(nm)


def singleton(n: int, k: int, m: int) -> int:
    if n <= m:
        return 1 + n - k
    return 1 + (n - k) * m // n


def count_superspaces(m: int, q: int, t: int, r_prime: int) -> int:
    """Number of (t + r')-dimensional subspaces of GF(q)^m containing a fixed t-dimensional one."""
    if t + r_prime > m:
        return 0
    num = den = 1
    for i in range(r_prime):
        num *= q ** (m - t - i) - 1
        den *= q ** (i + 1) - 1
    out, rem = divmod(num, den)
    assert rem == 0
    return out


def density_exponent(p: CodeParams) -> int:
    r = p.r
    return (r - p.t) * (p.m - r) + p.nk * (r * p.d - p.m)


def density_estimate(p: CodeParams) -> Fraction:
    """E(T) q^(rd(n-k)) / q^(m(n-k)), which is close to q^density_exponent."""
    return Fraction(count_superspaces(p.m, p.q, p.t, p.r_prime) * p.q ** (p.r * p.d * p.nk),
                    p.q ** (p.m * p.nk))


def tdecodable_bounds(p: CodeParams) -> tuple[Fraction, int]:
    """(lower, upper) on the number of T-decodable syndromes."""
    if p.r * (2 * p.d - 1) > p.m:
        raise HypothesisViolated(f"r(2d-1) = {p.r * (2 * p.d - 1)} exceeds m = {p.m}")
    upper = count_superspaces(p.m, p.q, p.t, p.r_prime) * p.q ** (p.r * p.d * p.nk)
    factor = (1 - Fraction(1, p.q - 1)) ** 2
    return factor * upper, upper


# -- toy-scale oracles ------------------------------------------------------

def enumerate_superspaces(T: sa.Subspace, r: int):
    """All r-dimensional subspaces containing T, in a deterministic order."""
    ctx = T.ctx
    B = ctx.base
    free = [c for c in range(ctx.m) if c not in T.pivots]
    # one representative per nonzero coset of T: zero at T's pivot columns
    reps = []
    for digits in itertools.product(range(B.q), repeat=len(free)):
        if any(digits):
            v = np.zeros(ctx.m, dtype=np.int64)
            v[free] = digits
            reps.append(v)
    level = {T}
    for _ in range(r - T.dim):
        nxt = set()
        for S in level:
            for v in reps:
                if np.any(S.residue(v)):
                    nxt.add(sa.span(ctx, np.concatenate([S.basis, v[None]])))
        level = nxt
    return sorted(level, key=lambda S: S.basis.tobytes())


def _as_basis(ctx, F):
    if isinstance(F, sa.Subspace):
        return F.basis
    return np.asarray(F, dtype=np.int64).reshape(-1, ctx.m)


def decodable_support(ctx: FieldContext, Fb, E: sa.Subspace):
    """Check conditions (i) and (ii) for a candidate support E; returns <FE> or None."""
    d = Fb.shape[0]
    FE = sa.product_space(sa.span(ctx, Fb), E)
    if FE.dim != d * E.dim:
        return None
    inter = sa.intersect(sa.scale_inv(Fb[0], FE), sa.scale_inv(Fb[1], FE))
    if inter.dim != E.dim:
        return None
    return FE


def check_pair(ctx: FieldContext, Fb, T: sa.Subspace) -> dict[str, bool]:
    """Which of the two side conditions on (F, T) hold: <FT> full and dim(F1^-1 F + F2^-1 F) = 2d - 1."""
    Fs = sa.span(ctx, Fb)
    d = Fb.shape[0]
    FT = sa.product_space(Fs, T)
    mix = sa.add(sa.scale_inv(Fb[0], Fs), sa.scale_inv(Fb[1], Fs))
    return {"FT": FT.dim == d * T.dim, "F1F2": Fs.dim == d and mix.dim == 2 * d - 1}


def _spanning_tuples(q: int, N: int, c: int) -> int:
    """Number of N-tuples spanning GF(q)^c."""
    out = 1
    for i in range(c):
        out *= q**N - q**i
        if out == 0:
            return 0
    return out


def _guard(p: CodeParams):
    size = p.q ** (p.m * p.nk)
    if size > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"syndrome space has {size} elements, limit is {BRUTE_FORCE_LIMIT}")


def brute_force_tdecodable(p: CodeParams, F, T: sa.Subspace, method: str = "count") -> int:
    """Exact number of T-decodable syndromes for the ordered F-basis ``F``.

    Every valid support E (conditions (i), (ii)) owns a disjoint block of
    syndromes.  ``method`` picks how the block is measured:

    * ``"count"``: closed form, q^(dim<FT> (n-k)) times the number of
      (n-k)-tuples spanning <FE>/<FT>;
    * ``"tuples"``: enumerate every tuple in <FE>^(n-k) and test the span
      rank of tuple + <FT>;
    * ``"syndromes"``: run the decoder's own test on every syndrome of
      GF(q^m)^(n-k) (slowest, tiniest parameters only).
    """
    _guard(p)
    ctx = T.ctx
    Fb = _as_basis(ctx, F)
    N = p.nk
    if method == "syndromes":
        return _count_by_syndromes(p, Fb, T)
    FT = sa.product_space(sa.span(ctx, Fb), T)
    total = 0
    for E in enumerate_superspaces(T, p.r):
        FE = decodable_support(ctx, Fb, E)
        if FE is None:
            continue
        if method == "count":
            total += p.q ** (FT.dim * N) * _spanning_tuples(p.q, N, FE.dim - FT.dim)
        elif method == "tuples":
            total += _count_tuples(ctx, FE, FT, N)
        else:
            raise ValueError(f"unknown method {method!r}")
    return total


def _count_tuples(ctx, FE, FT, N):
    B = ctx.base
    D = FE.dim
    elems = FE.elements()
    total = 0
    for idx in itertools.product(range(elems.shape[0]), repeat=N - 1):
        # the last coordinate ranges over all elements at once
        head = elems[list(idx)] if idx else np.zeros((0, ctx.m), dtype=np.int64)
        stack = np.concatenate([
            np.broadcast_to(FT.basis, (elems.shape[0],) + FT.basis.shape),
            np.broadcast_to(head, (elems.shape[0],) + head.shape),
            elems[:, None, :],
        ], axis=1)
        total += int(np.count_nonzero(mo.batch_rank(B, stack) == D))
    return total


def _count_by_syndromes(p, Fb, T):
    from .lrpc import support_from_syndrome

    ctx = T.ctx
    B = ctx.base
    count = 0
    for digits in itertools.product(range(B.q), repeat=p.m * p.nk):
        s = np.array(digits, dtype=np.int64).reshape(p.nk, p.m)
        E, failed = support_from_syndrome(ctx, Fb, T, s, p.r)
        count += not failed
    return count


def lemma2_monte_carlo(alpha: int, t: int, beta: int, m: int, q: int, trials: int, rng,
                       ctx: FieldContext | None = None) -> float:
    """Fraction of trials where <AB> has dimension below alpha(t + beta).

    A (dim alpha) and T (dim t, with <AT> of full dimension alpha t) are drawn
    once; each trial draws beta fresh uniform vectors b and sets
    B = T + <b_1, ..., b_beta>.  Dependent draws make B too small and count
    as failures.
    """
    if alpha * (t + beta) > m:
        raise HypothesisViolated(f"alpha(t+beta) = {alpha * (t + beta)} exceeds m = {m}")
    from .field_tower import get_field
    ctx = ctx or get_field(q, m)
    if trials <= 0:
        return 0.0
    while True:
        A = sa.sample_subspace(ctx, alpha, rng)
        T = sa.sample_subspace(ctx, t, rng)
        if sa.product_space(A, T).dim == alpha * t:
            break
    target = alpha * (t + beta)
    AT = ctx.mul(A.basis[:, None], T.basis[None]).reshape(-1, ctx.m)
    failures = 0
    chunk = 20000
    done = 0
    while done < trials:
        c = min(chunk, trials - done)
        b = ctx.random(rng, (c, beta))
        Ab = ctx.mul(A.basis[None, :, None, :], b[:, None, :, :]).reshape(c, alpha * beta, ctx.m)
        stack = np.concatenate([np.broadcast_to(AT, (c,) + AT.shape), Ab], axis=1)
        failures += int(np.count_nonzero(mo.batch_rank(ctx.base, stack) < target))
        done += c
    return failures / trials


def lemma2_bound(alpha: int, t: int, beta: int, m: int, q: int) -> Fraction:
    return Fraction(q ** (alpha * (t + beta)), (q - 1) * q**m)

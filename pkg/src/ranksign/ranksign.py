"""Hash-and-sign with augmented LRPC codes.

The public matrix is H' = A (R | H) P where H is a secret LRPC parity-check
matrix, R holds t' random columns, A is invertible over GF(q^m) and P is
invertible over GF(q).  Signing decodes A^-1 s - R tau with a chosen
erasure space T = support(tau), and a signature e has rank exactly r with
H' e^T = hash(message, seed).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from . import lrpc
from . import matrix_ops as mo
from . import subspace_algebra as sa
from .errors import DecodingFailure, InvalidParams, MalformedSignature, ResourceExhausted
from .field_tower import FieldContext, get_field
from .params import CodeParams, encode_params_block
from .rank_metric import rank_weight

SEED_BYTES = 10
SIGN_RETRY_CAP = 256
HASH_TAG = b"ranksign/hash-to-syndrome/v1"


@dataclass(eq=False)
class SecretKey:
    code: lrpc.LrpcCode
    A: np.ndarray        # (n-k, n-k, m)
    P: np.ndarray        # (n+t', n+t') over GF(q)
    R: np.ndarray        # (n-k, t', m)
    A_inv: np.ndarray | None = None
    P_T_inv: np.ndarray | None = None

    def __post_init__(self):
        ctx = self.code.ctx
        if self.A_inv is None:
            self.A_inv = mo.invert(ctx, self.A)
        if self.P_T_inv is None:
            self.P_T_inv = mo.invert(ctx.base, self.P.T)

    @property
    def params(self) -> CodeParams:
        return self.code.params

    @property
    def ctx(self) -> FieldContext:
        return self.code.ctx


@dataclass(eq=False)
class PublicKey:
    params: CodeParams
    ctx: FieldContext
    Hpub: np.ndarray     # (n-k, n+t', m)
    seed_len_bits: int = SEED_BYTES * 8
    _digest: bytes | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        p = self.params
        self.Hpub = np.asarray(self.Hpub, dtype=np.int64)
        if self.Hpub.shape != (p.nk, p.n + p.t_prime, p.m):
            raise InvalidParams(f"public matrix has shape {self.Hpub.shape[:2]}, "
                                f"expected {(p.nk, p.n + p.t_prime)}")
        if self.seed_len_bits < 80:
            raise InvalidParams("seed length must be at least 80 bits")

    @property
    def digest(self) -> bytes:
        if self._digest is None:
            self._digest = hashlib.sha3_256(encode_params_block(self.params)
                                            + self.ctx.encode(self.Hpub)).digest()
        return self._digest

    def __eq__(self, other):
        return (isinstance(other, PublicKey) and self.params == other.params
                and self.seed_len_bits == other.seed_len_bits
                and np.array_equal(self.Hpub, other.Hpub))


@dataclass(eq=False)
class Signature:
    e: np.ndarray        # (n+t', m)
    seed: bytes

    def __eq__(self, other):
        return isinstance(other, Signature) and self.seed == other.seed and np.array_equal(self.e, other.e)


def public_matrix(sk: SecretKey) -> np.ndarray:
    ctx = sk.ctx
    RH = np.concatenate([sk.R, sk.code.H], axis=1)
    return mo.gfq_apply(ctx, mo.matmul(ctx, sk.A, RH), sk.P)


def keygen(params: CodeParams, rng, ctx: FieldContext | None = None):
    p = params
    if p.t_prime < 1:
        raise InvalidParams("at least one masking column (t' >= 1) is required")
    ctx = ctx or get_field(p.q, p.m)
    code = lrpc.gen_code(p, rng, ctx)
    A, A_inv, _ = mo.sample_invertible_with_inverse(ctx, p.nk, rng)
    P, P_inv, _ = mo.sample_invertible_with_inverse(ctx.base, p.n + p.t_prime, rng)
    R = ctx.random(rng, (p.nk, p.t_prime))
    sk = SecretKey(code, A, P, R, A_inv, P_inv.T.copy())
    pk = PublicKey(p, ctx, public_matrix(sk))
    return sk, pk


def hash_to_syndrome(pk: PublicKey, message: bytes, seed: bytes, counter: int = 0) -> np.ndarray:
    """SHAKE-256 expansion of tag || key digest || len(message) || message || seed || counter.

    Each of the (n-k)m base digits takes ``nbytes`` output bytes masked to
    a bits when q = 2^a, or nbytes + 8 bytes reduced mod q for an odd prime.
    """
    p, ctx = pk.params, pk.ctx
    B = ctx.base
    data = (HASH_TAG + pk.digest + len(message).to_bytes(8, "little") + bytes(message)
            + len(seed).to_bytes(2, "little") + bytes(seed) + counter.to_bytes(4, "little"))
    count = p.nk * p.m
    width = B.nbytes if B.char2 else B.nbytes + 8
    raw = hashlib.shake_256(data).digest(count * width)
    if B.char2 and width <= 8:
        padded = np.zeros((count, 8), dtype=np.uint8)
        padded[:, :width] = np.frombuffer(raw, dtype=np.uint8).reshape(count, width)
        digits = padded.view("<u8").reshape(count).astype(np.int64) & (B.q - 1)
    else:
        digits = np.array([int.from_bytes(raw[i * width:(i + 1) * width], "little") % B.q
                           for i in range(count)], dtype=np.int64)
    return ctx.from_coords(digits.reshape(p.nk, p.m))


def _draw_erasure(sk: SecretKey, rng):
    """(T, tau): T of dimension t and t' coordinates tau in T."""
    p, ctx = sk.params, sk.ctx
    while True:
        rho = ctx.random(rng, (p.t,))
        if rank_weight(ctx, rho) == p.t:
            break
    T = sa.span(ctx, rho)
    if p.t_prime <= p.t:
        tau = rho[:p.t_prime]
    else:
        tau = np.concatenate([rho, sa.sample_vector_in(T, p.t_prime - p.t, rng)])
    return T, tau


def sign_counted(sk: SecretKey, pk: PublicKey, message: bytes, rng,
                 max_attempts: int = SIGN_RETRY_CAP) -> tuple[Signature, int]:
    """Sign and report how many attempts (seed draws) were needed."""
    p, ctx = sk.params, sk.ctx
    for attempt in range(1, max_attempts + 1):
        seed = rng.bytes(pk.seed_len_bits // 8)
        T, tau = _draw_erasure(sk, rng)
        s = hash_to_syndrome(pk, message, seed)
        s_prime = ctx.sub(mo.matmul(ctx, sk.A_inv, s), mo.matmul(ctx, sk.R, tau))
        try:
            x_H = lrpc.decode(sk.code, T, s_prime).e
        except DecodingFailure:
            continue
        x = np.concatenate([tau, x_H])
        if rank_weight(ctx, x) != p.r:
            continue
        e = mo.gfq_apply(ctx, x, sk.P_T_inv)
        sig = Signature(e, seed)
        if not verify(pk, message, sig):  # pragma: no cover - would mean a key inconsistency
            raise AssertionError("produced signature fails verification")
        return sig, attempt
    raise ResourceExhausted(f"no signature after {max_attempts} attempts")


def sign(sk: SecretKey, pk: PublicKey, message: bytes, rng,
         max_attempts: int = SIGN_RETRY_CAP) -> Signature:
    return sign_counted(sk, pk, message, rng, max_attempts)[0]


def verify(pk: PublicKey, message: bytes, sig: Signature) -> bool:
    p, ctx = pk.params, pk.ctx
    e = np.asarray(sig.e)
    if e.shape != (p.n + p.t_prime, p.m) or e.dtype.kind not in "iu":
        raise MalformedSignature(f"signature vector has shape {e.shape}")
    if np.any((e < 0) | (e >= p.q)):
        raise MalformedSignature("signature digit out of range")
    if not isinstance(sig.seed, (bytes, bytearray)) or len(sig.seed) * 8 != pk.seed_len_bits:
        raise MalformedSignature("seed has the wrong length")
    if rank_weight(ctx, e) != p.r:
        return False
    s = hash_to_syndrome(pk, message, bytes(sig.seed))
    return bool(np.array_equal(mo.matmul(ctx, pk.Hpub, e), s))


# -- leakage simulator --------------------------------------------------------

def simulate_signature(pk: PublicKey, rng):
    """(e'', y'') with e'' uniform of rank r over a uniform support and y'' = H' e''^T."""
    p, ctx = pk.params, pk.ctx
    E = sa.sample_subspace(ctx, p.r, rng)
    while True:
        e = sa.sample_vector_in(E, p.n + p.t_prime, rng)
        if rank_weight(ctx, e) == p.r:
            break
    return e, mo.matmul(ctx, pk.Hpub, e)


def simulated_failure_rate(sk: SecretKey, pk: PublicKey, trials: int, rng) -> float:
    """How often a simulated couple would not be one the signer can output.

    Uses the secret key to map e'' back to x = (tau, x_H) and checks that
    tau has rank t and that u = H x_H^T is decodable for T = support(tau).
    """
    p, ctx = sk.params, sk.ctx
    if p.t_prime != p.t:
        raise InvalidParams("the simulator analysis needs t' = t")
    fails = 0
    for _ in range(trials):
        e, _ = simulate_signature(pk, rng)
        x = mo.gfq_apply(ctx, e, sk.P.T)
        tau, x_H = x[:p.t], x[p.t:]
        if rank_weight(ctx, tau) != p.t:
            fails += 1
            continue
        T = sa.span(ctx, tau)
        ok, _ = lrpc.check_tdecodable(sk.code, T, lrpc.syndrome(sk.code, x_H))
        fails += not ok
    return fails / trials


def signature_statistics(ctx: FieldContext, e) -> tuple[int, ...]:
    """Small structural invariants of a signature vector used by the two-sample test.

    (dim span(e_0, e_1), dim span(e_-2, e_-1), dim <E E> for E = support(e))
    """
    e = np.asarray(e, dtype=np.int64)
    E = sa.span(ctx, e)
    return (sa.span(ctx, e[:2]).dim, sa.span(ctx, e[-2:]).dim, sa.product_space(E, E).dim)

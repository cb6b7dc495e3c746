"""Byte formats for parameters, keys and signatures.

Every blob starts with a 6-byte envelope: ``b"RKSN"``, a version byte (1)
and a kind byte.  Bodies:

* params (1):    params block (8 little-endian u16)
* public (2):    params block, H' row-major, seed length in bits (u16)
* secret (3):    params block, F basis, H, A, P, R
* signature (4): seed, then the n+t' coordinates of e

Extension elements are m digits in basis order, each ``ceil(log2 q / 8)``
bytes little-endian; GF(q) matrices use the same digit width.  Decoders
check the envelope, then the exact body length, and only then build the
field, so malformed input is rejected before any expensive work.
"""

from __future__ import annotations

import numpy as np

from . import lrpc
from .errors import (BadKind, BadMagic, BadVersion, InvalidParams, MalformedKey, MalformedParams,
                     MalformedSignature, RankFieldMismatch, RankSignError, Singular, TrailingBytes,
                     Truncated, WireError)
from .field_tower import decode_digits, encode_digits, get_field
from .params import CodeParams, decode_params_block, encode_params_block
from .ranksign import SEED_BYTES, PublicKey, SecretKey, Signature

MAGIC = b"RKSN"
VERSION = 1
KIND_PARAMS, KIND_PUBLIC, KIND_SECRET, KIND_SIGNATURE = 1, 2, 3, 4
KIND_NAMES = {KIND_PARAMS: "params", KIND_PUBLIC: "public key",
              KIND_SECRET: "secret key", KIND_SIGNATURE: "signature"}
HEADER_LEN = 6
PARAMS_LEN = 16

# decoders refuse parameter blocks beyond these sizes
MAX_M = 128
MAX_N = 512
MAX_FIELD_BITS = 64


def _header(kind: int) -> bytes:
    return MAGIC + bytes([VERSION, kind])


def _open(data: bytes, kind: int) -> bytes:
    data = bytes(data)
    if len(data) < HEADER_LEN:
        if not MAGIC.startswith(data[:4]):
            raise BadMagic("not a RankSign blob")
        raise Truncated(f"envelope needs {HEADER_LEN} bytes, got {len(data)}")
    if data[:4] != MAGIC:
        raise BadMagic("not a RankSign blob")
    if data[4] != VERSION:
        raise BadVersion(f"unsupported format version {data[4]}")
    if data[5] != kind:
        got = KIND_NAMES.get(data[5], f"unknown kind {data[5]}")
        raise BadKind(f"expected {KIND_NAMES[kind]}, found {got}")
    return data[HEADER_LEN:]


def _check_length(body: bytes, expected: int):
    if len(body) < expected:
        raise Truncated(f"body needs {expected} bytes, got {len(body)}")
    if len(body) > expected:
        raise TrailingBytes(f"{len(body) - expected} unexpected trailing bytes")


def _params(body: bytes, err=MalformedParams) -> CodeParams:
    if len(body) < PARAMS_LEN:
        raise Truncated(f"parameter block needs {PARAMS_LEN} bytes, got {len(body)}")
    try:
        p = decode_params_block(body[:PARAMS_LEN])
    except InvalidParams as exc:
        raise err(f"invalid parameters: {exc}") from None
    if p.m > MAX_M or p.n + p.t_prime > MAX_N or (p.q - 1).bit_length() > MAX_FIELD_BITS:
        raise err("parameters exceed the supported sizes")
    return p


def _nbytes(q: int) -> int:
    return ((q - 1).bit_length() + 7) // 8


def _field(p: CodeParams, err):
    try:
        return get_field(p.q, p.m)
    except InvalidParams as exc:  # pragma: no cover - params were validated
        raise err(str(exc)) from None


def _take(body: bytes, pos: int, n: int) -> tuple[bytes, int]:
    return body[pos:pos + n], pos + n


def _ext(ctx, chunk: bytes, shape, err):
    try:
        return ctx.decode(chunk, shape)
    except ValueError as exc:
        raise err(str(exc)) from None


def _base(ctx, chunk: bytes, shape, err):
    try:
        return decode_digits(ctx.base, chunk, int(np.prod(shape))).reshape(shape)
    except ValueError as exc:
        raise err(str(exc)) from None


# -- params -------------------------------------------------------------------

def encode_params(p: CodeParams) -> bytes:
    return _header(KIND_PARAMS) + encode_params_block(p)


def decode_params(data: bytes) -> CodeParams:
    body = _open(data, KIND_PARAMS)
    _check_length(body, PARAMS_LEN)
    return _params(body)


# -- public key -----------------------------------------------------------------

def _public_len(p: CodeParams) -> int:
    return PARAMS_LEN + p.nk * (p.n + p.t_prime) * p.m * _nbytes(p.q) + 2


def encode_public(pk: PublicKey) -> bytes:
    return (_header(KIND_PUBLIC) + encode_params_block(pk.params) + pk.ctx.encode(pk.Hpub)
            + pk.seed_len_bits.to_bytes(2, "little"))


def decode_public(data: bytes) -> PublicKey:
    body = _open(data, KIND_PUBLIC)
    p = _params(body, MalformedKey)
    _check_length(body, _public_len(p))
    ctx = _field(p, MalformedKey)
    Hpub = _ext(ctx, body[PARAMS_LEN:-2], (p.nk, p.n + p.t_prime), MalformedKey)
    seed_bits = int.from_bytes(body[-2:], "little")
    if seed_bits < 80 or seed_bits % 8:
        raise MalformedKey(f"unsupported seed length {seed_bits} bits")
    return PublicKey(p, ctx, Hpub, seed_bits)


# -- secret key -----------------------------------------------------------------

def _secret_len(p: CodeParams) -> int:
    N = p.n + p.t_prime
    ext = p.d + p.nk * p.n + p.nk * p.nk + p.nk * p.t_prime
    return PARAMS_LEN + (ext * p.m + N * N) * _nbytes(p.q)


def encode_secret(sk: SecretKey) -> bytes:
    ctx = sk.ctx
    return (_header(KIND_SECRET) + encode_params_block(sk.params)
            + ctx.encode(sk.code.F) + ctx.encode(sk.code.H) + ctx.encode(sk.A)
            + encode_digits(ctx.base, sk.P) + ctx.encode(sk.R))


def decode_secret(data: bytes) -> SecretKey:
    from . import subspace_algebra as sa

    body = _open(data, KIND_SECRET)
    p = _params(body, MalformedKey)
    if not p.square or p.d < 2 or p.t_prime < 1:
        raise MalformedKey("parameters do not describe a signing key")
    _check_length(body, _secret_len(p))
    ctx = _field(p, MalformedKey)
    nb = _nbytes(p.q)
    N = p.n + p.t_prime
    pos = PARAMS_LEN
    chunk, pos = _take(body, pos, p.d * p.m * nb)
    F = _ext(ctx, chunk, (p.d,), MalformedKey)
    chunk, pos = _take(body, pos, p.nk * p.n * p.m * nb)
    H = _ext(ctx, chunk, (p.nk, p.n), MalformedKey)
    chunk, pos = _take(body, pos, p.nk * p.nk * p.m * nb)
    A = _ext(ctx, chunk, (p.nk, p.nk), MalformedKey)
    chunk, pos = _take(body, pos, N * N * nb)
    P = _base(ctx, chunk, (N, N), MalformedKey)
    chunk, pos = _take(body, pos, p.nk * p.t_prime * p.m * nb)
    R = _ext(ctx, chunk, (p.nk, p.t_prime), MalformedKey)
    try:
        coeffs = sa.basis_coordinates(ctx.base, F, H.reshape(-1, p.m))
    except RankSignError:
        raise MalformedKey("H has entries outside the span of F, or F is dependent") from None
    coeffs = coeffs.reshape(p.nk, p.n, p.d)
    pairwise = p.r * (2 * p.d - 1) <= p.m
    try:
        code = lrpc.LrpcCode(p, ctx, F, coeffs, pairwise)
        if lrpc.mixing_dim(ctx, F) != 2 * p.d - 1:
            raise MalformedKey("F does not satisfy dim(F_1^-1 F + F_2^-1 F) = 2d - 1")
        return SecretKey(code, A, P, R)
    except (Singular, InvalidParams, ZeroDivisionError) as exc:
        raise MalformedKey(f"inconsistent secret key: {exc}") from None


# -- signature ------------------------------------------------------------------

def encode_signature(sig: Signature, params: CodeParams | PublicKey) -> bytes:
    p = params.params if isinstance(params, PublicKey) else params
    e = np.asarray(sig.e, dtype=np.int64)
    if e.shape != (p.n + p.t_prime, p.m):
        raise MalformedSignature("signature does not match the parameters")
    return _header(KIND_SIGNATURE) + bytes(sig.seed) + get_field(p.q, p.m).encode(e)


def decode_signature(data: bytes, params: CodeParams | PublicKey) -> Signature:
    """Parse a signature for the given parameters (or public key)."""
    if isinstance(params, PublicKey):
        p, seed_len = params.params, params.seed_len_bits // 8
    else:
        p, seed_len = params, SEED_BYTES
    body = _open(data, KIND_SIGNATURE)
    N = p.n + p.t_prime
    _check_length(body, seed_len + N * p.m * _nbytes(p.q))
    ctx = _field(p, MalformedSignature)
    e = _ext(ctx, body[seed_len:], (N,), RankFieldMismatch)
    return Signature(e, body[:seed_len])


__all__ = [
    "MAGIC", "VERSION", "KIND_PARAMS", "KIND_PUBLIC", "KIND_SECRET", "KIND_SIGNATURE",
    "encode_params", "decode_params", "encode_public", "decode_public",
    "encode_secret", "decode_secret", "encode_signature", "decode_signature", "WireError",
]

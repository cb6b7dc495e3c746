"""Code and scheme parameters, with named presets."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import InvalidParams
from .field_tower import prime_power


@dataclass(frozen=True)
class CodeParams:
    """Parameters of an augmented LRPC signature instance.

    ``t`` is the erasure dimension used by the decoder and ``t_prime`` the
    number of random columns appended to H (usually equal to t).
    """

    q: int
    m: int
    n: int
    k: int
    d: int
    t: int
    t_prime: int
    r_prime: int

    def __post_init__(self):
        for name in ("q", "m", "n", "k", "d", "t", "t_prime", "r_prime"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidParams(f"{name} must be a non-negative integer, got {v!r}")
        p, a = prime_power(self.q)
        if p != 2 and a != 1:
            raise InvalidParams(f"q must be a power of two or an odd prime, got {self.q}")
        if self.m < 1 or self.n < 1:
            raise InvalidParams("m and n must be positive")
        if self.k > self.n:
            raise InvalidParams(f"k={self.k} exceeds n={self.n}")
        if self.d < 1:
            raise InvalidParams("d must be positive")
        if self.r_prime * self.d > self.n - self.k:
            raise InvalidParams(f"r'={self.r_prime} exceeds (n-k)/d = {(self.n - self.k) / self.d:g}")
        if self.r > self.m:
            raise InvalidParams(f"r={self.r} exceeds m={self.m}")

    @property
    def r(self) -> int:
        return self.t + self.r_prime

    @property
    def nk(self) -> int:
        return self.n - self.k

    @property
    def square(self) -> bool:
        """n = (n-k)d, the case where the decoder's linear system is square."""
        return self.n == self.nk * self.d

    @property
    def log2q(self) -> float:
        return math.log2(self.q)

    @property
    def a(self) -> int:
        return prime_power(self.q)[1]

    def describe(self) -> str:
        return (f"q={self.q} m={self.m} n={self.n} k={self.k} d={self.d} "
                f"t={self.t} t'={self.t_prime} r'={self.r_prime} r={self.r}")


def _row(q, m, n, nk, d, t, rp, tp=None):
    return CodeParams(q=q, m=m, n=n, k=n - nk, d=d, t=t, t_prime=t if tp is None else tp, r_prime=rp)


PRESETS: dict[str, CodeParams] = {
    "table1-row1": _row(2**40, 18, 16, 8, 2, 2, 4),
    "table1-row2": _row(2**8, 18, 16, 8, 2, 2, 4),
    "table1-row3": _row(2**16, 18, 16, 8, 2, 2, 4),
    "table1-row4": _row(2**8, 24, 20, 10, 2, 3, 5),
    "table1-row5": _row(2**6, 20, 27, 9, 3, 2, 3),
    "table1-row6": _row(2**4, 40, 48, 12, 4, 5, 3),
    "table1-row7": _row(2**4, 42, 50, 10, 5, 5, 2, tp=2),
    "toy-q2": _row(2, 6, 4, 2, 2, 1, 1),
    "toy-q3": _row(3, 6, 4, 2, 2, 1, 1),
    "toy-q16": _row(16, 6, 4, 2, 2, 1, 1),
}

TABLE1_ROWS = tuple(f"table1-row{i}" for i in range(1, 8))

_ALIASES = {"tp": "t_prime", "t'": "t_prime", "rp": "r_prime", "r'": "r_prime"}


def parse_params(text: str) -> CodeParams:
    """A preset name, or inline ``q=256,m=18,n=16,k=8,d=2,t=2,tp=2,rp=4``.

    Inline blocks may start from a preset (``preset=toy-q3,m=8``); t_prime
    defaults to t.
    """
    text = text.strip()
    key = text.lower()
    if key in PRESETS:
        return PRESETS[key]
    fields: dict[str, int] = {}
    base = None
    for part in filter(None, re.split(r"[,\s]+", text)):
        if "=" not in part:
            raise InvalidParams(f"unknown preset or malformed field {part!r}")
        name, value = (s.strip() for s in part.split("=", 1))
        name = _ALIASES.get(name, name)
        if name == "preset":
            if value.lower() not in PRESETS:
                raise InvalidParams(f"unknown preset {value!r}")
            base = PRESETS[value.lower()]
            continue
        if name not in CodeParams.__dataclass_fields__:
            raise InvalidParams(f"unknown parameter {name!r}")
        try:
            fields[name] = int(value, 0)
        except ValueError:
            if name == "q" and value.startswith("2^"):
                fields[name] = 2 ** int(value[2:])
            else:
                raise InvalidParams(f"{name} must be an integer, got {value!r}") from None
    if base is not None:
        merged = {f: getattr(base, f) for f in CodeParams.__dataclass_fields__}
        merged.update(fields)
        fields = merged
    fields.setdefault("t_prime", fields.get("t", 0))
    missing = [f for f in CodeParams.__dataclass_fields__ if f not in fields]
    if missing:
        raise InvalidParams("missing parameter(s): " + ", ".join(missing))
    return CodeParams(**fields)


_ODD_FLAG = 0x8000


def encode_params_block(p: CodeParams) -> bytes:
    """Eight little-endian u16: field code, m, n, k, d, t, t', r'.

    The field code is a for q = 2^a and 0x8000 | q for an odd prime q.
    """
    pr, a = prime_power(p.q)
    code = a if pr == 2 else _ODD_FLAG | p.q
    vals = (code, p.m, p.n, p.k, p.d, p.t, p.t_prime, p.r_prime)
    if any(v > 0xFFFF for v in vals) or (pr != 2 and p.q >= _ODD_FLAG):
        raise InvalidParams("parameters do not fit the 16-bit block encoding")
    return b"".join(v.to_bytes(2, "little") for v in vals)


def decode_params_block(data: bytes) -> CodeParams:
    if len(data) != 16:
        raise InvalidParams(f"parameter block must be 16 bytes, got {len(data)}")
    code, m, n, k, d, t, tp, rp = (int.from_bytes(data[i:i + 2], "little") for i in range(0, 16, 2))
    if code & _ODD_FLAG:
        q = code & ~_ODD_FLAG
        if q < 3 or q % 2 == 0:
            raise InvalidParams(f"bad odd field size {q}")
    else:
        if not 1 <= code <= 62:
            raise InvalidParams(f"bad field exponent {code}")
        q = 1 << code
    return CodeParams(q=q, m=m, n=n, k=k, d=d, t=t, t_prime=tp, r_prime=rp)

"""Arithmetic in GF(q) and GF(q^m) on numpy integer arrays.

A base-field element is a plain integer: a bit pattern (polynomial over GF(2)
modulo ``base_poly``) when q = 2^a, a residue when q is an odd prime.  An
element of GF(q^m) is an int64 array of m base digits, the coefficients
(low degree first) of a polynomial modulo ``ext_poly``.  Vectors and
matrices over GF(q^m) keep that digit axis last, so a length-n vector has
shape (n, m) and an r x c matrix has shape (r, c, m).

Both :class:`BaseField` and :class:`FieldContext` expose the same small set
of array operations (``mul``, ``add``, ``sub``, ``sum``, ``inv``,
``is_zero`` ...), which is what :mod:`ranksign.matrix_ops` is written
against.
"""

from __future__ import annotations

import hashlib
import itertools
from functools import lru_cache

import numpy as np

from .errors import InvalidParams, ZeroInverse

# Irreducible polynomials over GF(2), bit i = coefficient of x^i.
BASE_POLYS = {
    1: 0b11,
    2: 0b111,
    4: 0b10011,
    6: 0b1000011,
    8: 0x11B,
    16: 0x1100B,
    40: (1 << 40) | 0b111001,
}

_TABLE_LIMIT = 256
_LOG_LIMIT = 1 << 16


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, a) with q = p^a, or raise InvalidParams."""
    if q < 2:
        raise InvalidParams(f"field size {q} is not a prime power")
    f = _factor(q)
    if len(f) != 1:
        raise InvalidParams(f"field size {q} is not a prime power")
    (p, a), = f.items()
    return p, a


def _clmul(x: int, y: int) -> int:
    r = 0
    while y:
        if y & 1:
            r ^= x
        x <<= 1
        y >>= 1
    return r


def _clmod(x: int, poly: int) -> int:
    deg = poly.bit_length() - 1
    while x.bit_length() - 1 >= deg:
        x ^= poly << (x.bit_length() - 1 - deg)
    return x


def _gf2_poly_inv(x: int, poly: int) -> int:
    # extended Euclid in GF(2)[X] on bit patterns
    r0, r1 = poly, x
    s0, s1 = 0, 1
    while r1 > 1:
        shift = r0.bit_length() - r1.bit_length()
        if shift < 0:
            r0, r1 = r1, r0
            s0, s1 = s1, s0
            continue
        r0 ^= r1 << shift
        s0 ^= s1 << shift
        if r0.bit_length() < r1.bit_length():
            r0, r1 = r1, r0
            s0, s1 = s1, s0
    return s1


class BaseField:
    """GF(q) for q = 2^a or q an odd prime.

    Multiplication uses a full q x q table up to q = 256, log/antilog tables
    up to 2^16 and bit-serial carry-less reduction above that.
    """

    elem_shape: tuple[int, ...] = ()

    def __init__(self, q: int, poly: int | None = None):
        p, a = prime_power(q)
        if p != 2 and a != 1:
            raise InvalidParams(f"odd characteristic is only supported for prime q, got {q}")
        self.q, self.p, self.a = q, p, a
        self.char2 = p == 2
        self.nbytes = ((q - 1).bit_length() + 7) // 8
        if self.char2 and a > 1:
            if poly is None:
                poly = BASE_POLYS.get(a) or _search_gf2_poly(a)
            if poly.bit_length() - 1 != a or not _gf2_irreducible(poly):
                raise InvalidParams(f"base polynomial {poly:#x} is not irreducible of degree {a}")
        else:
            poly = None
        self.poly = poly

        if q <= _TABLE_LIMIT:
            self.mode = "table"
        elif self.char2 and q <= _LOG_LIMIT:
            self.mode = "log"
        elif not self.char2:
            self.mode = "prime"
        else:
            self.mode = "clmul"
        self._build_tables()

    def __repr__(self):
        return f"BaseField(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, BaseField) and (self.q, self.poly) == (other.q, other.poly)

    def __hash__(self):
        return hash((self.q, self.poly))

    # -- construction ---------------------------------------------------

    def _scalar_mul_raw(self, x: int, y: int) -> int:
        if not self.char2:
            return x * y % self.p
        if self.a == 1:
            return x & y
        return _clmod(_clmul(x, y), self.poly)

    def _primitive(self) -> int:
        q = self.q
        if q == 2:
            return 1
        primes = list(_factor(q - 1))
        for g in range(2, q):
            if all(self._pow_raw(g, (q - 1) // ell) != 1 for ell in primes):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _pow_raw(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._scalar_mul_raw(r, x)
            x = self._scalar_mul_raw(x, x)
            e >>= 1
        return r

    def _build_tables(self):
        q = self.q
        if self.mode in ("table", "log"):
            g = self._primitive()
            exp = np.zeros(2 * (q - 1), dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            x = 1
            for i in range(q - 1):
                exp[i] = x
                log[x] = i
                x = self._scalar_mul_raw(x, g)
            exp[q - 1:] = exp[: q - 1]
            self._exp, self._log = exp, log
            self._exp_l, self._log_l = exp.tolist(), log.tolist()
            inv = np.zeros(q, dtype=np.int64)
            inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
            self._inv_tab = inv
            self._inv_l = inv.tolist()
            if self.mode == "table":
                i = np.arange(q)
                mt = exp[log[i][:, None] + log[i][None, :]]
                mt[0, :] = 0
                mt[:, 0] = 0
                self._mt = mt
                self._mt_l = mt.tolist()
                # compact flat copy: a 64 KiB table stays in cache
                self._shift = (q - 1).bit_length()
                w = 1 << self._shift
                flat = np.zeros((w, w), dtype=np.uint8)
                flat[:q, :q] = mt
                self._mt_flat = flat.ravel()

    # -- vectorised ops -------------------------------------------------

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.mode == "table":
            return self._mt_flat[(x << self._shift) | y].astype(np.int64)
        if self.mode == "log":
            z = self._exp[self._log[x] + self._log[y]]
            return np.where((x == 0) | (y == 0), 0, z)
        if self.mode == "prime":
            return x * y % self.p
        x, y = np.broadcast_arrays(x, y)
        acc = np.zeros(x.shape, dtype=np.int64)
        a, poly = self.a, self.poly
        for i in reversed(range(a)):
            acc = acc << 1
            acc ^= ((acc >> a) & 1) * poly
            acc ^= ((y >> i) & 1) * x
        return acc

    def add(self, x, y):
        if self.char2:
            return np.bitwise_xor(x, y)
        return (np.asarray(x) + y) % self.p

    def sub(self, x, y):
        if self.char2:
            return np.bitwise_xor(x, y)
        return (np.asarray(x) - y) % self.p

    def neg(self, x):
        if self.char2:
            return np.asarray(x)
        return (-np.asarray(x)) % self.p

    def sum(self, x, axis):
        if self.char2:
            return np.bitwise_xor.reduce(np.asarray(x, dtype=np.int64), axis=axis)
        return np.asarray(x).sum(axis=axis) % self.p

    def mulsum(self, x, y, axis):
        return self.sum(self.mul(x, y), axis)

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ZeroInverse("inverse of zero in GF(%d)" % self.q)
        if self.mode in ("table", "log"):
            return self._inv_tab[x]
        return np.vectorize(self.sinv, otypes=[np.int64])(x) if x.ndim else np.int64(self.sinv(int(x)))

    def is_zero(self, x):
        return np.asarray(x) == 0

    def zeros(self, shape=()):
        return np.zeros(shape, dtype=np.int64)

    def one(self):
        return np.int64(1)

    def random(self, rng, shape=()):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    # -- scalar ops on python ints ------------------------------------------

    def smul(self, x: int, y: int) -> int:
        if self.mode == "table":
            return self._mt_l[x][y]
        if self.mode == "log":
            if x == 0 or y == 0:
                return 0
            return self._exp_l[self._log_l[x] + self._log_l[y]]
        return self._scalar_mul_raw(x, y)

    def sinv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("inverse of zero in GF(%d)" % self.q)
        if self.mode in ("table", "log"):
            return self._inv_l[x]
        if not self.char2:
            return pow(x, self.p - 2, self.p)
        return _gf2_poly_inv(x, self.poly)

    def sadd(self, x: int, y: int) -> int:
        return x ^ y if self.char2 else (x + y) % self.p

    def ssub(self, x: int, y: int) -> int:
        return x ^ y if self.char2 else (x - y) % self.p


# -- polynomials over a BaseField (lists of ints, low degree first) ---------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.sadd(out[i + j], F.smul(ai, bj))
    return _trim(out)


def _pdivmod(F, a, b):
    a = list(a)
    db = len(b) - 1
    lead_inv = F.sinv(b[-1])
    quo = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c = F.smul(c, lead_inv)
        quo[i - db] = c
        for j in range(db + 1):
            if b[j]:
                a[i - db + j] = F.ssub(a[i - db + j], F.smul(c, b[j]))
    return _trim(quo), _trim(a[:db])


def _pmod(F, a, f):
    return _pdivmod(F, a, f)[1]


def _ppowmod(F, a, e, f):
    result = [1]
    base = _pmod(F, a, f)
    while e:
        if e & 1:
            result = _pmod(F, _pmul(F, result, base), f)
        base = _pmod(F, _pmul(F, base, base), f)
        e >>= 1
    return result


def _pgcd(F, a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    return a


def _pderiv(F, a):
    out = []
    for i in range(1, len(a)):
        c = 0
        for _ in range(i % F.p):
            c = F.sadd(c, a[i])
        out.append(c)
    return _trim(out)


def _scalar_rank(F, rows):
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.sinv(rows[rank][col])
        prow = [F.smul(v, inv) for v in rows[rank]]
        rows[rank] = prow
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [F.ssub(v, F.smul(c, w)) for v, w in zip(rows[i], prow)]
        rank += 1
    return rank


def is_irreducible(F: BaseField, f: list[int]) -> bool:
    """Berlekamp test: f squarefree and Q - I of nullity one."""
    f = _trim(list(f))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if f[0] == 0:
        return False
    df = _pderiv(F, f)
    if not df or len(_pgcd(F, f, df)) > 1:
        return False
    xq = _ppowmod(F, [0, 1], F.q, f)
    rows = []
    cur = [1]
    for i in range(m):
        row = cur + [0] * (m - len(cur))
        row[i] = F.ssub(row[i], 1)
        rows.append(row)
        cur = _pmod(F, _pmul(F, cur, xq), f)
    return _scalar_rank(F, rows) == m - 1


def _gf2_irreducible(poly: int) -> bool:
    return is_irreducible(_GF2, [(poly >> i) & 1 for i in range(poly.bit_length())])


def search_irreducible(F: BaseField, m: int) -> list[int]:
    """First monic irreducible of degree m over F by weight, then term positions.

    Coefficients other than the leading one are tried in
    ``itertools.product`` order.  Only practical over small fields; used for
    base polynomials over GF(2).
    """
    if m == 1:
        return [0, 1]
    for w in range(2, m + 2):
        for mids in itertools.combinations(range(1, m), w - 2):
            for coeffs in itertools.product(range(1, F.q), repeat=w - 1):
                f = [0] * (m + 1)
                f[m] = 1
                f[0] = coeffs[0]
                for j, c in zip(mids, coeffs[1:]):
                    f[j] = c
                if is_irreducible(F, f):
                    return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def derive_irreducible(F: BaseField, m: int) -> list[int]:
    """First irreducible in a SHAKE-256 derived sequence of monic degree-m polynomials.

    Candidate i takes its m low coefficients from
    SHAKE256("ranksign/ext-poly" || q || base_poly || m || i), one digit per
    coefficient (``nbytes`` little-endian bytes, masked to a bits when
    q = 2^a; 8 bytes reduced mod p otherwise).  Sparse families can be
    empty over GF(2^a) (no degree-18 trinomial is irreducible over
    GF(2^8)), so a weight-ordered search is not used here.
    """
    if m == 1:
        return [0, 1]
    width = F.nbytes if F.char2 else 8
    prefix = (b"ranksign/ext-poly" + F.q.to_bytes(8, "little")
              + (F.poly or 0).to_bytes(8, "little") + m.to_bytes(2, "little"))
    for i in itertools.count():
        raw = hashlib.shake_256(prefix + i.to_bytes(4, "little")).digest(width * m)
        coeffs = [int.from_bytes(raw[j * width:(j + 1) * width], "little") for j in range(m)]
        if F.char2:
            coeffs = [c & (F.q - 1) for c in coeffs]
        else:
            coeffs = [c % F.p for c in coeffs]
        f = coeffs + [1]
        if is_irreducible(F, f):
            return f
    raise AssertionError  # pragma: no cover


_GF2 = BaseField(2)


def _search_gf2_poly(a: int) -> int:
    f = search_irreducible(_GF2, a)
    return sum(c << i for i, c in enumerate(f))


class FieldContext:
    """GF(q^m) over GF(q), with a fixed basis ``beta`` for coordinates.

    ``beta`` is an (m, m) array whose rows are the basis elements in the
    internal polynomial representation; ``None`` means the polynomial basis
    1, x, ..., x^(m-1).  Only :meth:`to_coords`, :meth:`from_coords` and the
    byte encoding depend on it.
    """

    def __init__(self, q: int, m: int, base_poly: int | None = None,
                 ext_poly=None, beta=None):
        if m < 1:
            raise InvalidParams("extension degree must be positive")
        self.base = BaseField(q, base_poly)
        if ext_poly is None:
            ext_poly = _cached_ext_poly(q, self.base.poly, m)
        ext_poly = [int(c) for c in ext_poly]
        if len(ext_poly) != m + 1 or ext_poly[-1] != 1 or not is_irreducible(self.base, ext_poly):
            raise InvalidParams(f"extension polynomial {ext_poly} is not monic irreducible of degree {m}")
        self.m = m
        self.ext_poly = tuple(ext_poly)
        self.elem_shape = (m,)

        # reduction rows: x^(m+i) mod f, i = 0..m-2
        B = self.base
        red = np.zeros((max(m - 1, 0), m), dtype=np.int64)
        cur = [B.ssub(0, c) for c in ext_poly[:m]]
        for i in range(m - 1):
            red[i] = cur
            top = cur[-1]
            nxt = [0] + cur[:-1]
            cur = [B.ssub(nxt[j], B.smul(top, ext_poly[j])) for j in range(m)]
        self._red = red

        if beta is None:
            self.beta = None
            self._binv = None
        else:
            from .matrix_ops import invert
            beta = np.asarray(beta, dtype=np.int64).reshape(m, m)
            self._binv = invert(self.base, beta)
            self.beta = beta

    # -- identity -------------------------------------------------------

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def a(self) -> int:
        return self.base.a

    @property
    def key(self):
        b = None if self.beta is None else self.beta.tobytes()
        return (self.base.q, self.base.poly, self.ext_poly, b)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FieldContext(q={self.q}, m={self.m})"

    # -- array ops ------------------------------------------------------

    def zeros(self, shape=()):
        return np.zeros(tuple(shape) + (self.m,), dtype=np.int64)

    def one(self):
        e = np.zeros(self.m, dtype=np.int64)
        e[0] = 1
        return e

    def is_zero(self, x):
        return ~np.any(np.asarray(x), axis=-1)

    def add(self, x, y):
        return self.base.add(x, y)

    def sub(self, x, y):
        return self.base.sub(x, y)

    def neg(self, x):
        return self.base.neg(x)

    def sum(self, x, axis):
        if axis < 0:
            axis -= 1
        return self.base.sum(x, axis=axis)

    def scale(self, c, x):
        """Base-field scalar(s) ``c`` times extension element(s) ``x``."""
        return self.base.mul(np.asarray(c)[..., None], x)

    def _conv(self, x, y):
        """Unreduced polynomial product, 2m - 1 digits."""
        B, m = self.base, self.m
        prod = B.mul(np.asarray(x, dtype=np.int64)[..., :, None],
                     np.asarray(y, dtype=np.int64)[..., None, :])
        c = np.zeros(prod.shape[:-2] + (2 * m - 1,), dtype=np.int64)
        if B.char2:
            for i in range(m):
                c[..., i:i + m] ^= prod[..., i, :]
        else:
            for i in range(m):
                c[..., i:i + m] += prod[..., i, :]
            c %= B.p
        return c

    def _reduce(self, c):
        B, m = self.base, self.m
        if m == 1:
            return c
        low, high = c[..., :m], c[..., m:]
        return B.add(low, B.sum(B.mul(high[..., :, None], self._red), axis=-2))

    def mul(self, x, y):
        return self._reduce(self._conv(x, y))

    def mulsum(self, x, y, axis):
        """sum(x * y) along ``axis``, reducing modulo the extension polynomial once."""
        if axis < 0:
            axis -= 1
        return self._reduce(self.base.sum(self._conv(x, y), axis=axis))

    def inv(self, x):
        """Inverse; arrays of elements use x^-1 = x^(r-1) / N(x), r = (q^m - 1)/(q - 1).

        x^(r-1) is the product of the conjugates x^(q^i), i = 1..m-1, each a
        GF(q)-linear image of x, and the norm N(x) = x^r lies in GF(q).
        """
        x = np.asarray(x, dtype=np.int64)
        if np.any(self.is_zero(x)):
            raise ZeroInverse("inverse of zero in GF(q^m)")
        B, m = self.base, self.m
        if m == 1:
            return B.inv(x)
        if x.ndim == 1:
            # one element: extended Euclid is as fast and needs no tables
            return np.array(self._inv1(x.tolist()), dtype=np.int64)
        conj = B.sum(B.mul(x[..., None, :, None], self._frobenius), axis=-2)
        while conj.shape[-2] > 1:
            if conj.shape[-2] % 2:
                head = self.mul(conj[..., :1, :], conj[..., -1:, :])
                conj = np.concatenate([head, conj[..., 1:-1, :]], axis=-2)
            else:
                conj = self.mul(conj[..., 0::2, :], conj[..., 1::2, :])
        y = conj[..., 0, :]
        norm = self.mul(x, y)[..., 0]
        return B.mul(B.inv(norm)[..., None], y)

    @property
    def _frobenius(self):
        """(m-1, m, m): entry [i-1, j, k] is digit k of (x^j)^(q^i)."""
        fr = self.__dict__.get("_frob")
        if fr is None:
            m = self.m
            basis = np.eye(m, dtype=np.int64)
            cur = self.pow(basis, self.q)
            phi = cur.copy()
            mats = [cur]
            B = self.base
            for _ in range(m - 2):
                cur = B.sum(B.mul(cur[:, :, None], phi[None]), axis=1)
                mats.append(cur)
            fr = np.stack(mats)
            self.__dict__["_frob"] = fr
        return fr

    def _inv1(self, coeffs):
        F, m = self.base, self.m
        a = _trim(list(coeffs))
        if not a:
            raise ZeroInverse("inverse of zero in GF(q^m)")
        r0, r1 = list(self.ext_poly), a
        s0, s1 = [], [1]
        while len(r1) > 1:
            quo, rem = _pdivmod(F, r0, r1)
            r0, r1 = r1, rem
            qs = _pmul(F, quo, s1)
            n = max(len(s0), len(qs))
            s0, s1 = s1, _trim([F.ssub(s0[i] if i < len(s0) else 0, qs[i] if i < len(qs) else 0)
                                for i in range(n)])
        c = F.sinv(r1[0])
        out = [F.smul(v, c) for v in s1]
        return out + [0] * (m - len(out))

    def pow(self, x, e: int):
        r = self.one()
        x = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    def random(self, rng, shape=()):
        return rng.integers(0, self.q, size=tuple(shape) + (self.m,), dtype=np.int64)

    # -- coordinates ----------------------------------------------------

    def to_coords(self, x):
        """Coordinates of ``x`` in the basis beta (digit axis last)."""
        x = np.asarray(x, dtype=np.int64)
        if self._binv is None:
            return x.copy()
        # x = c . beta  =>  c = x . beta^-1
        B = self.base
        return B.sum(B.mul(x[..., :, None], self._binv), axis=-2)

    def from_coords(self, c):
        c = np.asarray(c, dtype=np.int64)
        if c.shape[-1:] != (self.m,):
            raise ValueError(f"expected {self.m} coordinates, got shape {c.shape}")
        if np.any((c < 0) | (c >= self.q)):
            raise ValueError("coordinate out of range for GF(%d)" % self.q)
        if self.beta is None:
            return c.copy()
        B = self.base
        return B.sum(B.mul(c[..., :, None], self.beta), axis=-2)

    # -- byte encoding --------------------------------------------------

    def encode(self, x) -> bytes:
        """Little-endian digits in basis order, each ``base.nbytes`` wide."""
        return encode_digits(self.base, self.to_coords(x))

    def decode(self, data: bytes, shape=()):
        shape = tuple(shape)
        count = int(np.prod(shape, dtype=np.int64)) * self.m
        digits = decode_digits(self.base, data, count)
        return self.from_coords(digits.reshape(shape + (self.m,)))


def encode_digits(F: BaseField, digits) -> bytes:
    d = np.ascontiguousarray(np.asarray(digits, dtype="<u8")).reshape(-1)
    return d.view(np.uint8).reshape(-1, 8)[:, :F.nbytes].tobytes()


def decode_digits(F: BaseField, data: bytes, count: int):
    nb = F.nbytes
    if len(data) != count * nb:
        raise ValueError(f"expected {count * nb} bytes of digits, got {len(data)}")
    raw = np.frombuffer(data, dtype=np.uint8).reshape(count, nb)
    padded = np.zeros((count, 8), dtype=np.uint8)
    padded[:, :nb] = raw
    vals = padded.view("<u8").reshape(count).astype(np.int64)
    if np.any(vals >= F.q):
        raise ValueError("digit out of range for GF(%d)" % F.q)
    return vals


@lru_cache(maxsize=None)
def _cached_ext_poly(q, base_poly, m):
    return tuple(derive_irreducible(BaseField(q, base_poly), m))


@lru_cache(maxsize=None)
def get_field(q: int, m: int) -> FieldContext:
    """Shared context for GF(q^m) with the default polynomials and basis."""
    return FieldContext(q, m)

"""Finite fields as integer-coded lookup tables.

An element of a field of order ``b**d`` built over a base field of order ``b``
is an integer code in ``range(b**d)``: the base-``b`` digits of the code
(least significant first) are the coordinates of the element in the power
basis ``1, alpha, ..., alpha**(d-1)``, where ``alpha`` is the residue class of
the modulus variable. For a prime field the code is the residue itself. Codes
below ``b`` are exactly the base-field elements, so towers keep their
subfields literally embedded.

All arithmetic is carried by dense numpy tables (``add[a, b]`` etc.), which
the kernels in :mod:`fingeo.kernels` index directly; the tables broadcast, so
``field.add(A, B)`` works elementwise on arrays of codes as well.

Fields are cached by construction descriptor, and only orders up to 1024 are
supported (dense q*q tables).
"""

from __future__ import annotations

import re

import numpy as np

from .errors import FingeoError

__all__ = [
    "GF",
    "FieldElement",
    "CompanionAlgebra",
    "CANONICAL_MODULI",
    "lex_least_irreducible",
    "parse_field_spec",
    "field_to_json",
    "field_from_json",
]

MAX_TABLE_ORDER = 1024

# Canonical modulus for GF(p**h) over GF(p): the lex-least monic irreducible,
# where candidates are ordered by their non-leading coefficient tuple
# (m_0, ..., m_{h-1}) read as the base-p integer sum(m_i * p**i). Coefficients
# are listed ascending by degree, leading 1 last. Regenerated from scratch by
# the test suite via lex_least_irreducible.
CANONICAL_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}

_FIELD_CACHE: dict[tuple, "GF"] = {}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            h = 0
            m = q
            while m % p == 0:
                m //= p
                h += 1
            if m != 1 or not _is_prime(p):
                raise ValueError(f"{q} is not a prime power")
            return p, h
    raise ValueError(f"{q} is not a prime power")


def _poly_divmod(num: list[int], den: list[int], base: "GF") -> tuple[list[int], list[int]]:
    """Polynomial long division over ``base``; coefficient lists ascending."""
    num = list(num)
    dlead = den[-1]
    dinv = base.inv(dlead)
    quot = [0] * max(len(num) - len(den) + 1, 0)
    for shift in range(len(num) - len(den), -1, -1):
        c = base.mul(num[shift + len(den) - 1], dinv)
        if c != 0:
            quot[shift] = c
            for i, dc in enumerate(den):
                num[shift + i] = base.sub(num[shift + i], base.mul(c, dc))
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def is_irreducible(base: "GF", coeffs: tuple[int, ...]) -> bool:
    """Whether the monic polynomial (ascending coefficients) over ``base`` is
    irreducible, by trial division against every monic polynomial of degree
    up to deg/2."""
    d = len(coeffs) - 1
    if d < 1 or coeffs[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    if coeffs[0] == 0:
        return d == 1
    b = base.order
    for deg in range(1, d // 2 + 1):
        for key in range(b**deg):
            den = [*_digits(key, b, deg), 1]
            _, rem = _poly_divmod(list(coeffs), den, base)
            if len(rem) == 1 and rem[0] == 0:
                return False
    return True


def lex_least_irreducible(base: "GF", degree: int) -> tuple[int, ...]:
    """Lex-least monic irreducible polynomial of the given degree over
    ``base``, under the non-leading-coefficient-tuple-as-integer order used by
    CANONICAL_MODULI."""
    b = base.order
    for key in range(b**degree):
        coeffs = (*_digits(key, b, degree), 1)
        if is_irreducible(base, coeffs):
            return coeffs
    raise FingeoError(f"no irreducible polynomial of degree {degree} over order {b}")


def _digits(code: int, b: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        out.append(code % b)
        code //= b
    return tuple(out)


class GF:
    """A finite field with dense arithmetic tables over integer codes."""

    def __init__(self, *, _token=None):
        if _token is not _GF_TOKEN:
            raise TypeError("use GF.prime, GF.extension or GF.of_order")
        self.p: int = 0
        self.h: int = 0
        self.order: int = 0
        self.base: GF | None = None
        self.degree: int = 1
        self.modulus: tuple[int, ...] | None = None
        self.key: tuple = ()
        self.add_table: np.ndarray
        self.mul_table: np.ndarray
        self.neg_table: np.ndarray
        self.inv_table: np.ndarray
        self._frob_pows: list[np.ndarray] = []

    # -- constructors -------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> "GF":
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        key = ("p", p)
        if key in _FIELD_CACHE:
            return _FIELD_CACHE[key]
        f = cls(_token=_GF_TOKEN)
        f.p, f.h, f.order = p, 1, p
        f.key = key
        a = np.arange(p, dtype=np.int64)
        f.add_table = (a[:, None] + a[None, :]) % p
        f.mul_table = (a[:, None] * a[None, :]) % p
        f.neg_table = (-a) % p
        inv = np.zeros(p, dtype=np.int64)
        r, c = np.nonzero(f.mul_table == 1)
        inv[r] = c
        f.inv_table = inv
        f._finish()
        _FIELD_CACHE[key] = f
        return f

    @classmethod
    def extension(cls, base: "GF", modulus: tuple[int, ...]) -> "GF":
        """Extend ``base`` by a monic irreducible ``modulus`` (ascending
        coefficients over ``base``, leading 1 last)."""
        modulus = tuple(int(c) for c in modulus)
        d = len(modulus) - 1
        if d < 2:
            raise ValueError("extension degree must be >= 2")
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        if any(not 0 <= c < base.order for c in modulus[:-1]):
            raise ValueError("modulus coefficients must be base-field codes")
        key = ("e", base.key, modulus)
        if key in _FIELD_CACHE:
            return _FIELD_CACHE[key]
        if base.order**d > MAX_TABLE_ORDER:
            raise FingeoError(
                f"field order {base.order**d} exceeds table limit {MAX_TABLE_ORDER}"
            )
        if not is_irreducible(base, modulus):
            raise ValueError(f"modulus {modulus} is reducible over order {base.order}")
        f = cls(_token=_GF_TOKEN)
        f.p = base.p
        f.h = base.h * d
        f.order = base.order**d
        f.base = base
        f.degree = d
        f.modulus = modulus
        f.key = key
        f._build_extension_tables()
        f._finish()
        _FIELD_CACHE[key] = f
        return f

    @classmethod
    def of_order(cls, q: int) -> "GF":
        """The canonical field of order ``q``: prime fields directly, prime
        powers via the canonical modulus over the prime field."""
        p, h = _factor_prime_power(q)
        if h == 1:
            return cls.prime(p)
        mod = CANONICAL_MODULI.get((p, h))
        if mod is None:
            mod = lex_least_irreducible(cls.prime(p), h)
        return cls.extension(cls.prime(p), mod)

    def _build_extension_tables(self) -> None:
        base = self.base
        b = base.order
        d = self.degree
        q = self.order
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, d), dtype=np.int64)
        rem = codes.copy()
        for i in range(d):
            digits[:, i] = rem % b
            rem //= b
        weights = b ** np.arange(d, dtype=np.int64)

        badd, bmul = base.add_table, base.mul_table

        # digitwise sums occupy separate digit positions, so plain integer
        # accumulation of digit * weight terms cannot carry
        s = badd[digits[:, None, 0], digits[None, :, 0]] * weights[0]
        for i in range(1, d):
            s += badd[digits[:, None, i], digits[None, :, i]] * weights[i]
        self.add_table = s

        negd = base.neg_table[digits]
        self.neg_table = (negd * weights).sum(axis=1)

        # power-basis digit vectors of alpha**e reduced mod the modulus
        red = np.zeros((2 * d - 1, d), dtype=np.int64)
        red[0, 0] = 1
        mtail = self.modulus[:-1]
        for e in range(1, 2 * d - 1):
            prev = red[e - 1]
            top = prev[d - 1]
            shifted = np.zeros(d, dtype=np.int64)
            shifted[1:] = prev[: d - 1]
            for i in range(d):
                shifted[i] = badd[shifted[i], base.neg_table[bmul[top, mtail[i]]]]
            red[e] = shifted

        res_digits = np.zeros((d, q, q), dtype=np.int64)
        for e in range(2 * d - 1):
            conv = None
            for i in range(max(0, e - d + 1), min(d, e + 1)):
                term = bmul[digits[:, None, i], digits[None, :, e - i]]
                conv = term if conv is None else badd[conv, term]
            for k in range(d):
                if red[e, k] != 0:
                    res_digits[k] = badd[res_digits[k], bmul[conv, red[e, k]]]
        out = res_digits[0] * weights[0]
        for k in range(1, d):
            out += res_digits[k] * weights[k]
        self.mul_table = out

        inv = np.zeros(q, dtype=np.int64)
        r, c = np.nonzero(self.mul_table == 1)
        inv[r] = c
        self.inv_table = inv

    def _finish(self) -> None:
        # Frobenius x -> x**p as a table, then its iterates up to h
        q = self.order
        frob = np.arange(q, dtype=np.int64)
        for _ in range(self.p - 1):
            frob = self.mul_table[frob, np.arange(q, dtype=np.int64)]
        pows = [np.arange(q, dtype=np.int64)]
        for _ in range(1, self.h):
            pows.append(frob[pows[-1]])
        self._frob_pows = pows
        self.frob_table = frob

    # -- scalar / broadcast arithmetic on codes ------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul_table[a, self.inv(b)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a = int(self.inv(a))
            k = -k
        r = 1
        x = int(a)
        while k:
            if k & 1:
                r = int(self.mul_table[r, x])
            x = int(self.mul_table[x, x])
            k >>= 1
        return r

    def frobenius(self, a, l: int = 1):
        """Apply x -> x**(p**l); ``l`` may be any integer (mod h)."""
        return self._frob_pows[l % self.h][a]

    def frob_pow_table(self, l: int) -> np.ndarray:
        return self._frob_pows[l % self.h]

    def subfield_codes(self, d: int) -> np.ndarray:
        """Codes of the subfield of order p**d: fixed points of frobenius**d.

        Requires d to divide h.
        """
        if self.h % d != 0:
            raise ValueError(f"no subfield of degree {d} in degree {self.h}")
        t = self._frob_pows[d % self.h]
        codes = np.arange(self.order, dtype=np.int64)
        return codes[t[codes] == codes]

    # -- element coordinates -------------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        """Power-basis coordinates over the base field (prime field: (code,))."""
        if self.base is None:
            return (int(code),)
        return _digits(int(code), self.base.order, self.degree)

    def from_coeffs(self, coeffs) -> int:
        if self.base is None:
            (c,) = coeffs
            return int(c) % self.p
        b = self.base.order
        code = 0
        for i, c in enumerate(coeffs):
            if not 0 <= c < b:
                raise ValueError("coefficient out of base-field range")
            code += int(c) * b**i
        return code

    def prime_coeffs(self, code: int) -> tuple[int, ...]:
        """Coordinates over the prime field (the base-p digits of the code)."""
        return _digits(int(code), self.p, self.h)

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def elements(self):
        return range(self.order)

    # -- misc -----------------------------------------------------------

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.order}|{self.base!r}[x]/{self.modulus})"

    def __reduce__(self):
        return (_rebuild_field, (field_to_json(self),))


_GF_TOKEN = object()


def _rebuild_field(desc):
    return field_from_json(desc)


class FieldElement:
    """A field element bound to its field; operators check the binding."""

    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        code = int(code)
        if not 0 <= code < field.order:
            raise ValueError(f"code {code} out of range for order {field.order}")
        self.field = field
        self.code = code

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError("mismatched field contexts")
        return other

    def __add__(self, other):
        o = self._check(other)
        return FieldElement(self.field, int(self.field.add(self.code, o.code)))

    def __sub__(self, other):
        o = self._check(other)
        return FieldElement(self.field, int(self.field.sub(self.code, o.code)))

    def __mul__(self, other):
        o = self._check(other)
        return FieldElement(self.field, int(self.field.mul(self.code, o.code)))

    def __truediv__(self, other):
        o = self._check(other)
        return FieldElement(self.field, int(self.field.div(self.code, o.code)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.code)))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.code, k))

    def frobenius(self, l: int = 1) -> "FieldElement":
        return FieldElement(self.field, int(self.field.frobenius(self.code, l)))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field is self.field
            and other.code == self.code
        )

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __repr__(self):
        return f"<{self.code} in {self.field!r}>"


class CompanionAlgebra:
    """Companion-matrix model of the degree-``t`` extension of ``base``.

    ``M`` is the companion matrix of the (canonical unless given) monic
    irreducible modulus f of degree t: rows 0..t-2 shift the power basis up,
    the last row carries the negated non-leading coefficients. The matrices
    ``sum(a_i * M**i)`` form a field H of order q**t inside the t x t matrices
    over the base field, and packing row vectors by ``row_to_ext`` intertwines
    right multiplication by M with multiplication by the class of x in the
    polynomial model ``ext``. Both facts are checked at construction.
    """

    def __init__(self, base: GF, t: int, modulus: tuple[int, ...] | None = None):
        if t < 1:
            raise ValueError("extension degree must be >= 1")
        self.base = base
        self.t = t
        if modulus is None:
            modulus = lex_least_irreducible(base, t)
        self.modulus = tuple(int(c) for c in modulus)
        if t == 1:
            # degree-1 tower step: ext is the base field itself and the class
            # of x is the scalar -m_0
            self.ext = base
            self.M = np.array([[base.neg(self.modulus[0])]], dtype=np.int64)
        else:
            self.ext = GF.extension(base, self.modulus)
            M = np.zeros((t, t), dtype=np.int64)
            for i in range(t - 1):
                M[i, i + 1] = 1
            for j in range(t):
                M[t - 1, j] = base.neg(self.modulus[j])
            self.M = M
        self._mpows = [np.eye(t, dtype=np.int64)]
        for _ in range(1, t):
            self._mpows.append(self._matmul(self._mpows[-1], self.M))
        self._h_cache: np.ndarray | None = None
        self._self_test()

    def _matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        base = self.base
        t = A.shape[0]
        out = np.zeros((t, B.shape[1]), dtype=np.int64)
        for i in range(t):
            for j in range(B.shape[1]):
                acc = 0
                for k in range(t):
                    acc = base.add(acc, base.mul(A[i, k], B[k, j]))
                out[i, j] = acc
        return out

    def _self_test(self) -> None:
        base, t = self.base, self.t
        # f(M) = 0
        acc = np.zeros((t, t), dtype=np.int64)
        mp = np.eye(t, dtype=np.int64)
        for c in self.modulus:
            if c:
                acc = base.add(acc, base.mul(np.full((t, t), c, dtype=np.int64), mp))
            mp = self._matmul(mp, self.M)
        if np.any(acc != 0):
            raise FingeoError("companion matrix does not satisfy its modulus")
        if t == 1:
            return
        # row packing intertwines: pack(r . M) = pack(r) * alpha
        ext = self.ext
        alpha = self.base.order  # code of the power-basis generator
        if ext.order <= 4096:
            rows = np.arange(ext.order, dtype=np.int64)
            digits = np.empty((ext.order, t), dtype=np.int64)
            rem = rows.copy()
            for i in range(t):
                digits[:, i] = rem % base.order
                rem //= base.order
            rM = np.zeros_like(digits)
            for j in range(t):
                acc = np.zeros(ext.order, dtype=np.int64)
                for i in range(t):
                    acc = base.add(acc, base.mul(digits[:, i], self.M[i, j]))
                rM[:, j] = acc
            weights = base.order ** np.arange(t, dtype=np.int64)
            packed = (rM * weights).sum(axis=1)
            if np.any(packed != ext.mul(rows, alpha)):
                raise FingeoError("row packing does not intertwine M with alpha")

    def row_to_ext(self, row) -> int:
        """Pack a length-t row of base-field codes into an ext-field code."""
        b = self.base.order
        code = 0
        for i, c in enumerate(row):
            code += int(c) * b**i
        return code

    def ext_to_row(self, code: int) -> np.ndarray:
        return np.array(_digits(int(code), self.base.order, self.t), dtype=np.int64)

    def mat_of(self, code: int) -> np.ndarray:
        """The matrix sum(a_i * M**i) for the ext element with digits a_i."""
        base = self.base
        digs = _digits(int(code), base.order, self.t)
        acc = np.zeros((self.t, self.t), dtype=np.int64)
        for i, a in enumerate(digs):
            if a:
                acc = base.add(acc, base.mul(np.full_like(acc, a), self._mpows[i]))
        return acc

    def h_matrices(self) -> np.ndarray:
        """All q**t matrices of H, indexed by ext code."""
        if self._h_cache is None:
            out = np.empty((self.ext.order, self.t, self.t), dtype=np.int64)
            for c in range(self.ext.order):
                out[c] = self.mat_of(c)
            self._h_cache = out
        return self._h_cache


# -- field-spec strings and JSON descriptors ----------------------------

_TERM_RE = re.compile(r"^(\d+)?(x(\d+)?)?$")


def _parse_poly(text: str, p: int) -> tuple[int, ...]:
    """Parse a polynomial like ``x4+x+1`` or ``x2+2x+2`` over GF(p)."""
    terms = text.replace(" ", "").split("+")
    coeffs: dict[int, int] = {}
    for term in terms:
        m = _TERM_RE.match(term)
        if not m or not term:
            raise ValueError(f"bad polynomial term {term!r}")
        coeff_s, xpart, exp_s = m.groups()
        if xpart is None:
            if coeff_s is None:
                raise ValueError(f"bad polynomial term {term!r}")
            deg, coeff = 0, int(coeff_s)
        else:
            deg = int(exp_s) if exp_s is not None else 1
            coeff = int(coeff_s) if coeff_s is not None else 1
        coeffs[deg] = (coeffs.get(deg, 0) + coeff) % p
    d = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(d + 1))


def parse_field_spec(spec: str) -> GF:
    """Build a field from a spec string ``p``, ``p^h``, or ``p^h/poly``.

    The polynomial is over GF(p) in the variable x with exponents written
    directly after x (``x4+x+1`` means x^4+x+1); it must be monic, of degree
    h, and irreducible. Without a polynomial the canonical modulus is used.
    """
    spec = spec.strip()
    m = re.match(r"^(\d+)(?:\^(\d+))?(?:/(.+))?$", spec)
    if not m:
        raise ValueError(f"bad field spec {spec!r}")
    p = int(m.group(1))
    h = int(m.group(2)) if m.group(2) else 1
    if not _is_prime(p):
        raise ValueError(f"field characteristic {p} is not prime")
    if h == 1:
        if m.group(3):
            raise ValueError("prime fields take no modulus")
        return GF.prime(p)
    if m.group(3):
        coeffs = _parse_poly(m.group(3), p)
        if len(coeffs) - 1 != h:
            raise ValueError(
                f"modulus degree {len(coeffs) - 1} does not match extension degree {h}"
            )
        if coeffs[-1] != 1:
            raise ValueError("modulus must be monic")
        return GF.extension(GF.prime(p), coeffs)
    return GF.of_order(p**h)


def field_to_json(f: GF) -> dict:
    if f.base is None:
        return {"p": f.p}
    return {
        "base": field_to_json(f.base),
        "degree": f.degree,
        "modulus": list(f.modulus),
    }


def field_from_json(desc: dict) -> GF:
    if "base" not in desc:
        return GF.prime(int(desc["p"]))
    base = field_from_json(desc["base"])
    return GF.extension(base, tuple(int(c) for c in desc["modulus"]))

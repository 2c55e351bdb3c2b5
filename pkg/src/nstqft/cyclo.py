"""Exact arithmetic in the cyclotomic field Q(zeta_{4r}).

Elements are stored in the power basis ``zeta^0 .. zeta^(d-1)`` with
``d = phi(4r)``, as a tuple of integer numerators over one positive common
denominator.  The representation is canonical (content and denominator are
coprime, coefficients reduced modulo the cyclotomic polynomial), so equality
is tuple equality.

The field contains ``q = zeta^4 = exp(2 pi i / r)``, ``i = zeta^r`` and
``sqrt(r)``; the latter is realised through the quadratic Gauss sum.
"""
from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = ["FieldCtx", "CycloNum", "field_init", "embed_complex"]


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c, rem = divmod(num[k + len(den) - 1], lead)
        if rem:
            raise ArithmeticError("polynomial division is not exact")
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("polynomial division is not exact")
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for k in range(1, n):
        if n % k == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(k)))
    return tuple(poly)


class FieldCtx:
    """Context for Q(zeta_n), n = 4r, r odd >= 3.

    Attributes
    ----------
    r, n : int
    degree : int
        ``phi(n)``, the dimension of the field over Q.
    phi_poly : tuple of int
        Monic cyclotomic polynomial, coefficients low to high.
    """

    def __init__(self, r: int):
        if not isinstance(r, int) or r < 3 or r % 2 == 0:
            raise ValueError(f"r must be an odd integer >= 3, got {r!r}")
        self.r = r
        self.n = 4 * r
        self.phi_poly = cyclotomic_poly(self.n)
        self.degree = len(self.phi_poly) - 1
        d = self.degree
        # x^d = -sum_{i<d} phi_i x^i; only the nonzero terms are kept
        self.phi_terms = tuple((i, -c) for i, c in enumerate(self.phi_poly[:d]) if c)
        self._zero_num = (0,) * d
        self._zeta = [self._reduce_list([0] * k + [1]) for k in range(self.n)]
        self.zero = CycloNum(self, self._zero_num, 1)
        self.one = self.from_int(1)
        self.zeta = CycloNum(self, self._zeta[1], 1)
        self.q = self.zeta_pow(4)
        self.i = self.zeta_pow(r)
        gauss = self.zero
        for k in range(r):
            gauss = gauss + self.q_pow(k * k)
        sqrt_r = gauss if r % 4 == 1 else -self.i * gauss
        if sqrt_r * sqrt_r != self.from_int(r):
            raise ArithmeticError("Gauss sum does not square to r")
        if embed_complex(sqrt_r, 15).real < 0:
            sqrt_r = -sqrt_r
        self.sqrt_r = sqrt_r

    @property
    def phi_n(self) -> int:
        return self.degree

    def __repr__(self) -> str:
        return f"FieldCtx(r={self.r})"

    def __reduce__(self):
        return (field_init, (self.r,))

    # -- raw polynomial helpers ------------------------------------------------
    def _reduce_list(self, coeffs: list[int]) -> tuple[int, ...]:
        d = self.degree
        c = list(coeffs) + [0] * max(0, d - len(coeffs))
        terms = self.phi_terms
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                base = k - d
                for i, p in terms:
                    c[base + i] += top * p
        return tuple(c[:d])

    def make(self, num, den: int = 1) -> "CycloNum":
        """Build a normalised element from integer numerators and denominator."""
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num = tuple(num)
        if den < 0:
            num = tuple(-x for x in num)
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            num = tuple(x // g for x in num)
            den //= g
        return CycloNum(self, num, den)

    # -- constants -------------------------------------------------------------
    def from_int(self, k: int) -> "CycloNum":
        return CycloNum(self, (k,) + self._zero_num[1:], 1)

    def from_fraction(self, x) -> "CycloNum":
        x = Fraction(x)
        return self.make((x.numerator,) + self._zero_num[1:], x.denominator)

    def coerce(self, x) -> "CycloNum":
        if isinstance(x, CycloNum):
            if x.field is not self:
                raise ValueError("elements of different cyclotomic fields")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Rational):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def zeta_pow(self, k: int) -> "CycloNum":
        return CycloNum(self, self._zeta[k % self.n], 1)

    def q_pow(self, k: int) -> "CycloNum":
        return self.zeta_pow(4 * k)

    def i_pow(self, k: int) -> "CycloNum":
        return self.zeta_pow(self.r * k)

    def braces(self, k: int) -> "CycloNum":
        """``{k} = q^k - q^-k``."""
        return self.q_pow(k) - self.q_pow(-k)

    def qint(self, k: int) -> "CycloNum":
        """Quantum integer ``[k] = {k}/{1}``."""
        return self.braces(k) / self.braces(1)

    def qfact(self, k: int) -> "CycloNum":
        out = self.one
        for j in range(1, k + 1):
            out = out * self.qint(j)
        return out

    # -- text form -------------------------------------------------------------
    _TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?z(?:\^(\d+))?)?")

    def parse(self, text: str) -> "CycloNum":
        """Parse the canonical textual form, e.g. ``1/3*z^2 - 2``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty cyclotomic literal")
        coeffs: dict[int, Fraction] = {}
        pos = 0
        first = True
        while pos < len(s):
            m = self._TERM.match(s, pos)
            if m is None or m.end() == pos or (not first and not m.group(1)):
                raise ValueError(f"malformed cyclotomic literal {text!r} at column {pos + 1}")
            sign, coef, zpart, exp = m.groups()
            if coef is None and zpart is None:
                raise ValueError(f"malformed cyclotomic literal {text!r} at column {pos + 1}")
            if zpart is not None and coef is not None and not zpart.startswith("*"):
                raise ValueError(f"missing '*' in {text!r} at column {pos + 1}")
            if zpart is not None and coef is None and zpart.startswith("*"):
                raise ValueError(f"dangling '*' in {text!r} at column {pos + 1}")
            c = Fraction(coef) if coef is not None else Fraction(1)
            if sign == "-":
                c = -c
            k = 0 if zpart is None else (int(exp) if exp is not None else 1)
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
            pos = m.end()
            first = False
        den = 1
        for c in coeffs.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        top = max(coeffs) if coeffs else 0
        raw = [0] * (top + 1)
        for k, c in coeffs.items():
            raw[k] = int(c * den)
        return self.make(self._reduce_list(raw), den)


@functools.lru_cache(maxsize=None)
def field_init(r: int) -> FieldCtx:
    """Return the (cached) field context for Q(zeta_{4r})."""
    return FieldCtx(r)


class CycloNum:
    """Immutable element of Q(zeta_{4r})."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: FieldCtx, num: tuple, den: int):
        self.field = field
        self.num = num
        self.den = den

    # -- predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloNum):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.r, self.num, self.den))

    # -- arithmetic ------------------------------------------------------------
    def _other(self, other):
        if isinstance(other, CycloNum):
            if other.field is not self.field:
                raise ValueError("elements of different cyclotomic fields")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return self.field.make([a + b for a, b in zip(self.num, o.num)], self.den)
        return self.field.make(
            [a * o.den + b * self.den for a, b in zip(self.num, o.num)], self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        f = self.field
        d = f.degree
        prod = [0] * (2 * d - 1)
        bnz = [(j, y) for j, y in enumerate(o.num) if y]
        for i, x in enumerate(self.num):
            if x:
                for j, y in bnz:
                    prod[i + j] += x * y
        return f.make(f._reduce_list(prod), self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "CycloNum":
        """Multiplicative inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        f = self.field
        if self.is_rational():
            return f.from_fraction(Fraction(self.den, self.num[0]))
        # invariant: s*a = r0 (mod phi), t*a = r1 (mod phi)
        r0 = [Fraction(c) for c in f.phi_poly]
        r1 = [Fraction(c, self.den) for c in self.num]
        s0: list[Fraction] = []
        s1 = [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                break
            quo, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(quo, s1))
        c = r1[0]
        coeffs = [x / c for x in s1]
        den = 1
        for x in coeffs:
            den = den * x.denominator // math.gcd(den, x.denominator)
        raw = [int(x * den) for x in coeffs]
        return f.make(f._reduce_list(raw), den)

    def __truediv__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CycloNum":
        """Complex conjugate (zeta -> zeta^-1)."""
        f = self.field
        out = f.zero
        for k, c in enumerate(self.num):
            if c:
                out = out + f.zeta_pow(-k) * c
        return out / self.den if self.den != 1 else out

    # -- text ------------------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for k in range(len(self.num) - 1, -1, -1):
            c = Fraction(self.num[k], self.den)
            if c == 0:
                continue
            neg = c < 0
            a = -c if neg else c
            if k == 0:
                body = str(a)
            else:
                zp = "z" if k == 1 else f"z^{k}"
                body = zp if a == 1 else f"{a}*{zp}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CycloNum(r={self.field.r}, {self})"

    def __complex__(self) -> complex:
        return complex(embed_complex(self, 17))


def _qpoly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qpoly_sub(a, b):
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]


def _qpoly_divmod(a, b):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    quo = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        quo[shift] = c
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return quo, a


def embed_complex(x: CycloNum, digits: int = 30):
    """Approximate complex value under zeta -> exp(2 pi i / n).

    For reporting and sign checks only; never used to decide equality.
    """
    f = x.field
    with mpmath.workdps(digits + 5):
        z = mpmath.expjpi(mpmath.mpf(2) / f.n)
        total = mpmath.mpc(0)
        for k, c in enumerate(x.num):
            if c:
                total += c * z**k
        total /= x.den
        return mpmath.mpc(+total.real, +total.imag)

"""Scalar backends.

Two coefficient backends are supported throughout the package:

* ``"exact"`` -- complex numbers with rational real and imaginary parts,
  implemented by :class:`QC`.  All arithmetic is error-free; algebraic
  identities are tested for literal equality on this backend.
* ``"float"`` -- ordinary Python ``complex`` (binary64 pairs).  Round-off
  applies; numeric comparisons use relative tolerances.

The rational parts use gmpy2.mpq when that package is importable and
fall back to fractions.Fraction otherwise; both are exact and the two
representations compare and hash equal for equal values.
"""

from __future__ import annotations

import math
from fractions import Fraction

try:
    from gmpy2 import mpq as _RATIO
except ImportError:  # pragma: no cover - gmpy2 is optional
    _RATIO = Fraction

BACKENDS = ("exact", "float")

_ZERO = _RATIO(0)
_RAT_TYPES = (int, Fraction, type(_ZERO))


class QC:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_ratio(re)
        self.im = _to_ratio(im)

    @classmethod
    def _mk(cls, re, im):
        # internal: parts are already rationals
        self = object.__new__(cls)
        self.re = re
        self.im = im
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QC._mk(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QC._mk(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.re, self.im
        c, d = other.re, other.im
        if not b:
            if not d:
                return QC._mk(a * c, _ZERO)
            return QC._mk(a * c, a * d)
        if not d:
            return QC._mk(a * c, b * c)
        return QC._mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = other.re * other.re + other.im * other.im
        if not d:
            raise ZeroDivisionError("division by zero scalar")
        return QC._mk(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return QC._mk(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("QC powers must be nonnegative integers")
        out = QC._mk(_RATIO(1), _ZERO)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return QC._mk(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"QC({self.re!s})"
        return f"QC({self.re!s}, {self.im!s})"


def _to_ratio(x):
    if type(x) is type(_ZERO):
        return x
    return _RATIO(x)


def _coerce(x):
    if isinstance(x, QC):
        return x
    if isinstance(x, _RAT_TYPES):
        return QC._mk(_to_ratio(x), _ZERO)
    return NotImplemented


def zero(backend: str):
    return QC() if backend == "exact" else 0j


def one(backend: str):
    return QC(1) if backend == "exact" else 1 + 0j


def from_rational(backend: str, re, im=0):
    """Build a scalar from rational (or int) real/imaginary parts."""
    if backend == "exact":
        return QC(re, im)
    return complex(_as_float(re), _as_float(im))


def _as_float(x) -> float:
    try:
        return float(x)
    except (TypeError, ValueError):
        return float(Fraction(x))


def conj(x):
    return x.conjugate()


def is_zero(x) -> bool:
    return not bool(x)


def to_complex(x) -> complex:
    return complex(x)


def scalar_abs(x) -> float:
    return abs(x)


def to_fraction(q) -> Fraction:
    """An int-backed Fraction equal to any rational (mpq, mpz, Fraction).

    Plain Fraction(mpq) keeps mpz internals on some interpreter versions,
    which gmpy2 then refuses in mixed arithmetic; always go through ints.
    """
    return Fraction(int(q.numerator), int(q.denominator))


def _fraction_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def abs_exact(x):
    """|x| as a Fraction when it is rational, else None (exact backend only)."""
    if not isinstance(x, QC):
        return None
    if not x.im:
        return to_fraction(abs(x.re))
    if not x.re:
        return to_fraction(abs(x.im))
    return _fraction_sqrt(x.abs2())


def mul_rat(backend: str, x, q):
    """Multiply a scalar by an exact rational, respecting the backend."""
    if backend == "exact":
        return x * _RATIO(q)
    return x * float(Fraction(q))


def parse_rational(text) -> Fraction:
    """Parse "num/den" (or "num") decimal strings into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text)
    raise ValueError(f"not an exact rational literal: {text!r}")


def format_rational(q) -> str:
    return str(q)

"""Outward-rounded interval arithmetic with exact rational endpoints.

Endpoints are Fractions, so the field operations are exact; ``rounded``
coarsens them outward to dyadic rationals to keep sizes bounded.
Transcendental enclosures (pi, cos, sin, sqrt) are delegated to
``mpmath.iv`` and converted back exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

__all__ = ["Interval", "CInterval", "pi_interval", "cos2pi", "sin2pi", "arccos_over_pi"]

_IV_LOCK = threading.Lock()


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


def _mpf_to_fraction(x) -> Fraction:
    # man_exp drops the sign, so read the raw tuple
    return _raw_to_fraction(x._mpf_)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def hull(cls, *xs: "Interval") -> "Interval":
        return cls(min(x.lo for x in xs), max(x.hi for x in xs))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x):
        return self.contains(x)

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def sign(self) -> int | None:
        """+1 / -1 when the interval excludes zero, otherwise None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def rounded(self, bits: int) -> "Interval":
        return Interval(_floor_dyadic(self.lo, bits), _ceil_dyadic(self.hi, bits))

    def widen(self, r) -> "Interval":
        return Interval(self.lo - r, self.hi + r)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        o = _iv(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = _iv(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return _iv(other) - self

    def __mul__(self, other):
        o = _iv(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _iv(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return _iv(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self**-n)
        if n == 0:
            return Interval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            a, b = self.lo**n, self.hi**n
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(self.hi**n, self.lo**n)
        return Interval(Fraction(0), self.mag**n)

    def square(self):
        return self**2

    def sqrt(self, bits: int = 64) -> "Interval":
        if self.hi < 0:
            raise ValueError("sqrt of a negative interval")
        lo = max(self.lo, Fraction(0))
        return Interval(_sqrt_floor(lo, bits), _sqrt_ceil(self.hi, bits))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def _sqrt_floor(x: Fraction, bits: int) -> Fraction:
    # floor(sqrt(x) * 2^bits) / 2^bits using integer sqrt
    scaled = x * (1 << (2 * bits))
    return Fraction(math.isqrt(math.floor(scaled)), 1 << bits)


def _sqrt_ceil(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << (2 * bits))
    c = math.ceil(scaled)
    r = math.isqrt(c)
    if r * r < c:
        r += 1
    return Fraction(r, 1 << bits)


def _iv(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


@dataclass(frozen=True, slots=True)
class CInterval:
    """Axis-aligned complex rectangle."""

    re: Interval
    im: Interval

    @classmethod
    def point(cls, re, im=0) -> "CInterval":
        return cls(Interval.point(re), Interval.point(im))

    def __neg__(self):
        return CInterval(-self.re, -self.im)

    def __add__(self, other):
        o = _civ(other)
        return CInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _civ(other)
        return CInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _civ(other) - self

    def __mul__(self, other):
        o = _civ(other)
        return CInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return CInterval(self.re, -self.im)

    def abs2(self) -> Interval:
        return self.re.square() + self.im.square()

    def abs(self, bits: int = 64) -> Interval:
        return self.abs2().sqrt(bits)

    def __truediv__(self, other):
        o = _civ(other)
        d = o.abs2()
        n = self * o.conj()
        return CInterval(n.re / d, n.im / d)

    def __rtruediv__(self, other):
        return _civ(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return 1 / (self**-n)
        result, base = CInterval.point(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def rounded(self, bits: int) -> "CInterval":
        return CInterval(self.re.rounded(bits), self.im.rounded(bits))

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def excludes_zero(self) -> bool:
        return self.re.sign() is not None or self.im.sign() is not None

    @property
    def rad(self) -> Fraction:
        """Half the larger side length."""
        return max(self.re.width, self.im.width) / 2

    def __complex__(self):
        return complex(float(self.re.mid), float(self.im.mid))

    def __repr__(self):
        return f"CInterval({self.re!r}, {self.im!r})"


def _civ(x) -> CInterval:
    if isinstance(x, CInterval):
        return x
    if isinstance(x, Interval):
        return CInterval(x, Interval.point(0))
    if isinstance(x, complex):
        raise TypeError("floating complex values are not accepted")
    return CInterval.point(x)


class _ivprec:
    """Temporarily set the precision of the shared ``mpmath.iv`` context."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self.saved = mpmath.iv.prec
        mpmath.iv.prec = self.bits

    def __exit__(self, *exc):
        mpmath.iv.prec = self.saved


def _raw_to_fraction(t) -> Fraction:
    # mpmath raw mpf tuple (sign, man, exp, bc)
    sign, man, exp, _ = t
    if not man and exp:
        raise ValueError("non-finite interval endpoint")
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _from_iv(v) -> Interval:
    a, b = v._mpi_
    return Interval(_raw_to_fraction(a), _raw_to_fraction(b))


def pi_interval(bits: int) -> Interval:
    with _IV_LOCK:
        with _ivprec(bits + 10):
            return _from_iv(mpmath.iv.pi)


def _to_iv(x: Interval):
    # exact conversion of Fraction endpoints to outward-rounded mpmath intervals
    lo = mpmath.iv.mpf(x.lo.numerator) / x.lo.denominator
    hi = mpmath.iv.mpf(x.hi.numerator) / x.hi.denominator
    mk = mpmath.mp.make_mpf
    return mpmath.iv.mpf([mk(lo._mpi_[0]), mk(hi._mpi_[1])])


def cos2pi(x: Interval, bits: int = 64) -> Interval:
    """Enclosure of cos(2 pi t) over t in x."""
    with _IV_LOCK:
        with _ivprec(bits + 20):
            v = mpmath.iv.cos(2 * mpmath.iv.pi * _to_iv(x))
            out = _from_iv(v)
    return Interval(max(out.lo, Fraction(-1)), min(out.hi, Fraction(1))).rounded(bits)


def sin2pi(x: Interval, bits: int = 64) -> Interval:
    """Enclosure of sin(2 pi t) over t in x."""
    with _IV_LOCK:
        with _ivprec(bits + 20):
            v = mpmath.iv.sin(2 * mpmath.iv.pi * _to_iv(x))
            out = _from_iv(v)
    return Interval(max(out.lo, Fraction(-1)), min(out.hi, Fraction(1))).rounded(bits)


def arccos_over_pi(x: Interval, bits: int = 64) -> Interval:
    """Enclosure of arccos(t)/pi for t in x intersected with [-1, 1]."""
    lo, hi = max(x.lo, Fraction(-1)), min(x.hi, Fraction(1))
    with _IV_LOCK:
        with mpmath.mp.workprec(bits + 40):
            # arccos is decreasing; evaluate endpoints at high precision, then pad
            a = mpmath.acos(mpmath.mpf(hi.numerator) / hi.denominator) / mpmath.pi
            b = mpmath.acos(mpmath.mpf(lo.numerator) / lo.denominator) / mpmath.pi
            fa, fb = _mpf_to_fraction(a), _mpf_to_fraction(b)
    pad = Fraction(1, 1 << (bits + 8))
    return Interval(max(Fraction(0), fa - pad), min(Fraction(1), fb + pad)).rounded(bits)

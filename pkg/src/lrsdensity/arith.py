"""Exact univariate polynomial algebra over the rationals.

Polynomials are dense, lowest degree first, with :class:`fractions.Fraction`
coefficients.  Everything here is a pure function of immutable values.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd, isqrt, lcm
from typing import Iterable, Sequence

from .errors import DegreeCapExceeded, EndpointRootError

__all__ = [
    "RatPoly",
    "poly_gcd",
    "squarefree_decomposition",
    "squarefree_part",
    "sturm_sequence",
    "sturm_count",
    "resultant",
    "composed_defining_poly",
    "power_poly",
    "rational_function_of_root",
    "cyclotomic",
    "chebyshev_T",
    "totient",
    "totient_search_bound",
    "DEFAULT_DEGREE_CAP",
]

DEFAULT_DEGREE_CAP = 512


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(x)


class RatPoly:
    """Dense polynomial with rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple; otherwise the last
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("RatPoly is immutable")

    # construction helpers
    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c=1) -> "RatPoly":
        return cls([0] * n + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mon and c == 1:
                s = mon
            elif mon and c == -1:
                s = "-" + mon
            else:
                s = f"{c}" + (f"*{mon}" if mon else "")
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic
    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly(c * other for c in self.coeffs)
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = RatPoly((1,)), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        return self.divrem(other)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def divrem(self, other) -> tuple["RatPoly", "RatPoly"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return RatPoly(), self
        inv = 1 / other.lc
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = c * inv
            quot[i - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= f * b
        return RatPoly(quot), RatPoly(rem[:dq])

    def __call__(self, x):
        """Horner evaluation; works for any ring element supporting + and *."""
        if isinstance(x, int):
            x = Fraction(x)
        acc = x * 0 + self.lc
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self, k: int = 1) -> "RatPoly":
        p = self
        for _ in range(k):
            p = RatPoly(i * c for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive with integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive(self) -> "RatPoly":
        """Integer-coefficient primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        p = self * (1 / self.content())
        return -p if p.lc < 0 else p

    def int_coeffs(self) -> list[int]:
        """Coefficients of the primitive part as Python ints."""
        return [int(c) for c in self.primitive().coeffs]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def reverse(self) -> "RatPoly":
        """x^deg * p(1/x); callers strip the root 0 first."""
        return RatPoly(reversed(self.coeffs))

    def scale_arg(self, a) -> "RatPoly":
        """p(a*x)."""
        a = _frac(a)
        out, t = [], Fraction(1)
        for c in self.coeffs:
            out.append(c * t)
            t *= a
        return RatPoly(out)

    def shift(self, a) -> "RatPoly":
        """p(x + a) by repeated synthetic division."""
        a = _frac(a)
        c = list(self.coeffs)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return RatPoly(c)

    def compose(self, q: "RatPoly") -> "RatPoly":
        acc = RatPoly()
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def strip_zero_root(self) -> tuple["RatPoly", int]:
        """Return (p / x^j, j) with p(0) != 0 afterwards."""
        j = 0
        while j < len(self.coeffs) and self.coeffs[j] == 0:
            j += 1
        return RatPoly(self.coeffs[j:]), j

    def sign_at(self, x: Fraction) -> int:
        v = self(_frac(x))
        return (v > 0) - (v < 0)


def _as_poly(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    return RatPoly((p,))


def poly_gcd(p: RatPoly, q: RatPoly) -> RatPoly:
    """Monic gcd (zero if both are zero)."""
    a, b = _as_poly(p), _as_poly(q)
    while not b.is_zero():
        a, b = b, a.divrem(b)[1].monic()
    return a.monic()


def squarefree_decomposition(p: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm: monic pairwise coprime square-free factors with multiplicities."""
    if p.is_zero():
        raise ValueError("square-free decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: RatPoly) -> RatPoly:
    if p.degree <= 0:
        return p.monic() if p else p
    return (p // poly_gcd(p, p.derivative())).monic()


def sturm_sequence(p: RatPoly) -> list[RatPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2].divrem(seq[-1])[1]
        seq.append(-r)
    seq.pop()
    # positive rescaling keeps sign variations intact and coefficients small
    return [s * (1 / s.content()) if s.degree > 0 else s for s in seq]


def _variations(seq: Sequence[RatPoly], x: Fraction) -> int:
    signs = [s.sign_at(x) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: RatPoly, lo, hi, seq: Sequence[RatPoly] | None = None) -> int:
    """Number of distinct real roots of square-free ``p`` in the open interval (lo, hi)."""
    lo, hi = _frac(lo), _frac(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    for e in (lo, hi):
        if p(e) == 0:
            raise EndpointRootError(e)
    if seq is None:
        seq = sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def resultant(p: RatPoly, q: RatPoly) -> Fraction:
    """Resultant via the Euclidean remainder sequence over Q."""
    p, q = _as_poly(p), _as_poly(q)
    if p.is_zero() or q.is_zero():
        return Fraction(0)
    res = Fraction(1)
    while True:
        dp, dq = p.degree, q.degree
        if dq == 0:
            return res * q.lc**dp
        if dp == 0:
            return res * p.lc**dq
        r = p.divrem(q)[1]
        if r.is_zero():
            return Fraction(0)
        # res(p, q) = (-1)^(dp dq) lc(q)^(dp - dr) res(q, r)
        if (dp * dq) % 2:
            res = -res
        res *= q.lc ** (dp - r.degree)
        p, q = q, r


# --- power-sum (Newton identity) machinery for composed polynomials -------


def _power_sums(p: RatPoly, n: int) -> list[Fraction]:
    """s_0..s_n, s_j = sum of j-th powers of the roots of p (with multiplicity)."""
    f = p.monic()
    d = f.degree
    e = [-f[d - i] for i in range(1, d + 1)]  # x^d = e1 x^{d-1} + ... (sign-flipped coeffs)
    s = [Fraction(d)] + [Fraction(0)] * n
    for j in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, min(j - 1, d) + 1):
            acc += e[i - 1] * s[j - i]
        if j <= d:
            acc += j * e[j - 1]
        s[j] = acc
    return s


def _poly_from_power_sums(s: Sequence[Fraction], n: int) -> RatPoly:
    """Monic degree-n polynomial whose roots have power sums s[1..n]."""
    e = [Fraction(1)]  # elementary symmetric, e_0 = 1
    for j in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * s[i]
        e.append(acc / j)
    # prod (x - r) = sum_j (-1)^j e_j x^{n-j}
    return RatPoly((-1) ** (n - i) * e[n - i] for i in range(n + 1))


def _check_cap(n: int, cap: int | None):
    cap = DEFAULT_DEGREE_CAP if cap is None else cap
    if n > cap:
        raise DegreeCapExceeded(n, cap)


def composed_defining_poly(p: RatPoly, q: RatPoly, op: str, cap: int | None = None) -> RatPoly:
    """Monic polynomial vanishing at every a∘b with p(a) = 0 and q(b) = 0.

    ``op`` is one of ``"sum"``, ``"product"``, ``"ratio"``.  The result is not
    square-free in general; callers apply :func:`squarefree_part`.
    """
    if p.degree < 1 or q.degree < 1:
        raise ValueError("composed polynomial needs non-constant inputs")
    if op == "ratio":
        q, _ = q.strip_zero_root()
        if q.degree < 1:
            raise ZeroDivisionError("ratio by the root 0")
        q = q.reverse()
        op = "product"
    n = p.degree * q.degree
    _check_cap(n, cap)
    sp, sq = _power_sums(p, n), _power_sums(q, n)
    if op == "product":
        s = [a * b for a, b in zip(sp, sq)]
    elif op == "sum":
        # exponential generating functions multiply
        fa = [sp[t] / factorial(t) for t in range(n + 1)]
        fb = [sq[t] / factorial(t) for t in range(n + 1)]
        s = [factorial(j) * sum(fa[t] * fb[j - t] for t in range(j + 1)) for j in range(n + 1)]
    else:
        raise ValueError(f"unknown composition {op!r}")
    return _poly_from_power_sums(s, n)


def power_poly(p: RatPoly, r: int) -> RatPoly:
    """Monic polynomial whose roots are the r-th powers of the roots of p."""
    if r < 0:
        p, _ = p.strip_zero_root()
        return power_poly(p.reverse(), -r)
    d = p.degree
    if r == 0:
        return RatPoly((-1, 1)) ** d
    s = _power_sums(p, d * r)
    return _poly_from_power_sums([s[j * r] for j in range(d + 1)], d)


def rational_function_of_root(g: RatPoly, num: RatPoly, den: RatPoly) -> RatPoly:
    """Polynomial whose roots are num(y)/den(y) over the roots y of g.

    Computed as x -> prod_i (x den(y_i) - num(y_i)) by evaluation at deg(g)+1
    integer points (each value an exact univariate resultant) and
    interpolation.  Requires den(y_i) != 0 for every root.
    """
    d = g.degree
    num, den = num % g, den % g
    lcg = g.lc
    xs = list(range(d + 1))
    ys = []
    for x0 in xs:
        h = den * x0 - num
        if h.is_zero():
            ys.append(Fraction(0))
            continue
        ys.append(resultant(g, h) / lcg**h.degree)
    out = _interpolate(xs, ys)
    if out.degree != d:
        raise ZeroDivisionError("denominator vanishes at a root")
    return out.monic()


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> RatPoly:
    """Newton divided differences."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = RatPoly((coef[-1],))
    for i in range(n - 2, -1, -1):
        p = p * RatPoly((-xs[i], 1)) + coef[i]
    return p


# --- number-theoretic polynomial families ---------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> RatPoly:
    """n-th cyclotomic polynomial, obtained by dividing x^n - 1 by the lower ones."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = RatPoly.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            p = p // cyclotomic(d)
    return p


@lru_cache(maxsize=None)
def chebyshev_T(n: int) -> RatPoly:
    """Chebyshev polynomial of the first kind, T_n(cos t) = cos(n t)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return RatPoly((1,))
    if n == 1:
        return RatPoly.x()
    return RatPoly((0, 2)) * chebyshev_T(n - 1) - chebyshev_T(n - 2)


def totient(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def totient_search_bound(d: int) -> int:
    """Largest n with totient(n) <= 2d; every n beyond it has totient(n) > 2d.

    Uses totient(n) >= sqrt(n/2) to bound the scan.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    limit = 2 * (2 * d) ** 2
    return max(n for n in range(1, limit + 1) if totient(n) <= 2 * d)


def binomial(n: int, k: int) -> int:
    return comb(n, k)


def isqrt_ceil(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1

"""Linear recurrence sequences over Q and their generalised power-sum form."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import mpmath

from .algebraic import AlgebraicNumber, isolate_roots, rational_function
from .arith import RatPoly
from .intervals import CInterval, Interval

__all__ = [
    "Lrs",
    "evaluate",
    "terms",
    "minimize_order",
    "split_subsequences",
    "leading_coefficient",
    "PowerSumTerm",
    "PowerSumForm",
    "power_sum_decomposition",
]


def _fr(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point input is not accepted; use exact rationals")
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class Lrs:
    """u_n = a_1 u_{n-1} + ... + a_k u_{n-k} for n > k, with initial terms u_1..u_k.

    The zero sequence is represented as a = (1,), u = (0,).
    """

    coeffs: tuple[Fraction, ...]
    initials: tuple[Fraction, ...]

    def __init__(self, coeffs: Sequence, initials: Sequence):
        a = tuple(_fr(c) for c in coeffs)
        u = tuple(_fr(c) for c in initials)
        if not a:
            raise ValueError("an LRS needs at least one recurrence coefficient")
        if len(a) != len(u):
            raise ValueError(f"need {len(a)} initial terms, got {len(u)}")
        if a[-1] == 0:
            raise ValueError("the last recurrence coefficient a_k must be nonzero")
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "initials", u)

    @classmethod
    def zero(cls) -> "Lrs":
        return cls((1,), (0,))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @cached_property
    def is_zero(self) -> bool:
        return not any(self.initials)

    @cached_property
    def char_poly(self) -> RatPoly:
        """x^k - a_1 x^{k-1} - ... - a_k."""
        k = self.order
        return RatPoly([-self.coeffs[k - 1 - i] for i in range(k)] + [1])

    def __getitem__(self, n: int) -> Fraction:
        return evaluate(self, n)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "init": [str(c) for c in self.initials]}

    def __repr__(self):
        return f"Lrs(coeffs={[str(c) for c in self.coeffs]}, init={[str(c) for c in self.initials]})"


def terms(seq: Lrs, count: int, start: int = 1) -> Iterator[Fraction]:
    """u_start, ..., u_{start+count-1}."""
    k = seq.order
    window = list(seq.initials)
    a = seq.coeffs
    n = 1
    while n < start + count:
        if n <= k:
            v = window[n - 1]
        else:
            v = sum(a[j] * window[-1 - j] for j in range(k))
            window.append(v)
            window.pop(0)
        if n >= start:
            yield v
        n += 1


def evaluate(seq: Lrs, n: int) -> Fraction:
    if n < 1:
        raise ValueError("sequences are indexed from 1")
    return next(terms(seq, 1, n))


def _berlekamp_massey(s: Sequence[Fraction]) -> list[Fraction]:
    """Connection polynomial C (C[0] = 1) of the shortest recurrence for s over Q."""
    C, B = [Fraction(1)], [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum(C[i] * s[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        C = C + [Fraction(0)] * max(0, len(B) + m - len(C))
        for i, bi in enumerate(B):
            C[i + m] -= coef * bi
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    return (C + [Fraction(0)] * (L + 1))[: L + 1]


def minimize_order(seq: Lrs) -> Lrs:
    """Minimal-order recurrence reproducing the sequence (Berlekamp-Massey on 2k terms)."""
    k = seq.order
    s = list(terms(seq, 2 * k))
    if not any(s):
        return Lrs.zero()
    C = _berlekamp_massey(s)
    L = len(C) - 1
    a = [-c for c in C[1:]]
    if L == 0 or a[-1] == 0:
        # cannot happen for a_k != 0 input; the minimal polynomial divides the characteristic one
        raise AssertionError("Berlekamp-Massey returned a recurrence with a_L = 0")
    return Lrs(a, s[:L])


def split_subsequences(seq: Lrs, P: int) -> list[Lrs]:
    """Entry l (0 <= l < P) lists u_n over n = l (mod P), n >= 1, in increasing order.

    Each is an LRS of order at most k; its minimal recurrence is recovered from
    2k evaluated terms.
    """
    if P < 1:
        raise ValueError("P must be positive")
    k = seq.order
    total = list(terms(seq, P * (2 * k + 1)))
    out = []
    for ell in range(P):
        first = ell if ell >= 1 else P
        vals = [total[first - 1 + j * P] for j in range(2 * k)]
        out.append(_from_terms(vals, k))
    return out


def _from_terms(vals: list[Fraction], k: int) -> Lrs:
    if not any(vals):
        return Lrs.zero()
    C = _berlekamp_massey(vals)
    L = len(C) - 1
    a = [-c for c in C[1:]]
    if L == 0 or a[-1] == 0 or L > k:
        raise AssertionError("subsequence recurrence recovery failed")
    return Lrs(a, vals[:L])


def _q_poly(seq: Lrs) -> RatPoly:
    """Q~(x) = sum_{n=1..k} q_n x^{k-n}, q_n = u_n - sum_{j<n} a_j u_{n-j}."""
    k = seq.order
    a, u = seq.coeffs, seq.initials
    q = []
    for n in range(1, k + 1):
        q.append(u[n - 1] - sum(a[j - 1] * u[n - j - 1] for j in range(1, n)))
    return RatPoly([q[k - 1 - i] for i in range(k)])


def leading_coefficient(seq: Lrs, root: AlgebraicNumber, mult: int) -> AlgebraicNumber:
    """Coefficient of n^(mult-1) Lambda^n in the power-sum form of seq.

    Equals mult * Q~(L) / (L^mult * chi^(mult)(L)), read off the partial
    fraction expansion of the generating function.
    """
    num = _q_poly(seq) * mult
    den = RatPoly.monomial(mult) * seq.char_poly.derivative(mult)
    return rational_function(root, num, den)


@dataclass(frozen=True)
class PowerSumTerm:
    root: AlgebraicNumber
    multiplicity: int
    poly_coeffs: tuple[CInterval, ...]  # coefficients of f_i, lowest degree first


@dataclass(frozen=True)
class PowerSumForm:
    terms: tuple[PowerSumTerm, ...]
    precision: int
    residual_bound: Fraction

    def eval_mp(self, n: int):
        acc = mpmath.mpc(0)
        for t in self.terms:
            z = t.root.mp(self.precision)
            f = sum(_mpc(c) * mpmath.mpf(n) ** j for j, c in enumerate(t.poly_coeffs))
            acc += f * z**n
        return acc


def _mpc(c: CInterval):
    re = mpmath.mpf(c.re.mid.numerator) / c.re.mid.denominator
    im = mpmath.mpf(c.im.mid.numerator) / c.im.mid.denominator
    return mpmath.mpc(re, im)


def _to_cinterval(z, rad: Fraction, bits: int) -> CInterval:
    def fr(x):
        sign, man, exp, _ = mpmath.mpf(x)._mpf_
        v = Fraction(int(man)) * Fraction(2) ** int(exp) if man else Fraction(0)
        return -v if sign else v

    re, im = fr(z.real), fr(z.imag)
    return CInterval(Interval(re - rad, re + rad), Interval(im - rad, im + rad)).rounded(bits)


def power_sum_decomposition(seq: Lrs, bits: int = 128) -> PowerSumForm:
    """Roots with multiplicities and f_i coefficients from the confluent Vandermonde system.

    The system is solved at `bits` precision; the enclosure radius is set from
    an a-posteriori residual check on n = 1..2k against exact terms.
    """
    roots = isolate_roots(seq.char_poly)
    k = seq.order
    exact = list(terms(seq, 2 * k))
    with mpmath.workprec(bits + 32):
        zs = [(r.mp(bits + 16), m) for r, m in roots]
        cols = [(z, j) for z, m in zs for j in range(m)]
        A = mpmath.matrix(k, k)
        for n in range(1, k + 1):
            for c, (z, j) in enumerate(cols):
                A[n - 1, c] = mpmath.mpf(n) ** j * z**n
        rhs = mpmath.matrix([mpmath.mpf(v.numerator) / v.denominator for v in exact[:k]])
        sol = mpmath.lu_solve(A, rhs)
        resid = mpmath.mpf(0)
        for n in range(1, 2 * k + 1):
            val = sum(sol[c] * mpmath.mpf(n) ** j * z**n for c, (z, j) in enumerate(cols))
            ex = mpmath.mpf(exact[n - 1].numerator) / exact[n - 1].denominator
            resid = max(resid, abs(val - ex))
        scale = max([abs(x) for x in sol] + [mpmath.mpf(1)])
        rad_mp = max(resid, mpmath.ldexp(scale, -bits)) * 16
        rad = Fraction(int(mpmath.ceil(mpmath.ldexp(rad_mp, bits + 8))), 1 << (bits + 8))
        out = []
        c = 0
        for (r, m), (z, _) in zip(roots, zs):
            coeffs = tuple(_to_cinterval(sol[c + j], rad, bits + 8) for j in range(m))
            c += m
            out.append(PowerSumTerm(r, m, coeffs))
        bound = Fraction(int(mpmath.ceil(mpmath.ldexp(resid, bits + 8))) + 1, 1 << (bits + 8))
    return PowerSumForm(tuple(out), bits, bound)

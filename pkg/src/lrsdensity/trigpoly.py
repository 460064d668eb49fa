"""Real trigonometric polynomials on the torus and certified sign tests.

F(phi) = c_0 + sum_i c_i e(E_i . phi) with e(t) = exp(2 pi i t), integer
exponent rows E_i, and coefficients closed under conjugation so F is real.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebraic import (
    AlgebraicNumber,
    DEFAULT_BUDGET_BITS,
    derived_number,
    identify_root,
    sign_of_real,
)
from .arith import RatPoly, cyclotomic
from .errors import DegreeCapExceeded, PrecisionError, Undecided
from .intervals import CInterval, Interval, cos2pi, sin2pi

__all__ = ["TrigPoly", "Membership", "membership", "kappa_hat", "kappa_hat_from_exponents"]


class Membership(enum.Enum):
    IN = "in"
    OUT = "out"
    BOUNDARY = "boundary"


@dataclass(frozen=True, eq=False)
class TrigPoly:
    eta: int
    const: AlgebraicNumber
    coeffs: tuple[AlgebraicNumber, ...]
    exponents: tuple[tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if len(self.coeffs) != len(self.exponents):
            raise ValueError("one exponent row per coefficient")
        for row in self.exponents:
            if len(row) != self.eta:
                raise ValueError("exponent rows must have length eta")

    @classmethod
    def from_rationals(cls, const, terms: Sequence[tuple]) -> "TrigPoly":
        """Build from exact data: terms are ((re, im), exponent_row) pairs."""
        eta = len(terms[0][1]) if terms else 0
        c = AlgebraicNumber.from_rational(Fraction(const))
        cs = tuple(AlgebraicNumber.from_gaussian(Fraction(re), Fraction(im)) for (re, im), _ in terms)
        es = tuple(tuple(int(x) for x in e) for _, e in terms)
        return cls(eta, c, cs, es)

    @classmethod
    def cosine(cls, c, r) -> "TrigPoly":
        """c + r cos(2 pi phi)."""
        r = Fraction(r)
        return cls.from_rationals(c, [((r / 2, 0), (1,)), ((r / 2, 0), (-1,))])

    # numeric views -----------------------------------------------------
    def _float_data(self):
        with self._lock:
            d = self._cache.get("float")
            if d is None:
                c = np.array([a.approx(60) for a in self.coeffs], dtype=complex)
                E = np.array(self.exponents, dtype=np.int64).reshape(len(self.coeffs), self.eta)
                c0 = float(self.const.approx(60).real)
                d = (c0, c, E)
                self._cache["float"] = d
            return d

    @property
    def l1_norm(self) -> float:
        c0, c, _ = self._float_data()
        return abs(c0) + float(np.abs(c).sum())

    def eval_float(self, phi: np.ndarray) -> np.ndarray:
        """F at points phi (shape (N, eta)), double precision."""
        c0, c, E = self._float_data()
        phi = np.atleast_2d(np.asarray(phi, dtype=float))
        if not len(c):
            return np.full(phi.shape[0], c0)
        t = phi @ E.T.astype(float)
        return c0 + (np.exp(2j * np.pi * t) @ c).real

    def eval_grid_phases(self, ks: np.ndarray, M: int) -> np.ndarray:
        """F at the grid points k/M (ks integer array of shape (N, eta)).

        Phases E.k are reduced mod M in exact integer arithmetic before the
        cosine, so the only rounding is in the final evaluation.
        """
        c0, c, E = self._float_data()
        if not len(c):
            return np.full(ks.shape[0], c0)
        ph = np.mod(ks @ E.T, M)
        t = ph.astype(float) / M
        return c0 + (np.cos(2 * np.pi * t) * c.real - np.sin(2 * np.pi * t) * c.imag).sum(axis=1)

    def coeff_boxes(self, bits: int) -> tuple[Interval, list[CInterval]]:
        key = ("box", bits)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        c0 = self.const.refine(bits).re
        cs = [a.refine(bits) for a in self.coeffs]
        with self._lock:
            self._cache[key] = (c0, cs)
        return c0, cs

    def enclose(self, point: Sequence[Fraction], bits: int) -> Interval:
        """Certified enclosure of F at a rational point."""
        c0, cs = self.coeff_boxes(bits)
        acc = c0
        for c, row in zip(cs, self.exponents):
            t = sum(Fraction(e) * p for e, p in zip(row, point)) % 1
            tv = Interval.point(t)
            co, si = cos2pi(tv, bits), sin2pi(tv, bits)
            acc = acc + (c.re * co - c.im * si)
        return acc.rounded(bits)

    def is_gaussian_exact(self) -> bool:
        if not self.const.is_rational:
            return False
        return all(a.exact is not None for a in self.coeffs)

    def degree(self, axis: int) -> int:
        return max((abs(row[axis]) for row in self.exponents), default=0)


def _gauss(a: AlgebraicNumber) -> tuple[Fraction, Fraction]:
    e = a.exact
    return (e, Fraction(0)) if isinstance(e, Fraction) else e


def _exact_cyclotomic_zero(F: TrigPoly, point: Sequence[Fraction]) -> bool:
    """F(point) == 0 for Gaussian-rational coefficients, decided in Q(zeta_L)."""
    ts = [sum(Fraction(e) * p for e, p in zip(row, point)) % 1 for row in F.exponents]
    L = 4
    for t in ts:
        L = math.lcm(L, t.denominator)
    q = L // 4  # zeta^q = i
    coeffs = [Fraction(0)] * L
    coeffs[0] += F.const.exact
    for a, t in zip(F.coeffs, ts):
        re, im = _gauss(a)
        n = int(t * L)
        coeffs[n % L] += re
        coeffs[(n + q) % L] += im
    return (RatPoly(coeffs) % cyclotomic(L)).is_zero()


def _exact_algebraic_value(F: TrigPoly, point: Sequence[Fraction], budget: int) -> AlgebraicNumber:
    """F(point) as an exact real algebraic number via composed polynomials."""
    acc = F.const
    for a, row in zip(F.coeffs, F.exponents):
        t = sum(Fraction(e) * p for e, p in zip(row, point)) % 1
        z = _root_of_unity_number(t)
        acc = derived_number(acc, derived_number(a, z, "product", budget), "sum", budget)
    return acc


def _root_of_unity_number(t: Fraction) -> AlgebraicNumber:
    n = t.denominator
    if n == 1:
        return AlgebraicNumber.from_rational(1)
    if n == 2:
        return AlgebraicNumber.from_rational(-1)
    if n == 4:
        return AlgebraicNumber.from_gaussian(0, 1 if t == Fraction(1, 4) else -1)

    def enclose(bits):
        tv = Interval.point(t)
        return CInterval(cos2pi(tv, bits + 4), sin2pi(tv, bits + 4))

    return identify_root(cyclotomic(n), enclose, False)


def membership(F: TrigPoly, point: Sequence, budget_bits: int = DEFAULT_BUDGET_BITS,
               *, use_float: bool = True) -> Membership:
    """Exact classification of F(point) as >0 (IN), <0 (OUT) or =0 (BOUNDARY)."""
    point = [Fraction(p) for p in point]
    if len(point) != F.eta:
        raise ValueError(f"point must have {F.eta} coordinates")
    if use_float:
        v = float(F.eval_float(np.array([[float(p) for p in point]]))[0])
        tol = 1e-9 * max(F.l1_norm, 1e-300)
        if v > tol:
            return Membership.IN
        if v < -tol:
            return Membership.OUT
    return _certified_membership(F, point, budget_bits)


def _certified_membership(F: TrigPoly, point: list[Fraction], budget_bits: int) -> Membership:
    exact = F.is_gaussian_exact()
    bits = 64
    while bits <= budget_bits:
        s = F.enclose(point, bits).sign()
        if s is not None:
            return Membership.IN if s > 0 else Membership.OUT
        if exact and _exact_cyclotomic_zero(F, point):
            return Membership.BOUNDARY
        if bits >= 256 and not exact:
            try:
                v = _exact_algebraic_value(F, point, budget_bits)
                s = sign_of_real(v)
                return {1: Membership.IN, -1: Membership.OUT, 0: Membership.BOUNDARY}[s]
            except (DegreeCapExceeded, PrecisionError):
                pass
        bits *= 2
    raise Undecided(f"membership at {point} undecided within {budget_bits} bits")


def kappa_hat(F: TrigPoly) -> int:
    """Bound on positivity components of F along any axis-parallel line.

    Restricted to a line in direction k, F is a real trigonometric polynomial
    of degree D_k = max_i |E_ik|, positive on at most D_k arcs.
    """
    return max([1] + [F.degree(k) for k in range(F.eta)])


def kappa_hat_from_exponents(rows: Sequence[Sequence[Fraction]]) -> int:
    """The same bound for rational exponent rows: with b the lcm of the
    denominators along an axis, substitute phi = b psi, giving degree
    max(b, max |b x|) there."""
    if not rows:
        return 1
    eta = len(rows[0])
    best = 1
    for k in range(eta):
        col = [Fraction(r[k]) for r in rows]
        den = 1
        for x in col:
            den = math.lcm(den, x.denominator)
        best = max(best, den, max(abs(x * den) for x in col))
    return int(best)

"""Density of the positivity set: grid counting, Monte Carlo, decisions.

Per normalized subsequence the density is the Haar measure of
{phi in T^eta : F(phi) > 0}; the sequence density averages these over the
P residue classes (identically zero classes contribute 0).
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebraic import (
    DEFAULT_BUDGET_BITS,
    AlgebraicNumber,
    derived_number,
    is_root_of_unity,
    negate,
    power,
    real_sqrt,
    sign_of_real,
)
from .arith import chebyshev_T, poly_gcd, totient_search_bound
from .errors import PrecisionError, Undecided
from .intervals import Interval, arccos_over_pi, cos2pi, sin2pi
from .lrs import Lrs, minimize_order
from .normalize import (
    DEFAULT_RELATION_BOUND,
    IdenticallyZero,
    NormalizedForm,
    SubsequenceSystem,
    _cmp_real,
    preprocess,
)
from .trigpoly import Membership, TrigPoly, kappa_hat, membership

__all__ = [
    "build_F",
    "grid_density",
    "monte_carlo_density",
    "hoeffding_table",
    "DensityReport",
    "approximate_density",
    "monte_carlo_sequence_density",
    "ZeroVerdict",
    "OneVerdict",
    "decide_density_zero",
    "decide_density_one",
    "finite_positivity_diagonalisable",
    "arccos_rational_multiple",
    "RationalDecision",
    "decide_rational_one_pair",
    "negated",
]

DEFAULT_EPS_LEVELS = (Fraction(1, 10), Fraction(1, 20), Fraction(1, 50), Fraction(1, 100), Fraction(1, 200))
MC_DENOMINATOR = 1 << 30
MAX_GRID_POINTS = 50_000_000


def build_F(form: NormalizedForm) -> TrigPoly:
    """The torus function of a normalized subsequence (realness checked at a sample point)."""
    F = form.F
    if F.eta:
        pt = [Fraction(k + 1, 7 + k) for k in range(F.eta)]
        _, cs = F.coeff_boxes(64)
        im = Interval.point(0)
        for c, row in zip(cs, F.exponents):
            t = Interval.point(sum(Fraction(e) * p for e, p in zip(row, pt)) % 1)
            im = im + c.re * sin2pi(t, 64) + c.im * cos2pi(t, 64)
        if not im.contains(0):
            raise PrecisionError("torus function is not real; coefficients need more precision")
    return F


# --- grid ----------------------------------------------------------------


def _grid_chunks(M: int, eta: int, chunk: int = 1 << 20):
    total = M**eta
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = []
        for _ in range(eta):
            cols.append(idx % M)
            idx = idx // M
        yield np.stack(cols[::-1], axis=1)


def _count(F: TrigPoly, chunks, M: int, budget: int, workers: int) -> int:
    if workers <= 1:
        return sum(_classify(F, ks, M, budget) for ks in chunks)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return sum(ex.map(lambda ks: _classify(F, ks, M, budget), chunks))


def _classify(F: TrigPoly, ks: np.ndarray, M: int, budget: int) -> int:
    vals = F.eval_grid_phases(ks, M)
    tol = 1e-9 * max(F.l1_norm, 1e-300)
    count = int((vals > tol).sum())
    for row in ks[np.abs(vals) <= tol]:
        pt = [Fraction(int(k), M) for k in row]
        if membership(F, pt, budget, use_float=False) is Membership.IN:
            count += 1
    return count


def grid_density(F: TrigPoly, M: int, budget: int = DEFAULT_BUDGET_BITS, *,
                 closed: bool = False, workers: int = 1) -> tuple[int, Fraction]:
    """Count of grid points k/M where F > 0, with the error bound for count / M^eta.

    The default grid is half-open (k in [0, M)^eta), one point per torus
    cell, with bound eta*q/M. ``closed=True`` counts 0 <= k <= M as well,
    which visits each face of the torus twice; its bound gains eta/M.
    """
    if M < 1:
        raise ValueError("M must be positive")
    eta = F.eta
    if eta == 0:
        s = sign_of_real(F.const)
        return (1 if s > 0 else 0), Fraction(0)
    side = M + 1 if closed else M
    if side**eta > MAX_GRID_POINTS:
        raise Undecided(f"grid of {side}^{eta} points exceeds the {MAX_GRID_POINTS} point limit")
    count = _count(F, _grid_chunks(side, eta), M, budget, workers)
    q = kappa_hat(F) + (1 if closed else 0)
    return count, Fraction(eta * q, M)


# --- Monte Carlo -----------------------------------------------------------


def hoeffding_table(samples: int, levels: Sequence[Fraction] = DEFAULT_EPS_LEVELS, forms: int = 1) -> list[dict]:
    """Failure probability bounds 2 exp(-2 S eps^2), union-bounded over forms."""
    out = []
    for eps in levels:
        p = min(1.0, forms * 2 * math.exp(-2 * samples * float(eps) ** 2))
        out.append({"epsilon": Fraction(eps), "failure_probability": p})
    return out


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed % (1 << 64), stream % (1 << 64)]))


def monte_carlo_density(F: TrigPoly, samples: int, seed: int, *, stream: int = 0,
                        budget: int = DEFAULT_BUDGET_BITS, workers: int = 1,
                        levels: Sequence[Fraction] = DEFAULT_EPS_LEVELS) -> tuple[Fraction, list[dict]]:
    """Fraction of seeded uniform grid points (denominator 2^30) where F > 0."""
    if samples < 1:
        raise ValueError("samples must be positive")
    if F.eta == 0:
        s = sign_of_real(F.const)
        return Fraction(1 if s > 0 else 0), hoeffding_table(samples, levels, 0)
    ks = _rng(seed, stream).integers(0, MC_DENOMINATOR, size=(samples, F.eta), dtype=np.int64)
    chunks = [ks[i:i + 4096] for i in range(0, samples, 4096)]
    count = _count(F, chunks, MC_DENOMINATOR, budget, workers)
    return Fraction(count, samples), hoeffding_table(samples, levels)


# --- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class SubsequenceContribution:
    ell: int
    lo: Fraction
    hi: Fraction
    method: str
    eta: int = 0
    kappa: int = 0
    M: int = 0
    count: int = 0

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        d = {"ell": self.ell, "lo": self.lo, "hi": self.hi, "method": self.method, "eta": self.eta}
        if self.method in ("grid", "monte-carlo"):
            d.update({"kappa_hat": self.kappa, "M": self.M, "count": self.count})
        return d


@dataclass(frozen=True)
class DensityReport:
    lo: Fraction
    hi: Fraction
    epsilon: Fraction | None
    method: str  # exact-rational | grid | monte-carlo | degenerate-constant
    P: int
    per_subsequence: tuple[SubsequenceContribution, ...]
    certificates: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self):
        return self.lo if self.exact else (self.lo, self.hi)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> dict:
        return {
            "value": self.lo if self.exact else {"lo": self.lo, "hi": self.hi},
            "midpoint": self.midpoint,
            "epsilon": self.epsilon,
            "method": self.method,
            "P": self.P,
            "per_subsequence": [c.to_json() for c in self.per_subsequence],
            "certificates": self.certificates,
        }


def _constant_contribution(ell: int, F: TrigPoly) -> SubsequenceContribution:
    v = Fraction(1 if sign_of_real(F.const) > 0 else 0)
    return SubsequenceContribution(ell, v, v, "degenerate-constant")


def _combine(sysm: SubsequenceSystem, parts: list[SubsequenceContribution], eps, budget, extra=None) -> DensityReport:
    P = sysm.P
    lo = sum((c.lo for c in parts), Fraction(0)) / P
    hi = sum((c.hi for c in parts), Fraction(0)) / P
    methods = {c.method for c in parts} - {"zero", "degenerate-constant"}
    if not methods:
        method = "degenerate-constant"
    elif methods == {"exact-rational"}:
        method = "exact-rational"
    else:
        method = "monte-carlo" if "monte-carlo" in methods else "grid"
    cert = dict(sysm.certificate)
    cert.update({"budget_bits": budget, "P1": sysm.P1, "P2": sysm.P2,
                 "saturation_factor": sysm.saturation_factor})
    if extra:
        cert.update(extra)
    return DensityReport(lo, hi, eps, method, P, tuple(parts), cert)


def approximate_density(seq: Lrs, epsilon, *, bound: int = DEFAULT_RELATION_BOUND,
                        budget: int = DEFAULT_BUDGET_BITS, workers: int = 1) -> DensityReport:
    """Certified enclosure of the density with width at most 2 epsilon."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    sysm = preprocess(seq, bound, budget)
    parts = []
    for f in sysm.forms:
        if isinstance(f, IdenticallyZero):
            parts.append(SubsequenceContribution(f.ell, Fraction(0), Fraction(0), "zero"))
            continue
        F = build_F(f)
        if F.eta == 0:
            parts.append(_constant_contribution(f.ell, F))
            continue
        q = kappa_hat(F)
        # each class within eps keeps the average within eps
        M = math.ceil(F.eta * q / eps)
        count, b = grid_density(F, M, budget, workers=workers)
        est = Fraction(count, M**F.eta)
        parts.append(SubsequenceContribution(f.ell, max(Fraction(0), est - b), min(Fraction(1), est + b),
                                             "grid", F.eta, q, M, count))
    return _combine(sysm, parts, eps, budget)


def monte_carlo_sequence_density(seq: Lrs, samples: int, seed: int, *,
                                 bound: int = DEFAULT_RELATION_BOUND,
                                 budget: int = DEFAULT_BUDGET_BITS, workers: int = 1) -> DensityReport:
    sysm = preprocess(seq, bound, budget)
    parts = []
    forms = 0
    for f in sysm.forms:
        if isinstance(f, IdenticallyZero):
            parts.append(SubsequenceContribution(f.ell, Fraction(0), Fraction(0), "zero"))
            continue
        F = build_F(f)
        if F.eta == 0:
            parts.append(_constant_contribution(f.ell, F))
            continue
        forms += 1
        est, _ = monte_carlo_density(F, samples, seed, stream=f.ell, budget=budget, workers=workers)
        parts.append(SubsequenceContribution(f.ell, est, est, "monte-carlo", F.eta, kappa_hat(F),
                                             MC_DENOMINATOR, int(est * samples)))
    table = hoeffding_table(samples, forms=forms) if forms else []
    return _combine(sysm, parts, None, budget, {"samples": samples, "seed": seed, "hoeffding": table})


# --- decisions -------------------------------------------------------------


def _abs2(a: AlgebraicNumber) -> AlgebraicNumber:
    return derived_number(a, None, "modulus_squared")


def _one_pair(F: TrigPoly) -> bool:
    return F.eta == 1 and len(F.coeffs) == 2 and sorted(r[0] for r in F.exponents) == [-1, 1]


def _pair_compare(F: TrigPoly) -> int:
    """Exact sign of c0^2 - r^2 for F = c0 + r cos(2 pi (phi + tau)), r = 2|c1|."""
    c0 = F.const
    r2 = derived_number(_abs2(F.coeffs[0]), AlgebraicNumber.from_rational(4), "product")
    return _cmp_real(power(c0, 2), r2)


@dataclass(frozen=True)
class SupResult:
    positive: bool | None
    witness: tuple[Fraction, ...] | None = None
    gap: Fraction | None = None
    method: str = ""


def _lipschitz(F: TrigPoly) -> list[Fraction]:
    two_pi = Fraction(710, 113)
    _, cs = F.coeff_boxes(32)
    L = [Fraction(0)] * F.eta
    for c, row in zip(cs, F.exponents):
        mag = c.re.mag + c.im.mag
        for k, e in enumerate(row):
            L[k] += two_pi * mag * abs(e)
    return L


def sup_positive(F: TrigPoly, budget: int = DEFAULT_BUDGET_BITS, max_boxes: int = 20000) -> SupResult:
    """Decide sup F > 0 over the torus (F continuous, so this is density > 0)."""
    if F.eta == 0:
        return SupResult(sign_of_real(F.const) > 0, method="constant")
    if _one_pair(F):
        s0 = sign_of_real(F.const) if not F.const.is_rational else (F.const.exact > 0) - (F.const.exact < 0)
        if s0 >= 0:
            return SupResult(True, method="closed-form")
        return SupResult(_pair_compare(F) < 0, method="closed-form")
    # float scan for a witness, certified exactly
    K = max(2, int(round((1 << 16) ** (1 / F.eta))))
    K = min(K, 256)
    best, best_pt = -math.inf, None
    for ks in _grid_chunks(K, F.eta):
        vals = F.eval_grid_phases(ks, K)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_pt = float(vals[i]), ks[i]
    if best > 0:
        pt = tuple(Fraction(int(k), K) for k in best_pt)
        if membership(F, pt, budget) is Membership.IN:
            return SupResult(True, pt, method="witness")
    # branch and bound: F <= F(centre) + sum_k L_k w_k / 2 on a box
    L = _lipschitz(F)
    heap: list = []
    counter = 0

    def push(lo, w):
        nonlocal counter
        centre = tuple(a + x / 2 for a, x in zip(lo, w))
        enc = F.enclose(centre, 64)
        if enc.lo > 0:
            return centre
        ub = enc.hi + sum(Lk * x / 2 for Lk, x in zip(L, w))
        if ub > 0:
            heapq.heappush(heap, (-ub, counter, lo, w))
            counter += 1
        return None

    init = 4
    w0 = tuple(Fraction(1, init) for _ in range(F.eta))
    for idx in np.ndindex(*([init] * F.eta)):
        hit = push(tuple(Fraction(i, init) for i in idx), w0)
        if hit is not None:
            return SupResult(True, hit, method="branch-and-bound")
    boxes = 0
    while heap:
        if boxes >= max_boxes:
            return SupResult(None, gap=-heap[0][0], method="branch-and-bound")
        _, _, lo, w = heapq.heappop(heap)
        boxes += 1
        k = max(range(F.eta), key=lambda j: L[j] * w[j])
        half = list(w)
        half[k] = w[k] / 2
        half = tuple(half)
        for off in (0, 1):
            lo2 = list(lo)
            lo2[k] = lo[k] + off * half[k]
            hit = push(tuple(lo2), half)
            if hit is not None:
                return SupResult(True, hit, method="branch-and-bound")
    return SupResult(False, method="branch-and-bound")


@dataclass(frozen=True)
class ZeroVerdict:
    decision: str  # zero | positive | unknown
    witness: dict | None
    gap: Fraction | None
    per_subsequence: tuple

    def to_json(self) -> dict:
        return {"decision": self.decision, "witness": self.witness, "gap": self.gap,
                "per_subsequence": list(self.per_subsequence)}


def decide_density_zero(seq: Lrs, *, bound: int = DEFAULT_RELATION_BOUND,
                        budget: int = DEFAULT_BUDGET_BITS, max_boxes: int = 20000) -> ZeroVerdict:
    sysm = preprocess(seq, bound, budget)
    rows = []
    unknown_gap = None
    witness = None
    for f in sysm.forms:
        if isinstance(f, IdenticallyZero):
            rows.append({"ell": f.ell, "result": "zero", "method": "identically-zero"})
            continue
        r = sup_positive(build_F(f), budget, max_boxes)
        res = {True: "positive", False: "zero", None: "unknown"}[r.positive]
        rows.append({"ell": f.ell, "result": res, "method": r.method})
        if r.positive and witness is None:
            witness = {"ell": f.ell, "P": sysm.P,
                       "point": list(r.witness) if r.witness is not None else None}
        if r.positive is None:
            unknown_gap = r.gap if unknown_gap is None else max(unknown_gap, r.gap)
    if witness is not None:
        return ZeroVerdict("positive", witness, None, tuple(rows))
    if unknown_gap is not None:
        return ZeroVerdict("unknown", None, unknown_gap, tuple(rows))
    return ZeroVerdict("zero", None, None, tuple(rows))


def negated(seq: Lrs) -> Lrs:
    return Lrs(seq.coeffs, [-u for u in seq.initials])


@dataclass(frozen=True)
class OneVerdict:
    decision: str  # yes | no | unknown
    reason: str
    complement: ZeroVerdict | None = None

    def to_json(self) -> dict:
        d = {"decision": self.decision, "reason": self.reason}
        if self.complement is not None:
            d["complement"] = self.complement.to_json()
        return d


def decide_density_one(seq: Lrs, *, bound: int = DEFAULT_RELATION_BOUND,
                       budget: int = DEFAULT_BUDGET_BITS, max_boxes: int = 20000) -> OneVerdict:
    """Density 1 iff {u_n <= 0} has density 0.

    Zeros matter here: an identically zero residue class has density 1/P of
    zeros, while nonzero classes vanish only finitely often.
    """
    sysm = preprocess(seq, bound, budget)
    if any(isinstance(f, IdenticallyZero) for f in sysm.forms):
        return OneVerdict("no", "an identically zero residue class has positive density")
    z = decide_density_zero(negated(seq), bound=bound, budget=budget, max_boxes=max_boxes)
    mapping = {"zero": "yes", "positive": "no", "unknown": "unknown"}
    return OneVerdict(mapping[z.decision], "density of the negated sequence is " + z.decision, z)


def finite_positivity_diagonalisable(seq: Lrs, **kw) -> str:
    """finite | infinite | not-diagonalisable | unknown."""
    s = minimize_order(seq)
    if s.is_zero:
        return "finite"
    p = s.char_poly
    if poly_gcd(p, p.derivative()).degree > 0:
        return "not-diagonalisable"
    z = decide_density_zero(s, **kw)
    return {"zero": "finite", "positive": "infinite", "unknown": "unknown"}[z.decision]


# --- rationality -----------------------------------------------------------


def _in_unit_interval(alpha: AlgebraicNumber) -> bool:
    one = AlgebraicNumber.from_rational(1)
    return _cmp_real(alpha, one) <= 0 and _cmp_real(alpha, negate(one)) >= 0


def arccos_rational_multiple(alpha: AlgebraicNumber) -> Fraction | None:
    """k/n with arccos(alpha) = k pi / n, or None when arccos(alpha)/pi is irrational.

    arccos(alpha) = k pi/n iff T_n(alpha) = (-1)^k; a rational multiple has
    alpha = cos(2 pi j/N) of degree phi(N)/2 with n in {N/2, N}, so scanning
    n <= totient_search_bound(deg) is exhaustive.
    """
    if not alpha.is_real:
        raise ValueError("arccos of a non-real number")
    if not _in_unit_interval(alpha):
        raise ValueError("arccos argument outside [-1, 1]")
    d = alpha.degree_bound
    for n in range(1, totient_search_bound(d) + 1):
        T = chebyshev_T(n)
        for s in (1, -1):
            g = poly_gcd(alpha.poly, T - s)
            if g.degree >= 1 and alpha.is_root_of(g):
                t = arccos_over_pi(alpha.refine(64).re, 64)
                k = round(t.mid * n)
                if (-1) ** k != s:
                    raise AssertionError("Chebyshev parity mismatch")
                return Fraction(k, n)
    return None


@dataclass(frozen=True)
class RationalDecision:
    decision: str  # rational | irrational | not-applicable
    value: Fraction | None
    approx: float | None
    per_subsequence: tuple

    def to_json(self) -> dict:
        return {"decision": self.decision, "value": self.value, "approx": self.approx,
                "per_subsequence": list(self.per_subsequence)}


def _unit_point(x: AlgebraicNumber) -> AlgebraicNumber:
    """x + i sqrt(1 - x^2)."""
    one = AlgebraicNumber.from_rational(1)
    y = real_sqrt(derived_number(one, negate(power(x, 2)), "sum"))
    iy = derived_number(y, AlgebraicNumber.from_gaussian(0, 1), "product")
    return derived_number(x, iy, "sum")


def decide_rational_one_pair(seq: Lrs, *, bound: int = DEFAULT_RELATION_BOUND,
                             budget: int = DEFAULT_BUDGET_BITS) -> RationalDecision:
    """Exact rationality of the density when each class has at most one dominant pair.

    A class with F = c + r cos(2 pi (phi + tau)), |c| < r, contributes
    arccos(-c/r)/pi. The sum of such terms is rational iff the product of
    the points -c/r + i sqrt(1 - c^2/r^2) is a root of unity.
    """
    sysm = preprocess(seq, bound, budget)
    exact = Fraction(0)
    irr: list[AlgebraicNumber] = []
    rows = []
    for f in sysm.forms:
        if isinstance(f, IdenticallyZero):
            rows.append({"ell": f.ell, "contribution": Fraction(0)})
            continue
        F = build_F(f)
        if F.eta == 0:
            v = Fraction(1 if sign_of_real(F.const) > 0 else 0)
            exact += v
            rows.append({"ell": f.ell, "contribution": v})
            continue
        if not _one_pair(F):
            return RationalDecision("not-applicable", None, None, tuple(rows))
        c0 = F.const
        if _pair_compare(F) >= 0:
            v = Fraction(1 if sign_of_real(c0) > 0 else 0)
            exact += v
            rows.append({"ell": f.ell, "contribution": v})
            continue
        r = derived_number(real_sqrt(_abs2(F.coeffs[0])), AlgebraicNumber.from_rational(2), "product")
        x = negate(derived_number(c0, r, "ratio")) if not (c0.is_rational and c0.exact == 0) \
            else AlgebraicNumber.from_rational(0)
        q = arccos_rational_multiple(x)
        if q is not None:
            exact += q
            rows.append({"ell": f.ell, "contribution": q})
        else:
            irr.append(x)
            rows.append({"ell": f.ell, "contribution": None,
                         "arccos_argument": float(x.approx(60).real)})
    num = float(exact) + sum(float(arccos_over_pi(x.refine(64).re, 64).mid) for x in irr)
    approx = num / sysm.P
    if not irr:
        return RationalDecision("rational", exact / sysm.P, float(exact / sysm.P), tuple(rows))
    w = _unit_point(irr[0])
    for x in irr[1:]:
        w = derived_number(w, _unit_point(x), "product")
    n = is_root_of_unity(w)
    if n is None:
        return RationalDecision("irrational", None, approx, tuple(rows))
    # sum of arccos(x)/pi lies in (2/n) Z
    S = sum(arccos_over_pi(x.refine(128).re, 128).mid for x in irr)
    S_exact = Fraction(round(S * n / 2) * 2, n)
    total = (exact + S_exact) / sysm.P
    return RationalDecision("rational", total, float(total), tuple(rows))

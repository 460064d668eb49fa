"""Degeneracy periods, multiplicative relations and the normalized form.

After splitting into subsequences of a suitable period P, each nonzero
subsequence v has minimal recurrence with dominant roots Lambda_j of common
modulus rho; dividing by n^d rho^n leaves sum_j c_j alpha_j^n + R(n) with
alpha_j = Lambda_j / rho on the unit circle and R(n) -> 0. The closure of
(alpha_j^n)_n is the subtorus cut out by the relation lattice L, which is
parametrized as alpha_j = e(E_j . phi) once L is saturated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath
import numpy as np

from .algebraic import (
    DEFAULT_BUDGET_BITS,
    AlgebraicNumber,
    conjugate,
    derived_number,
    equals_exact,
    is_root_of_unity,
    isolate_roots,
    power,
    real_sqrt,
    sign_of_real,
    unit_circle_angle,
)
from .arith import RatPoly
from .errors import DegreeCapExceeded, PrecisionError, Undecided
from .intervals import CInterval, Interval
from .lattice import (
    angle_relations,
    hermite_basis,
    in_lattice,
    integer_kernel,
    lll_reduce,
    saturation_exponent,
)
from .lrs import Lrs, leading_coefficient, minimize_order, power_sum_decomposition, split_subsequences
from .trigpoly import TrigPoly

__all__ = [
    "DEFAULT_RELATION_BOUND",
    "compare_moduli",
    "dominant_roots",
    "compute_P1",
    "RelationLattice",
    "relation_lattice",
    "relation_basis",
    "verify_relation",
    "compute_P2",
    "IdenticallyZero",
    "NormalizedForm",
    "normalize",
    "SubsequenceSystem",
    "preprocess",
]

DEFAULT_RELATION_BOUND = 20
_BRUTE_FORCE_MAX_REPS = 4


# --- moduli ----------------------------------------------------------------


def _abs2(lam: AlgebraicNumber) -> AlgebraicNumber:
    return derived_number(lam, None, "modulus_squared")


def _cmp_real(a: AlgebraicNumber, b: AlgebraicNumber, budget: int = 1 << 14) -> int:
    if equals_exact(a, b, budget):
        return 0
    bits = 32
    while bits <= budget:
        x, y = a.refine(bits).re, b.refine(bits).re
        if x.hi < y.lo:
            return -1
        if y.hi < x.lo:
            return 1
        bits *= 2
    raise PrecisionError("modulus comparison exceeded the budget")


def compare_moduli(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact sign of |a| - |b|."""
    x, y = a.refine(48).abs2(), b.refine(48).abs2()
    if x.hi < y.lo:
        return -1
    if y.hi < x.lo:
        return 1
    return _cmp_real(_abs2(a), _abs2(b))


def dominant_roots(roots: Sequence[tuple[AlgebraicNumber, int]]) -> list[int]:
    """Indices of the roots of maximal modulus (exact ties)."""
    best = [0]
    for i in range(1, len(roots)):
        c = compare_moduli(roots[i][0], roots[best[0]][0])
        if c > 0:
            best = [i]
        elif c == 0:
            best.append(i)
    return best


# --- P1 ----------------------------------------------------------------------


def compute_P1(seq: Lrs) -> int:
    """lcm of the orders of root ratios that are roots of unity.

    Also includes 2 when a dominant root is negative real, so that the
    normalized dominant roots of every subsequence avoid -1 already at this
    stage (the alternating sequence gets P1 = 2).
    """
    s = minimize_order(seq)
    if s.is_zero:
        return 1
    roots = isolate_roots(s.char_poly)
    P = 1
    for i, j in itertools.combinations(range(len(roots)), 2):
        a, b = roots[i][0], roots[j][0]
        if compare_moduli(a, b) != 0:
            continue
        n = is_root_of_unity(derived_number(a, b, "ratio"))
        if n is not None:
            P = math.lcm(P, n)
    for i in dominant_roots(roots):
        lam = roots[i][0]
        if lam.is_real and sign_of_real(lam) < 0:
            P = math.lcm(P, 2)
    return P


# --- relations ---------------------------------------------------------------


def _theta(lam: AlgebraicNumber, bits: int) -> Interval:
    return unit_circle_angle(lam, bits)


def _conj_index(lams: Sequence[AlgebraicNumber]) -> list[int | None]:
    out: list[int | None] = [None] * len(lams)
    for j, lam in enumerate(lams):
        if lam.is_real or out[j] is not None:
            continue
        c = conjugate(lam)
        z = c.approx(60)
        order = sorted(range(len(lams)), key=lambda i: abs(lams[i].approx(60) - z))
        for i in order[:3]:
            if i != j and not lams[i].is_real and equals_exact(c, lams[i]):
                out[j], out[i] = i, j
                break
    return out


def _prefilter(lams, r, bits=128) -> bool:
    """False when sum r_j theta_j is certifiably not an integer."""
    S = Interval.point(0)
    for lam, x in zip(lams, r):
        if x:
            S = S + _theta(lam, bits) * x
    n = round(S.mid)
    return S.lo <= n <= S.hi


def _log_height_bound(p: RatPoly) -> float:
    # log M(f) <= log ||f||_2; the defining polynomials need not be minimal
    c = p.int_coeffs()
    return 0.5 * math.log(sum(x * x for x in c))


def _exact_product(factors: list[tuple[AlgebraicNumber, int]], cap: int | None) -> AlgebraicNumber:
    acc = None
    for base, e in factors:
        if e == 0:
            continue
        term = power(base, e)
        acc = term if acc is None else derived_number(acc, term, "product", cap=cap)
    return acc if acc is not None else AlgebraicNumber.from_rational(1)


def _is_one(g: AlgebraicNumber) -> bool:
    if g.exact is not None:
        return g.exact == 1
    if g.poly(Fraction(1)) != 0:
        return False
    return g.is_root_of(RatPoly((-1, 1)))


def _liouville_is_one(factors: list[tuple[AlgebraicNumber, int]], budget: int) -> bool:
    """gamma = prod base^e equals 1, decided numerically past a separation bound.

    If gamma != 1 then |gamma - 1| >= 1/M(gamma - 1) with
    log M(gamma - 1) <= D (sum |e| log M(f_base) + log 2), D the product of
    the defining degrees.
    """
    factors = [(b, e) for b, e in factors if e]
    D = 1
    h = math.log(2)
    for b, e in factors:
        D *= max(1, b.degree_bound)
        h += abs(e) * _log_height_bound(b.poly)
    need = int(math.ceil(D * h / math.log(2))) + 4
    if need > budget:
        raise Undecided(f"relation check needs {need} bits, over the {budget}-bit budget")
    extra = sum(abs(e) * (int(abs(b.approx(30)) + 2).bit_length() + 2) for b, e in factors)
    bits = need + extra + 32
    while True:
        g = CInterval.point(1)
        for b, e in factors:
            g = g * b.refine(bits) ** e
        d = g - CInterval.point(1)
        if not g.contains(1, 0):
            return False
        if d.abs2().hi < Fraction(1, 1 << (2 * need)):
            return True
        bits *= 2
        if bits > 8 * budget:
            raise Undecided("relation check did not converge")


def _unit_product_is_one(lams, r, pairs, budget) -> bool:
    """prod (Lambda_j / rho)^r_j == 1 for even T = sum r, all |Lambda_j| = rho."""
    T = sum(r)
    w = list(r)
    extra: list[tuple[AlgebraicNumber, int]] = []
    if T:
        j = next((j for j, p in enumerate(pairs) if p is not None), None)
        if j is not None:
            # rho^2 = Lambda_j * conj(Lambda_j)
            w[j] -= T // 2
            w[pairs[j]] -= T // 2
        else:
            extra.append((_abs2(lams[0]), -(T // 2)))
    factors = [(lam, e) for lam, e in zip(lams, w) if e] + extra
    try:
        return _is_one(_exact_product(factors, None))
    except DegreeCapExceeded:
        return _liouville_is_one(factors, budget)


def verify_relation(alphas: Sequence[AlgebraicNumber], exponents: Sequence[int],
                    budget: int = DEFAULT_BUDGET_BITS) -> bool:
    """Exact test of prod alpha_j^r_j = 1.

    The alphas may be passed unnormalized as long as they share one modulus;
    the relation is then read for alpha_j / |alpha_j|.
    """
    r = [int(x) for x in exponents]
    if len(r) != len(alphas):
        raise ValueError("one exponent per number")
    if not any(r):
        return True
    if not _prefilter(alphas, r):
        return False
    pairs = _conj_index(alphas)
    if sum(r) % 2:
        # prod alpha^r is +-1 once its square is 1; the prefilter rules out -1
        r = [2 * x for x in r]
    return _unit_product_is_one(alphas, r, pairs, budget)


@dataclass(frozen=True)
class RelationLattice:
    basis: tuple[tuple[int, ...], ...]
    bound: int
    complete: bool  # brute force covered every vector up to the bound
    method: str

    def as_lists(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


def relation_lattice(alphas: Sequence[AlgebraicNumber], bound: int = DEFAULT_RELATION_BOUND,
                     prec_bits: int = 256, budget: int = DEFAULT_BUDGET_BITS) -> RelationLattice:
    m = len(alphas)
    if m == 0:
        return RelationLattice((), bound, True, "empty")
    pairs = _conj_index(alphas)
    gens: list[list[int]] = []
    reps: list[int] = []
    for j, lam in enumerate(alphas):
        if lam.is_real:
            s = sign_of_real(lam)
            e = [0] * m
            e[j] = 1 if s > 0 else 2
            gens.append(e)
            if s < 0:
                reps.append(j)
        elif pairs[j] is None or pairs[j] > j:
            reps.append(j)
            if pairs[j] is not None:
                e = [0] * m
                e[j] = e[pairs[j]] = 1
                gens.append(e)

    def lift(v):
        out = [0] * m
        for j, x in zip(reps, v):
            out[j] = int(x)
        return out

    basis = hermite_basis(gens) if gens else []

    def consider(v):
        nonlocal basis
        full = lift(v)
        if not any(full) or (basis and in_lattice(basis, full)):
            return
        if verify_relation(alphas, full, budget):
            basis = hermite_basis(basis + [full])

    with mpmath.workprec(prec_bits + 20):
        thetas = [mpmath.mpf(_theta(alphas[j], prec_bits).mid.numerator) /
                  _theta(alphas[j], prec_bits).mid.denominator for j in reps]
    for v in angle_relations(thetas, prec_bits, bound):
        consider(v)
    complete = len(reps) == 0
    method = "lll"
    if 0 < len(reps) <= _BRUTE_FORCE_MAX_REPS:
        th = np.array([float(t) for t in thetas])
        rng = np.arange(-bound, bound + 1)
        for v in _near_integer_vectors(th, rng):
            consider(v)
        complete, method = True, "lll+brute-force"
    if basis:
        basis = lll_reduce(basis)
    return RelationLattice(tuple(tuple(b) for b in basis), bound, complete, method)


def _near_integer_vectors(th: np.ndarray, rng: np.ndarray, tol: float = 1e-8):
    s = len(th)
    grids = np.meshgrid(*([rng] * (s - 1)), indexing="ij") if s > 1 else []
    rest = np.stack([g.ravel() for g in grids], axis=1) if s > 1 else np.zeros((1, 0), dtype=int)
    part = rest @ th[1:] if s > 1 else np.zeros(1)
    for x in rng:
        tot = part + x * th[0]
        hit = np.abs(tot - np.round(tot)) < tol
        for row in rest[hit]:
            v = [int(x)] + [int(t) for t in row]
            if any(v):
                yield v


def relation_basis(alphas: Sequence[AlgebraicNumber], bound: int = DEFAULT_RELATION_BOUND) -> list[list[int]]:
    """Verified basis of the multiplicative relations among unit-modulus numbers."""
    return relation_lattice(alphas, bound).as_lists()


def compute_P2(basis: Sequence[Sequence[int]]) -> int:
    """2 times the product of the absolute values of all nonzero basis entries."""
    out = 2
    for row in basis:
        for x in row:
            if x:
                out *= abs(int(x))
    return out


# --- normalized form ---------------------------------------------------------


@dataclass(frozen=True)
class IdenticallyZero:
    P: int
    ell: int
    checked_terms: int


@dataclass(frozen=True, eq=False)
class NormalizedForm:
    """v_n = u_n / (n^d rho^n) = sum_j c_j alpha_j^n + R(n) for one subsequence.

    Index lists I, D, U refer to ``roots`` (the top dominant roots). For j in
    D, alpha_j = prod_{i in I} alpha_i^{q[j][i]}.
    """

    P: int
    ell: int
    seq: Lrs
    roots: tuple[AlgebraicNumber, ...]
    coeffs: tuple[AlgebraicNumber, ...]
    degree: int
    rho2: AlgebraicNumber
    I: tuple[int, ...]
    D: tuple[int, ...]
    U: tuple[int, ...]
    q: dict
    exponents: tuple[tuple[int, ...], ...]  # E_j for every top root, length eta (0 for U)
    lattice: RelationLattice
    saturation: int
    decay: tuple[Fraction, Fraction]  # (C, xi): exponential part of R(n)
    poly_decay: Fraction  # |polynomial part of R(n)| <= poly_decay / n
    F: TrigPoly = field(repr=False)

    @property
    def eta(self) -> int:
        return self.F.eta

    @cached_property
    def rho(self) -> AlgebraicNumber:
        return real_sqrt(self.rho2)

    def alpha(self, j: int) -> AlgebraicNumber:
        """Exact normalized root Lambda_j / rho."""
        return derived_number(self.roots[j], self.rho, "ratio")

    @property
    def alphas(self) -> list[AlgebraicNumber]:
        return [self.alpha(j) for j in range(len(self.roots))]

    @property
    def certificate(self) -> dict:
        return {"relation_bound": self.lattice.bound, "complete_to_bound": self.lattice.complete,
                "method": self.lattice.method}

    def summary(self) -> dict:
        def num(a):
            z = a.approx(60)
            return [float(z.real), float(z.imag)]

        return {
            "P": self.P,
            "ell": self.ell,
            "order": self.seq.order,
            "degree": self.degree,
            "rho": float(self.rho2.approx(60).real) ** 0.5,
            "roots": [num(r) for r in self.roots],
            "coeffs": [num(c) for c in self.coeffs],
            "I": list(self.I), "D": list(self.D), "U": list(self.U),
            "q": {str(k): [str(x) for x in v] for k, v in self.q.items()},
            "eta": self.eta,
            "relations": self.lattice.as_lists(),
            "decay": {"C": str(self.decay[0]), "xi": str(self.decay[1]),
                      "poly": str(self.poly_decay)},
            "certificate": self.certificate,
        }


@dataclass
class _RootData:
    roots: list
    top: list[int]
    dom: list[int]
    degree: int
    rho2: AlgebraicNumber
    lattice: RelationLattice
    E: list[list[int]]
    eta: int
    saturation: int
    I: list[int]
    D: list[int]
    U: list[int]
    q: dict
    xi_ratio2: Fraction | None  # upper bound on (|next| / rho)^2


def _analyze_roots(chi: RatPoly, bound: int, budget: int) -> _RootData:
    roots = isolate_roots(chi, budget)
    dom = dominant_roots(roots)
    d = max(roots[i][1] for i in dom) - 1
    top = [i for i in dom if roots[i][1] == d + 1]
    rho2 = _abs2(roots[dom[0]][0])
    U = [i for i in top if roots[i][0].is_real]
    for i in U:
        if sign_of_real(roots[i][0]) < 0:
            raise ValueError("negative real dominant root: split with an even period first")
    if len(U) > 1:
        raise AssertionError("more than one positive dominant root")
    nonreal = [i for i in top if not roots[i][0].is_real]
    lams = [roots[i][0] for i in nonreal]
    lat = relation_lattice(lams, bound, budget=budget)
    m = len(nonreal)
    B = [list(b) for b in lat.basis]
    K = integer_kernel(B, m) if m else []
    eta = len(K)
    Erows = [[K[c][r] for c in range(eta)] for r in range(m)]
    sat = saturation_exponent(B, m) if B else 1
    # independent rows: small exponents first so q stays integral when possible,
    # then upper half-plane representatives
    pos = {nonreal[r]: r for r in range(m)}
    order = sorted(range(m), key=lambda r: (max(map(abs, Erows[r]), default=0),
                                            (lams[r].box().im.sign() or 0) < 0))
    chosen: list[int] = []
    for r in order:
        if _rank([Erows[x] for x in chosen + [r]]) > len(chosen):
            chosen.append(r)
        if len(chosen) == eta:
            break
    I = sorted(nonreal[r] for r in chosen)
    D = [nonreal[r] for r in range(m) if nonreal[r] not in I]
    q = {}
    if eta:
        EI = [[Fraction(x) for x in Erows[pos[i]]] for i in I]
        inv = _inverse(EI)
        for j in D:
            row = [Fraction(x) for x in Erows[pos[j]]]
            q[j] = tuple(sum(row[t] * inv[t][s] for t in range(eta)) for s in range(eta))
    E = []
    for i in top:
        E.append(Erows[pos[i]] if i in pos else [0] * eta)
    sub = [i for i in range(len(roots)) if i not in dom]
    xi2 = None
    if sub:
        rmax = max(roots[i][0].refine(48).abs2().hi for i in sub)
        r2 = rho2.refine(48).re.lo
        xi2 = rmax / r2
    return _RootData(roots, top, dom, d, rho2, lat, E, eta, sat, I, D, U, q, xi2)


def _rank(rows: list[list[int]]) -> int:
    if not rows:
        return 0
    return len(hermite_basis(rows))


def _inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def _sup_poly_exp(e: int, y: float) -> float:
    """sup_{n >= 1} n^e y^n for 0 <= y < 1."""
    if y <= 0:
        return 0.0
    if e <= 0:
        return y
    n0 = max(1.0, -e / math.log(y))
    return max(n ** e * y ** n for n in (math.floor(n0), math.ceil(n0), 1) if n >= 1)


def _decay(seq: Lrs, rd: _RootData) -> tuple[tuple[Fraction, Fraction], Fraction]:
    form = power_sum_decomposition(seq, 96)
    d = rd.degree
    rho = math.sqrt(float(rd.rho2.approx(60).real))
    poly = 0.0
    for i, t in enumerate(form.terms):
        if i in rd.dom:
            top = d if i in rd.top else len(t.poly_coeffs)
            poly += sum(abs(complex(c)) for c in t.poly_coeffs[:top])
    if rd.xi_ratio2 is None:
        xi = Fraction(1, 2)
        C = 0.0
    else:
        x = Fraction(math.isqrt(math.ceil(rd.xi_ratio2 * (1 << 40))) + 1, 1 << 20)
        xi = (min(x, Fraction(1)) + 1) / 2
        C = 0.0
        for i, t in enumerate(form.terms):
            if i in rd.dom:
                continue
            y = abs(t.root.approx(60)) / (rho * float(xi))
            for j, c in enumerate(t.poly_coeffs):
                C += abs(complex(c)) * _sup_poly_exp(j - d, y)
    pad = 1 << 24

    def up(v):
        return Fraction(math.ceil(2 * v * pad), pad)

    return (up(C), xi), up(poly)


def _build_form(w: Lrs, P: int, ell: int, rd: _RootData) -> NormalizedForm:
    top_roots = [rd.roots[i][0] for i in rd.top]
    coeffs = [leading_coefficient(w, rd.roots[i][0], rd.roots[i][1]) for i in rd.top]
    pos = {i: k for k, i in enumerate(rd.top)}
    const = AlgebraicNumber.from_rational(0)
    cs, es = [], []
    for k, i in enumerate(rd.top):
        if i in rd.U:
            const = coeffs[k]
        else:
            cs.append(coeffs[k])
            es.append(tuple(rd.E[k]))
    F = TrigPoly(rd.eta, const, tuple(cs), tuple(es))
    decay, poly = _decay(w, rd)
    return NormalizedForm(
        P=P, ell=ell, seq=w, roots=tuple(top_roots), coeffs=tuple(coeffs), degree=rd.degree,
        rho2=rd.rho2,
        I=tuple(pos[i] for i in rd.I), D=tuple(pos[i] for i in rd.D), U=tuple(pos[i] for i in rd.U),
        q={pos[j]: v for j, v in rd.q.items()},
        exponents=tuple(tuple(e) for e in rd.E), lattice=rd.lattice, saturation=rd.saturation,
        decay=decay, poly_decay=poly, F=F,
    )


def normalize(subseq: Lrs, P: int = 1, ell: int = 0, *, bound: int = DEFAULT_RELATION_BOUND,
              budget: int = DEFAULT_BUDGET_BITS, _cache: dict | None = None) -> NormalizedForm:
    """Normalized form of a non-degenerate, nonzero subsequence."""
    w = minimize_order(subseq)
    if w.is_zero:
        raise ValueError("normalize needs a sequence that is not identically zero")
    key = tuple(w.char_poly.coeffs)
    rd = _cache.get(key) if _cache is not None else None
    if rd is None:
        rd = _analyze_roots(w.char_poly, bound, budget)
        if _cache is not None:
            _cache[key] = rd
    return _build_form(w, P, ell, rd)


@dataclass(frozen=True, eq=False)
class SubsequenceSystem:
    seq: Lrs
    P: int
    P1: int
    P2: int
    saturation_factor: int
    forms: tuple  # NormalizedForm | IdenticallyZero, one per residue class

    @property
    def nonzero_forms(self) -> list[NormalizedForm]:
        return [f for f in self.forms if isinstance(f, NormalizedForm)]

    @property
    def certificate(self) -> dict:
        fs = self.nonzero_forms
        return {
            "relation_bound": min((f.lattice.bound for f in fs), default=DEFAULT_RELATION_BOUND),
            "complete_to_bound": all(f.lattice.complete for f in fs),
        }

    def summary(self) -> dict:
        return {
            "P": self.P, "P1": self.P1, "P2": self.P2, "saturation_factor": self.saturation_factor,
            "forms": [f.summary() if isinstance(f, NormalizedForm)
                      else {"P": f.P, "ell": f.ell, "identically_zero": True} for f in self.forms],
            "certificate": self.certificate,
        }


def preprocess(seq: Lrs, bound: int = DEFAULT_RELATION_BOUND,
               budget: int = DEFAULT_BUDGET_BITS) -> SubsequenceSystem:
    """Split into P = P1 * P2 (times a saturation factor) normalized subsequences."""
    s = minimize_order(seq)
    if s.is_zero:
        return SubsequenceSystem(s, 1, 1, 1, 1, (IdenticallyZero(1, 0, 2 * seq.order),))
    P1 = compute_P1(s)
    roots = isolate_roots(s.char_poly, budget)
    gammas: list[AlgebraicNumber] = []
    for i in dominant_roots(roots):
        g = power(roots[i][0], P1)
        if not any(equals_exact(g, h) for h in gammas):
            gammas.append(g)
    P2 = compute_P2(relation_basis(gammas, bound))
    extra = 1
    cache: dict = {}
    for _ in range(6):
        P = P1 * P2 * extra
        forms = []
        need = 1
        for ell, w in enumerate(split_subsequences(s, P)):
            if w.is_zero:
                forms.append(IdenticallyZero(P, ell, 2 * s.order))
                continue
            f = normalize(w, P, ell, bound=bound, budget=budget, _cache=cache)
            need = math.lcm(need, f.saturation)
            forms.append(f)
        if need == 1:
            return SubsequenceSystem(s, P, P1, P2, extra, tuple(forms))
        extra *= need
    raise Undecided("saturation splitting did not stabilise")

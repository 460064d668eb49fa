"""Real and complex algebraic numbers with certified isolating regions.

An :class:`AlgebraicNumber` is a square-free integer polynomial together with
a region that contains exactly one of its roots.  Real roots carry a rational
bracket ``(lo, hi)`` with a sign change; non-real roots carry an isolating
disk certified by a Rouché test and a box inside it that also contains the
root.  Rational and Gaussian-rational values are detected and stored exactly.

Every decision (sign, equality, root of unity) is exact: it reduces to gcd
computations plus refinement that is guaranteed to terminate.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable, Iterable

import mpmath

from .arith import (
    RatPoly,
    composed_defining_poly,
    cyclotomic,
    poly_gcd,
    power_poly,
    rational_function_of_root,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
    sturm_sequence,
    totient,
)
from .errors import EndpointRootError, PrecisionError
from .intervals import CInterval, Interval

__all__ = [
    "AlgebraicNumber",
    "isolate_roots",
    "refine",
    "sign_of_real",
    "is_root_of_unity",
    "derived_number",
    "equals_exact",
    "DEFAULT_BUDGET_BITS",
]

DEFAULT_BUDGET_BITS = 4096

_MP_LOCK = threading.RLock()

Gauss = tuple[Fraction, Fraction]


# --- exact Gaussian helpers ------------------------------------------------


def _gmul(a: Gauss, b: Gauss) -> Gauss:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gpoly_eval(p: RatPoly, z: Gauss) -> Gauss:
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p.coeffs):
        acc = _gmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _sqrt_bounds(n: int, guard: int = 32) -> tuple[Fraction, Fraction]:
    """Rational bounds lo <= sqrt(n) <= hi for a non-negative integer n."""
    scale = 1 << guard
    s = n * scale * scale
    r = math.isqrt(s)
    hi = r if r * r == s else r + 1
    return Fraction(r, scale), Fraction(hi, scale)


def _dyadic(x, bits: int) -> Fraction:
    """Round an mpmath real to a dyadic rational with `bits` fractional bits."""
    return Fraction(int(mpmath.nint(mpmath.ldexp(x, bits))), 1 << bits)


def _to_mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _int_taylor_at(p_int: list[int], cre: int, cim: int, s: int) -> list[tuple[int, int]]:
    """Taylor coefficients (scaled) of p at c = (cre + i cim) / 2^s.

    Returns Gaussian integers e_k with p(c + y/2^s) = 2^(-s d) sum e_k y^k.
    """
    d = len(p_int) - 1
    # R(y) = sum P_j 2^{s(d-j)} y^j, then shift by the Gaussian integer C
    re = [p_int[j] << (s * (d - j)) for j in range(d + 1)]
    im = [0] * (d + 1)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            # coeff[j] += C * coeff[j+1]
            r1, i1 = re[j + 1], im[j + 1]
            re[j] += cre * r1 - cim * i1
            im[j] += cre * i1 + cim * r1
    return list(zip(re, im))


def _rouche_one_root(p_int: list[int], center: Gauss, radii: Iterable[Fraction]) -> bool:
    """True when p has exactly one root in every disk D(center, r), r in radii.

    Test: |a0| + sum_{k>=2} |a_k| r^k < |a1| r, which by Rouché compares p
    with its linear Taylor term on the circle.
    """
    den = math.lcm(center[0].denominator, center[1].denominator)
    s = max(den.bit_length() - 1, 0)
    if 1 << s != den:
        raise ValueError("disk centres must be dyadic")
    cre = int(center[0] * (1 << s))
    cim = int(center[1] * (1 << s))
    e = _int_taylor_at(p_int, cre, cim, s)
    hi = [_sqrt_bounds(a * a + b * b)[1] for a, b in e]
    lo1 = _sqrt_bounds(e[1][0] ** 2 + e[1][1] ** 2)[0] if len(e) > 1 else Fraction(0)
    for r in radii:
        rho = r * (1 << s)
        lhs = hi[0]
        t = rho
        for k in range(2, len(e)):
            t *= rho
            lhs += hi[k] * t
            if lhs >= lo1 * rho:
                return False
        if not lhs < lo1 * rho:
            return False
    return True


# --- the number type -------------------------------------------------------


class AlgebraicNumber:
    """A root of a square-free rational polynomial, pinned by an isolating region."""

    __slots__ = ("poly", "_int", "is_real", "exact", "_lo", "_hi", "_iso", "_box", "_disk", "_lock")

    def __init__(self, poly: RatPoly, *, is_real: bool, exact=None, lo=None, hi=None,
                 box: CInterval | None = None, disk: tuple[Gauss, Fraction] | None = None):
        self.poly = poly.primitive()
        self._int = self.poly.int_coeffs()
        self.is_real = is_real
        self.exact = exact
        self._lo, self._hi = lo, hi
        # the first bracket stays fixed as the isolating region for comparisons
        self._iso = (lo, hi)
        self._box, self._disk = box, disk
        self._lock = threading.Lock()

    # constructors
    @classmethod
    def from_rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls(RatPoly((-q, 1)), is_real=True, exact=q, lo=q, hi=q)

    @classmethod
    def from_gaussian(cls, re, im) -> "AlgebraicNumber":
        re, im = Fraction(re), Fraction(im)
        if im == 0:
            return cls.from_rational(re)
        poly = RatPoly((re * re + im * im, -2 * re, 1))
        box = CInterval.point(re, im)
        r = abs(im)
        return cls(poly, is_real=False, exact=(re, im), box=box, disk=((re, im), r))

    # internal state
    def _real_region(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self._lo, self._hi

    @property
    def degree_bound(self) -> int:
        return self.poly.degree

    @property
    def is_rational(self) -> bool:
        return isinstance(self.exact, Fraction)

    def box(self) -> CInterval:
        """The current isolating box (rectangle)."""
        if self.is_real:
            lo, hi = self._real_region()
            return CInterval(Interval(lo, hi), Interval.point(0))
        with self._lock:
            return self._box

    def refine(self, bits: int) -> CInterval:
        """Enclosure of width at most 2^-bits in each component."""
        target = Fraction(1, 1 << bits)
        if self.exact is not None:
            return self.box() if not self.is_real else CInterval.point(self.exact)
        if self.is_real:
            self._refine_real(target, bits)
        else:
            self._refine_complex(target, bits)
        return self.box()

    def _refine_real(self, target: Fraction, tbits: int):
        lo, hi = self._real_region()
        if hi - lo <= target:
            return
        p = self.poly
        slo = p.sign_at(lo)
        # fast path: Newton at high precision, then certify a tiny bracket
        bits = max(64, tbits + 16)
        with _MP_LOCK, mpmath.workprec(bits + 32):
            x = _to_mpf((lo + hi) / 2)
            ok = True
            for _ in range(4 * int(math.log2(bits)) + 20):
                v, dv = mpmath.polyval([_to_mpf(c) for c in reversed(p.coeffs)], x, derivative=True)
                if dv == 0:
                    ok = False
                    break
                step = v / dv
                x = x - step
                if abs(step) < mpmath.ldexp(1, -bits - 8):
                    break
            if ok and mpmath.isfinite(x):
                c = _dyadic(x, bits + 4)
                delta = target / 4
                a, b = c - delta, c + delta
                if lo <= a and b <= hi and p.sign_at(a) * p.sign_at(b) < 0:
                    with self._lock:
                        self._lo, self._hi = a, b
                    return
        # exact bisection fallback
        while hi - lo > target:
            m = (lo + hi) / 2
            sm = p.sign_at(m)
            if sm == 0:
                with self._lock:
                    self._lo = self._hi = m
                    self.exact = m
                return
            if sm == slo:
                lo = m
            else:
                hi = m
        with self._lock:
            self._lo, self._hi = lo, hi

    def _refine_complex(self, target: Fraction, bits: int):
        box = self.box()
        if box.re.width <= target and box.im.width <= target:
            return
        (c0, R0) = self._disk
        work = bits + 24
        for attempt in range(6):
            with _MP_LOCK, mpmath.workprec(work + 32):
                z = mpmath.mpc(_to_mpf(box.re.mid), _to_mpf(box.im.mid))
                coeffs = [_to_mpf(c) for c in reversed(self.poly.coeffs)]
                for _ in range(4 * int(math.log2(work)) + 20):
                    v, dv = mpmath.polyval(coeffs, z, derivative=True)
                    if dv == 0:
                        break
                    step = v / dv
                    z = z - step
                    if abs(step) < mpmath.ldexp(1, -work - 8):
                        break
                c = (_dyadic(z.real, work), _dyadic(z.imag, work))
            r = target / 2
            R = 3 * r / 2
            dist2 = (c[0] - c0[0]) ** 2 + (c[1] - c0[1]) ** 2
            if (R0 - R) > 0 and dist2 < (R0 - R) ** 2 and _rouche_one_root(self._int, c, (r, R)):
                new = CInterval(Interval(c[0] - r, c[0] + r), Interval(c[1] - r, c[1] + r))
                with self._lock:
                    old = self._box
                    self._box = CInterval(
                        Interval(max(old.re.lo, new.re.lo), min(old.re.hi, new.re.hi)),
                        Interval(max(old.im.lo, new.im.lo), min(old.im.hi, new.im.hi)),
                    )
                return
            work *= 2
        raise PrecisionError("complex refinement failed to certify a smaller disk")

    # numeric conveniences
    def approx(self, bits: int = 60) -> complex:
        return complex(self.refine(bits))

    def mp(self, bits: int):
        """mpmath value accurate to about 2^-bits (caller sets working precision)."""
        b = self.refine(bits)
        re = _to_mpf(b.re.mid)
        if self.is_real:
            return re
        return mpmath.mpc(re, _to_mpf(b.im.mid))

    def is_root_of(self, h: RatPoly, cofactor: RatPoly | None = None, budget: int = 1 << 14) -> bool:
        """Exact test h(self) = 0 for a divisor h of the defining polynomial.

        Exactly one of h, defining_poly / h vanishes at self, so refining until
        one of the two interval values excludes zero settles it.
        """
        if h.degree <= 0:
            return False
        if self.exact is not None:
            return _holds_exact(h, self.exact)
        k = cofactor if cofactor is not None else self.poly.divrem(h)[0]
        bits = 32
        while bits <= budget:
            b = self.refine(bits)
            z = b.re if self.is_real else b
            hv = h(z)
            kv = k(z)
            if _excludes_zero(hv):
                return False
            if _excludes_zero(kv):
                return True
            bits *= 2
        raise PrecisionError("root membership test exceeded the refinement budget")

    def __repr__(self):
        if self.exact is not None:
            if isinstance(self.exact, Fraction):
                return f"Alg({self.exact})"
            return f"Alg({self.exact[0]} + {self.exact[1]}i)"
        return f"Alg({self.approx(40):.12g}, poly={self.poly})"


def _excludes_zero(v) -> bool:
    if isinstance(v, Interval):
        return v.sign() is not None
    return v.excludes_zero()


def _holds_exact(h: RatPoly, value) -> bool:
    if isinstance(value, Fraction):
        return h(value) == 0
    re, im = _gpoly_eval(h, value)
    return re == 0 and im == 0


# --- isolation -------------------------------------------------------------


def _cauchy_bound(p: RatPoly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1]) if p.degree > 0 else Fraction(1)


def _detect_rational(a: AlgebraicNumber) -> AlgebraicNumber:
    """Exact value of a real root when it is rational.

    A rational root of a primitive integer polynomial has denominator dividing
    the leading coefficient, so a bracket narrower than 1/lc holds at most
    one candidate.
    """
    if a.exact is not None:
        return a
    p = a.poly
    if p.degree == 1:
        return AlgebraicNumber.from_rational(-p[0] / p[1])
    lc = int(p.lc)
    b = a.refine(lc.bit_length() + 2).re
    if a.exact is not None:
        return AlgebraicNumber.from_rational(a.exact)
    for k in range(math.floor(b.lo * lc), math.ceil(b.hi * lc) + 1):
        q = Fraction(k, lc)
        if b.lo <= q <= b.hi and p(q) == 0:
            return AlgebraicNumber.from_rational(q)
    return a


def _isolate_real(p: RatPoly) -> list[AlgebraicNumber]:
    seq = sturm_sequence(p)
    B = _cauchy_bound(p)
    # round the bound up to a power of two so split points stay dyadic
    B = Fraction(1 << max(0, math.ceil(math.log2(B)) + 1))
    out: list[AlgebraicNumber] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(p, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(AlgebraicNumber(p, is_real=True, lo=lo, hi=hi))
            continue
        m = (lo + hi) / 2
        if p(m) == 0:
            out.append(AlgebraicNumber.from_rational(m))
            # step off the root until m is alone in (m - eps, m + eps)
            eps = (hi - lo) / 4
            while p(m - eps) == 0 or p(m + eps) == 0 or sturm_count(p, m - eps, m + eps, seq) != 1:
                eps /= 2
            stack.append((lo, m - eps))
            stack.append((m + eps, hi))
            continue
        stack.append((lo, m))
        stack.append((m, hi))
    out = [_detect_rational(a) for a in out]
    out.sort(key=lambda a: a._lo)
    return out


def _isolate_upper(p: RatPoly, count: int, budget: int) -> list[AlgebraicNumber]:
    """Certified disks for the `count` roots of p in the open upper half plane."""
    if count == 0:
        return []
    p_int = p.int_coeffs()
    d = p.degree
    prec = 64
    while prec <= budget:
        with _MP_LOCK, mpmath.workprec(prec + 32):
            try:
                roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(p_int)],
                                         maxsteps=50 + 10 * d, extraprec=prec + 10 * d)
            except mpmath.libmp.libhyper.NoConvergence:
                prec *= 2
                continue
            roots = [mpmath.mpc(r) for r in roots]
            ups = sorted(roots, key=lambda z: -z.imag)[:count]
            others = roots
            cands = []
            ok = True
            for z in ups:
                if z.imag <= 0:
                    ok = False
                    break
                sep = min((abs(z - w) for w in others if w is not z), default=mpmath.mpf(1))
                sep = min(sep, 2 * z.imag)
                cands.append((z, sep))
        if ok:
            numbers = []
            for z, sep in cands:
                c = (_dyadic(z.real, prec), _dyadic(z.imag, prec))
                # try shrinking dyadic radii below a third of the separation
                lim = min(_dyadic(sep, prec + 8) / 3, c[1] / 2)
                if lim <= 0:
                    ok = False
                    break
                r = Fraction(1, 1 << max(0, -math.floor(math.log2(lim))))
                while r > lim:
                    r /= 2
                floor_r = Fraction(1, 1 << (prec // 2))
                while r >= floor_r and not _rouche_one_root(p_int, c, (r, 3 * r / 2)):
                    r /= 4
                if r < floor_r:
                    ok = False
                    break
                R = 3 * r / 2
                box = CInterval(Interval(c[0] - r, c[0] + r), Interval(c[1] - r, c[1] + r))
                numbers.append(AlgebraicNumber(p, is_real=False, box=box, disk=(c, R)))
            if ok and _disks_disjoint(numbers):
                return [_detect_gaussian(a) for a in numbers]
        prec *= 2
    raise PrecisionError(f"could not certify complex roots of {p} within {budget} bits")


def _disks_disjoint(nums: list[AlgebraicNumber]) -> bool:
    for i in range(len(nums)):
        (ci, Ri) = nums[i]._disk
        for j in range(i + 1, len(nums)):
            (cj, Rj) = nums[j]._disk
            if (ci[0] - cj[0]) ** 2 + (ci[1] - cj[1]) ** 2 <= (Ri + Rj) ** 2:
                return False
    return True


def _detect_gaussian(a: AlgebraicNumber) -> AlgebraicNumber:
    """Replace a by its exact value when it is a Gaussian rational.

    lc(p) * z is an algebraic integer, and the algebraic integers of Q(i) are
    the Gaussian integers, so only lattice points (m + n i) / lc(p) need trying.
    """
    if a.is_real or a.exact is not None:
        return a
    lc = int(a.poly.lc)
    b = a.refine(lc.bit_length() + 2)
    mr, mi = round(b.re.mid * lc), round(b.im.mid * lc)
    (c, R) = a._disk
    for dr in (-1, 0, 1):
        for di in (-1, 0, 1):
            z = (Fraction(mr + dr, lc), Fraction(mi + di, lc))
            if (z[0] - c[0]) ** 2 + (z[1] - c[1]) ** 2 < R * R and _holds_exact(a.poly, z):
                return AlgebraicNumber(a.poly, is_real=False, exact=z, box=CInterval.point(*z), disk=a._disk)
    return a


def _conjugate(a: AlgebraicNumber) -> AlgebraicNumber:
    if a.is_real:
        return a
    b = a.box()
    (c, R) = a._disk
    exact = None if a.exact is None else (a.exact[0], -a.exact[1])
    return AlgebraicNumber(a.poly, is_real=False, exact=exact,
                           box=CInterval(b.re, -b.im), disk=((c[0], -c[1]), R))


def _sort_key(a: AlgebraicNumber):
    z = a.approx(53)
    return (z.real, z.imag)


def isolate_squarefree(p: RatPoly, budget: int = DEFAULT_BUDGET_BITS) -> list[AlgebraicNumber]:
    """All distinct roots of a square-free polynomial."""
    p = p.primitive()
    if p.degree < 1:
        return []
    p0, j = p.strip_zero_root()
    roots = [AlgebraicNumber.from_rational(0)] if j else []
    if p0.degree >= 1:
        reals = _isolate_real(p0)
        n_up = (p0.degree - len(reals)) // 2
        ups = _isolate_upper(p0, n_up, budget)
        roots += reals + ups + [_conjugate(a) for a in ups]
    roots.sort(key=_sort_key)
    return roots


def isolate_roots(p: RatPoly, budget: int = DEFAULT_BUDGET_BITS) -> list[tuple[AlgebraicNumber, int]]:
    """Distinct complex roots of p with multiplicities."""
    if p.is_zero():
        raise ValueError("isolate_roots of the zero polynomial")
    out = []
    for factor, mult in squarefree_decomposition(p):
        out += [(a, mult) for a in isolate_squarefree(factor, budget)]
    out.sort(key=lambda t: _sort_key(t[0]))
    return out


def refine(a: AlgebraicNumber, bits: int) -> CInterval:
    return a.refine(bits)


# --- derived numbers -------------------------------------------------------


def _real_from_bracket(Q: RatPoly, a: Fraction, b: Fraction) -> AlgebraicNumber:
    return _detect_rational(AlgebraicNumber(Q, is_real=True, lo=a, hi=b))


def identify_root(Q: RatPoly, enclose: Callable[[int], CInterval], known_real: bool,
                  budget: int = DEFAULT_BUDGET_BITS) -> AlgebraicNumber:
    """The root of Q lying in every enclosure ``enclose(bits)``.

    ``enclose`` must return certified enclosures of a fixed root of Q that
    shrink as bits grow.  Isolation is certified by Sturm counts for known
    real values and Rouché disks otherwise.
    """
    Q = squarefree_part(Q).primitive()
    if Q.degree < 1:
        raise ValueError("cannot identify a root of a constant polynomial")
    if Q.degree == 1:
        return AlgebraicNumber.from_rational(-Q[0] / Q[1])
    q_int = Q.int_coeffs()
    seq = sturm_sequence(Q) if known_real else None
    bits = 32
    while bits <= budget:
        try:
            E = enclose(bits).rounded(bits + 8)
        except ZeroDivisionError:
            bits *= 2
            continue
        tiny = Fraction(1, 1 << (bits + 8))
        if known_real:
            w = max(E.re.width, tiny)
            a, b = E.re.lo - w, E.re.hi + w
            if Q(a) != 0 and Q(b) != 0 and sturm_count(Q, a, b, seq) == 1:
                return _real_from_bracket(Q, a, b)
        else:
            c = (E.re.mid, E.im.mid)
            h = max(E.re.width, E.im.width) / 2 + tiny
            R = 2 * h
            if E.im.contains(0):
                # a real-centred disk is conjugation symmetric, so a unique root in it is real
                cr = (E.re.mid, Fraction(0))
                hr = max(E.re.width / 2, E.im.mag) + tiny
                Rr = 2 * hr
                if _rouche_one_root(q_int, cr, (Rr,)):
                    a, b = cr[0] - Rr, cr[0] + Rr
                    if Q(a) != 0 and Q(b) != 0:
                        return _real_from_bracket(Q, a, b)
            elif _rouche_one_root(q_int, c, (R,)):
                a = AlgebraicNumber(Q, is_real=False, box=E, disk=(c, R))
                return _detect_gaussian(a)
        bits *= 2
    raise PrecisionError(f"could not isolate a root of a degree {Q.degree} polynomial within {budget} bits")


def _enc(a: AlgebraicNumber, bits: int) -> CInterval:
    return a.refine(bits)


def negate(a: AlgebraicNumber) -> AlgebraicNumber:
    p = a.poly.scale_arg(-1)
    if a.is_real:
        if a.exact is not None:
            return AlgebraicNumber.from_rational(-a.exact)
        lo, hi = a._real_region()
        return AlgebraicNumber(p, is_real=True, lo=-hi, hi=-lo)
    if a.exact is not None:
        return AlgebraicNumber.from_gaussian(-a.exact[0], -a.exact[1])
    b = a.box()
    (c, R) = a._disk
    return AlgebraicNumber(p, is_real=False, box=-b, disk=((-c[0], -c[1]), R))


def conjugate(a: AlgebraicNumber) -> AlgebraicNumber:
    return _conjugate(a)


def _exact_value(a: AlgebraicNumber) -> Gauss | None:
    if a.exact is None:
        return None
    if isinstance(a.exact, Fraction):
        return (a.exact, Fraction(0))
    return a.exact


def _from_exact(z: Gauss) -> AlgebraicNumber:
    return AlgebraicNumber.from_gaussian(*z)


def _gdiv(a: Gauss, b: Gauss) -> Gauss:
    n = b[0] * b[0] + b[1] * b[1]
    t = _gmul(a, (b[0], -b[1]))
    return (t[0] / n, t[1] / n)


def derived_number(a: AlgebraicNumber, b: AlgebraicNumber | None, op: str,
                   budget: int = DEFAULT_BUDGET_BITS, cap: int | None = None) -> AlgebraicNumber:
    """sum, product, ratio of a and b; conjugate or modulus_squared of a."""
    if op == "conjugate":
        return _conjugate(a)
    if op == "modulus_squared":
        ea = _exact_value(a)
        if ea is not None:
            return AlgebraicNumber.from_rational(ea[0] ** 2 + ea[1] ** 2)
        if a.is_real:
            Q = power_poly(a.poly, 2)
        else:
            Q = composed_defining_poly(a.poly, a.poly, "product", cap)
        return identify_root(Q, lambda bits: CInterval(_enc(a, bits).abs2(), Interval.point(0)), True, budget)
    if b is None:
        raise ValueError(f"{op} needs two operands")
    ea, eb = _exact_value(a), _exact_value(b)
    if op == "ratio" and eb is not None and eb == (0, 0):
        raise ZeroDivisionError("ratio by zero")
    if ea is not None and eb is not None:
        if op == "sum":
            return _from_exact((ea[0] + eb[0], ea[1] + eb[1]))
        if op == "product":
            return _from_exact(_gmul(ea, eb))
        if op == "ratio":
            return _from_exact(_gdiv(ea, eb))
    fns = {
        "sum": lambda x, y: x + y,
        "product": lambda x, y: x * y,
        "ratio": lambda x, y: x / y,
    }
    if op not in fns:
        raise ValueError(f"unknown operation {op!r}")
    if op == "ratio" and b.poly(Fraction(0)) == 0 and sign_or_zero(b) == 0:
        raise ZeroDivisionError("ratio by zero")
    Q = composed_defining_poly(a.poly, b.poly, op, cap)
    f = fns[op]
    return identify_root(Q, lambda bits: f(_enc(a, bits), _enc(b, bits)), a.is_real and b.is_real, budget)


def power(a: AlgebraicNumber, n: int, budget: int = DEFAULT_BUDGET_BITS) -> AlgebraicNumber:
    if n == 0:
        return AlgebraicNumber.from_rational(1)
    e = _exact_value(a)
    if e is not None:
        z = (Fraction(1), Fraction(0))
        base = e if n > 0 else _gdiv((Fraction(1), Fraction(0)), e)
        for _ in range(abs(n)):
            z = _gmul(z, base)
        return _from_exact(z)
    if n == 1:
        return a
    Q = power_poly(a.poly, n)
    return identify_root(Q, lambda bits: _enc(a, bits + 2 * abs(n).bit_length()) ** n, a.is_real, budget)


def real_sqrt(a: AlgebraicNumber, budget: int = DEFAULT_BUDGET_BITS) -> AlgebraicNumber:
    """Non-negative square root of a non-negative real algebraic number."""
    if not a.is_real:
        raise ValueError("real_sqrt of a non-real number")
    s = sign_of_real(a)
    if s < 0:
        raise ValueError("real_sqrt of a negative number")
    if s == 0:
        return AlgebraicNumber.from_rational(0)
    if a.is_rational:
        q = a.exact
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return AlgebraicNumber.from_rational(Fraction(rn, rd))
    Q = a.poly.compose(RatPoly((0, 0, 1)))

    def enclose(bits):
        v = _enc(a, 2 * bits + 8).re
        v = Interval(max(v.lo, Fraction(0)), v.hi)
        return CInterval(v.sqrt(bits + 4), Interval.point(0))

    return identify_root(Q, enclose, True, budget)


def rational_function(a: AlgebraicNumber, num: RatPoly, den: RatPoly | None = None,
                      budget: int = DEFAULT_BUDGET_BITS) -> AlgebraicNumber:
    """num(a) / den(a) as an algebraic number (den(a) must be nonzero)."""
    den = den if den is not None else RatPoly((1,))
    e = _exact_value(a)
    if e is not None:
        nv, dv = _gpoly_eval(num, e), _gpoly_eval(den, e)
        if dv == (0, 0):
            raise ZeroDivisionError("denominator vanishes")
        return _from_exact(_gdiv(nv, dv))
    Q = rational_function_of_root(a.poly, num, den)

    def enclose(bits):
        z = _enc(a, bits + 8)
        zz = z.re if a.is_real else z
        v = num(zz) / den(zz)
        return v if isinstance(v, CInterval) else CInterval(v, Interval.point(0))

    return identify_root(Q, enclose, a.is_real, budget)


# --- decisions -------------------------------------------------------------


def sign_or_zero(a: AlgebraicNumber) -> int | None:
    """Exact sign for real a; 0 or None (nonzero) for non-real a."""
    if not a.is_real:
        e = _exact_value(a)
        return 0 if e == (0, 0) else None
    return sign_of_real(a)


def sign_of_real(a: AlgebraicNumber, budget: int = 1 << 14) -> int:
    if not a.is_real:
        raise ValueError("sign_of_real on a non-real number")
    if a.exact is not None:
        return (a.exact > 0) - (a.exact < 0)
    lo, hi = a._real_region()
    if lo < 0 < hi and a.poly(Fraction(0)) == 0:
        return 0
    bits = 16
    while bits <= budget:
        lo, hi = a.refine(bits).re.lo, a.refine(bits).re.hi
        if lo > 0 or (lo == 0 and a.poly(Fraction(0)) != 0):
            return 1
        if hi < 0 or (hi == 0 and a.poly(Fraction(0)) != 0):
            return -1
        if a.exact is not None:
            return (a.exact > 0) - (a.exact < 0)
        bits *= 2
    raise PrecisionError("sign determination exceeded the budget")


def is_root_of_unity(a: AlgebraicNumber) -> int | None:
    """Least n with a^n = 1, or None."""
    e = _exact_value(a)
    if e is not None:
        table = {(1, 0): 1, (-1, 0): 2, (0, 1): 4, (0, -1): 4}
        return table.get((e[0], e[1]))
    m = a.refine(40).abs2()
    if not m.contains(1):
        return None
    d = a.degree_bound
    n = 1
    limit = 2 * d * d + 2
    while n <= limit:
        if totient(n) <= d:
            g = poly_gcd(a.poly, cyclotomic(n))
            if g.degree >= 1 and a.is_root_of(g):
                return n
        n += 1
    return None


def _box_in_region(owner: AlgebraicNumber, box: CInterval) -> bool:
    if owner.is_real:
        lo, hi = owner._iso
        return lo < box.re.lo and box.re.hi < hi and box.im.lo == 0 == box.im.hi
    (c, R) = owner._disk
    R2 = R * R
    for x in (box.re.lo, box.re.hi):
        for y in (box.im.lo, box.im.hi):
            if (x - c[0]) ** 2 + (y - c[1]) ** 2 >= R2:
                return False
    return True


def _boxes_disjoint(x: CInterval, y: CInterval) -> bool:
    return not (x.re.overlaps(y.re) and x.im.overlaps(y.im))


def equals_exact(a: AlgebraicNumber, b: AlgebraicNumber, budget: int = 1 << 14) -> bool:
    """Exact equality through the gcd of the defining polynomials.

    Both numbers must be roots of g = gcd; then they are equal iff b's box
    eventually lies inside a's isolating region (a's region holds only one
    root of a's polynomial), and unequal iff the boxes separate.
    """
    if a is b:
        return True
    if a.is_real != b.is_real:
        return False
    ea, eb = _exact_value(a), _exact_value(b)
    if ea is not None and eb is not None:
        return ea == eb
    if ea is not None:
        a, b, ea, eb = b, a, eb, ea
    if eb is not None:
        h = RatPoly((-eb[0], 1)) if b.is_real else b.poly
        g = poly_gcd(a.poly, h)
        if g.degree < 1 or not a.is_root_of(g):
            return False
        if b.is_real:
            return True
        # a is eb or its conjugate; the imaginary signs tell them apart
        return _imag_sign(a) == (1 if eb[1] > 0 else -1)
    g = poly_gcd(a.poly, b.poly)
    if g.degree < 1 or not a.is_root_of(g) or not b.is_root_of(g):
        return False
    bits = 16
    while bits <= budget:
        ba, bb = a.refine(bits), b.refine(bits)
        if _boxes_disjoint(ba, bb):
            return False
        if _box_in_region(a, bb) or _box_in_region(b, ba):
            return True
        bits *= 2
    raise PrecisionError("equality test exceeded the budget")


def _imag_sign(a: AlgebraicNumber) -> int:
    if a.is_real:
        return 0
    b = a.box()
    return b.im.sign()


def unit_circle_angle(a: AlgebraicNumber, bits: int) -> Interval:
    """Enclosure of arg(a)/(2 pi) in [0, 1) for a nonzero number (float-free)."""
    with _MP_LOCK, mpmath.workprec(bits + 40):
        z = a.mp(bits + 20)
        t = mpmath.arg(z) / (2 * mpmath.pi)
        if t < 0:
            t += 1
        c = Fraction(_dyadic(t, bits + 8))
    pad = Fraction(1, 1 << bits)
    return Interval(c - pad, c + pad)

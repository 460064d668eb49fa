"""The ten acceptance criteria, one test each.

Each test prints "criterion N: PASS|FAIL - summary"; the lines are repeated
in the terminal summary. Run directly with ``python tests/test_acceptance.py``.
"""

import functools
import json
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from corpus import CORPUS  # noqa: E402

from lrsdensity.algebraic import AlgebraicNumber, identify_root  # noqa: E402
from lrsdensity.arith import chebyshev_T, squarefree_part  # noqa: E402
from lrsdensity.cli import run  # noqa: E402
from lrsdensity.density import (  # noqa: E402
    approximate_density,
    arccos_rational_multiple,
    decide_density_one,
    decide_density_zero,
    decide_rational_one_pair,
    finite_positivity_diagonalisable,
    grid_density,
    monte_carlo_sequence_density,
    negated,
)
from lrsdensity.intervals import CInterval, Interval, cos2pi  # noqa: E402
from lrsdensity.lrs import Lrs  # noqa: E402
from lrsdensity.normalize import preprocess  # noqa: E402
from lrsdensity.oracle import empirical_density, sign_profile  # noqa: E402
from lrsdensity.trigpoly import TrigPoly, kappa_hat  # noqa: E402

EXAMPLE3_LOOP = """\
x=0; y=6; z=4;
while true
{
  x=4x+3y;
  y=4y-3x;
  z=5z;
  if y+z>0 { Region A } else { Region B }
}
"""
EX1 = Lrs([-1], [1])
EX2 = Lrs([Fraction(6, 5), -1], [Fraction(3, 5), Fraction(-7, 25)])
EX3 = Lrs([13, -65, 125], [44, 142, 236])
FIB = Lrs([1, 1], [1, 1])
# Re((4+3i)^n) - 5^n: F = -1 + cos on a circle, sup F = 0
SUP_ZERO = Lrs([13, -65, 125], [-1, -18, -169])
with mpmath.workprec(200):
    DELTA3 = mpmath.acos(mpmath.mpf(-2) / 3) / mpmath.pi


def criterion(n):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*a, **kw):
            t0 = time.perf_counter()
            try:
                summary = fn(*a, **kw)
            except BaseException as e:
                line = f"criterion {n}: FAIL - {type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''}"
                ACCEPTANCE_LINES.append(line)
                print(line)
                raise
            line = f"criterion {n}: PASS - {summary} ({time.perf_counter() - t0:.1f}s)"
            ACCEPTANCE_LINES.append(line)
            print(line)

        return wrapper

    return deco


def mpf(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@criterion(1)
def test_c1_example3_end_to_end(tmp_path):
    p = tmp_path / "ex3.loop"
    p.write_text(EXAMPLE3_LOOP)
    t0 = time.perf_counter()
    code, text = run(["loop", str(p), "density", "--eps", "1/200"])
    elapsed = time.perf_counter() - t0
    doc = json.loads(text)
    assert code == 0
    lo, hi = Fraction(doc["result"]["value"]["lo"]), Fraction(doc["result"]["value"]["hi"])
    assert hi - lo <= Fraction(1, 100)
    with mpmath.workprec(200):
        assert mpf(lo) <= DELTA3 <= mpf(hi)
    assert lo <= Fraction("0.732279") <= hi
    assert elapsed <= 60
    return f"interval [{lo}, {hi}] contains {mpmath.nstr(DELTA3, 10)}, {elapsed:.2f}s"


@criterion(2)
def test_c2_example3_irrational():
    r = decide_rational_one_pair(EX3)
    assert r.decision == "irrational"
    # Niven: among rationals p/q in [-1, 1] (q <= 12) only 0, +-1/2, +-1 are cosines of rational multiples of pi
    values = {Fraction(p, q) for q in range(1, 13) for p in range(-q, q + 1)}
    hits = {x for x in values if arccos_rational_multiple(AlgebraicNumber.from_rational(x)) is not None}
    assert hits == {Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1)}
    assert arccos_rational_multiple(AlgebraicNumber.from_rational(Fraction(-2, 3))) is None
    return f"rational -> irrational; Niven cross-check on {len(values)} rationals"


@criterion(3)
def test_c3_example2_rational():
    r = decide_rational_one_pair(EX2)
    assert r.decision == "rational" and r.value == Fraction(1, 2)
    code, text = run(["rational", "--coeffs", "6/5,-1", "--init", "3/5,-7/25"])
    assert json.loads(text)["result"]["value"] == "1/2"
    rep = approximate_density(EX2, Fraction(1, 100))
    assert rep.contains(Fraction(1, 2))
    return f"rational 1/2 exactly; eps=1/100 interval [{rep.lo}, {rep.hi}]"


@criterion(4)
def test_c4_example1_alternating():
    sysm = preprocess(EX1)
    assert sysm.P1 == 2
    rep = approximate_density(EX1, Fraction(1, 100))
    assert rep.exact and rep.value == Fraction(1, 2)
    code, text = run(["empirical", "--coeffs", "-1", "--init", "1", "--n", "1000"])
    assert code == 0 and json.loads(text)["result"]["density"] == "1/2"
    return "P1 = 2, density exactly 1/2, empirical(1000) = 1/2"


@criterion(5)
def test_c5_koiran_bound():
    rng = random.Random(20240605)
    cases = 0
    worst = Fraction(0)
    with mpmath.workprec(200):
        for _ in range(50):
            r = Fraction(rng.randint(1, 60), rng.randint(1, 12))
            c = r * Fraction(rng.randint(-999, 999), 1000)
            F = TrigPoly.cosine(c, r)
            q = kappa_hat(F)
            true = mpmath.acos(-mpf(c) / mpf(r)) / mpmath.pi
            for M in (10, 100, 1000):
                count, bound = grid_density(F, M)
                assert bound == Fraction(q, M)
                err = abs(mpmath.mpf(count) / M - true)
                # the bound is attained at c = 0, so compare at 200 bits with a rounding allowance
                assert err <= mpf(bound) + mpmath.mpf(2) ** -150, (c, r, M)
                worst = max(worst, Fraction(str(mpmath.nstr(err * M, 15))))
                cases += 1
    return f"{cases} (instance, M) pairs within q/M; worst M*error = {float(worst):.3f}"


@criterion(6)
def test_c6_oracle_agreement():
    rows = []
    for e in CORPUS:
        rep = approximate_density(e.seq, Fraction(1, 100))
        emp = empirical_density(e.seq, 100_000)
        gap = abs(rep.midpoint - emp)
        rows.append((e.name, float(gap)))
        assert gap <= Fraction(3, 100), (e.name, rep.lo, rep.hi, emp)
    worst = max(rows, key=lambda r: r[1])
    return f"{len(rows)} sequences, worst |approx - empirical| = {worst[1]:.4f} ({worst[0]})"


@criterion(7)
def test_c7_diagonalisable_finiteness():
    checked = 0
    for e in CORPUS:
        if not e.diagonalisable:
            continue
        d = finite_positivity_diagonalisable(e.seq)
        prof = sign_profile(e.seq, 1, 10_000)
        signs = prof.expand()
        positives = [n for n, s in enumerate(signs, start=1) if s > 0]
        if d == "finite":
            assert not positives or positives[-1] <= 1000, e.name
        else:
            assert d == "infinite", (e.name, d)
            assert positives and positives[-1] > 9000, e.name
        assert (d == "finite") == e.finite, e.name
        checked += 1
    return f"{checked} diagonalisable sequences agree with signs up to n = 10^4"


@criterion(8)
def test_c8_density_one():
    assert decide_density_one(FIB).decision == "yes"
    assert decide_density_one(negated(FIB)).decision == "no"
    z = decide_density_zero(SUP_ZERO)
    assert z.decision == "zero"
    assert all(r["method"] == "closed-form" for r in z.per_subsequence)
    forms = preprocess(SUP_ZERO).nonzero_forms
    assert forms and all(f.eta == 1 for f in forms)
    return "Fibonacci yes, negated Fibonacci no, sup-zero instance density 0 (closed form, eta = 1)"


def _exact_cos(k, n):
    """cos(k pi / n) as an exact algebraic number: a root of T_n - (-1)^k."""
    p = squarefree_part(chebyshev_T(n) - (-1) ** k)
    t = Interval.point(Fraction(k, 2 * n))
    return identify_root(p, lambda bits: CInterval(cos2pi(t, bits + 4), Interval.point(0)), True)


@criterion(9)
def test_c9_arccos_table():
    count = 0
    for n in range(1, 13):
        for k in range(n + 1):
            if math.gcd(k, n) == 1:
                assert arccos_rational_multiple(_exact_cos(k, n)) == Fraction(k, n), (k, n)
                count += 1
    for x in (Fraction(1, 3), Fraction(2, 3), Fraction(3, 5), Fraction(1, 7)):
        assert arccos_rational_multiple(AlgebraicNumber.from_rational(x)) is None
    return f"{count} table entries k/n recovered; 1/3, 2/3, 3/5, 1/7 absent"


@criterion(10)
def test_c10_monte_carlo():
    argv = ["density", "--monte-carlo", "--samples", "10000", "--seed", "2024", "--coeffs", "13,-65,125",
            "--init", "44,142,236"]
    a = run(argv)[1]
    assert a == run(argv)[1]
    for w in ("2", "4"):
        assert a == run(argv + ["--workers", w])[1]
    inside = 0
    for seed in range(100):
        rep = monte_carlo_sequence_density(EX3, 10_000, seed)
        if abs(mpf(rep.midpoint) - DELTA3) <= 0.02:
            inside += 1
    assert inside >= 95
    return f"byte-identical across runs and 1/2/4 threads; {inside}/100 runs within 0.02"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from lrsdensity.algebraic import AlgebraicNumber, identify_root
from lrsdensity.arith import chebyshev_T, squarefree_part
from lrsdensity.density import (
    approximate_density,
    arccos_rational_multiple,
    decide_density_one,
    decide_density_zero,
    decide_rational_one_pair,
    finite_positivity_diagonalisable,
    grid_density,
    hoeffding_table,
    monte_carlo_density,
    monte_carlo_sequence_density,
    negated,
)
from lrsdensity.intervals import CInterval, Interval, cos2pi
from lrsdensity.lrs import Lrs
from lrsdensity.oracle import empirical_density
from lrsdensity.trigpoly import TrigPoly

Q = Fraction
FIB = Lrs([1, 1], [1, 1])
ALT = Lrs([-1], [1])
EX2 = Lrs([Q(6, 5), -1], [Q(3, 5), Q(-7, 25)])
EX3 = Lrs([13, -65, 125], [44, 142, 236])
# Re((4+3i)^n) - 5^n: F = -1 + cos, sup F = 0
SUP_ZERO = Lrs([13, -65, 125], [-1, -18, -169])
# 2 Re((4+3i)^n) + (4/3)(-5)^n: classes contribute arccos(+-2/3)/pi, summing to 1/2
MIRROR = Lrs([3, 15, -125], [Q(4, 3), Q(142, 3), Q(-764, 3)])
DELTA3 = math.acos(-2 / 3) / math.pi
F3 = TrigPoly.cosine(4, 6)


def exact_cos(k, n):
    """cos(k pi / n) as the real root of T_n - (-1)^k near the numeric value."""
    p = squarefree_part(chebyshev_T(n) - (-1) ** k)
    t = Interval.point(Fraction(k, 2 * n))
    return identify_root(p, lambda bits: CInterval(cos2pi(t, bits + 4), Interval.point(0)), True)


def test_oracle_instances():
    assert SUP_ZERO[1] == 4 - 5 and MIRROR[1] == Q(4, 3)


def test_grid_example_half_open():
    # k/8, k = 0..7: cos(2 pi k/8) > -2/3 for k in {0, 1, 2, 6, 7}
    count, bound = grid_density(F3, 8)
    assert count == 5 and bound == Q(1, 8)
    assert abs(Q(count, 8) - Q(DELTA3)) <= bound


def test_grid_example_closed_convention():
    # the grid 0 <= k <= M counts k = 8 (the same torus point as k = 0) again
    count, bound = grid_density(F3, 8, closed=True)
    assert count == 6 and Q(count, 8) == Q(3, 4)
    assert abs(Q(count, 8) - Q(DELTA3)) <= bound


def test_grid_constants():
    one = TrigPoly.from_rationals(1, [((0, 0), (1,))][:0])
    assert grid_density(one, 5)[0] == 1
    plus = TrigPoly.from_rationals(2, [((Q(1, 2), 0), (1,)), ((Q(1, 2), 0), (-1,))])
    minus = TrigPoly.from_rationals(-2, [((Q(1, 2), 0), (1,)), ((Q(1, 2), 0), (-1,))])
    for M in (1, 7, 30):
        assert grid_density(plus, M)[0] == M
        assert grid_density(minus, M)[0] == 0


def test_grid_thread_determinism():
    F = TrigPoly.from_rationals(Q(1, 5), [((Q(1, 2), Q(1, 3)), (1, 0)), ((Q(1, 2), Q(-1, 3)), (-1, 0)),
                                          ((Q(1, 3), 0), (1, 2)), ((Q(1, 3), 0), (-1, -2))])
    assert grid_density(F, 64) == grid_density(F, 64, workers=4)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=30),
       st.fractions(min_value=Q(1, 2), max_value=4, max_denominator=30),
       st.sampled_from([10, 100, 1000]))
@settings(max_examples=60, deadline=None)
def test_koiran_bound_one_pair(c, r, M):
    if abs(c) >= r:
        c = c / (abs(c) / r + 1)
    F = TrigPoly.cosine(c, r)
    count, bound = grid_density(F, M)
    with mpmath.workprec(200):
        true = mpmath.acos(-mpmath.mpf(c.numerator) / c.denominator / (mpmath.mpf(r.numerator) / r.denominator)) / mpmath.pi
        # the bound is attained for c = 0, so compare at full precision
        err = abs(mpmath.mpf(count) / M - true) - mpmath.mpf(bound.numerator) / bound.denominator
        assert err <= mpmath.mpf(2) ** -150


def test_monte_carlo_examples():
    assert monte_carlo_density(TrigPoly.from_rationals(1, []), 100, 3)[0] == 1
    assert monte_carlo_density(F3, 1, 9)[0] in (0, 1)
    est, table = monte_carlo_density(F3, 10_000, 12345)
    assert abs(float(est) - DELTA3) < 0.02
    assert any(row["epsilon"] == Q(1, 50) and row["failure_probability"] <= 2 * math.exp(-8) for row in table)


def test_monte_carlo_reproducible():
    a = monte_carlo_density(F3, 5000, 42)
    b = monte_carlo_density(F3, 5000, 42, workers=3)
    c = monte_carlo_density(F3, 5000, 42, workers=2)
    assert a[0] == b[0] == c[0]


def test_hoeffding_formula():
    (row,) = hoeffding_table(10_000, [Q(1, 50)])
    assert row["failure_probability"] == pytest.approx(2 * math.exp(-8))


def test_approximate_example3():
    rep = approximate_density(EX3, Q(1, 200))
    assert rep.hi - rep.lo <= Q(1, 100)
    assert rep.contains(Q(DELTA3)) and rep.contains(Q("0.732279"))
    assert rep.method == "grid"


def test_approximate_alternating_exact():
    for eps in (Q(1, 2), Q(1, 1000)):
        rep = approximate_density(ALT, eps)
        assert rep.exact and rep.value == Q(1, 2)


def test_approximate_example2():
    rep = approximate_density(EX2, Q(1, 100))
    assert rep.contains(Q(1, 2))


def test_recombination_identity():
    rep = approximate_density(EX3, Q(1, 50))
    mids = sum((c.lo + c.hi) / 2 for c in rep.per_subsequence)
    assert rep.midpoint == mids / rep.P


def test_epsilon_range():
    with pytest.raises(ValueError):
        approximate_density(FIB, 0)


def test_monte_carlo_sequence():
    rep = monte_carlo_sequence_density(EX3, 10_000, 1)
    assert abs(float(rep.midpoint) - DELTA3) < 0.02
    assert rep.method == "monte-carlo"


def test_decide_one_fibonacci():
    assert decide_density_one(FIB).decision == "yes"
    assert decide_density_one(negated(FIB)).decision == "no"


def test_decide_zero_examples():
    assert decide_density_zero(EX3).decision == "positive"
    z = decide_density_zero(SUP_ZERO)
    assert z.decision == "zero"
    assert all(r["method"] == "closed-form" for r in z.per_subsequence)


def test_negation_duality():
    for s in (FIB, EX3, SUP_ZERO, ALT, Lrs([2], [-2])):
        one = decide_density_one(s).decision
        zero = decide_density_zero(negated(s)).decision
        assert (one == "yes") == (zero == "zero")


def test_decide_one_zero_class():
    # 0, 1, 0, -4, 0, 16, ... vanishes on a whole residue class
    assert decide_density_one(Lrs([0, -4], [0, 1])).decision == "no"


def test_branch_and_bound_two_axes():
    # -3 + cos a + cos b is negative everywhere; -1.5 + cos a + cos b is not
    def F(c):
        h = (Q(1, 2), 0)
        return TrigPoly.from_rationals(c, [(h, (1, 0)), (h, (-1, 0)), (h, (0, 1)), (h, (0, -1))])

    from lrsdensity.density import sup_positive

    assert sup_positive(F(-3)).positive is False
    assert sup_positive(F(Q(-3, 2))).positive is True
    r = sup_positive(F(-2), max_boxes=200)  # sup = 0 exactly: tangency
    assert r.positive is None and r.gap is not None


def test_finiteness():
    assert finite_positivity_diagonalisable(FIB) == "infinite"
    assert finite_positivity_diagonalisable(Lrs([2], [-2])) == "finite"
    assert finite_positivity_diagonalisable(EX3) == "infinite"
    assert finite_positivity_diagonalisable(Lrs([2, -1], [1, 2])) == "not-diagonalisable"


def test_arccos_examples():
    assert arccos_rational_multiple(AlgebraicNumber.from_rational(Q(1, 2))) == Q(1, 3)
    assert arccos_rational_multiple(AlgebraicNumber.from_rational(-1)) == 1
    assert arccos_rational_multiple(AlgebraicNumber.from_rational(Q(-2, 3))) is None


@pytest.mark.parametrize("n", range(1, 13))
def test_arccos_table(n):
    for k in range(n + 1):
        if math.gcd(k, n) == 1:
            assert arccos_rational_multiple(exact_cos(k, n)) == Q(k, n)


@pytest.mark.parametrize("x", [Q(1, 3), Q(2, 3), Q(3, 5), Q(1, 7)])
def test_arccos_absent(x):
    assert arccos_rational_multiple(AlgebraicNumber.from_rational(x)) is None


def test_arccos_domain():
    with pytest.raises(ValueError):
        arccos_rational_multiple(AlgebraicNumber.from_rational(2))


def test_rational_examples():
    r2 = decide_rational_one_pair(EX2)
    assert r2.decision == "rational" and r2.value == Q(1, 2)
    r3 = decide_rational_one_pair(EX3)
    assert r3.decision == "irrational" and r3.approx == pytest.approx(DELTA3)
    assert decide_rational_one_pair(ALT).value == Q(1, 2)


def test_rational_mirror_pair():
    r = decide_rational_one_pair(MIRROR)
    assert r.decision == "rational" and r.value == Q(1, 2)
    assert abs(float(empirical_density(MIRROR, 20_000)) - 0.5) < 0.02


def test_rational_not_applicable():
    s = Lrs([78 + 50, -(65**2 * 2 + 78 * 50), (78 + 50) * 65**2, -(65**4)], [1, 2, 3, 4])
    assert decide_rational_one_pair(s).decision == "not-applicable"

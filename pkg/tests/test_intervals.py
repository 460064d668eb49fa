from fractions import Fraction as Fr

import mpmath
from hypothesis import given, strategies as st

from lrsdensity.intervals import CInterval, Interval, arccos_over_pi, cos2pi, pi_interval, sin2pi

fr = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def exact(x):
    sign, man, exp, _ = x._mpf_
    v = Fr(int(man)) * Fr(2) ** int(exp)
    return -v if sign else v


def iv(a, b):
    return Interval(min(a, b), max(a, b))


@given(fr, fr, fr, fr, st.floats(0, 1), st.floats(0, 1))
def test_field_ops_enclose(a, b, c, d, s, t):
    x, y = iv(a, b), iv(c, d)
    px = x.lo + Fr(s) * x.width
    py = y.lo + Fr(t) * y.width
    assert (x + y).contains(px + py)
    assert (x - y).contains(px - py)
    assert (x * y).contains(px * py)
    if y.sign() is not None:
        assert (x / y).contains(px / py)
    assert (x**2).contains(px**2)
    assert (x**3).contains(px**3)


@given(fr, fr)
def test_rounded_is_outward(a, b):
    x = iv(a, b)
    r = x.rounded(8)
    assert r.contains(x)
    assert r.lo.denominator <= 256 and r.hi.denominator <= 256


@given(st.fractions(min_value=0, max_value=100, max_denominator=30))
def test_sqrt(a):
    r = Interval.point(a).sqrt(40)
    assert r.lo**2 <= a <= r.hi**2
    assert r.width <= Fr(1, 1 << 39)


def test_pi():
    p = pi_interval(100)
    assert p.width < Fr(1, 1 << 90)
    # 31 correct digits either side
    assert p.lo < Fr(3141592653589793238462643383280, 10**30)
    assert p.hi > Fr(3141592653589793238462643383279, 10**30)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=97))
def test_cos_sin_enclose(t):
    c = cos2pi(Interval.point(t), 60)
    s = sin2pi(Interval.point(t), 60)
    with mpmath.workprec(200):
        cv = mpmath.cos(2 * mpmath.pi * mpmath.mpf(t.numerator) / t.denominator)
        sv = mpmath.sin(2 * mpmath.pi * mpmath.mpf(t.numerator) / t.denominator)
        assert c.lo <= exact(cv) <= c.hi
        assert s.lo <= exact(sv) <= s.hi
    assert c.width < Fr(1, 1 << 50)


def test_cos_exact_points():
    assert cos2pi(Interval.point(0)).contains(1)
    assert cos2pi(Interval.point(Fr(1, 2))).contains(-1)
    assert cos2pi(Interval(Fr(0), Fr(1))).contains(Interval(Fr(-1), Fr(1)))


def test_arccos_over_pi():
    a = arccos_over_pi(Interval.point(Fr(-2, 3)), 80)
    assert a.width < Fr(1, 1 << 70)
    assert abs(float(a.mid) - 0.732279527198770) < 1e-14
    assert arccos_over_pi(Interval.point(0)).contains(Fr(1, 2))


def test_complex_ops():
    z = CInterval.point(Fr(3, 5), Fr(4, 5))
    assert (z * z.conj()).contains(1, 0)
    w = z**5
    assert abs(complex(w) - complex(0.6, 0.8) ** 5) < 1e-12
    assert (1 / z).contains(Fr(3, 5), Fr(-4, 5))
    assert z.abs2().contains(1)

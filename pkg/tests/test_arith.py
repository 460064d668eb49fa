from fractions import Fraction as Fr

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lrsdensity.arith import (
    RatPoly,
    chebyshev_T,
    composed_defining_poly,
    cyclotomic,
    poly_gcd,
    power_poly,
    rational_function_of_root,
    resultant,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
    totient,
    totient_search_bound,
)
from lrsdensity.errors import EndpointRootError

X = sympy.Symbol("x")


def to_sympy(p: RatPoly):
    return sympy.Poly(list(reversed(p.coeffs)) or [0], X, domain="QQ")


def from_sympy(e) -> RatPoly:
    return RatPoly(Fr(str(c)) for c in reversed(sympy.Poly(e, X).all_coeffs()))


def sylvester_det(a: RatPoly, b: RatPoly):
    m, n = a.degree, b.degree
    fa, fb = list(reversed(a.coeffs)), list(reversed(b.coeffs))
    rows = [[0] * i + fa + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + fb + [0] * (m - 1 - i) for i in range(m)]
    return sympy.Matrix(rows).det()


rat = st.fractions(min_value=-20, max_value=20, max_denominator=7)
polys = st.lists(rat, min_size=1, max_size=6).map(RatPoly)
nonzero = polys.filter(lambda p: not p.is_zero())


@given(polys, nonzero)
def test_divrem_identity(a, b):
    q, r = a.divrem(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(nonzero, nonzero)
@settings(max_examples=60)
def test_gcd_matches_sympy(a, b):
    g = poly_gcd(a, b)
    expect = sympy.gcd(to_sympy(a), to_sympy(b)).monic()
    assert g == from_sympy(expect.as_expr())


@given(polys.filter(lambda p: p.degree >= 1), polys.filter(lambda p: p.degree >= 1))
@settings(max_examples=60)
def test_resultant_matches_sylvester(a, b):
    # sympy.resultant mishandles the sign when b has zero trailing coefficients,
    # so the oracle is the Sylvester determinant itself
    assert resultant(a, b) == Fr(str(sylvester_det(a, b)))


def test_resultant_example():
    # res(x^2 - 2, x - 1) = (1 - 2) = -1 with this orientation
    assert resultant(RatPoly((-2, 0, 1)), RatPoly((-1, 1))) == -1


def test_squarefree_decomposition():
    p = RatPoly.from_roots([1, 1, 2, 3, 3, 3])
    dec = squarefree_decomposition(p)
    assert dec == [(RatPoly.from_roots([2]), 1), (RatPoly.from_roots([1]), 2), (RatPoly.from_roots([3]), 3)]
    assert squarefree_part(p) == RatPoly.from_roots([1, 2, 3])


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4).map(RatPoly).filter(lambda p: p.degree >= 1))
@settings(max_examples=60)
def test_sturm_count_vs_sympy(p):
    p = squarefree_part(p)
    lo, hi = Fr(-13, 3), Fr(29, 7)
    if p(lo) == 0 or p(hi) == 0:
        return
    roots = [r for r in sympy.real_roots(to_sympy(p)) if lo < r < hi]
    assert sturm_count(p, lo, hi) == len(roots)


def test_sturm_endpoint_root():
    with pytest.raises(EndpointRootError):
        sturm_count(RatPoly((-1, 1)), 0, 1)


def test_sturm_x2_minus_2():
    p = RatPoly((-2, 0, 1))
    assert sturm_count(p, 0, 2) == 1
    assert sturm_count(p, -2, 2) == 2


def test_composed_sum_and_product():
    s2 = RatPoly((-2, 0, 1))
    s3 = RatPoly((-3, 0, 1))
    # sqrt2 + sqrt3 has minimal polynomial x^4 - 10x^2 + 1
    assert composed_defining_poly(s2, s3, "sum") == RatPoly((1, 0, -10, 0, 1))
    # products of +-sqrt2, +-sqrt3 are +-sqrt6 twice
    assert composed_defining_poly(s2, s3, "product") == RatPoly((-6, 0, 1)) ** 2
    # ratios of roots of x^2 - 2 with themselves: 1, 1, -1, -1
    assert composed_defining_poly(s2, s2, "ratio") == RatPoly((-1, 0, 1)) ** 2


@given(
    st.lists(st.integers(-4, 4), min_size=2, max_size=4).map(RatPoly).filter(lambda p: p.degree >= 1),
    st.lists(st.integers(-4, 4), min_size=2, max_size=3).map(RatPoly).filter(lambda p: p.degree >= 1),
)
@settings(max_examples=40, deadline=None)
def test_composed_sum_matches_resultant(p, q):
    # roots of p(x - y), q(y) eliminated in y
    y = sympy.Symbol("y")
    pe = to_sympy(p).as_expr().subs(X, X - y)
    qe = to_sympy(q).as_expr().subs(X, y)
    expect = sympy.Poly(sympy.resultant(pe, qe, y), X).monic()
    assert composed_defining_poly(p, q, "sum") == from_sympy(expect.as_expr())


def test_power_poly():
    # squares of roots of x^2 - x - 1 (golden ratio): x^2 - 3x + 1
    assert power_poly(RatPoly((-1, -1, 1)), 2) == RatPoly((1, -3, 1))
    assert power_poly(RatPoly((-2, 1)), -1) == RatPoly((Fr(-1, 2), 1))


def test_rational_function_of_root():
    g = RatPoly((-2, 0, 1))
    # y -> (y + 1)/(y - 1) on +-sqrt2 gives 3 +- 2 sqrt2 -> x^2 - 6x + 1
    out = rational_function_of_root(g, RatPoly((1, 1)), RatPoly((-1, 1)))
    assert out == RatPoly((1, -6, 1))


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_product(n):
    prod = RatPoly((1,))
    for d in range(1, n + 1):
        if n % d == 0:
            prod = prod * cyclotomic(d)
    assert prod == RatPoly.monomial(n) - 1
    assert cyclotomic(n).degree == totient(n)
    assert cyclotomic(n) == from_sympy(sympy.cyclotomic_poly(n, X))


def test_cyclotomic_small():
    assert cyclotomic(1) == RatPoly((-1, 1))
    assert cyclotomic(4) == RatPoly((1, 0, 1))
    assert cyclotomic(6) == RatPoly((1, -1, 1))


@pytest.mark.parametrize("m,n", [(m, n) for m in range(0, 6) for n in range(0, 6)])
def test_chebyshev_composition(m, n):
    assert chebyshev_T(m).compose(chebyshev_T(n)) == chebyshev_T(m * n)


def test_chebyshev_values():
    assert chebyshev_T(2) == RatPoly((-1, 0, 2))
    assert chebyshev_T(3) == RatPoly((0, -3, 0, 4))
    # T_n(1) = 1 and T_n(-1) = (-1)^n
    for n in range(12):
        assert chebyshev_T(n)(Fr(1)) == 1
        assert chebyshev_T(n)(Fr(-1)) == (-1) ** n


def test_totient_and_search_bound():
    assert [totient(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    for d in range(1, 15):
        b = totient_search_bound(d)
        assert totient(b) <= 2 * d
        assert all(totient(n) > 2 * d for n in range(b + 1, 8 * d * d + 100))
    assert totient_search_bound(1) == 6


def test_shift_scale_compose():
    p = RatPoly((1, 2, 3))
    assert p.shift(2) == p.compose(RatPoly((2, 1)))
    assert p.scale_arg(Fr(1, 2)) == p.compose(RatPoly((0, Fr(1, 2))))
    assert p.primitive() == RatPoly((1, 2, 3))
    assert RatPoly((Fr(1, 2), Fr(-3, 4))).primitive() == RatPoly((-2, 3))


def test_float_rejected():
    with pytest.raises(TypeError):
        RatPoly((0.5,))

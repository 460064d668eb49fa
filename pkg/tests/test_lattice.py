import random
from fractions import Fraction as Fr

import mpmath
import numpy as np
from hypothesis import given, settings, strategies as st

from lrsdensity.lattice import (
    angle_relations,
    hermite_basis,
    in_lattice,
    integer_kernel,
    lll_reduce,
    saturation_exponent,
)


def det(rows):
    return round(np.linalg.det(np.array(rows, dtype=float)))


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_lll_preserves_lattice_and_shortens(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    while True:
        rows = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        if det(rows) != 0:
            break
    red = lll_reduce(rows)
    assert abs(det(red)) == abs(det(rows))
    for v in red:
        assert in_lattice(hermite_basis(rows), v)
    # first vector obeys the LLL bound |b1|^2 <= 2^(n-1) lambda1^2 <= 2^(n-1) |any row|^2
    n1 = sum(x * x for x in red[0])
    assert n1 <= 2 ** (n - 1) * min(sum(x * x for x in r) for r in rows)


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_kernel(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 5)
    r = rng.randint(1, m - 1)
    B = [[rng.randint(-4, 4) for _ in range(m)] for _ in range(r)]
    K = integer_kernel(B, m)
    rank = np.linalg.matrix_rank(np.array(B, dtype=float))
    assert len(K) == m - rank
    for v in K:
        assert all(sum(b * x for b, x in zip(row, v)) == 0 for row in B)
    # saturated: any integer kernel vector from small search lies in span_Z(K)
    for _ in range(50):
        x = [rng.randint(-3, 3) for _ in range(len(K))]
        v = [sum(x[i] * K[i][j] for i in range(len(K))) for j in range(m)]
        w = [t // 1 for t in v]
        assert in_lattice(K, w)


def test_kernel_saturated_example():
    # kernel of (2, -2) is spanned by (1, 1), not by (2, 2)
    assert integer_kernel([[2, -2]], 2) == [[1, 1]]
    assert integer_kernel([[1, 1]], 2) in ([[1, -1]], [[-1, 1]])


def test_saturation_exponent():
    assert saturation_exponent([[1, 1]], 2) == 1
    assert saturation_exponent([[2, 2]], 2) == 2
    assert saturation_exponent([[2, 0], [0, 3]], 2) == 6
    assert saturation_exponent([[1, 0], [0, 4]], 2) == 4
    assert saturation_exponent([], 3) == 1


def test_hermite_and_membership():
    b = hermite_basis([[2, 4], [4, 2], [6, 6]])
    assert in_lattice(b, [2, 4]) and in_lattice(b, [6, 6])
    assert not in_lattice(b, [1, 1])
    assert abs(det(b)) == 12


def test_angle_relations_finds_planted():
    mpmath.mp.prec = 300
    t1 = mpmath.sqrt(2) - 1
    t2 = mpmath.sqrt(3) - 1
    t3 = (3 * t1 - 2 * t2 + 5) % 1  # 3 t1 - 2 t2 - t3 = integer
    rels = angle_relations([t1, t2, t3], 256, 20)
    assert any(r in ([3, -2, -1], [-3, 2, 1]) for r in rels)
    assert angle_relations([t1, t2], 256, 20) == []
    mpmath.mp.prec = 53


def test_angle_relations_rational():
    rels = angle_relations([mpmath.mpf(1) / 4], 128, 20)
    assert rels in ([[4]], [[-4]])

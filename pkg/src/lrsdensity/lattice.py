"""Integer lattices: exact LLL, Hermite bases, kernels, saturation."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import mpmath

__all__ = [
    "lll_reduce",
    "hermite_basis",
    "integer_kernel",
    "saturation_exponent",
    "in_lattice",
    "angle_relations",
]

Vec = list[int]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(3, 4)) -> list[Vec]:
    """LLL-reduce linearly independent integer rows with exact rational Gram-Schmidt."""
    b = [list(map(int, v)) for v in basis]
    n = len(b)
    if n == 0:
        return []

    def gso():
        bstar: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _dot(b[i], bstar[j]) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(_dot(v, v))
        return mu, norms

    mu, norms = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b


def _row_echelon(rows: list[Vec], ncols: int) -> list[Vec]:
    """Integer row echelon form by Euclidean row operations (unimodular)."""
    rows = [list(r) for r in rows]
    r = 0
    for c in range(ncols):
        piv = [i for i in range(r, len(rows)) if rows[i][c] != 0]
        if not piv:
            continue
        while True:
            piv = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if len(piv) <= 1:
                break
            i0 = min(piv, key=lambda i: abs(rows[i][c]))
            for i in piv:
                if i != i0:
                    q = rows[i][c] // rows[i0][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[i0])]
        if piv:
            i0 = piv[0]
            rows[r], rows[i0] = rows[i0], rows[r]
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            r += 1
    return rows


def hermite_basis(vectors: Sequence[Sequence[int]]) -> list[Vec]:
    """Basis (Hermite normal form rows) of the lattice generated by the vectors."""
    if not vectors:
        return []
    m = len(vectors[0])
    rows = _row_echelon([list(map(int, v)) for v in vectors], m)
    return [r for r in rows if any(r)]


def integer_kernel(B: Sequence[Sequence[int]], m: int) -> list[Vec]:
    """Basis of {x in Z^m : B x = 0}; the kernel of an integer matrix is saturated."""
    r = len(B)
    if r == 0:
        return [[int(i == j) for j in range(m)] for i in range(m)]
    # rows of [B^T | I]; reduce on the B^T part, zero rows give kernel vectors
    aug = [[int(B[i][j]) for i in range(r)] + [int(j == t) for t in range(m)] for j in range(m)]
    red = _row_echelon(aug, r)
    kern = [row[r:] for row in red if not any(row[:r])]
    return hermite_basis(kern) if kern else []


def _solve_rational(basis: list[Vec], v: Vec) -> list[Fraction] | None:
    """Coefficients x with sum x_i basis_i = v, or None if v is outside the span."""
    n, m = len(basis), len(v)
    # columns = basis vectors; solve by Gaussian elimination over Q
    A = [[Fraction(basis[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(m)]
    piv_cols = []
    row = 0
    for c in range(n):
        p = next((i for i in range(row, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][c]
        A[row] = [x * inv for x in A[row]]
        for i in range(m):
            if i != row and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[row])]
        piv_cols.append(c)
        row += 1
    for i in range(row, m):
        if A[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = A[i][n]
    return x


def in_lattice(basis: list[Vec], v: Sequence[int]) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    x = _solve_rational(basis, list(v))
    return x is not None and all(t.denominator == 1 for t in x)


def saturation_exponent(basis: list[Vec], m: int) -> int:
    """Exponent of the finite group sat(L)/L: least e with e*sat(L) inside L."""
    if not basis:
        return 1
    K = integer_kernel(basis, m)
    sat = integer_kernel(K, m) if K else [[int(i == j) for j in range(m)] for i in range(m)]
    e = 1
    for v in sat:
        x = _solve_rational(basis, v)
        if x is None:
            raise ValueError("saturation vector outside the rational span")
        for t in x:
            e = lcm(e, t.denominator)
    return e


def angle_relations(thetas: Sequence, prec_bits: int, bound: int) -> list[Vec]:
    """Candidate integer vectors r with sum r_i theta_i close to an integer.

    LLL on the rows [e_i | K theta_i] and [0 | K], K = 2^(prec_bits*3/4);
    rows of the reduced basis with tiny last coordinate and entries within
    bound are returned (candidates only; callers verify exactly).
    """
    m = len(thetas)
    if m == 0:
        return []
    K = 1 << (3 * prec_bits // 4)
    with mpmath.workprec(prec_bits + 20):
        scaled = [int(mpmath.nint(K * mpmath.mpf(t))) for t in thetas]
    rows = [[int(i == j) for j in range(m)] + [0, scaled[i]] for i in range(m)]
    rows.append([0] * m + [1, K])
    red = lll_reduce(rows)
    out = []
    tol = max(1, m * bound * 4)
    for row in red:
        r = row[:m]
        if not any(r) or max(abs(x) for x in r) > bound:
            continue
        if abs(row[m + 1]) <= tol:
            out.append(r)
    return out

"""Direct evaluation oracles: empirical densities and sign profiles.

Terms are computed in integers. With D the lcm of the coefficient
denominators and L that of the initial terms, v_n = L D^n u_n satisfies an
integer recurrence and has the sign of u_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .lrs import Lrs


def _scaled(seq: Lrs) -> tuple[list[int], list[int]]:
    D = math.lcm(*(c.denominator for c in seq.coeffs))
    L = math.lcm(*(u.denominator for u in seq.initials))
    b = [int(c * D ** (j + 1)) for j, c in enumerate(seq.coeffs)]
    v = [int(u * L) * D ** (n + 1) for n, u in enumerate(seq.initials)]
    return b, v


def signs(seq: Lrs, count: int, start: int = 1) -> Iterator[int]:
    """sgn(u_n) for n = start, ..., start + count - 1."""
    if start < 1:
        raise ValueError("sequences are indexed from 1")
    b, window = _scaled(seq)
    k = len(b)
    end = start + count
    for n in range(1, end):
        if n > k:
            x = sum(bj * window[-1 - j] for j, bj in enumerate(b))
            window.append(x)
            del window[0]
        else:
            x = window[n - 1]
        if n >= start:
            yield (x > 0) - (x < 0)


def empirical_density(seq: Lrs, N: int) -> Fraction:
    """#{1 <= n <= N : u_n > 0} / N."""
    if N < 1:
        raise ValueError("N must be positive")
    return Fraction(sum(1 for s in signs(seq, N) if s > 0), N)


@dataclass(frozen=True)
class SignProfile:
    """Run-length encoded signs of u_start .. u_stop."""

    start: int
    stop: int
    runs: tuple[tuple[int, int], ...]  # (sign, length)

    def expand(self) -> list[int]:
        return [s for s, m in self.runs for _ in range(m)]

    def to_json(self) -> dict:
        sym = {1: "+", 0: "0", -1: "-"}
        return {"from": self.start, "to": self.stop,
                "runs": [[sym[s], m] for s, m in self.runs]}

    def __str__(self):
        sym = {1: "+", 0: "0", -1: "-"}
        return " ".join(f"{sym[s]}{m}" for s, m in self.runs)


def sign_profile(seq: Lrs, start: int, stop: int) -> SignProfile:
    if stop < start:
        raise ValueError("empty index range")
    runs: list[list[int]] = []
    for s in signs(seq, stop - start + 1, start):
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    return SignProfile(start, stop, tuple((s, m) for s, m in runs))

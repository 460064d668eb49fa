"""Input validation shared by the estimator and the CLI."""

from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Any, Iterable

from .jsonio import parse_rational
from .loop import loop_to_lrs, parse_loop
from .lrs import Lrs


def check_rational(x: Any, name: str = "value") -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, float)) or (isinstance(x, numbers.Number) and not isinstance(x, numbers.Rational)):
        raise TypeError(f"{name} must be an exact rational, got {type(x).__name__} {x!r}")
    try:
        return parse_rational(x)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"{name}: {e}") from None


def check_epsilon(eps: Any) -> Fraction:
    e = check_rational(eps, "epsilon")
    if not 0 < e < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {e}")
    return e


def check_positive_int(n: Any, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def check_nonnegative_int(n: Any, name: str) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def check_choice(x: Any, name: str, choices: Iterable[str]) -> str:
    choices = tuple(choices)
    if x not in choices:
        raise ValueError(f"{name} must be one of {choices}, got {x!r}")
    return x


def check_sequence(obj: Any) -> Lrs:
    """An Lrs from an Lrs, a {"coeffs", "init"} or {"loop"} mapping, a (coeffs, init) pair or loop source."""
    if isinstance(obj, Lrs):
        return obj
    if isinstance(obj, str):
        return loop_to_lrs(parse_loop(obj))
    if isinstance(obj, dict):
        if "loop" in obj:
            return loop_to_lrs(parse_loop(obj["loop"]))
        missing = {"coeffs", "init"} - set(obj)
        if missing:
            raise ValueError(f"sequence mapping lacks {sorted(missing)}")
        coeffs, init = obj["coeffs"], obj["init"]
    elif isinstance(obj, (tuple, list)) and len(obj) == 2:
        coeffs, init = obj
    else:
        raise TypeError(f"cannot interpret {type(obj).__name__} as a linear recurrence sequence")
    coeffs = [check_rational(c, "coefficient") for c in coeffs]
    init = [check_rational(u, "initial term") for u in init]
    return Lrs(coeffs, init)


def check_sequences(X: Any) -> list[Lrs]:
    if isinstance(X, (str, dict, Lrs)):
        raise TypeError("expected a collection of sequences; wrap a single sequence in a list")
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected an iterable of sequences, got {type(X).__name__}") from None
    if not items:
        raise ValueError("no sequences given")
    return [check_sequence(s) for s in items]

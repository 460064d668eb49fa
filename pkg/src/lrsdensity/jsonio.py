"""Deterministic JSON encoding.

A Fraction under key k is written as k: "p/q" together with
k_decimal: 12 significant digits (advisory). Lists of Fractions get a
parallel k_decimal list. Objects with a to_json() method are expanded.
"""

from __future__ import annotations

import dataclasses
import decimal
import enum
import json
from fractions import Fraction
from typing import Any

SCHEMA_ID = "lrs-density/1"


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 12) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator)
        return format(d, f".{digits}g")


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise TypeError(f"exact rational expected, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    s = str(s).strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"not a rational p/q: {s!r}")
    return Fraction(s)


def _is_frac(x) -> bool:
    return isinstance(x, Fraction) and not isinstance(x, bool)


def to_plain(obj: Any) -> Any:
    if hasattr(obj, "to_json") and not isinstance(obj, type):
        return to_plain(obj.to_json())
    if _is_frac(obj):
        return rational_str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            k = str(k)
            out[k] = to_plain(v)
            if _is_frac(v):
                out[k + "_decimal"] = decimal_str(v)
            elif isinstance(v, (list, tuple)) and v and all(_is_frac(x) for x in v):
                out[k + "_decimal"] = [decimal_str(x) for x in v]
        return out
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if dataclasses.is_dataclass(obj):
        return to_plain({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_plain(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"

"""Stable JSON emission.

Reports must be byte-identical across runs with the same inputs, so every
dict is dumped with sorted keys and a fixed separator convention.  Floats go
through repr (shortest round-trip form), which is deterministic on every
CPython we target.
"""

from __future__ import annotations

import json
from fractions import Fraction


def stable_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def stable_dumps_pretty(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)


def rat_str(x) -> str:
    """Canonical rational string: 'a/b' with '/b' omitted when b == 1."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def parse_rat(s) -> Fraction:
    from .errors import ArgumentError

    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ArgumentError("not a rational: %r" % (s,)) from exc

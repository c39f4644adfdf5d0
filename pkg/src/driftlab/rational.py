"""Exact rational arithmetic backend.

Uses gmpy2.mpq when available (much faster), falling back to
fractions.Fraction.  Everything in the engine except the float-only
series diagnostics goes through this type.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Q

ZERO = Q(0)
ONE = Q(1)


def rat(text) -> "Q":
    """Parse a rational from an int or a 'p/q' / 'p' string."""
    if isinstance(text, int):
        return Q(text)
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Q(int(num), int(den))
    return Q(int(s))


def rat_str(x) -> str:
    """Serialize a rational as 'p/q' (denominator always present)."""
    return f"{x.numerator}/{x.denominator}"

"""Exact rational arithmetic backend.

gmpy2.mpq is used when available (much faster for large solves); the stdlib
Fraction is the fallback. Both are numbers.Rational, interoperate in
arithmetic and comparisons, and convert losslessly to Fraction at public
boundaries via to_fraction().
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as rational

    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    rational = Fraction
    BACKEND = "fractions"


def to_fraction(x) -> Fraction:
    """Convert a backend rational (or int) to a stdlib Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator))

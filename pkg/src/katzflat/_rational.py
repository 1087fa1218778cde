"""Exact rational coefficient backend.

Coefficients are ``gmpy2.mpq`` when gmpy2 is importable, otherwise
``fractions.Fraction``.  Set ``KATZFLAT_RATIONAL=fraction`` to force the
pure-Python path (useful for benchmarking and for checking that nothing
depends on the backend).
"""

import os
from fractions import Fraction

_requested = os.environ.get("KATZFLAT_RATIONAL", "auto").strip().lower()

if _requested not in ("auto", "gmpy2", "fraction"):
    raise ImportError(f"KATZFLAT_RATIONAL must be auto, gmpy2 or fraction, got {_requested!r}")

Q = Fraction
BACKEND = "fraction"

if _requested in ("auto", "gmpy2"):
    try:
        from gmpy2 import mpq as Q  # noqa: N812
        BACKEND = "gmpy2"
    except ImportError:
        if _requested == "gmpy2":
            raise

ZERO = Q(0)
ONE = Q(1)


def to_rational(value):
    """Coerce int, Fraction, mpq or a ``"p/q"`` string to the active type."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    return Q(value)


def rational_str(value):
    """Always ``p/q``, including for integers."""
    f = Fraction(int(value.numerator), int(value.denominator))
    return f"{f.numerator}/{f.denominator}"

"""Exact rational values and their canonical text form.

Rationals serialize as "p/q" in lowest terms with q >= 1, always with the
slash, so formatting and parsing round-trip byte for byte.
"""

from fractions import Fraction

from znrank.errors import InputFormatError

EXACT = "exact"
FLOAT = "float"


def parse_rational(token, line=None):
    """Parse "3", "3/4" or "0.5" into a Fraction. Decimal strings are read
    with decimal semantics, so "0.1" is exactly 1/10."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"bad number {token!r}: {exc}", line=line) from None


def format_rational(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def number_to_json(x, mode):
    if mode == EXACT:
        return format_rational(x)
    return float(x)


def json_to_number(value, mode, line=None):
    """Read a JSON scalar (number or "p/q" string) in the given mode."""
    if isinstance(value, str):
        x = parse_rational(value, line=line)
    elif isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise InputFormatError(f"expected a number, got {value!r}", line=line)
    else:
        x = value
    if mode == EXACT:
        return Fraction(x)
    return float(x)

"""Exact decimal rendering helpers.

All simulation arithmetic runs on integers and fractions.Fraction so that
reports are reproducible byte for byte; floats never reach a report. These
helpers turn exact values into the short decimal strings used in report
rows (frequencies, chain scores, currency amounts).
"""

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

MILLI = 1000  # internal currency scale: 1 unit == 1000 milli-units


def format_sig(value: Rational, digits: int = 5) -> str:
    """Render a rational to `digits` significant digits, round half up.

    Trailing zeros after the decimal point are stripped, so Fraction(20, 41)
    renders as "0.4878" and Fraction(1, 41) as "0.02439". Integers that fit
    in `digits` digits render without a decimal point.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    value = Fraction(value)
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    v = -value if value < 0 else value

    # exponent e: number of digits before the decimal point (may be <= 0)
    e = 0
    while v >= 10 ** e:
        e += 1
    while v < 10 ** (e - 1):
        e -= 1

    # round half up at `digits` significant digits
    scaled = v * Fraction(10) ** (digits - e)
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    if q >= 10 ** digits:  # rounding carried into a new digit (e.g. 99999.5)
        q //= 10
        e += 1

    mantissa = str(q)
    if e >= digits:
        text = mantissa + "0" * (e - digits)
    elif e > 0:
        text = mantissa[:e] + "." + mantissa[e:]
    else:
        text = "0." + "0" * (-e) + mantissa
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return sign + text


def milli_to_str(amount: int) -> str:
    """Render an integer milli-unit amount as a decimal currency string.

    1000 -> "1", 1100 -> "1.1", 100 -> "0.1", 0 -> "0".
    """
    sign = "-" if amount < 0 else ""
    amount = abs(amount)
    whole, frac = divmod(amount, MILLI)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}." + f"{frac:03d}".rstrip("0")


def units(value: Union[int, float, str]) -> int:
    """Parse a decimal currency amount into integer milli-units.

    Accepts ints (whole units), strings like "1.1" or "0.1", and floats
    that are exact in milli (0.1, 2.5). Raises on sub-milli precision.
    """
    if isinstance(value, int):
        return value * MILLI
    text = repr(value) if isinstance(value, float) else str(value)
    if text.startswith("-"):
        return -units(text[1:])
    whole, _, frac = text.partition(".")
    frac = (frac + "000")[:3] if len(frac) <= 3 else frac
    if len(frac) > 3 and set(frac[3:]) != {"0"}:
        raise ValueError(f"amount {value!r} is finer than milli-unit precision")
    return int(whole or "0") * MILLI + int(frac[:3] or "0")

"""Integer minor-unit currency arithmetic.

All monetary amounts in the toolkit are plain ``int`` counts of the minor
currency unit (e.g. fen for CNY, scale 2).  Files and rendered reports use
major-unit decimal strings; conversion happens only at the I/O boundary so
the arithmetic in between is exact.
"""

from decimal import Decimal, InvalidOperation, ROUND_HALF_UP

from .errors import ValidationError

# Minor units per major unit (scale 2: cents, fen, ...).
MINOR_PER_MAJOR = 100

_CENT = Decimal(1).scaleb(-2)


def to_minor(amount: Decimal | int | str) -> int:
    """Convert a major-unit amount to integer minor units, exactly.

    Raises ValidationError if the amount has a sub-minor-unit remainder
    (e.g. "26.999" at scale 2) or cannot be parsed.
    """
    try:
        major = Decimal(amount)
    except InvalidOperation as exc:
        raise ValidationError(f"not a decimal amount: {amount!r}") from exc
    if not major.is_finite():
        raise ValidationError(f"not a finite amount: {amount!r}")
    minor = major * MINOR_PER_MAJOR
    if minor != minor.to_integral_value():
        raise ValidationError(
            f"amount {major} has a sub-minor-unit remainder (scale {MINOR_PER_MAJOR})"
        )
    return int(minor)


def from_minor(minor: int) -> Decimal:
    """Minor units back to a major-unit Decimal (two places)."""
    return (Decimal(minor) / MINOR_PER_MAJOR).quantize(_CENT)


def round_half_up(value: Decimal) -> int:
    """Round a Decimal amount of minor units to an integer, half away from zero."""
    return int(value.to_integral_value(rounding=ROUND_HALF_UP))


def format_major(minor: int, currency_code: str = "") -> str:
    """Human-readable major-unit string with thousands separators."""
    text = f"{from_minor(minor):,.2f}"
    return f"{text} {currency_code}".rstrip()


def major_str(minor: int) -> str:
    """Machine-readable major-unit string (no separators), e.g. '1587786926.00'."""
    return f"{from_minor(minor):.2f}"


def to_millions(minor: int) -> Decimal:
    """Major-unit millions at one decimal place (reporting precision)."""
    major = Decimal(minor) / MINOR_PER_MAJOR
    return (major / 1_000_000).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)

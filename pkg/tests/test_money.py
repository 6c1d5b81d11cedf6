"""Tests for vamkit.money minor-unit arithmetic."""

from decimal import Decimal

import pytest

from vamkit.money import (
    format_major,
    from_minor,
    major_str,
    round_half_up,
    to_millions,
    to_minor,
)
from vamkit.errors import ValidationError


# -------------------------------------------------------------------------
# Conversions
# -------------------------------------------------------------------------


class TestToMinor:
    def test_whole_amount(self):
        assert to_minor("149.00") == 14_900

    def test_string_without_fraction(self):
        assert to_minor("1587786926") == 158_778_692_600

    def test_fractional_fen(self):
        assert to_minor("26.90") == 2_690

    def test_sub_minor_remainder_rejected(self):
        with pytest.raises(ValidationError, match="sub-minor"):
            to_minor("26.999")

    def test_junk_rejected(self):
        with pytest.raises(ValidationError, match="not a decimal"):
            to_minor("about a hundred")

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError, match="finite"):
            to_minor("Infinity")

    def test_negative_allowed(self):
        # Sign handling is the caller's concern; conversion stays exact.
        assert to_minor("-0.01") == -1


class TestFromMinor:
    def test_round_trip(self):
        assert from_minor(2_690) == Decimal("26.90")
        assert to_minor(from_minor(123_456_789)) == 123_456_789

    def test_two_places(self):
        assert str(from_minor(5)) == "0.05"


# -------------------------------------------------------------------------
# Rounding and rendering
# -------------------------------------------------------------------------


class TestRoundHalfUp:
    def test_half_goes_up(self):
        assert round_half_up(Decimal("2.5")) == 3

    def test_half_goes_away_from_zero(self):
        assert round_half_up(Decimal("-2.5")) == -3

    def test_below_half_goes_down(self):
        assert round_half_up(Decimal("2.4999")) == 2

    def test_integral_unchanged(self):
        assert round_half_up(Decimal(7)) == 7


class TestRendering:
    def test_format_major_with_separators(self):
        assert format_major(158_778_692_600, "CNY") == "1,587,786,926.00 CNY"

    def test_format_major_without_code(self):
        assert format_major(123) == "1.23"

    def test_major_str_machine_readable(self):
        assert major_str(158_778_692_600) == "1587786926.00"

    def test_to_millions_reporting_precision(self):
        assert to_millions(15_877_869_260) == Decimal("158.8")

    def test_to_millions_rounds_half_up(self):
        assert to_millions(15_875_000_000) == Decimal("158.8")
        assert to_millions(15_874_999_999) == Decimal("158.7")

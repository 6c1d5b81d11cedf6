"""Stated-preference benchmark: published willingness-to-pay figures are
accumulated into a present value and compared with the cost-based value.

The accumulation treats the annual amount as received at the start of
each year over the asset's remaining life: factor = sum over t in
[0, years) of (1 + r)^-t.  Terms are summed explicitly in Decimal so the
result is reproducible to the last digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext

from .errors import DomainError, ValidationError
from .money import round_half_up
from .valuation import ComponentValuation

# Digits carried while summing discount terms; far beyond what any
# realistic horizon erodes.
_SUM_PRECISION = 50

# Published aggregates are rounded for reporting; the product check
# tolerates that much relative slack.
_REPORTING_TOLERANCE = Decimal("0.01")


@dataclass(frozen=True)
class DiscountParams:
    """Annual discount rate and accumulation horizon in whole years."""

    rate: Decimal
    years: int

    def __post_init__(self) -> None:
        if self.rate < 0:
            raise ValidationError(f"discount rate must be >= 0, got {self.rate}")
        if self.years < 1:
            raise DomainError(f"horizon must be >= 1 year, got {self.years}")


def accumulation_factor(params: DiscountParams) -> Decimal:
    """Sum of (1 + rate)^-t for t = 0 .. years - 1."""
    with localcontext() as ctx:
        ctx.prec = _SUM_PRECISION
        one = Decimal(1)
        v = one / (one + params.rate)
        total = Decimal(0)
        term = one
        for _ in range(params.years):
            total += term
            term *= v
        return +total


def present_value(annual_amount: int, params: DiscountParams) -> int:
    """Present value in minor units of an annual amount received at the
    start of each year across the horizon."""
    if annual_amount < 0:
        raise ValidationError("annual amount must be >= 0")
    return round_half_up(Decimal(annual_amount) * accumulation_factor(params))


def aggregate_annual(per_household: int, households: int) -> int:
    """Annual aggregate = per-household amount x number of households."""
    if per_household < 0:
        raise ValidationError("per-household amount must be >= 0")
    if households < 0:
        raise ValidationError("household count must be >= 0")
    return per_household * households


def scale_interval(
    interval: tuple[int, int], point: int, new_point: int
) -> tuple[int, int]:
    """Map an interval around ``point`` onto ``new_point`` proportionally.

    Used to carve a component's share out of an aggregate CI: the share
    is a pure rescaling of the point estimate, so the endpoints follow
    the same ratio.
    """
    low, high = interval
    if not (low <= point <= high):
        raise ValidationError(f"point {point} outside interval ({low}, {high})")
    if point <= 0:
        raise DomainError("cannot rescale an interval around a non-positive point")
    if new_point < 0:
        raise ValidationError("target point must be >= 0")
    ratio = Decimal(new_point) / Decimal(point)
    return round_half_up(low * ratio), round_half_up(high * ratio)


@dataclass(frozen=True)
class CvmEstimate:
    """Published stated-preference figures, consumed as inputs.

    All amounts in minor units.  The aggregate is cross-checked against
    median x households at reporting precision, not to the last digit.
    """

    median_wtp_per_household_year: int
    wtp_ci: tuple[int, int]
    households: int
    annual_aggregate: int
    annual_aggregate_ci: tuple[int, int]
    component_annual_value: int

    def __post_init__(self) -> None:
        if self.median_wtp_per_household_year < 0:
            raise ValidationError("median WTP must be >= 0")
        if self.households < 1:
            raise ValidationError("household count must be >= 1")
        low, high = self.wtp_ci
        if not (low <= self.median_wtp_per_household_year <= high):
            raise ValidationError(
                f"median WTP {self.median_wtp_per_household_year} outside "
                f"its CI ({low}, {high})"
            )
        low, high = self.annual_aggregate_ci
        if not (low <= self.annual_aggregate <= high):
            raise ValidationError(
                f"annual aggregate {self.annual_aggregate} outside "
                f"its CI ({low}, {high})"
            )
        product = aggregate_annual(
            self.median_wtp_per_household_year, self.households
        )
        if self.annual_aggregate <= 0:
            raise ValidationError("annual aggregate must be > 0")
        drift = abs(Decimal(product - self.annual_aggregate)) / Decimal(
            self.annual_aggregate
        )
        if drift > _REPORTING_TOLERANCE:
            raise ValidationError(
                f"annual aggregate {self.annual_aggregate} disagrees with "
                f"median x households = {product} by more than "
                f"{_REPORTING_TOLERANCE:%}"
            )
        if not (0 <= self.component_annual_value <= self.annual_aggregate):
            raise ValidationError(
                "component annual value must lie within [0, annual aggregate]"
            )

    def component_annual_ci(self) -> tuple[int, int]:
        """Component share of the aggregate CI, scaled proportionally."""
        return scale_interval(
            self.annual_aggregate_ci,
            self.annual_aggregate,
            self.component_annual_value,
        )


@dataclass(frozen=True)
class ComparisonVerdict:
    """Cost-based component value vs. accumulated stated-preference value."""

    cost_based_value: int
    cost_based_ci: tuple[int, int]
    stated_present_value: int
    stated_present_value_ci: tuple[int, int]
    ratio: Decimal
    intervals_overlap: bool

    def __post_init__(self) -> None:
        if self.cost_based_value <= 0:
            raise ValidationError("cost-based value must be > 0")


def intervals_overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Closed-interval overlap test."""
    return a[0] <= b[1] and b[0] <= a[1]


def compare(
    valuation: ComponentValuation,
    annual_amount: int,
    annual_ci: tuple[int, int],
    params: DiscountParams,
) -> ComparisonVerdict:
    """Accumulate the annual figure and its CI endpoints identically, then
    report the stated/cost ratio and whether the two CIs touch."""
    low, high = annual_ci
    if not (low <= annual_amount <= high):
        raise ValidationError(
            f"annual amount {annual_amount} outside CI ({low}, {high})"
        )
    if valuation.value <= 0:
        raise DomainError("comparison needs a positive cost-based value")
    pv = present_value(annual_amount, params)
    pv_ci = (present_value(low, params), present_value(high, params))
    return ComparisonVerdict(
        cost_based_value=valuation.value,
        cost_based_ci=(valuation.value_ci_low, valuation.value_ci_high),
        stated_present_value=pv,
        stated_present_value_ci=pv_ci,
        ratio=Decimal(pv) / Decimal(valuation.value),
        intervals_overlap=intervals_overlap(
            (valuation.value_ci_low, valuation.value_ci_high), pv_ci
        ),
    )

"""Component values: asset value split by allotment shares, with the
stated-correction coefficient applied to the target component."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .cost_model import AppraisalResult
from .errors import ValidationError
from .money import round_half_up
from .survey import (
    HUNDRED,
    AdjustmentSummary,
    AllotmentSummary,
)


def component_value_exact(
    total_asset_value: int,
    allotment_pct: Decimal,
    coefficient: Decimal = Decimal(1),
) -> Decimal:
    """value = total * (pct / 100) * coefficient, kept exact in Decimal."""
    if allotment_pct < 0 or allotment_pct > HUNDRED:
        raise ValidationError(f"allotment {allotment_pct}% outside [0, 100]")
    if coefficient <= 0:
        raise ValidationError(f"coefficient {coefficient} must be > 0")
    return Decimal(total_asset_value) * allotment_pct / HUNDRED * coefficient


def component_value(
    total_asset_value: int,
    allotment_pct: Decimal,
    coefficient: Decimal = Decimal(1),
) -> int:
    """Monetary component value in minor units (half-up at the end only)."""
    return round_half_up(
        component_value_exact(total_asset_value, allotment_pct, coefficient)
    )


@dataclass(frozen=True)
class ComponentValuation:
    component_id: str
    allotment_pct: Decimal
    adjustment_coefficient: Decimal
    value: int
    value_ci_low: int
    value_ci_high: int
    valid_through_year: int

    def __post_init__(self) -> None:
        if not (self.value_ci_low <= self.value <= self.value_ci_high):
            raise ValidationError(
                f"{self.component_id}: value {self.value} outside its CI "
                f"({self.value_ci_low}, {self.value_ci_high})"
            )


@dataclass(frozen=True)
class ValuationReport:
    """Asset value fanned out to components.  Only the target component
    carries the aggregate correction coefficient; the interval endpoints
    are mapped through the same linear transform as the point value."""

    appraisal: AppraisalResult
    target_component: str
    components: tuple[ComponentValuation, ...]
    adjustments: AdjustmentSummary

    def get(self, component_id: str) -> ComponentValuation:
        for cv in self.components:
            if cv.component_id == component_id:
                return cv
        raise KeyError(component_id)

    @property
    def target(self) -> ComponentValuation:
        return self.get(self.target_component)


def valuation_report(
    appraisal: AppraisalResult,
    allotments: AllotmentSummary,
    adjustments: AdjustmentSummary,
    target_component: str,
) -> ValuationReport:
    """One valuation row per component with allotment statistics.

    The correction coefficient applies to the target component only; every
    other component carries 1.  The validity horizon is the valuation year
    plus the rounded remaining useful life.
    """
    if target_component not in allotments.component_ids:
        raise ValidationError(
            f"target component {target_component!r} has no allotment statistics"
        )
    tav = appraisal.total_asset_value
    through = appraisal.valuation_year + round_half_up(
        appraisal.remaining_useful_life_years
    )
    components = []
    for stats in allotments.per_component:
        coeff = (
            adjustments.aggregate_coefficient
            if stats.component_id == target_component
            else Decimal(1)
        )
        components.append(
            ComponentValuation(
                component_id=stats.component_id,
                allotment_pct=stats.median_pct,
                adjustment_coefficient=coeff,
                value=component_value(tav, stats.median_pct, coeff),
                value_ci_low=component_value(tav, stats.ci_low, coeff),
                value_ci_high=component_value(tav, stats.ci_high, coeff),
                valid_through_year=through,
            )
        )
    return ValuationReport(
        appraisal=appraisal,
        target_component=target_component,
        components=tuple(components),
        adjustments=adjustments,
    )

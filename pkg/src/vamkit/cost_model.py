"""Cost-approach appraisal of an asset from an itemized ledger.

The chain is: reproduction cost (direct + indirect line items), minus
curable functional obsolescence gives replacement cost, minus the
remaining depreciation entries gives total asset value.  Remaining useful
life is the weighted average of the life cohorts supplied by the caller
(stem counts for trees and shrubs, area for grass).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ValidationError
from .money import round_half_up


class CostKind(str, Enum):
    DIRECT = "direct"
    INDIRECT = "indirect"


@dataclass(frozen=True)
class CostLineItem:
    """One ledger row: quantity x unit_cost x periods, in exact decimals.

    ``unit_cost`` is in minor currency units per unit per period.
    ``periods`` is in years; one-time (establishment) costs use 1.
    """

    label: str
    kind: CostKind
    quantity: Decimal
    unit_cost: Decimal
    periods: Decimal = Decimal(1)

    def __post_init__(self) -> None:
        if not self.label:
            raise ValidationError("line item label must not be empty")
        if self.quantity < 0:
            raise ValidationError(
                f"line item {self.label!r}: quantity must be >= 0, got {self.quantity}"
            )
        if self.unit_cost < 0:
            raise ValidationError(
                f"line item {self.label!r}: unit_cost must be >= 0, got {self.unit_cost}"
            )
        if self.periods < 1:
            raise ValidationError(
                f"line item {self.label!r}: periods must be >= 1, got {self.periods}"
            )

    @property
    def amount(self) -> int:
        """Item amount in minor units, rounded half-up at the item level."""
        return round_half_up(self.quantity * self.unit_cost * self.periods)


@dataclass(frozen=True)
class DepreciationSchedule:
    """Monetary depreciation entries, all in minor units.

    Entries are inputs, not derived from ecological rates; see
    ``deterioration_from_rate`` for one possible rate-to-money mapping.
    """

    physical_deterioration: int = 0
    curable_functional_obsolescence: int = 0
    incurable_functional_obsolescence: int = 0
    economic_obsolescence: int = 0
    notes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in (
            "physical_deterioration",
            "curable_functional_obsolescence",
            "incurable_functional_obsolescence",
            "economic_obsolescence",
        ):
            if getattr(self, name) < 0:
                raise ValidationError(f"depreciation entry {name} must be >= 0")

    @property
    def incurable_total(self) -> int:
        """Sum of the entries deducted after the replacement-cost step."""
        return (
            self.physical_deterioration
            + self.incurable_functional_obsolescence
            + self.economic_obsolescence
        )


@dataclass(frozen=True)
class LifeCohort:
    """A group of like assets sharing a remaining functional life."""

    label: str
    weight: Decimal
    remaining_life_years: Decimal

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValidationError(f"cohort {self.label!r}: weight must be > 0")
        if self.remaining_life_years <= 0:
            raise ValidationError(
                f"cohort {self.label!r}: remaining_life_years must be > 0"
            )


@dataclass(frozen=True)
class AppraisalResult:
    """Cost-approach appraisal outputs, amounts in minor units."""

    reproduction_cost: int
    replacement_cost: int
    total_asset_value: int
    remaining_useful_life_years: Decimal
    valuation_year: int
    currency_code: str

    def __post_init__(self) -> None:
        if self.replacement_cost > self.reproduction_cost:
            raise ValidationError("replacement cost exceeds reproduction cost")
        if self.total_asset_value > self.replacement_cost:
            raise ValidationError("total asset value exceeds replacement cost")
        if self.total_asset_value < 0:
            raise ValidationError("total asset value must be >= 0")


def reproduction_cost(items: Iterable[CostLineItem]) -> int:
    """Sum of direct and indirect item amounts (order-independent, exact)."""
    return sum(item.amount for item in items)


def replacement_cost(reproduction: int, curable_functional_obsolescence: int) -> int:
    """Reproduction cost less curable functional obsolescence."""
    if curable_functional_obsolescence < 0:
        raise ValidationError("curable functional obsolescence must be >= 0")
    if curable_functional_obsolescence > reproduction:
        raise DomainError(
            f"curable functional obsolescence ({curable_functional_obsolescence}) "
            f"exceeds reproduction cost ({reproduction}); "
            "replacement cost would be negative"
        )
    return reproduction - curable_functional_obsolescence


def total_asset_value(replacement: int, schedule: DepreciationSchedule) -> int:
    """Replacement cost less physical deterioration and incurable obsolescences."""
    value = replacement - schedule.incurable_total
    if value < 0:
        raise DomainError(
            f"depreciation ({schedule.incurable_total}) exceeds replacement cost "
            f"({replacement}); total asset value would be negative"
        )
    return value


def weighted_rul(cohorts: Sequence[LifeCohort]) -> Decimal:
    """Weight-averaged remaining useful life over the supplied cohorts.

    Future regeneration is deliberately out of scope: only cohorts standing
    at valuation time enter the average.
    """
    if not cohorts:
        raise ValidationError("weighted_rul requires at least one cohort")
    total_weight = sum(c.weight for c in cohorts)
    weighted = sum(c.weight * c.remaining_life_years for c in cohorts)
    return weighted / total_weight


def deterioration_from_rate(rate: Decimal, affected_base: int) -> int:
    """Monetize a deterioration rate against an affected cost base.

    One possible mapping of an observed loss rate (e.g. insect mortality)
    to a depreciation entry; the schedule accepts any monetary figure, so
    using this helper is optional.
    """
    if rate < 0 or rate > 1:
        raise ValidationError(f"rate must be within [0, 1], got {rate}")
    if affected_base < 0:
        raise ValidationError("affected_base must be >= 0")
    return round_half_up(rate * affected_base)


def appraise(
    items: Sequence[CostLineItem],
    schedule: DepreciationSchedule,
    cohorts: Sequence[LifeCohort],
    *,
    valuation_year: int,
    currency_code: str = "CNY",
) -> AppraisalResult:
    """Run the full cost chain and return an AppraisalResult."""
    reproduction = reproduction_cost(items)
    replacement = replacement_cost(reproduction, schedule.curable_functional_obsolescence)
    value = total_asset_value(replacement, schedule)
    rul = weighted_rul(cohorts)
    return AppraisalResult(
        reproduction_cost=reproduction,
        replacement_cost=replacement,
        total_asset_value=value,
        remaining_useful_life_years=rul,
        valuation_year=valuation_year,
        currency_code=currency_code,
    )

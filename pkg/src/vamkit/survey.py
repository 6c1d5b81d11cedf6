"""Questionnaire responses: validation, medians, bootstrap CIs, adjustments.

Responses are stored as submitted; ``validate_response`` is the single
gate that decides whether a response enters analysis.  Aggregation uses
medians throughout (robust to the long tails open-ended forms produce),
with percentile-bootstrap confidence intervals under a mandatory explicit
seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from statistics import median as _median
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .money import round_half_up

# Reserved bucket for respondent write-in components.
OTHER_COMPONENT_ID = "other"

# Accept hand-entered integer allotments that round to 100 (percentage points).
DEFAULT_SUM_TOLERANCE = Decimal("0.5")

HUNDRED = Decimal(100)


class AdjustmentKind(str, Enum):
    ABOUT_RIGHT = "about_right"
    UNDERESTIMATED = "underestimated"
    OVERESTIMATED = "overestimated"


@dataclass(frozen=True)
class Adjustment:
    """Second-stage answer: the stated correction to the previewed value.

    Held as submitted; well-formedness is judged by ``validate_response``,
    so a lenient instance (e.g. missing pct) is representable.
    """

    kind: AdjustmentKind
    pct: Decimal | None = None

    def is_well_formed(self) -> bool:
        if self.kind is AdjustmentKind.ABOUT_RIGHT:
            return self.pct is None
        if self.pct is None or self.pct <= 0:
            return False
        if self.kind is AdjustmentKind.OVERESTIMATED and self.pct >= HUNDRED:
            return False
        return True


ABOUT_RIGHT = Adjustment(AdjustmentKind.ABOUT_RIGHT)


def underestimated(pct: Decimal | int | str) -> Adjustment:
    return Adjustment(AdjustmentKind.UNDERESTIMATED, Decimal(pct))


def overestimated(pct: Decimal | int | str) -> Adjustment:
    return Adjustment(AdjustmentKind.OVERESTIMATED, Decimal(pct))


@dataclass(frozen=True)
class Component:
    component_id: str
    display_name: str
    explanation: str = ""


DEFAULT_DEMOGRAPHIC_FIELDS = (
    "gender",
    "age_bracket",
    "education",
    "income",
    "visited_site",
    "lived_nearby",
    "nature_visit_freq",
    "site_visit_freq",
)


@dataclass(frozen=True)
class QuestionnaireSpec:
    """The instrument: components on offer, target of stage two, anchor value."""

    components: tuple[Component, ...]
    target_component: str
    total_asset_value_display: int
    allows_other: bool = True
    info_text: str = ""
    info_images: tuple[str, ...] = ()
    demographic_fields: tuple[str, ...] = DEFAULT_DEMOGRAPHIC_FIELDS
    version: int = 1

    def __post_init__(self) -> None:
        ids = [c.component_id for c in self.components]
        if len(set(ids)) != len(ids):
            raise ValidationError("component ids must be unique")
        if OTHER_COMPONENT_ID in ids:
            raise ValidationError(
                f"{OTHER_COMPONENT_ID!r} is reserved for the write-in bucket"
            )
        if self.target_component not in ids:
            raise ValidationError(
                f"target component {self.target_component!r} is not a listed component"
            )
        if self.total_asset_value_display < 0:
            raise ValidationError("displayed total asset value must be >= 0")

    @property
    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.component_id for c in self.components)

    def allotment_columns(self) -> tuple[str, ...]:
        """Component ids a response may carry, write-in bucket last."""
        if self.allows_other:
            return self.component_ids + (OTHER_COMPONENT_ID,)
        return self.component_ids


@dataclass(frozen=True)
class SurveyResponse:
    """One submission, held exactly as received (validation is a separate step)."""

    respondent_id: str
    demographics: Mapping[str, str]
    allotments: Mapping[str, Decimal]
    adjustment: Adjustment | None
    other_label: str | None = None
    submitted_at: str = ""


class ReasonCode(str, Enum):
    SUM_NOT_100 = "SumNot100"
    MISSING_COMPONENT = "MissingComponent"
    OUT_OF_RANGE = "AllotmentOutOfRange"
    UNKNOWN_COMPONENT = "UnknownComponent"
    BAD_ADJUSTMENT = "BadAdjustment"
    MALFORMED = "MalformedValue"


@dataclass(frozen=True)
class ValidationVerdict:
    accepted: bool
    reasons: tuple[ReasonCode, ...] = ()
    detail: str = ""

    def reason_codes(self) -> tuple[str, ...]:
        return tuple(r.value for r in self.reasons)


@dataclass(frozen=True)
class ValidationReport:
    """Batch outcome; valid + rejected always reconciles to total_received."""

    total_received: int
    valid: int
    rejected: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if self.valid + len(self.rejected) != self.total_received:
            raise ValidationError(
                "validation report does not reconcile: "
                f"{self.valid} valid + {len(self.rejected)} rejected "
                f"!= {self.total_received} received"
            )


def validate_response(
    resp: SurveyResponse,
    spec: QuestionnaireSpec,
    tolerance: Decimal = DEFAULT_SUM_TOLERANCE,
) -> ValidationVerdict:
    """Accept iff every listed component is answered, each allotment is in
    [0, 100], the sum is 100 within tolerance, and the adjustment answer is
    well-formed.  A missing component is absent, not zero.  Demographic
    gaps never reject.
    """
    reasons: list[ReasonCode] = []
    details: list[str] = []

    allowed = set(spec.allotment_columns())
    unknown = sorted(set(resp.allotments) - allowed)
    if unknown:
        reasons.append(ReasonCode.UNKNOWN_COMPONENT)
        details.append(f"unknown component(s): {', '.join(unknown)}")

    missing = [cid for cid in spec.component_ids if cid not in resp.allotments]
    if missing:
        reasons.append(ReasonCode.MISSING_COMPONENT)
        details.append(f"missing allotment(s): {', '.join(missing)}")

    known = {cid: pct for cid, pct in resp.allotments.items() if cid in allowed}
    out_of_range = sorted(
        cid for cid, pct in known.items() if pct < 0 or pct > HUNDRED
    )
    if out_of_range:
        reasons.append(ReasonCode.OUT_OF_RANGE)
        details.append(f"allotment out of [0, 100]: {', '.join(out_of_range)}")

    if not missing and not out_of_range:
        total = sum(known.values(), Decimal(0))
        if abs(total - HUNDRED) > tolerance:
            reasons.append(ReasonCode.SUM_NOT_100)
            details.append(f"allotments sum to {total}, not 100 +/- {tolerance}")

    if resp.adjustment is None or not resp.adjustment.is_well_formed():
        reasons.append(ReasonCode.BAD_ADJUSTMENT)
        details.append("adjustment answer missing or malformed")

    if reasons:
        return ValidationVerdict(False, tuple(reasons), "; ".join(details))
    return ValidationVerdict(True)


def validate_batch(
    responses: Sequence[SurveyResponse],
    spec: QuestionnaireSpec,
    tolerance: Decimal = DEFAULT_SUM_TOLERANCE,
) -> tuple[list[SurveyResponse], ValidationReport]:
    """Split a batch into valid responses and a reconciling report."""
    valid: list[SurveyResponse] = []
    rejected: list[tuple[str, str]] = []
    for resp in responses:
        verdict = validate_response(resp, spec, tolerance)
        if verdict.accepted:
            valid.append(resp)
        else:
            rejected.append((resp.respondent_id, ",".join(verdict.reason_codes())))
    report = ValidationReport(
        total_received=len(responses), valid=len(valid), rejected=tuple(rejected)
    )
    return valid, report


def _allotment_values(
    responses: Sequence[SurveyResponse], component_id: str
) -> list[Decimal]:
    # Validated responses carry every listed component; only the optional
    # write-in bucket may be absent, which counts as zero.
    return [r.allotments.get(component_id, Decimal(0)) for r in responses]


def median_allotment(
    responses: Sequence[SurveyResponse], component_id: str
) -> Decimal:
    """Standard median of the component's allotments (mean of the two middle
    order statistics for even n)."""
    if not responses:
        raise ValidationError("median_allotment requires at least one response")
    return Decimal(_median(_allotment_values(responses, component_id)))


@dataclass(frozen=True)
class BootstrapParams:
    """Resampling controls; the seed is mandatory so runs are reproducible."""

    seed: int
    resamples: int = 10_000
    level: Decimal = Decimal("0.95")

    def __post_init__(self) -> None:
        if self.resamples < 1000:
            raise ValidationError("bootstrap needs at least 1000 resamples")
        if not (Decimal(0) < self.level < Decimal(1)):
            raise ValidationError("confidence level must be in (0, 1)")


def percentile_bootstrap(
    values: Sequence[Decimal | float | int], params: BootstrapParams
) -> tuple[Decimal, Decimal]:
    """Percentile-bootstrap CI of the median over with-replacement resamples.

    Deterministic for a fixed (seed, data) pair.
    """
    if len(values) < 2:
        raise ValidationError("bootstrap needs at least 2 values")
    data = np.asarray([float(v) for v in values])
    rng = np.random.Generator(np.random.PCG64(params.seed))
    idx = rng.integers(0, len(data), size=(params.resamples, len(data)))
    medians = np.median(data[idx], axis=1)
    alpha = float(1 - params.level) / 2
    low, high = np.percentile(medians, [100 * alpha, 100 * (1 - alpha)])
    return Decimal(repr(float(low))), Decimal(repr(float(high)))


def bootstrap_ci(
    responses: Sequence[SurveyResponse],
    component_id: str,
    params: BootstrapParams,
) -> tuple[Decimal, Decimal]:
    """CI for the median allotment percentage of one component."""
    return percentile_bootstrap(_allotment_values(responses, component_id), params)


def bootstrap_value_ci(
    responses: Sequence[SurveyResponse],
    component_id: str,
    total_asset_value: int,
    params: BootstrapParams,
) -> tuple[int, int]:
    """CI bootstrapped over component values instead of percentages.

    Equivalent to scaling the percentage CI by the asset value (the map is
    linear and monotone); provided for callers who want value-space output.
    """
    low, high = bootstrap_ci(responses, component_id, params)
    scale = Decimal(total_asset_value) / HUNDRED
    return round_half_up(low * scale), round_half_up(high * scale)


@dataclass(frozen=True)
class ComponentAllotmentStats:
    component_id: str
    median_pct: Decimal
    ci_low: Decimal
    ci_high: Decimal
    n: int

    def __post_init__(self) -> None:
        if not (self.ci_low <= self.median_pct <= self.ci_high):
            raise ValidationError(
                f"{self.component_id}: CI ({self.ci_low}, {self.ci_high}) "
                f"does not bracket median {self.median_pct}"
            )
        if self.ci_low < 0 or self.ci_high > HUNDRED:
            raise ValidationError(f"{self.component_id}: CI outside [0, 100]")


@dataclass(frozen=True)
class AllotmentSummary:
    per_component: tuple[ComponentAllotmentStats, ...]
    bootstrap: BootstrapParams

    def get(self, component_id: str) -> ComponentAllotmentStats:
        for stats in self.per_component:
            if stats.component_id == component_id:
                return stats
        raise KeyError(component_id)

    @property
    def component_ids(self) -> tuple[str, ...]:
        return tuple(s.component_id for s in self.per_component)


@dataclass(frozen=True)
class AdjustmentSummary:
    n_about_right: int
    n_under: int
    n_over: int
    mean_under_pct: Decimal
    mean_over_pct: Decimal
    aggregate_coefficient: Decimal

    def __post_init__(self) -> None:
        if self.aggregate_coefficient <= 0:
            raise ValidationError("aggregate coefficient must be > 0")


def adjustment_coefficient(resp: SurveyResponse) -> Decimal:
    """Multiplicative correction stated by one respondent.

    about right -> 1; underestimated by p -> 1 + p/100; overestimated by
    p -> 1 - p/100 (p must stay below 100 so the factor stays positive).
    """
    adj = resp.adjustment
    if adj is None or not adj.is_well_formed():
        raise ValidationError(
            f"response {resp.respondent_id!r}: adjustment missing or malformed"
        )
    if adj.kind is AdjustmentKind.ABOUT_RIGHT:
        return Decimal(1)
    if adj.kind is AdjustmentKind.UNDERESTIMATED:
        return 1 + adj.pct / HUNDRED
    if adj.pct >= HUNDRED:
        raise DomainError(
            f"overestimation of {adj.pct}% would zero or negate the value"
        )
    return 1 - adj.pct / HUNDRED


def summarize_adjustments(responses: Sequence[SurveyResponse]) -> AdjustmentSummary:
    """Group counts, within-group mean percentages, and the aggregate
    coefficient (median of per-response coefficients)."""
    if not responses:
        raise ValidationError("summarize_adjustments requires at least one response")
    under: list[Decimal] = []
    over: list[Decimal] = []
    n_about_right = 0
    coefficients: list[Decimal] = []
    for resp in responses:
        coefficients.append(adjustment_coefficient(resp))
        adj = resp.adjustment
        if adj.kind is AdjustmentKind.ABOUT_RIGHT:
            n_about_right += 1
        elif adj.kind is AdjustmentKind.UNDERESTIMATED:
            under.append(adj.pct)
        else:
            over.append(adj.pct)
    mean_under = (sum(under) / len(under)) if under else Decimal(0)
    mean_over = (sum(over) / len(over)) if over else Decimal(0)
    return AdjustmentSummary(
        n_about_right=n_about_right,
        n_under=len(under),
        n_over=len(over),
        mean_under_pct=mean_under,
        mean_over_pct=mean_over,
        aggregate_coefficient=Decimal(_median(coefficients)),
    )


def summarize_allotments(
    responses: Sequence[SurveyResponse],
    spec: QuestionnaireSpec,
    params: BootstrapParams,
) -> AllotmentSummary:
    """Median + bootstrap CI per component, over valid responses.

    Each component reuses the same seed so the summary depends only on
    (data, params), not on component order.
    """
    if not responses:
        raise ValidationError("summarize_allotments requires at least one response")
    stats = []
    for cid in spec.allotment_columns():
        med = median_allotment(responses, cid)
        low, high = bootstrap_ci(responses, cid, params)
        stats.append(
            ComponentAllotmentStats(
                component_id=cid,
                median_pct=med,
                ci_low=low,
                ci_high=high,
                n=len(responses),
            )
        )
    return AllotmentSummary(per_component=tuple(stats), bootstrap=params)


def parse_pct(text: str) -> Decimal | None:
    """Parse a percentage cell; None for blank/unparseable (caller decides)."""
    text = text.strip()
    if not text:
        return None
    try:
        parsed = Decimal(text)
    except InvalidOperation:
        return None
    return parsed if parsed.is_finite() else None

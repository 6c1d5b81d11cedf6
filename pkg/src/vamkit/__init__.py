"""Asset appraisal by the cost approach, questionnaire-based value
allotment with bootstrap confidence intervals, and comparison against
stated-preference estimates via discounted accumulation."""

from .cost_model import (
    AppraisalResult,
    CostKind,
    CostLineItem,
    DepreciationSchedule,
    LifeCohort,
    appraise,
    deterioration_from_rate,
    replacement_cost,
    reproduction_cost,
    total_asset_value,
    weighted_rul,
)
from .cvm import (
    ComparisonVerdict,
    CvmEstimate,
    DiscountParams,
    accumulation_factor,
    aggregate_annual,
    compare,
    intervals_overlap,
    present_value,
    scale_interval,
)
from .errors import DomainError, SchemaError, ValidationError, VamError
from .money import (
    MINOR_PER_MAJOR,
    format_major,
    from_minor,
    major_str,
    round_half_up,
    to_millions,
    to_minor,
)
from .project import (
    AnalysisParams,
    CvmInputs,
    Project,
    ProjectMetadata,
    load_project,
    read_responses,
    save_project,
    write_responses,
)
from .survey import (
    ABOUT_RIGHT,
    DEFAULT_SUM_TOLERANCE,
    OTHER_COMPONENT_ID,
    Adjustment,
    AdjustmentKind,
    AdjustmentSummary,
    AllotmentSummary,
    BootstrapParams,
    Component,
    ComponentAllotmentStats,
    QuestionnaireSpec,
    ReasonCode,
    SurveyResponse,
    ValidationReport,
    ValidationVerdict,
    adjustment_coefficient,
    bootstrap_ci,
    bootstrap_value_ci,
    median_allotment,
    overestimated,
    percentile_bootstrap,
    summarize_adjustments,
    summarize_allotments,
    underestimated,
    validate_batch,
    validate_response,
)
from .valuation import (
    ComponentValuation,
    ValuationReport,
    component_value,
    component_value_exact,
    valuation_report,
)

__all__ = [
    "ABOUT_RIGHT",
    "AdjustmentKind",
    "Adjustment",
    "AdjustmentSummary",
    "AllotmentSummary",
    "AnalysisParams",
    "AppraisalResult",
    "BootstrapParams",
    "ComparisonVerdict",
    "Component",
    "ComponentAllotmentStats",
    "ComponentValuation",
    "CostKind",
    "CostLineItem",
    "CvmEstimate",
    "CvmInputs",
    "DEFAULT_SUM_TOLERANCE",
    "DepreciationSchedule",
    "DiscountParams",
    "DomainError",
    "LifeCohort",
    "MINOR_PER_MAJOR",
    "OTHER_COMPONENT_ID",
    "Project",
    "ProjectMetadata",
    "QuestionnaireSpec",
    "ReasonCode",
    "SchemaError",
    "SurveyResponse",
    "ValidationError",
    "ValidationReport",
    "ValidationVerdict",
    "ValuationReport",
    "VamError",
    "accumulation_factor",
    "adjustment_coefficient",
    "aggregate_annual",
    "appraise",
    "bootstrap_ci",
    "bootstrap_value_ci",
    "compare",
    "component_value",
    "component_value_exact",
    "deterioration_from_rate",
    "format_major",
    "from_minor",
    "intervals_overlap",
    "load_project",
    "major_str",
    "median_allotment",
    "overestimated",
    "percentile_bootstrap",
    "present_value",
    "read_responses",
    "replacement_cost",
    "reproduction_cost",
    "round_half_up",
    "save_project",
    "scale_interval",
    "summarize_adjustments",
    "summarize_allotments",
    "to_millions",
    "to_minor",
    "total_asset_value",
    "underestimated",
    "validate_batch",
    "validate_response",
    "valuation_report",
    "weighted_rul",
    "write_responses",
]

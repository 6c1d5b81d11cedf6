"""Tests for questionnaire validation, aggregation and the bootstrap."""

from decimal import Decimal

import pytest

from vamkit.errors import DomainError, ValidationError
from vamkit.survey import (
    ABOUT_RIGHT,
    Adjustment,
    AdjustmentKind,
    BootstrapParams,
    Component,
    QuestionnaireSpec,
    ReasonCode,
    SurveyResponse,
    ValidationReport,
    adjustment_coefficient,
    bootstrap_ci,
    bootstrap_value_ci,
    median_allotment,
    overestimated,
    parse_pct,
    percentile_bootstrap,
    summarize_adjustments,
    summarize_allotments,
    underestimated,
    validate_batch,
    validate_response,
)

SPEC = QuestionnaireSpec(
    components=(
        Component("habitat", "Habitat"),
        Component("shade", "Shade"),
        Component("views", "Views"),
    ),
    target_component="habitat",
    total_asset_value_display=100_000,
)


def resp(habitat, shade, views, adjustment=ABOUT_RIGHT, other=None, rid="r1"):
    allotments = {
        "habitat": Decimal(habitat),
        "shade": Decimal(shade),
        "views": Decimal(views),
    }
    if other is not None:
        allotments["other"] = Decimal(other)
    return SurveyResponse(rid, {}, allotments, adjustment)


# -------------------------------------------------------------------------
# Questionnaire spec
# -------------------------------------------------------------------------


class TestQuestionnaireSpec:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError, match="unique"):
            QuestionnaireSpec(
                components=(Component("a", "A"), Component("a", "A2")),
                target_component="a",
                total_asset_value_display=1,
            )

    def test_target_must_be_listed(self):
        with pytest.raises(ValidationError, match="target"):
            QuestionnaireSpec(
                components=(Component("a", "A"),),
                target_component="b",
                total_asset_value_display=1,
            )

    def test_other_id_reserved(self):
        with pytest.raises(ValidationError, match="reserved"):
            QuestionnaireSpec(
                components=(Component("other", "Other"),),
                target_component="other",
                total_asset_value_display=1,
            )

    def test_allotment_columns_end_with_other(self):
        assert SPEC.allotment_columns() == ("habitat", "shade", "views", "other")

    def test_allotment_columns_without_other(self):
        spec = QuestionnaireSpec(
            components=SPEC.components,
            target_component="habitat",
            total_asset_value_display=1,
            allows_other=False,
        )
        assert spec.allotment_columns() == ("habitat", "shade", "views")


# -------------------------------------------------------------------------
# Validation verdicts
# -------------------------------------------------------------------------


class TestValidateResponse:
    def test_exact_hundred_accepted(self):
        assert validate_response(resp(50, 30, 20), SPEC).accepted

    def test_boundary_allocation_accepted(self):
        # All on one component is a legal opinion.
        assert validate_response(resp(100, 0, 0), SPEC).accepted

    def test_other_bucket_counts_toward_sum(self):
        assert validate_response(resp(50, 30, 10, other=10), SPEC).accepted

    def test_sum_within_tolerance_accepted(self):
        assert validate_response(resp("50.3", 30, 20), SPEC).accepted

    def test_sum_outside_tolerance_rejected(self):
        verdict = validate_response(resp(50, 30, "20.6"), SPEC)
        assert not verdict.accepted
        assert verdict.reasons == (ReasonCode.SUM_NOT_100,)

    def test_sum_ninety_rejected(self):
        verdict = validate_response(resp(40, 30, 20), SPEC)
        assert verdict.reason_codes() == ("SumNot100",)

    def test_missing_component_is_absent_not_zero(self):
        partial = SurveyResponse(
            "r1", {}, {"habitat": Decimal(50), "shade": Decimal(50)}, ABOUT_RIGHT
        )
        verdict = validate_response(partial, SPEC)
        assert verdict.reasons == (ReasonCode.MISSING_COMPONENT,)
        assert "views" in verdict.detail

    def test_out_of_range_rejected(self):
        verdict = validate_response(resp(150, 0, 0), SPEC)
        assert verdict.reasons == (ReasonCode.OUT_OF_RANGE,)

    def test_negative_rejected(self):
        verdict = validate_response(resp(-10, 60, 50), SPEC)
        assert verdict.reasons == (ReasonCode.OUT_OF_RANGE,)

    def test_unknown_component_rejected(self):
        bad = SurveyResponse(
            "r1",
            {},
            {
                "habitat": Decimal(50),
                "shade": Decimal(30),
                "views": Decimal(20),
                "timber": Decimal(0),
            },
            ABOUT_RIGHT,
        )
        verdict = validate_response(bad, SPEC)
        assert ReasonCode.UNKNOWN_COMPONENT in verdict.reasons

    def test_missing_adjustment_rejected(self):
        verdict = validate_response(resp(50, 30, 20, adjustment=None), SPEC)
        assert verdict.reasons == (ReasonCode.BAD_ADJUSTMENT,)

    def test_overestimate_at_hundred_rejected(self):
        verdict = validate_response(resp(50, 30, 20, adjustment=overestimated(100)), SPEC)
        assert verdict.reasons == (ReasonCode.BAD_ADJUSTMENT,)

    def test_underestimate_above_hundred_accepted(self):
        assert validate_response(resp(50, 30, 20, adjustment=underestimated(205)), SPEC).accepted

    def test_missing_demographics_never_reject(self):
        bare = resp(50, 30, 20)
        assert bare.demographics == {}
        assert validate_response(bare, SPEC).accepted

    def test_multiple_reasons_reported(self):
        bad = SurveyResponse("r1", {}, {"habitat": Decimal(150)}, None)
        verdict = validate_response(bad, SPEC)
        assert set(verdict.reasons) == {
            ReasonCode.MISSING_COMPONENT,
            ReasonCode.OUT_OF_RANGE,
            ReasonCode.BAD_ADJUSTMENT,
        }


class TestValidateBatch:
    def test_report_reconciles(self):
        batch = [resp(50, 30, 20, rid="a"), resp(40, 30, 20, rid="b")]
        valid, report = validate_batch(batch, SPEC)
        assert [r.respondent_id for r in valid] == ["a"]
        assert (report.total_received, report.valid) == (2, 1)
        assert report.rejected == (("b", "SumNot100"),)

    def test_report_mismatch_is_an_error(self):
        with pytest.raises(ValidationError, match="reconcile"):
            ValidationReport(total_received=2, valid=2, rejected=(("x", "SumNot100"),))


# -------------------------------------------------------------------------
# Medians
# -------------------------------------------------------------------------


class TestMedianAllotment:
    def test_even_count_averages_middle_pair(self):
        batch = [
            resp(5, 55, 40),
            resp(10, 50, 40),
            resp(20, 40, 40),
            resp(40, 20, 40),
        ]
        assert median_allotment(batch, "habitat") == 15

    def test_single_response(self):
        assert median_allotment([resp(40, 30, 30)], "habitat") == 40

    def test_missing_other_counts_as_zero(self):
        batch = [resp(50, 30, 20), resp(40, 30, 20, other=10)]
        assert median_allotment(batch, "other") == 5

    def test_empty_rejected(self):
        with pytest.raises(ValidationError, match="at least one"):
            median_allotment([], "habitat")


# -------------------------------------------------------------------------
# Bootstrap
# -------------------------------------------------------------------------


class TestBootstrap:
    def test_degenerate_distribution_collapses(self):
        params = BootstrapParams(seed=7)
        batch = [resp(10, 45, 45, rid=f"r{i}") for i in range(117)]
        assert bootstrap_ci(batch, "habitat", params) == (10, 10)

    def test_same_seed_is_bit_identical(self):
        values = list(range(1, 101))
        params = BootstrapParams(seed=123, resamples=2_000)
        first = percentile_bootstrap(values, params)
        second = percentile_bootstrap(values, params)
        assert first == second

    def test_interval_brackets_midrange_median(self):
        values = list(range(1, 101))
        low, high = percentile_bootstrap(values, BootstrapParams(seed=123))
        assert Decimal(1) <= low <= Decimal("50.5") <= high <= Decimal(100)

    def test_seed_is_mandatory(self):
        with pytest.raises(TypeError):
            BootstrapParams()

    def test_too_few_resamples_rejected(self):
        with pytest.raises(ValidationError, match="1000"):
            BootstrapParams(seed=1, resamples=999)

    def test_level_must_be_fractional(self):
        with pytest.raises(ValidationError, match="level"):
            BootstrapParams(seed=1, level=Decimal("95"))

    def test_too_few_values_rejected(self):
        with pytest.raises(ValidationError, match="at least 2"):
            percentile_bootstrap([1], BootstrapParams(seed=1))

    def test_value_ci_scales_percentage_ci(self):
        params = BootstrapParams(seed=7)
        batch = [resp(10, 45, 45, rid=f"r{i}") for i in range(20)]
        assert bootstrap_value_ci(batch, "habitat", 1_000_000, params) == (
            100_000,
            100_000,
        )


# -------------------------------------------------------------------------
# Adjustment coefficients
# -------------------------------------------------------------------------


class TestAdjustmentCoefficient:
    def test_underestimated_raises_value(self):
        assert adjustment_coefficient(resp(50, 30, 20, underestimated(10))) == Decimal("1.10")

    def test_about_right_is_identity(self):
        assert adjustment_coefficient(resp(50, 30, 20)) == 1

    def test_overestimated_lowers_value(self):
        assert adjustment_coefficient(resp(50, 30, 20, overestimated(39))) == Decimal("0.61")

    def test_overestimate_at_hundred_is_domain_error(self):
        crushed = resp(50, 30, 20, Adjustment(AdjustmentKind.OVERESTIMATED, Decimal(100)))
        with pytest.raises((DomainError, ValidationError)):
            adjustment_coefficient(crushed)

    def test_malformed_rejected(self):
        with pytest.raises(ValidationError, match="malformed"):
            adjustment_coefficient(resp(50, 30, 20, adjustment=None))


class TestAdjustmentWellFormed:
    def test_about_right_takes_no_pct(self):
        assert not Adjustment(AdjustmentKind.ABOUT_RIGHT, Decimal(5)).is_well_formed()

    def test_under_requires_positive_pct(self):
        assert not Adjustment(AdjustmentKind.UNDERESTIMATED, Decimal(0)).is_well_formed()
        assert not Adjustment(AdjustmentKind.UNDERESTIMATED, None).is_well_formed()
        assert Adjustment(AdjustmentKind.UNDERESTIMATED, Decimal(205)).is_well_formed()

    def test_over_bounded_below_hundred(self):
        assert Adjustment(AdjustmentKind.OVERESTIMATED, Decimal(99)).is_well_formed()
        assert not Adjustment(AdjustmentKind.OVERESTIMATED, Decimal(100)).is_well_formed()


# -------------------------------------------------------------------------
# Summaries
# -------------------------------------------------------------------------


class TestSummarizeAdjustments:
    def test_median_of_mixed_coefficients_is_identity(self):
        batch = [
            resp(50, 30, 20, overestimated(50), rid="a"),   # 0.5
            resp(50, 30, 20, rid="b"),                      # 1.0
            resp(50, 30, 20, underestimated(200), rid="c"), # 3.0
        ]
        summary = summarize_adjustments(batch)
        assert summary.aggregate_coefficient == 1

    def test_all_about_right(self):
        batch = [resp(50, 30, 20, rid=f"r{i}") for i in range(5)]
        summary = summarize_adjustments(batch)
        assert summary.aggregate_coefficient == 1
        assert (summary.n_about_right, summary.n_under, summary.n_over) == (5, 0, 0)

    def test_group_means(self):
        batch = [
            resp(50, 30, 20, underestimated(100), rid="a"),
            resp(50, 30, 20, underestimated(310), rid="b"),
            resp(50, 30, 20, overestimated(39), rid="c"),
        ]
        summary = summarize_adjustments(batch)
        assert summary.mean_under_pct == 205
        assert summary.mean_over_pct == 39

    def test_empty_groups_report_zero_mean(self):
        summary = summarize_adjustments([resp(50, 30, 20)])
        assert summary.mean_under_pct == 0
        assert summary.mean_over_pct == 0

    def test_majority_about_right_pins_aggregate(self):
        batch = [resp(50, 30, 20, rid=f"r{i}") for i in range(6)]
        batch += [
            resp(50, 30, 20, underestimated(500), rid="u1"),
            resp(50, 30, 20, underestimated(500), rid="u2"),
            resp(50, 30, 20, overestimated(90), rid="o1"),
        ]
        assert summarize_adjustments(batch).aggregate_coefficient == 1


class TestSummarizeAllotments:
    def test_per_component_stats(self):
        params = BootstrapParams(seed=11)
        batch = [resp(10, 60, 30, rid=f"r{i}") for i in range(10)]
        summary = summarize_allotments(batch, SPEC, params)
        assert summary.component_ids == ("habitat", "shade", "views", "other")
        habitat = summary.get("habitat")
        assert habitat.median_pct == 10
        assert (habitat.ci_low, habitat.ci_high) == (10, 10)
        assert habitat.n == 10
        assert summary.get("other").median_pct == 0

    def test_unknown_component_lookup_raises(self):
        params = BootstrapParams(seed=11)
        summary = summarize_allotments(
            [resp(10, 60, 30, rid=f"r{i}") for i in range(3)], SPEC, params
        )
        with pytest.raises(KeyError):
            summary.get("timber")


# -------------------------------------------------------------------------
# Cell parsing
# -------------------------------------------------------------------------


class TestParsePct:
    def test_plain_number(self):
        assert parse_pct("12.5") == Decimal("12.5")

    def test_blank_is_none(self):
        assert parse_pct("   ") is None

    def test_junk_is_none(self):
        assert parse_pct("ten") is None

    def test_non_finite_is_none(self):
        assert parse_pct("NaN") is None
        assert parse_pct("Infinity") is None

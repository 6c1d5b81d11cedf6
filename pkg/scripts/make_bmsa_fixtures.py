"""Regenerate the BMSA fixtures under fixtures/.

The response batch is synthetic: individual answers were never published,
so rows are constructed to hit every published aggregate exactly (117 of
120 valid, component medians, adjustment group counts 21/5/91 with means
205/39, aggregate coefficient 1, biodiversity CI collapsing to the
median).  Run from the repository root:

    python3 scripts/make_bmsa_fixtures.py

The script rewrites fixtures/bmsa_project.json,
fixtures/bmsa_unit_cost_project.json and fixtures/bmsa_responses.csv,
then re-reads them and asserts the pipeline reproduces the pinned
numbers.
"""

from __future__ import annotations

import random
from decimal import Decimal

from vamkit import (
    ABOUT_RIGHT,
    AnalysisParams,
    BootstrapParams,
    Component,
    CostKind,
    CostLineItem,
    component_value,
    CvmEstimate,
    CvmInputs,
    DepreciationSchedule,
    LifeCohort,
    Project,
    ProjectMetadata,
    QuestionnaireSpec,
    SurveyResponse,
    load_project,
    read_responses,
    save_project,
    summarize_adjustments,
    summarize_allotments,
    to_millions,
    to_minor,
    underestimated,
    overestimated,
    validate_batch,
    write_responses,
)

FIXTURES = "fixtures"

CARBON = "carbon_oxygen"
WATER = "water_yield"
SOIL = "soil_retention"
BIO = "biodiversity_maintenance"
MICRO = "microclimate_regulation"
RECREATION = "recreation"
AESTHETIC = "aesthetic_enjoyment"
AIR = "air_purification"

TARGETS = {
    CARBON: 20,
    WATER: 10,
    SOIL: 10,
    BIO: 10,
    MICRO: 10,
    RECREATION: 15,
    AESTHETIC: 10,
    AIR: 15,
}

COMPONENTS = (
    Component(CARBON, "Carbon sequestration and oxygen generation",
              "Plants fix carbon and release oxygen."),
    Component(WATER, "Water yield",
              "Vegetation and soils regulate runoff into usable water."),
    Component(SOIL, "Soil retention",
              "Root systems hold soil in place and limit erosion."),
    Component(BIO, "Biodiversity maintenance",
              "Habitat supporting a variety of plant and animal species."),
    Component(MICRO, "Microclimate regulation",
              "Canopy cover moderates local temperature and humidity."),
    Component(RECREATION, "Recreation",
              "Space for exercise, walking and leisure."),
    Component(AESTHETIC, "Aesthetic enjoyment",
              "Scenery and landscape beauty."),
    Component(AIR, "Air purification",
              "Foliage captures dust and airborne pollutants."),
)

DEMOGRAPHIC_FIELDS = (
    "gender",
    "age_bracket",
    "education",
    "income",
    "visited_guangzhou",
    "lived_guangzhou",
    "nature_visit_freq",
    "site_visit_freq",
)

INFO_TEXT = (
    "Baiyun Mountain Scenic Area is a forested hill park in Guangzhou of "
    "roughly 21 square kilometres, replanted from the early 1950s onward "
    "and under continuous maintenance since; vegetation covers about 95% "
    "of the site."
)

# Per-category establishment and maintenance subtotals carried at full
# precision so the ledger sums land on the published totals exactly.
EXACT_ITEMS = (
    ("tree planting and establishment", CostKind.DIRECT, "219332981.00"),
    ("shrub planting and establishment", CostKind.DIRECT, "298800000.00"),
    ("grass seeding and establishment", CostKind.DIRECT, "87800000.00"),
    ("tree maintenance to valuation year", CostKind.INDIRECT, "993103855.00"),
    ("shrub maintenance to valuation year", CostKind.INDIRECT, "1200000.00"),
    ("grass maintenance to valuation year", CostKind.INDIRECT, "1860000.00"),
)

# Stem counts chosen to match the surveyed ~2.15 million trees and to
# average to the published 64-year remaining life.
COHORTS = (
    LifeCohort("Pinus massoniana stand (1951-1953 planting)",
               Decimal(430_000), Decimal(40)),
    LifeCohort("broadleaf replanting (1995-1999)",
               Decimal(1_720_000), Decimal(70)),
)

UNDER_PCTS = [5, 10, 10, 20, 30, 50, 50, 80, 100, 100, 150,
              200, 200, 250, 300, 300, 400, 500, 500, 500, 550]
OVER_PCTS = [10, 25, 40, 50, 70]

UNDER_AT = [1, 7, 12, 18, 24, 30, 36, 42, 48, 54, 60,
            66, 72, 78, 84, 90, 96, 101, 106, 110, 114]
OVER_AT = [4, 27, 51, 75, 99]

# 1-based positions of the three structurally invalid rows in the batch.
INVALID_AT = [17, 58, 103]

AGE = ["18-25", "26-35", "36-45", "46-55", "56-65", "66+"]
EDUCATION = ["primary", "secondary", "college", "bachelor", "postgraduate"]
INCOME = ["<2000", "2000-5000", "5000-10000", "10000-20000", ">20000"]
FREQ = ["never", "rarely", "monthly", "weekly", "daily"]


def questionnaire(anchor: str) -> QuestionnaireSpec:
    return QuestionnaireSpec(
        components=COMPONENTS,
        target_component=BIO,
        total_asset_value_display=to_minor(anchor),
        allows_other=True,
        info_text=INFO_TEXT,
        info_images=(),
        demographic_fields=DEMOGRAPHIC_FIELDS,
        version=1,
    )


def analysis() -> AnalysisParams:
    return AnalysisParams(
        bootstrap=BootstrapParams(seed=20130501, resamples=10_000,
                                  level=Decimal("0.95")),
        sum_tolerance=Decimal("0.5"),
    )


def cvm() -> CvmInputs:
    return CvmInputs(
        estimate=CvmEstimate(
            median_wtp_per_household_year=to_minor("149.00"),
            wtp_ci=(to_minor("67.00"), to_minor("228.00")),
            households=1_953_020,
            annual_aggregate=to_minor("291000000.00"),
            annual_aggregate_ci=(to_minor("131000000.00"),
                                 to_minor("446000000.00")),
            component_annual_value=to_minor("15600000.00"),
        ),
        discount_rate=Decimal("0.0346"),
        horizon_years=None,
    )


def exact_project() -> Project:
    items = tuple(
        CostLineItem(label=label, kind=kind, quantity=Decimal(1),
                     unit_cost=Decimal(amount) * 100)
        for label, kind, amount in EXACT_ITEMS
    )
    return Project(
        metadata=ProjectMetadata(
            name="Baiyun Mountain Scenic Area plant community",
            valuation_year=2007,
            currency_code="CNY",
        ),
        cost_items=items,
        depreciation=DepreciationSchedule(
            physical_deterioration=to_minor("14309910.00"),
            notes={"physical_deterioration":
                   "insect-caused mortality in the standing stock"},
        ),
        life_cohorts=COHORTS,
        questionnaire=questionnaire("1587786926.00"),
        analysis=analysis(),
        cvm=cvm(),
    )


def unit_cost_project() -> Project:
    # Raw per-unit figures; the resulting totals differ from the exact
    # ledger (the year-by-year price adjustment behind the published
    # subtotals is not reconstructable) and carry no exactness claim.
    # The displayed questionnaire anchor here is the rounded replacement
    # figure shown to respondents, not the computed asset value, which
    # exercises the anchor-mismatch warning.
    items = (
        CostLineItem("tree seedlings and planting", CostKind.DIRECT,
                     Decimal(2_150_000), Decimal("86.00") * 100),
        CostLineItem("shrub seedlings and planting", CostKind.DIRECT,
                     Decimal(2_970_000), Decimal("86.00") * 100),
        CostLineItem("grass seeding per hectare", CostKind.DIRECT,
                     Decimal(2_493), Decimal("36000.00") * 100),
        CostLineItem("pine maintenance per year", CostKind.INDIRECT,
                     Decimal(430_000), Decimal("26.90") * 100,
                     periods=Decimal(53)),
        CostLineItem("broadleaf maintenance per year", CostKind.INDIRECT,
                     Decimal(1_720_000), Decimal("26.90") * 100,
                     periods=Decimal(11)),
        CostLineItem("shrub and grass area maintenance per year",
                     CostKind.INDIRECT, Decimal(2_493),
                     Decimal("3.60") * 100, periods=Decimal(11)),
    )
    return Project(
        metadata=ProjectMetadata(
            name="Baiyun Mountain Scenic Area plant community "
                 "(raw unit costs, illustrative)",
            valuation_year=2007,
            currency_code="CNY",
        ),
        cost_items=items,
        depreciation=DepreciationSchedule(
            physical_deterioration=to_minor("14309910.00"),
            notes={"physical_deterioration":
                   "insect-caused mortality in the standing stock"},
        ),
        life_cohorts=COHORTS,
        questionnaire=questionnaire("1721000000.00"),
        analysis=analysis(),
        cvm=cvm(),
    )


def _pair(x: str, y: str, d: int) -> tuple[dict, dict]:
    """Two rows transferring d points from y to x and back."""
    up = dict(TARGETS)
    up[x] += d
    up[y] -= d
    down = dict(TARGETS)
    down[x] -= d
    down[y] += d
    return up, down


def build_valid_allotments() -> list[tuple[dict, str | None]]:
    """117 rows: 41 at the target split, 36 mirrored transfer pairs, and 4
    rows exercising the write-in bucket.  Mirroring keeps every component's
    median at its target; only 50 rows move biodiversity, so its mass at
    10 pins the bootstrap interval."""
    rows: list[tuple[dict, str | None]] = []
    for _ in range(41):
        rows.append((dict(TARGETS), None))

    partners = [CARBON, WATER, SOIL, MICRO, RECREATION, AESTHETIC, AIR]
    for i in range(25):
        partner = partners[i % len(partners)]
        d = 2 + (i % 2)
        up, down = _pair(BIO, partner, d)
        rows.append((up, None))
        rows.append((down, None))

    quiet_pairs = [
        (CARBON, RECREATION, 5), (WATER, SOIL, 2), (AESTHETIC, AIR, 3),
        (CARBON, WATER, 4), (RECREATION, AESTHETIC, 2), (AIR, SOIL, 3),
        (CARBON, AIR, 5), (MICRO, RECREATION, 2), (WATER, AESTHETIC, 3),
        (SOIL, MICRO, 2), (CARBON, MICRO, 4),
    ]
    for x, y, d in quiet_pairs:
        up, down = _pair(x, y, d)
        rows.append((up, None))
        rows.append((down, None))

    write_ins = [
        (4, {CARBON: -2, RECREATION: -2}, "education and research"),
        (2, {AIR: -2}, "cultural heritage"),
        (6, {CARBON: -3, RECREATION: -3}, "spiritual wellbeing"),
        (3, {AESTHETIC: -3}, "nearby property value"),
    ]
    for other_pct, offsets, label in write_ins:
        row = dict(TARGETS)
        for cid, delta in offsets.items():
            row[cid] += delta
        row["other"] = other_pct
        rows.append((row, label))

    assert len(rows) == 117
    for row, _ in rows:
        assert sum(row.values()) == 100
        assert all(0 <= v <= 100 for v in row.values())
    return rows


def demographics(i: int) -> dict[str, str]:
    return {
        "gender": ["male", "female"][i % 2],
        "age_bracket": AGE[i % len(AGE)],
        "education": EDUCATION[i % len(EDUCATION)],
        "income": INCOME[(i // 2) % len(INCOME)],
        "visited_guangzhou": ["yes", "yes", "yes", "no"][i % 4],
        "lived_guangzhou": ["yes", "no", "yes"][i % 3],
        "nature_visit_freq": FREQ[1 + (i % 4)],
        "site_visit_freq": FREQ[i % 4],
    }


def build_responses(spec: QuestionnaireSpec) -> list[SurveyResponse]:
    rows = build_valid_allotments()
    random.Random(20130501).shuffle(rows)

    adjustments: list = [ABOUT_RIGHT] * 117
    for pos, pct in zip(UNDER_AT, UNDER_PCTS):
        adjustments[pos] = underestimated(pct)
    for pos, pct in zip(OVER_AT, OVER_PCTS):
        adjustments[pos] = overestimated(pct)

    valid = [
        SurveyResponse(
            respondent_id="",
            demographics=demographics(i),
            allotments={cid: Decimal(v) for cid, v in row.items()},
            adjustment=adjustments[i],
            other_label=label,
        )
        for i, (row, label) in enumerate(rows)
    ]

    sum_90 = dict(TARGETS)
    sum_90[AIR] -= 10
    missing_bio = {cid: v for cid, v in TARGETS.items() if cid != BIO}
    out_of_range = dict(TARGETS)
    out_of_range[CARBON] = 150
    invalid = [
        SurveyResponse("", demographics(117),
                       {c: Decimal(v) for c, v in sum_90.items()},
                       ABOUT_RIGHT),
        SurveyResponse("", demographics(118),
                       {c: Decimal(v) for c, v in missing_bio.items()},
                       ABOUT_RIGHT),
        SurveyResponse("", demographics(119),
                       {c: Decimal(v) for c, v in out_of_range.items()},
                       ABOUT_RIGHT),
    ]

    batch: list[SurveyResponse] = []
    pending_invalid = list(zip(INVALID_AT, invalid))
    valid_iter = iter(valid)
    for position in range(1, 121):
        if pending_invalid and pending_invalid[0][0] == position:
            batch.append(pending_invalid.pop(0)[1])
        else:
            batch.append(next(valid_iter))
    assert len(batch) == 120

    return [
        SurveyResponse(
            respondent_id=f"bmsa-{i:03d}",
            demographics=r.demographics,
            allotments=r.allotments,
            adjustment=r.adjustment,
            other_label=r.other_label,
        )
        for i, r in enumerate(batch, start=1)
    ]


def self_check() -> None:
    project = load_project(f"{FIXTURES}/bmsa_project.json")
    appraisal = project.appraise()
    assert appraisal.reproduction_cost == to_minor("1602096836.00")
    assert appraisal.replacement_cost == to_minor("1602096836.00")
    assert appraisal.total_asset_value == to_minor("1587786926.00")
    assert appraisal.remaining_useful_life_years == 64

    responses = read_responses(f"{FIXTURES}/bmsa_responses.csv",
                               project.questionnaire)
    valid, report = validate_batch(responses, project.questionnaire,
                                   project.analysis.sum_tolerance)
    assert (report.total_received, report.valid) == (120, 117)
    reasons = sorted(r for _, r in report.rejected)
    assert reasons == ["AllotmentOutOfRange", "MissingComponent", "SumNot100"]

    allotments = summarize_allotments(valid, project.questionnaire,
                                      project.analysis.bootstrap)
    for cid, target in TARGETS.items():
        assert allotments.get(cid).median_pct == target, cid
    bio = allotments.get(BIO)
    assert (bio.ci_low, bio.ci_high) == (10, 10)
    assert allotments.get("other").median_pct == 0

    adj = summarize_adjustments(valid)
    assert (adj.n_under, adj.n_over, adj.n_about_right) == (21, 5, 91)
    assert adj.mean_under_pct == 205
    assert adj.mean_over_pct == 39
    assert adj.aggregate_coefficient == 1

    value = component_value(appraisal.total_asset_value, Decimal(10))
    assert to_millions(value) == Decimal("158.8")

    unit = load_project(f"{FIXTURES}/bmsa_unit_cost_project.json")
    assert unit.appraise().total_asset_value != appraisal.total_asset_value

    print("self-check passed")
    print(f"  reproduction cost : {appraisal.reproduction_cost}")
    print(f"  total asset value : {appraisal.total_asset_value}")
    print(f"  batch             : {report.valid}/{report.total_received} valid")
    print(f"  biodiversity      : median {bio.median_pct}%, "
          f"CI ({bio.ci_low}, {bio.ci_high})")
    print(f"  adjustment groups : {adj.n_under}/{adj.n_over}/"
          f"{adj.n_about_right}, means {adj.mean_under_pct}/{adj.mean_over_pct}")


def main() -> None:
    project = exact_project()
    save_project(project, f"{FIXTURES}/bmsa_project.json")
    save_project(unit_cost_project(), f"{FIXTURES}/bmsa_unit_cost_project.json")
    write_responses(f"{FIXTURES}/bmsa_responses.csv",
                    build_responses(project.questionnaire),
                    project.questionnaire)
    self_check()


if __name__ == "__main__":
    main()

"""Tests for project file loading/saving and response batch CSV round-trips."""

import json
import os
from decimal import Decimal
from pathlib import Path

import pytest

from vamkit.errors import SchemaError, ValidationError
from vamkit.project import (
    atomic_write_text,
    format_header_line,
    format_response_line,
    load_project,
    project_from_jsonable,
    project_to_jsonable,
    read_responses,
    response_columns,
    row_to_response,
    save_project,
    write_responses,
)
from vamkit.survey import ABOUT_RIGHT, AdjustmentKind, SurveyResponse, underestimated

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
PROJECT_PATH = FIXTURES / "bmsa_project.json"
RESPONSES_PATH = FIXTURES / "bmsa_responses.csv"


@pytest.fixture(scope="module")
def project():
    return load_project(PROJECT_PATH)


@pytest.fixture(scope="module")
def raw():
    with open(PROJECT_PATH, encoding="utf-8") as fp:
        return json.load(fp)


# -------------------------------------------------------------------------
# Loading the shipped fixture
# -------------------------------------------------------------------------


class TestLoadProject:
    def test_metadata(self, project):
        assert project.metadata.valuation_year == 2007
        assert project.metadata.currency_code == "CNY"

    def test_money_parsed_to_minor_units(self, project):
        # Unit costs are stored as major-unit strings in the file.
        by_label = {item.label: item for item in project.cost_items}
        assert by_label["tree planting and establishment"].unit_cost == 21_933_298_100

    def test_questionnaire(self, project):
        spec = project.questionnaire
        assert spec.target_component == "biodiversity_maintenance"
        assert len(spec.components) == 8
        assert spec.allows_other
        assert spec.total_asset_value_display == 158_778_692_600

    def test_analysis_params(self, project):
        assert project.analysis.bootstrap.seed == 20130501
        assert project.analysis.bootstrap.resamples == 10_000
        assert project.analysis.sum_tolerance == Decimal("0.5")

    def test_cvm_inputs(self, project):
        cvm = project.cvm
        assert cvm.estimate.median_wtp_per_household_year == 14_900
        assert cvm.estimate.households == 1_953_020
        assert cvm.estimate.annual_aggregate == 29_100_000_000
        assert cvm.discount_rate == Decimal("0.0346")
        assert cvm.horizon_years is None

    def test_appraisal_runs_from_file(self, project):
        appraisal = project.appraise()
        assert appraisal.total_asset_value == 158_778_692_600
        assert appraisal.remaining_useful_life_years == 64

    def test_discount_params_default_to_rounded_life(self, project):
        params = project.discount_params(project.appraise())
        assert params.years == 64

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            load_project(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(SchemaError, match="not valid JSON"):
            load_project(path)


class TestSchemaErrors:
    def test_unsupported_version(self, raw):
        doc = json.loads(json.dumps(raw))
        doc["schema_version"] = 99
        with pytest.raises(SchemaError, match="unsupported version 99"):
            project_from_jsonable(doc)

    def test_missing_required_field_names_its_path(self, raw):
        doc = json.loads(json.dumps(raw))
        del doc["metadata"]["valuation_year"]
        with pytest.raises(SchemaError, match="metadata.valuation_year"):
            project_from_jsonable(doc)

    def test_bad_money_string_names_its_path(self, raw):
        doc = json.loads(json.dumps(raw))
        doc["cvm"]["wtp_ci"][0] = "cheap"
        with pytest.raises(SchemaError, match=r"cvm.wtp_ci\[0\]"):
            project_from_jsonable(doc)

    def test_non_finite_rejected(self, raw):
        doc = json.loads(json.dumps(raw))
        doc["cvm"]["median_wtp"] = "NaN"
        with pytest.raises(SchemaError, match="cvm.median_wtp"):
            project_from_jsonable(doc)

    def test_bool_is_not_an_integer(self, raw):
        doc = json.loads(json.dumps(raw))
        doc["metadata"]["valuation_year"] = True
        with pytest.raises(SchemaError, match="metadata.valuation_year"):
            project_from_jsonable(doc)

    def test_domain_violation_reported_as_schema_error(self, raw):
        doc = json.loads(json.dumps(raw))
        doc["depreciation"]["physical_deterioration"] = "-1.00"
        with pytest.raises(SchemaError, match="must be >= 0"):
            project_from_jsonable(doc)


class TestCvmVariants:
    def test_households_only(self, raw):
        doc = json.loads(json.dumps(raw))
        del doc["cvm"]["annual_aggregate"]
        project = project_from_jsonable(doc)
        # Aggregate recomputed as median x households.
        assert project.cvm.estimate.annual_aggregate == 29_099_998_000

    def test_aggregate_only_backs_out_households(self, raw):
        doc = json.loads(json.dumps(raw))
        del doc["cvm"]["households"]
        project = project_from_jsonable(doc)
        assert project.cvm.estimate.households == 1_953_020

    def test_neither_is_an_error(self, raw):
        doc = json.loads(json.dumps(raw))
        del doc["cvm"]["households"]
        del doc["cvm"]["annual_aggregate"]
        with pytest.raises(SchemaError, match="at least one"):
            project_from_jsonable(doc)

    def test_cvm_section_optional(self, raw):
        doc = json.loads(json.dumps(raw))
        del doc["cvm"]
        project = project_from_jsonable(doc)
        assert project.cvm is None
        with pytest.raises(ValidationError, match="no cvm section"):
            project.discount_params(project.appraise())


# -------------------------------------------------------------------------
# Round trips
# -------------------------------------------------------------------------


class TestRoundTrip:
    def test_project_save_load_preserves_dataclasses(self, project, tmp_path):
        out = tmp_path / "copy.json"
        save_project(project, out)
        assert load_project(out) == project

    def test_to_jsonable_is_json_safe(self, project):
        text = json.dumps(project_to_jsonable(project))
        assert project_from_jsonable(json.loads(text)) == project

    def test_responses_round_trip(self, project, tmp_path):
        spec = project.questionnaire
        originals = read_responses(RESPONSES_PATH, spec)
        out = tmp_path / "copy.csv"
        write_responses(out, originals, spec)
        assert read_responses(out, spec) == originals

    def test_fixture_row_count(self, project):
        assert len(read_responses(RESPONSES_PATH, project.questionnaire)) == 120


# -------------------------------------------------------------------------
# Response CSV parsing
# -------------------------------------------------------------------------


class TestResponseCsv:
    def test_header_columns(self, project):
        columns = response_columns(project.questionnaire)
        assert columns[0] == "respondent_id"
        assert columns[-4:] == (
            "other_label",
            "adjustment_kind",
            "adjustment_pct",
            "submitted_at",
        )
        assert "biodiversity_maintenance" in columns

    def test_header_mismatch_rejected(self, project, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("id,whatever\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="header mismatch"):
            read_responses(path, project.questionnaire)

    def test_empty_file_rejected(self, project, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(SchemaError, match="expected a header row"):
            read_responses(path, project.questionnaire)

    def test_blank_rows_skipped(self, project, tmp_path):
        spec = project.questionnaire
        resp = SurveyResponse(
            "r1",
            {},
            {cid: Decimal("12.5") for cid in spec.component_ids},
            ABOUT_RIGHT,
        )
        path = tmp_path / "gappy.csv"
        path.write_text(
            format_header_line(spec)
            + format_response_line(resp, spec)
            + ",,,,,,,,,,,,,,,,,,,,\n",
            encoding="utf-8",
        )
        assert len(read_responses(path, spec)) == 1

    def test_junk_allotment_cell_becomes_absent(self, project):
        spec = project.questionnaire
        row = {column: "" for column in response_columns(spec)}
        row["respondent_id"] = "r9"
        row["carbon_oxygen"] = "lots"
        row["adjustment_kind"] = "about_right"
        resp = row_to_response(row, spec)
        assert "carbon_oxygen" not in resp.allotments

    def test_blank_demographics_dropped(self, project):
        spec = project.questionnaire
        row = {column: "" for column in response_columns(spec)}
        row["respondent_id"] = "r9"
        row["gender"] = "female"
        resp = row_to_response(row, spec)
        assert resp.demographics == {"gender": "female"}
        assert "age_bracket" not in resp.demographics

    def test_unknown_adjustment_kind_becomes_missing(self, project):
        spec = project.questionnaire
        row = {column: "" for column in response_columns(spec)}
        row["respondent_id"] = "r9"
        row["adjustment_kind"] = "dunno"
        assert row_to_response(row, spec).adjustment is None

    def test_adjustment_pct_preserved(self, project):
        spec = project.questionnaire
        resp = SurveyResponse(
            "r1",
            {},
            {cid: Decimal("12.5") for cid in spec.component_ids},
            underestimated(Decimal(205)),
        )
        line = format_response_line(resp, spec)
        row = dict(zip(response_columns(spec), next(iter([line.rstrip("\n").split(",")]))))
        back = row_to_response(row, spec)
        assert back.adjustment.kind is AdjustmentKind.UNDERESTIMATED
        assert back.adjustment.pct == 205


# -------------------------------------------------------------------------
# Atomic writes
# -------------------------------------------------------------------------


class TestAtomicWrite:
    def test_writes_content(self, tmp_path):
        path = tmp_path / "out.txt"
        atomic_write_text(path, "hello\n")
        assert path.read_text(encoding="utf-8") == "hello\n"

    def test_replaces_existing(self, tmp_path):
        path = tmp_path / "out.txt"
        path.write_text("old", encoding="utf-8")
        atomic_write_text(path, "new")
        assert path.read_text(encoding="utf-8") == "new"

    def test_leaves_no_temp_files(self, tmp_path):
        path = tmp_path / "out.txt"
        atomic_write_text(path, "x")
        assert os.listdir(tmp_path) == ["out.txt"]

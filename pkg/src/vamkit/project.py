"""Project files (JSON) and response batches (CSV).

A project bundles everything needed to run the pipeline: the cost ledger,
depreciation schedule, life cohorts, questionnaire, published
stated-preference inputs, and analysis parameters.  Responses live in a
separate append-friendly CSV so the collection service can grow the batch
while the project stays immutable.

Monetary fields are stored as major-unit decimal strings ("149.00") and
converted to integer minor units at load time; nothing downstream touches
floats.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, localcontext
from typing import Any, Mapping, Sequence

from .cost_model import (
    AppraisalResult,
    CostKind,
    CostLineItem,
    DepreciationSchedule,
    LifeCohort,
    appraise,
)
from .cvm import CvmEstimate, DiscountParams
from .errors import SchemaError, ValidationError
from .money import MINOR_PER_MAJOR, major_str, round_half_up, to_minor
from .survey import (
    Adjustment,
    AdjustmentKind,
    BootstrapParams,
    Component,
    QuestionnaireSpec,
    SurveyResponse,
    DEFAULT_SUM_TOLERANCE,
    parse_pct,
)

SCHEMA_VERSION = 1


# --- schema walking helpers ---------------------------------------------


def _at(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _require(obj: Any, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path or '<root>'}: expected an object")
    if key not in obj:
        raise SchemaError(f"{_at(path, key)}: required field missing")
    return obj[key]


def _optional(obj: Any, key: str, default: Any = None) -> Any:
    if not isinstance(obj, dict):
        return default
    value = obj.get(key, default)
    return default if value is None else value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{path}: expected a string, got {type(value).__name__}")
    return value


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}: expected an integer, got {value!r}")
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{path}: expected true/false, got {value!r}")
    return value


def _as_decimal(value: Any, path: str) -> Decimal:
    if isinstance(value, Decimal):
        return value
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{path}: expected a decimal string, got {value!r}")
    try:
        parsed = Decimal(value)
    except InvalidOperation as exc:
        raise SchemaError(f"{path}: not a decimal: {value!r}") from exc
    if not parsed.is_finite():
        raise SchemaError(f"{path}: not a finite decimal: {value!r}")
    return parsed


def _as_money(value: Any, path: str) -> int:
    try:
        return to_minor(_as_decimal(value, path))
    except ValidationError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected a list, got {type(value).__name__}")
    return value


def _as_pair(value: Any, path: str) -> tuple[Any, Any]:
    items = _as_list(value, path)
    if len(items) != 2:
        raise SchemaError(f"{path}: expected [low, high], got {len(items)} items")
    return items[0], items[1]


def _dec_str(value: Decimal) -> str:
    return format(value, "f")


def _minor_to_major_str(minor: Decimal) -> str:
    # Exact: dividing by the scale only shifts the exponent.
    with localcontext() as ctx:
        ctx.prec = 50
        return format(minor / MINOR_PER_MAJOR, "f")


# --- project sections -----------------------------------------------------


@dataclass(frozen=True)
class ProjectMetadata:
    name: str
    valuation_year: int
    currency_code: str = "CNY"

    def __post_init__(self) -> None:
        if not self.name:
            raise ValidationError("project name must not be empty")


@dataclass(frozen=True)
class CvmInputs:
    """Published stated-preference figures plus discounting choices.

    ``horizon_years`` of None means: accumulate over the appraisal's
    rounded remaining useful life.
    """

    estimate: CvmEstimate
    discount_rate: Decimal
    horizon_years: int | None = None

    def __post_init__(self) -> None:
        if self.discount_rate < 0:
            raise ValidationError("discount rate must be >= 0")
        if self.horizon_years is not None and self.horizon_years < 1:
            raise ValidationError("horizon_years must be >= 1 when given")


@dataclass(frozen=True)
class AnalysisParams:
    bootstrap: BootstrapParams
    sum_tolerance: Decimal = DEFAULT_SUM_TOLERANCE

    def __post_init__(self) -> None:
        if self.sum_tolerance < 0:
            raise ValidationError("sum tolerance must be >= 0")


@dataclass(frozen=True)
class Project:
    metadata: ProjectMetadata
    cost_items: tuple[CostLineItem, ...]
    depreciation: DepreciationSchedule
    life_cohorts: tuple[LifeCohort, ...]
    questionnaire: QuestionnaireSpec
    analysis: AnalysisParams
    cvm: CvmInputs | None = None

    def appraise(self) -> AppraisalResult:
        return appraise(
            self.cost_items,
            self.depreciation,
            self.life_cohorts,
            valuation_year=self.metadata.valuation_year,
            currency_code=self.metadata.currency_code,
        )

    def discount_params(self, appraisal: AppraisalResult) -> DiscountParams:
        if self.cvm is None:
            raise ValidationError("project has no cvm section")
        years = self.cvm.horizon_years
        if years is None:
            years = round_half_up(appraisal.remaining_useful_life_years)
        return DiscountParams(rate=self.cvm.discount_rate, years=years)


# --- project JSON ----------------------------------------------------------


def _load_cost_item(obj: Any, path: str) -> CostLineItem:
    kind_text = _as_str(_require(obj, "kind", path), _at(path, "kind"))
    try:
        kind = CostKind(kind_text)
    except ValueError:
        raise SchemaError(
            f"{_at(path, 'kind')}: expected 'direct' or 'indirect', got {kind_text!r}"
        ) from None
    with localcontext() as ctx:
        ctx.prec = 50
        unit_cost_minor = (
            _as_decimal(_require(obj, "unit_cost", path), _at(path, "unit_cost"))
            * MINOR_PER_MAJOR
        )
    return CostLineItem(
        label=_as_str(_require(obj, "label", path), _at(path, "label")),
        kind=kind,
        quantity=_as_decimal(_require(obj, "quantity", path), _at(path, "quantity")),
        unit_cost=unit_cost_minor,
        periods=_as_decimal(_optional(obj, "periods", "1"), _at(path, "periods")),
    )


def _load_depreciation(obj: Any, path: str) -> DepreciationSchedule:
    notes_raw = _optional(obj, "notes", {})
    if not isinstance(notes_raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in notes_raw.items()
    ):
        raise SchemaError(f"{_at(path, 'notes')}: expected string-to-string map")
    return DepreciationSchedule(
        physical_deterioration=_as_money(
            _optional(obj, "physical_deterioration", "0"),
            _at(path, "physical_deterioration"),
        ),
        curable_functional_obsolescence=_as_money(
            _optional(obj, "curable_functional_obsolescence", "0"),
            _at(path, "curable_functional_obsolescence"),
        ),
        incurable_functional_obsolescence=_as_money(
            _optional(obj, "incurable_functional_obsolescence", "0"),
            _at(path, "incurable_functional_obsolescence"),
        ),
        economic_obsolescence=_as_money(
            _optional(obj, "economic_obsolescence", "0"),
            _at(path, "economic_obsolescence"),
        ),
        notes=dict(notes_raw),
    )


def _load_questionnaire(obj: Any, path: str) -> QuestionnaireSpec:
    components = []
    for i, comp in enumerate(_as_list(_require(obj, "components", path), _at(path, "components"))):
        cpath = _at(_at(path, "components"), i)
        components.append(
            Component(
                component_id=_as_str(_require(comp, "id", cpath), _at(cpath, "id")),
                display_name=_as_str(
                    _require(comp, "name", cpath), _at(cpath, "name")
                ),
                explanation=_as_str(
                    _optional(comp, "explanation", ""), _at(cpath, "explanation")
                ),
            )
        )
    fields = tuple(
        _as_str(f, _at(_at(path, "demographic_fields"), i))
        for i, f in enumerate(
            _as_list(
                _optional(obj, "demographic_fields", []),
                _at(path, "demographic_fields"),
            )
        )
    )
    images = tuple(
        _as_str(u, _at(_at(path, "info_images"), i))
        for i, u in enumerate(
            _as_list(_optional(obj, "info_images", []), _at(path, "info_images"))
        )
    )
    return QuestionnaireSpec(
        components=tuple(components),
        target_component=_as_str(
            _require(obj, "target_component", path), _at(path, "target_component")
        ),
        total_asset_value_display=_as_money(
            _require(obj, "total_asset_value_display", path),
            _at(path, "total_asset_value_display"),
        ),
        allows_other=_as_bool(
            _optional(obj, "allows_other", True), _at(path, "allows_other")
        ),
        info_text=_as_str(_optional(obj, "info_text", ""), _at(path, "info_text")),
        info_images=images,
        demographic_fields=fields,
        version=_as_int(_optional(obj, "version", 1), _at(path, "version")),
    )


def _load_cvm(obj: Any, path: str) -> CvmInputs:
    median = _as_money(_require(obj, "median_wtp", path), _at(path, "median_wtp"))
    ci_raw = _as_pair(_require(obj, "wtp_ci", path), _at(path, "wtp_ci"))
    wtp_ci = (
        _as_money(ci_raw[0], _at(path, "wtp_ci") + "[0]"),
        _as_money(ci_raw[1], _at(path, "wtp_ci") + "[1]"),
    )
    households = _optional(obj, "households")
    aggregate = _optional(obj, "annual_aggregate")
    if households is None and aggregate is None:
        raise SchemaError(
            f"{_at(path, 'households')}: give households or annual_aggregate "
            "(at least one)"
        )
    if households is not None:
        households = _as_int(households, _at(path, "households"))
    if aggregate is not None:
        aggregate = _as_money(aggregate, _at(path, "annual_aggregate"))
    if aggregate is None:
        aggregate = median * households
    if households is None:
        if median <= 0:
            raise SchemaError(
                f"{_at(path, 'median_wtp')}: cannot back out households "
                "from a zero median"
            )
        households = round_half_up(Decimal(aggregate) / Decimal(median))
    agg_ci_raw = _as_pair(
        _require(obj, "annual_aggregate_ci", path), _at(path, "annual_aggregate_ci")
    )
    aggregate_ci = (
        _as_money(agg_ci_raw[0], _at(path, "annual_aggregate_ci") + "[0]"),
        _as_money(agg_ci_raw[1], _at(path, "annual_aggregate_ci") + "[1]"),
    )
    horizon = _optional(obj, "horizon_years")
    try:
        estimate = CvmEstimate(
            median_wtp_per_household_year=median,
            wtp_ci=wtp_ci,
            households=households,
            annual_aggregate=aggregate,
            annual_aggregate_ci=aggregate_ci,
            component_annual_value=_as_money(
                _require(obj, "component_annual_value", path),
                _at(path, "component_annual_value"),
            ),
        )
        return CvmInputs(
            estimate=estimate,
            discount_rate=_as_decimal(
                _require(obj, "discount_rate", path), _at(path, "discount_rate")
            ),
            horizon_years=None
            if horizon is None
            else _as_int(horizon, _at(path, "horizon_years")),
        )
    except ValidationError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from exc


def _load_analysis(obj: Any, path: str) -> AnalysisParams:
    boot = _require(obj, "bootstrap", path)
    bpath = _at(path, "bootstrap")
    try:
        params = BootstrapParams(
            seed=_as_int(_require(boot, "seed", bpath), _at(bpath, "seed")),
            resamples=_as_int(
                _optional(boot, "resamples", 10_000), _at(bpath, "resamples")
            ),
            level=_as_decimal(_optional(boot, "level", "0.95"), _at(bpath, "level")),
        )
        return AnalysisParams(
            bootstrap=params,
            sum_tolerance=_as_decimal(
                _optional(obj, "sum_tolerance", str(DEFAULT_SUM_TOLERANCE)),
                _at(path, "sum_tolerance"),
            ),
        )
    except ValidationError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from exc


def project_from_jsonable(raw: Any) -> Project:
    version = _as_int(_require(raw, "schema_version", ""), "schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"schema_version: unsupported version {version} (expected {SCHEMA_VERSION})"
        )
    meta_raw = _require(raw, "metadata", "")
    try:
        metadata = ProjectMetadata(
            name=_as_str(_require(meta_raw, "name", "metadata"), "metadata.name"),
            valuation_year=_as_int(
                _require(meta_raw, "valuation_year", "metadata"),
                "metadata.valuation_year",
            ),
            currency_code=_as_str(
                _optional(meta_raw, "currency_code", "CNY"), "metadata.currency_code"
            ),
        )
        items = tuple(
            _load_cost_item(item, _at("cost_items", i))
            for i, item in enumerate(
                _as_list(_require(raw, "cost_items", ""), "cost_items")
            )
        )
        depreciation = _load_depreciation(
            _optional(raw, "depreciation", {}), "depreciation"
        )
        cohorts = tuple(
            LifeCohort(
                label=_as_str(
                    _require(c, "label", _at("life_cohorts", i)),
                    _at(_at("life_cohorts", i), "label"),
                ),
                weight=_as_decimal(
                    _require(c, "weight", _at("life_cohorts", i)),
                    _at(_at("life_cohorts", i), "weight"),
                ),
                remaining_life_years=_as_decimal(
                    _require(c, "remaining_life_years", _at("life_cohorts", i)),
                    _at(_at("life_cohorts", i), "remaining_life_years"),
                ),
            )
            for i, c in enumerate(
                _as_list(_require(raw, "life_cohorts", ""), "life_cohorts")
            )
        )
        questionnaire = _load_questionnaire(
            _require(raw, "questionnaire", ""), "questionnaire"
        )
        analysis = _load_analysis(_require(raw, "analysis", ""), "analysis")
        cvm_raw = _optional(raw, "cvm")
        cvm = None if cvm_raw is None else _load_cvm(cvm_raw, "cvm")
    except ValidationError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc
    return Project(
        metadata=metadata,
        cost_items=items,
        depreciation=depreciation,
        life_cohorts=cohorts,
        questionnaire=questionnaire,
        analysis=analysis,
        cvm=cvm,
    )


def load_project(path: str) -> Project:
    try:
        with open(path, encoding="utf-8") as fp:
            raw = json.load(fp, parse_float=Decimal)
    except OSError as exc:
        raise ValidationError(f"cannot read project file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    return project_from_jsonable(raw)


def project_to_jsonable(project: Project) -> dict:
    q = project.questionnaire
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "name": project.metadata.name,
            "valuation_year": project.metadata.valuation_year,
            "currency_code": project.metadata.currency_code,
        },
        "cost_items": [
            {
                "label": item.label,
                "kind": item.kind.value,
                "quantity": _dec_str(item.quantity),
                "unit_cost": _minor_to_major_str(item.unit_cost),
                "periods": _dec_str(item.periods),
            }
            for item in project.cost_items
        ],
        "depreciation": {
            "physical_deterioration": major_str(
                project.depreciation.physical_deterioration
            ),
            "curable_functional_obsolescence": major_str(
                project.depreciation.curable_functional_obsolescence
            ),
            "incurable_functional_obsolescence": major_str(
                project.depreciation.incurable_functional_obsolescence
            ),
            "economic_obsolescence": major_str(
                project.depreciation.economic_obsolescence
            ),
            "notes": dict(project.depreciation.notes),
        },
        "life_cohorts": [
            {
                "label": c.label,
                "weight": _dec_str(c.weight),
                "remaining_life_years": _dec_str(c.remaining_life_years),
            }
            for c in project.life_cohorts
        ],
        "questionnaire": {
            "components": [
                {
                    "id": c.component_id,
                    "name": c.display_name,
                    "explanation": c.explanation,
                }
                for c in q.components
            ],
            "target_component": q.target_component,
            "total_asset_value_display": major_str(q.total_asset_value_display),
            "allows_other": q.allows_other,
            "info_text": q.info_text,
            "info_images": list(q.info_images),
            "demographic_fields": list(q.demographic_fields),
            "version": q.version,
        },
        "analysis": {
            "sum_tolerance": _dec_str(project.analysis.sum_tolerance),
            "bootstrap": {
                "seed": project.analysis.bootstrap.seed,
                "resamples": project.analysis.bootstrap.resamples,
                "level": _dec_str(project.analysis.bootstrap.level),
            },
        },
    }
    if project.cvm is not None:
        est = project.cvm.estimate
        out["cvm"] = {
            "median_wtp": major_str(est.median_wtp_per_household_year),
            "wtp_ci": [major_str(est.wtp_ci[0]), major_str(est.wtp_ci[1])],
            "households": est.households,
            "annual_aggregate": major_str(est.annual_aggregate),
            "annual_aggregate_ci": [
                major_str(est.annual_aggregate_ci[0]),
                major_str(est.annual_aggregate_ci[1]),
            ],
            "component_annual_value": major_str(est.component_annual_value),
            "discount_rate": _dec_str(project.cvm.discount_rate),
            "horizon_years": project.cvm.horizon_years,
        }
    return out


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename over."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
            fp.flush()
            os.fsync(fp.fileno())
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_project(project: Project, path: str) -> None:
    text = json.dumps(project_to_jsonable(project), indent=2, ensure_ascii=False)
    atomic_write_text(path, text + "\n")


# --- response batch CSV ----------------------------------------------------

_FIXED_LEAD = ("respondent_id",)
_FIXED_TAIL = ("other_label", "adjustment_kind", "adjustment_pct", "submitted_at")


def response_columns(spec: QuestionnaireSpec) -> tuple[str, ...]:
    """Batch header: id, demographics, one column per component, bookkeeping."""
    columns = (
        _FIXED_LEAD + spec.demographic_fields + spec.allotment_columns() + _FIXED_TAIL
    )
    if len(set(columns)) != len(columns):
        raise ValidationError(
            "column name collision between demographics, components and "
            "bookkeeping fields"
        )
    return columns


def _parse_adjustment(kind_text: str, pct_text: str) -> Adjustment | None:
    kind_text = kind_text.strip()
    if not kind_text:
        return None
    try:
        kind = AdjustmentKind(kind_text)
    except ValueError:
        return None
    return Adjustment(kind, parse_pct(pct_text))


def row_to_response(row: Mapping[str, str], spec: QuestionnaireSpec) -> SurveyResponse:
    """Lenient per-cell parse: blanks and junk become absent values, and the
    validator decides the response's fate."""
    allotments = {}
    for cid in spec.allotment_columns():
        pct = parse_pct(row.get(cid, ""))
        if pct is not None:
            allotments[cid] = pct
    demographics = {
        f: row.get(f, "").strip() for f in spec.demographic_fields if row.get(f, "").strip()
    }
    other_label = row.get("other_label", "").strip() or None
    return SurveyResponse(
        respondent_id=row.get("respondent_id", "").strip(),
        demographics=demographics,
        allotments=allotments,
        adjustment=_parse_adjustment(
            row.get("adjustment_kind", ""), row.get("adjustment_pct", "")
        ),
        other_label=other_label,
        submitted_at=row.get("submitted_at", "").strip(),
    )


def response_to_row(resp: SurveyResponse, spec: QuestionnaireSpec) -> list[str]:
    cells = [resp.respondent_id]
    for f in spec.demographic_fields:
        cells.append(resp.demographics.get(f, ""))
    for cid in spec.allotment_columns():
        pct = resp.allotments.get(cid)
        cells.append("" if pct is None else format(pct, "f"))
    cells.append(resp.other_label or "")
    if resp.adjustment is None:
        cells.extend(["", ""])
    else:
        cells.append(resp.adjustment.kind.value)
        pct = resp.adjustment.pct
        cells.append("" if pct is None else format(pct, "f"))
    cells.append(resp.submitted_at)
    return cells


def format_response_line(resp: SurveyResponse, spec: QuestionnaireSpec) -> str:
    """One CSV line (with trailing newline) for append-only storage."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(response_to_row(resp, spec))
    return buf.getvalue()


def format_header_line(spec: QuestionnaireSpec) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerow(response_columns(spec))
    return buf.getvalue()


def write_responses(
    path: str, responses: Sequence[SurveyResponse], spec: QuestionnaireSpec
) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(response_columns(spec))
    for resp in responses:
        writer.writerow(response_to_row(resp, spec))
    atomic_write_text(path, buf.getvalue())


def read_responses(path: str, spec: QuestionnaireSpec) -> list[SurveyResponse]:
    try:
        with open(path, encoding="utf-8", newline="") as fp:
            rows = list(csv.reader(fp))
    except OSError as exc:
        raise ValidationError(f"cannot read response file {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: empty file, expected a header row")
    expected = list(response_columns(spec))
    header = rows[0]
    if header != expected:
        raise SchemaError(
            f"{path}: header mismatch: expected {expected}, got {header}"
        )
    responses = []
    for cells in rows[1:]:
        if not any(cell.strip() for cell in cells):
            continue
        row = dict(zip(header, cells))
        responses.append(row_to_response(row, spec))
    return responses

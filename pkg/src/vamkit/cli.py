"""Command line interface over the appraisal/survey/valuation pipeline.

Every command is deterministic given its inputs and seed: output carries
no timestamps, so reruns are byte-identical and safe to diff.  Exit codes:
0 success, 1 economically inconsistent inputs, 2 malformed inputs/files.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal
from typing import Sequence

from .cost_model import AppraisalResult
from .cvm import ComparisonVerdict, DiscountParams
from .cvm import compare as cvm_compare
from .errors import DomainError, SchemaError, ValidationError, VamError
from .money import format_major, major_str, round_half_up
from .project import Project, atomic_write_text, load_project, read_responses
from .survey import (
    AdjustmentSummary,
    AllotmentSummary,
    BootstrapParams,
    SurveyResponse,
    ValidationReport,
    summarize_adjustments,
    summarize_allotments,
    validate_batch,
)
from .valuation import ValuationReport, valuation_report


# --- document builders (structured output is JSON of these dicts) ----------


def _dec(value: Decimal) -> str:
    return format(value, "f")


def _appraisal_doc(appraisal: AppraisalResult) -> dict:
    return {
        "currency_code": appraisal.currency_code,
        "valuation_year": appraisal.valuation_year,
        "reproduction_cost": major_str(appraisal.reproduction_cost),
        "replacement_cost": major_str(appraisal.replacement_cost),
        "total_asset_value": major_str(appraisal.total_asset_value),
        "remaining_useful_life_years": _dec(appraisal.remaining_useful_life_years),
        "valid_through_year": appraisal.valuation_year
        + round_half_up(appraisal.remaining_useful_life_years),
    }


def _validation_doc(report: ValidationReport) -> dict:
    return {
        "total_received": report.total_received,
        "valid": report.valid,
        "rejected": [
            {"respondent_id": rid, "reasons": reasons}
            for rid, reasons in report.rejected
        ],
    }


def _allotments_doc(summary: AllotmentSummary) -> dict:
    return {
        "bootstrap": {
            "seed": summary.bootstrap.seed,
            "resamples": summary.bootstrap.resamples,
            "level": _dec(summary.bootstrap.level),
        },
        "components": [
            {
                "component_id": s.component_id,
                "n": s.n,
                "median_pct": _dec(s.median_pct),
                "ci_low_pct": _dec(s.ci_low),
                "ci_high_pct": _dec(s.ci_high),
            }
            for s in summary.per_component
        ],
    }


def _adjustments_doc(summary: AdjustmentSummary) -> dict:
    return {
        "n_about_right": summary.n_about_right,
        "n_under": summary.n_under,
        "n_over": summary.n_over,
        "mean_under_pct": _dec(summary.mean_under_pct),
        "mean_over_pct": _dec(summary.mean_over_pct),
        "aggregate_coefficient": _dec(summary.aggregate_coefficient),
    }


def _valuation_doc(report: ValuationReport) -> dict:
    return {
        "target_component": report.target_component,
        "components": [
            {
                "component_id": cv.component_id,
                "allotment_pct": _dec(cv.allotment_pct),
                "adjustment_coefficient": _dec(cv.adjustment_coefficient),
                "value": major_str(cv.value),
                "value_ci_low": major_str(cv.value_ci_low),
                "value_ci_high": major_str(cv.value_ci_high),
                "valid_through_year": cv.valid_through_year,
            }
            for cv in report.components
        ],
    }


def _comparison_doc(
    verdict: ComparisonVerdict,
    params: DiscountParams,
    annual: int,
    annual_ci: tuple[int, int],
) -> dict:
    return {
        "discount_rate": _dec(params.rate),
        "horizon_years": params.years,
        "stated_annual_value": major_str(annual),
        "stated_annual_ci": [major_str(annual_ci[0]), major_str(annual_ci[1])],
        "stated_present_value": major_str(verdict.stated_present_value),
        "stated_present_value_ci": [
            major_str(verdict.stated_present_value_ci[0]),
            major_str(verdict.stated_present_value_ci[1]),
        ],
        "cost_based_value": major_str(verdict.cost_based_value),
        "cost_based_ci": [
            major_str(verdict.cost_based_ci[0]),
            major_str(verdict.cost_based_ci[1]),
        ],
        "ratio": _dec(verdict.ratio.quantize(Decimal("0.0001"))),
        "intervals_overlap": verdict.intervals_overlap,
    }


# --- table rendering --------------------------------------------------------


def _money_cell(text: str) -> str:
    return f"{Decimal(text):,.2f}"


def _kv_block(title: str, pairs: list[tuple[str, str]]) -> list[str]:
    width = max(len(k) for k, _ in pairs)
    lines = [title]
    lines.extend(f"  {k.ljust(width)}  {v}" for k, v in pairs)
    return lines


def _grid(title: str, headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [
        max(len(headers[i]), max((len(r[i]) for r in rows), default=0))
        for i in range(len(headers))
    ]

    def fmt(cells: list[str]) -> str:
        parts = [cells[0].ljust(widths[0])]
        parts.extend(c.rjust(widths[i + 1]) for i, c in enumerate(cells[1:]))
        return "  " + "  ".join(parts).rstrip()

    lines = [title, fmt(headers)]
    lines.append("  " + "-" * (sum(widths) + 2 * (len(widths) - 1)))
    lines.extend(fmt(r) for r in rows)
    return lines


def _render_table(doc: dict) -> str:
    blocks: list[list[str]] = []
    if "appraisal" in doc:
        a = doc["appraisal"]
        blocks.append(
            _kv_block(
                f"Appraisal ({a['currency_code']}, valuation year "
                f"{a['valuation_year']})",
                [
                    ("reproduction cost", _money_cell(a["reproduction_cost"])),
                    ("replacement cost", _money_cell(a["replacement_cost"])),
                    ("total asset value", _money_cell(a["total_asset_value"])),
                    (
                        "remaining useful life",
                        f"{a['remaining_useful_life_years']} years",
                    ),
                    ("valid through", str(a["valid_through_year"])),
                ],
            )
        )
    if "validation" in doc:
        v = doc["validation"]
        pairs = [
            ("received", str(v["total_received"])),
            ("valid", str(v["valid"])),
            ("rejected", str(len(v["rejected"]))),
        ]
        pairs.extend(
            (f"  {r['respondent_id']}", r["reasons"]) for r in v["rejected"]
        )
        blocks.append(_kv_block("Response validation", pairs))
    if "allotments" in doc:
        al = doc["allotments"]
        b = al["bootstrap"]
        rows = [
            [
                s["component_id"],
                s["median_pct"],
                s["ci_low_pct"],
                s["ci_high_pct"],
                str(s["n"]),
            ]
            for s in al["components"]
        ]
        blocks.append(
            _grid(
                f"Allotments (bootstrap: {b['resamples']} resamples, "
                f"level {b['level']}, seed {b['seed']})",
                ["component", "median %", "ci low %", "ci high %", "n"],
                rows,
            )
        )
    if "adjustments" in doc:
        ad = doc["adjustments"]
        blocks.append(
            _kv_block(
                "Stated adjustments",
                [
                    ("about right", str(ad["n_about_right"])),
                    ("underestimated", str(ad["n_under"])),
                    ("  mean %", ad["mean_under_pct"]),
                    ("overestimated", str(ad["n_over"])),
                    ("  mean %", ad["mean_over_pct"]),
                    ("aggregate coefficient", ad["aggregate_coefficient"]),
                ],
            )
        )
    if "valuation" in doc:
        val = doc["valuation"]
        rows = [
            [
                cv["component_id"]
                + (" *" if cv["component_id"] == val["target_component"] else ""),
                cv["allotment_pct"],
                cv["adjustment_coefficient"],
                _money_cell(cv["value"]),
                _money_cell(cv["value_ci_low"]),
                _money_cell(cv["value_ci_high"]),
            ]
            for cv in val["components"]
        ]
        blocks.append(
            _grid(
                "Component values (* = adjusted target)",
                ["component", "%", "coeff", "value", "ci low", "ci high"],
                rows,
            )
        )
    if "comparison" in doc:
        c = doc["comparison"]
        blocks.append(
            _kv_block(
                "Stated-preference comparison",
                [
                    ("discount rate", c["discount_rate"]),
                    ("horizon", f"{c['horizon_years']} years"),
                    ("annual value", _money_cell(c["stated_annual_value"])),
                    (
                        "annual CI",
                        f"({_money_cell(c['stated_annual_ci'][0])}, "
                        f"{_money_cell(c['stated_annual_ci'][1])})",
                    ),
                    ("present value", _money_cell(c["stated_present_value"])),
                    (
                        "present value CI",
                        f"({_money_cell(c['stated_present_value_ci'][0])}, "
                        f"{_money_cell(c['stated_present_value_ci'][1])})",
                    ),
                    ("cost-based value", _money_cell(c["cost_based_value"])),
                    (
                        "cost-based CI",
                        f"({_money_cell(c['cost_based_ci'][0])}, "
                        f"{_money_cell(c['cost_based_ci'][1])})",
                    ),
                    ("ratio (stated / cost)", c["ratio"]),
                    ("intervals overlap", "yes" if c["intervals_overlap"] else "no"),
                ],
            )
        )
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"


def _emit(doc: dict, args: argparse.Namespace) -> None:
    if args.format == "table":
        text = _render_table(doc)
    else:
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    sys.stdout.write(text)
    if getattr(args, "out", None):
        atomic_write_text(args.out, text)


def _warn_anchor_mismatch(project: Project, appraisal: AppraisalResult) -> None:
    shown = project.questionnaire.total_asset_value_display
    if shown != appraisal.total_asset_value:
        sys.stderr.write(
            "warning: questionnaire displayed a total asset value of "
            f"{format_major(shown, appraisal.currency_code)} but the ledger "
            f"appraises to "
            f"{format_major(appraisal.total_asset_value, appraisal.currency_code)}; "
            "respondents anchored on the displayed figure\n"
        )


# --- pipeline stages shared by commands -------------------------------------


def _load(args: argparse.Namespace) -> Project:
    return load_project(args.project)


def _analysis_stage(
    args: argparse.Namespace, project: Project
) -> tuple[
    list[SurveyResponse], ValidationReport, AllotmentSummary, AdjustmentSummary
]:
    if not getattr(args, "responses", None):
        raise ValidationError(
            "analysis stage missing: pass --responses <batch.csv> so allotments "
            "can be aggregated"
        )
    responses = read_responses(args.responses, project.questionnaire)
    valid, report = validate_batch(
        responses, project.questionnaire, project.analysis.sum_tolerance
    )
    if not valid:
        raise DomainError("batch has no valid responses; nothing to aggregate")
    params = project.analysis.bootstrap
    if getattr(args, "seed", None) is not None:
        params = BootstrapParams(
            seed=args.seed, resamples=params.resamples, level=params.level
        )
    allotments = summarize_allotments(valid, project.questionnaire, params)
    adjustments = summarize_adjustments(valid)
    return valid, report, allotments, adjustments


def _comparison_stage(
    project: Project, appraisal: AppraisalResult, vrep: ValuationReport
) -> dict:
    if project.cvm is None:
        raise ValidationError(
            "comparison stage missing: project has no cvm section"
        )
    params = project.discount_params(appraisal)
    est = project.cvm.estimate
    annual = est.component_annual_value
    annual_ci = est.component_annual_ci()
    verdict = cvm_compare(vrep.target, annual, annual_ci, params)
    return _comparison_doc(verdict, params, annual, annual_ci)


# --- commands ----------------------------------------------------------------


def cmd_appraise(args: argparse.Namespace) -> int:
    project = _load(args)
    _emit({"appraisal": _appraisal_doc(project.appraise())}, args)
    return 0


def cmd_validate_responses(args: argparse.Namespace) -> int:
    project = _load(args)
    if not args.responses:
        raise ValidationError("pass --responses <batch.csv> to validate")
    responses = read_responses(args.responses, project.questionnaire)
    _, report = validate_batch(
        responses, project.questionnaire, project.analysis.sum_tolerance
    )
    _emit({"validation": _validation_doc(report)}, args)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    project = _load(args)
    _, report, allotments, adjustments = _analysis_stage(args, project)
    _emit(
        {
            "validation": _validation_doc(report),
            "allotments": _allotments_doc(allotments),
            "adjustments": _adjustments_doc(adjustments),
        },
        args,
    )
    return 0


def cmd_value(args: argparse.Namespace) -> int:
    project = _load(args)
    appraisal = project.appraise()
    _warn_anchor_mismatch(project, appraisal)
    _, report, allotments, adjustments = _analysis_stage(args, project)
    vrep = valuation_report(
        appraisal, allotments, adjustments, project.questionnaire.target_component
    )
    _emit(
        {
            "appraisal": _appraisal_doc(appraisal),
            "validation": _validation_doc(report),
            "valuation": _valuation_doc(vrep),
        },
        args,
    )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    project = _load(args)
    appraisal = project.appraise()
    _warn_anchor_mismatch(project, appraisal)
    _, report, allotments, adjustments = _analysis_stage(args, project)
    vrep = valuation_report(
        appraisal, allotments, adjustments, project.questionnaire.target_component
    )
    _emit(
        {
            "valuation": _valuation_doc(vrep),
            "comparison": _comparison_stage(project, appraisal, vrep),
        },
        args,
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    project = _load(args)
    appraisal = project.appraise()
    _warn_anchor_mismatch(project, appraisal)
    _, report, allotments, adjustments = _analysis_stage(args, project)
    vrep = valuation_report(
        appraisal, allotments, adjustments, project.questionnaire.target_component
    )
    doc = {
        "appraisal": _appraisal_doc(appraisal),
        "validation": _validation_doc(report),
        "allotments": _allotments_doc(allotments),
        "adjustments": _adjustments_doc(adjustments),
        "valuation": _valuation_doc(vrep),
    }
    if project.cvm is not None:
        doc["comparison"] = _comparison_stage(project, appraisal, vrep)
    _emit(doc, args)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    project = _load(args)
    _warn_anchor_mismatch(project, project.appraise())
    app = create_app(project, args.responses_out)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vamkit",
        description=(
            "Asset appraisal by the cost approach, questionnaire-based value "
            "allotment, and stated-preference comparison."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, responses: bool, seed: bool) -> None:
        p.add_argument("--project", required=True, help="project JSON file")
        if responses:
            p.add_argument("--responses", help="response batch CSV")
        if seed:
            p.add_argument(
                "--seed", type=int, help="override the project's bootstrap seed"
            )
        p.add_argument(
            "--format",
            choices=("structured", "table"),
            default="structured",
            help="output as JSON (structured) or a rendered table",
        )
        p.add_argument("--out", help="also write the output to this file")

    p = sub.add_parser("appraise", help="run the cost-approach appraisal")
    common(p, responses=False, seed=False)
    p.set_defaults(func=cmd_appraise)

    p = sub.add_parser(
        "validate-responses", help="validate a response batch and report"
    )
    common(p, responses=True, seed=False)
    p.set_defaults(func=cmd_validate_responses)

    p = sub.add_parser(
        "analyze", help="aggregate valid responses (medians, CIs, adjustments)"
    )
    common(p, responses=True, seed=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("value", help="compute component values")
    common(p, responses=True, seed=True)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser(
        "compare", help="compare the target component against stated-preference inputs"
    )
    common(p, responses=True, seed=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="full pipeline report")
    common(p, responses=True, seed=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the response collection service")
    p.add_argument("--project", required=True, help="project JSON file")
    p.add_argument(
        "--responses-out", required=True, help="CSV the service appends to"
    )
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

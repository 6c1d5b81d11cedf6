"""HTTP collection service: serves the questionnaire, previews the target
component's value for the stage-two question, and records submissions.

Storage is an append-only CSV shared with the offline tooling.  Writes are
serialized through a single in-process lock and each accepted row is
flushed with fsync before the receipt goes out, so a crash never leaves a
partial line.  Idempotency keys give exactly-once storage for client
retries within the life of the process (keys are not persisted).
"""

from __future__ import annotations

import os
import threading
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation

from fastapi import FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .money import major_str, round_half_up
from .project import (
    Project,
    format_header_line,
    format_response_line,
    read_responses,
)
from .survey import (
    Adjustment,
    AdjustmentKind,
    HUNDRED,
    QuestionnaireSpec,
    ReasonCode,
    SurveyResponse,
    validate_batch,
    validate_response,
)


class AdjustmentPayload(BaseModel):
    kind: str
    pct: str | int | float | None = None


class ResponsePayload(BaseModel):
    demographics: dict[str, str] = {}
    allotments: dict[str, str | int | float]
    other_label: str | None = None
    adjustment: AdjustmentPayload
    questionnaire_version: int


class PreviewPayload(BaseModel):
    component_id: str
    allotment_pct: str | int | float


def _parse_decimal(value: str | int | float) -> Decimal | None:
    try:
        parsed = Decimal(str(value))
    except InvalidOperation:
        return None
    return parsed if parsed.is_finite() else None


def _reject(reasons: list[str], detail: str) -> HTTPException:
    return HTTPException(
        status_code=422,
        detail={"error": "rejected", "reasons": reasons, "detail": detail},
    )


class _Store:
    """Single-writer append log over the response batch CSV."""

    def __init__(self, path: str, spec: QuestionnaireSpec):
        self._path = path
        self._spec = spec
        self._lock = threading.Lock()
        self._receipts: dict[str, dict] = {}
        self._rejected_at_ingest = 0
        existing = 0
        if os.path.exists(path) and os.path.getsize(path) > 0:
            existing = len(read_responses(path, spec))
        else:
            with open(path, "a", encoding="utf-8", newline="") as fp:
                if fp.tell() == 0:
                    fp.write(format_header_line(spec))
                    fp.flush()
                    os.fsync(fp.fileno())
        self._next_serial = existing + 1
        self._fd = os.open(path, os.O_APPEND | os.O_WRONLY)

    def cached(self, key: str | None) -> dict | None:
        if key is None:
            return None
        with self._lock:
            return self._receipts.get(key)

    def count_rejected(self) -> int:
        with self._lock:
            self._rejected_at_ingest += 1
            return self._rejected_at_ingest

    @property
    def rejected_at_ingest(self) -> int:
        with self._lock:
            return self._rejected_at_ingest

    def append(self, resp: SurveyResponse, key: str | None) -> dict:
        """Assign the server id, write the row durably, cache the receipt."""
        with self._lock:
            if key is not None and key in self._receipts:
                return self._receipts[key]
            serial = self._next_serial
            self._next_serial += 1
            stored = SurveyResponse(
                respondent_id=f"r-{serial:06d}",
                demographics=resp.demographics,
                allotments=resp.allotments,
                adjustment=resp.adjustment,
                other_label=resp.other_label,
                submitted_at=resp.submitted_at,
            )
            line = format_response_line(stored, self._spec).encode("utf-8")
            os.write(self._fd, line)
            os.fsync(self._fd)
            receipt = {
                "status": "accepted",
                "respondent_id": stored.respondent_id,
                "questionnaire_version": self._spec.version,
            }
            if key is not None:
                self._receipts[key] = receipt
            return receipt

    def close(self) -> None:
        os.close(self._fd)


def create_app(project: Project, responses_out: str) -> FastAPI:
    spec = project.questionnaire
    store = _Store(responses_out, spec)
    app = FastAPI(title="questionnaire collection service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/api/questionnaire")
    def get_questionnaire() -> dict:
        return {
            "version": spec.version,
            "components": [
                {
                    "id": c.component_id,
                    "name": c.display_name,
                    "explanation": c.explanation,
                }
                for c in spec.components
            ],
            "target_component": spec.target_component,
            "allows_other": spec.allows_other,
            "total_asset_value_display": major_str(spec.total_asset_value_display),
            "info_text": spec.info_text,
            "info_images": list(spec.info_images),
            "demographic_fields": list(spec.demographic_fields),
        }

    @app.post("/api/preview")
    def preview(payload: PreviewPayload) -> dict:
        if payload.component_id not in spec.allotment_columns():
            raise _reject(
                [ReasonCode.UNKNOWN_COMPONENT.value],
                f"unknown component {payload.component_id!r}",
            )
        pct = _parse_decimal(payload.allotment_pct)
        if pct is None:
            raise _reject(
                [ReasonCode.MALFORMED.value],
                f"allotment_pct {payload.allotment_pct!r} is not a number",
            )
        if pct < 0 or pct > HUNDRED:
            raise _reject(
                [ReasonCode.OUT_OF_RANGE.value],
                f"allotment_pct {pct} outside [0, 100]",
            )
        value = round_half_up(
            Decimal(spec.total_asset_value_display) * pct / HUNDRED
        )
        return {
            "component_id": payload.component_id,
            "allotment_pct": format(pct, "f"),
            "value": major_str(value),
        }

    @app.post("/api/responses")
    def submit(
        payload: ResponsePayload,
        idempotency_key: str | None = Header(default=None),
    ) -> dict:
        cached = store.cached(idempotency_key)
        if cached is not None:
            return cached
        if payload.questionnaire_version != spec.version:
            raise HTTPException(
                status_code=409,
                detail={
                    "error": "VersionMismatch",
                    "detail": (
                        f"client has questionnaire version "
                        f"{payload.questionnaire_version}, server has {spec.version}"
                    ),
                },
            )
        allotments: dict[str, Decimal] = {}
        for cid, value in payload.allotments.items():
            pct = _parse_decimal(value)
            if pct is None:
                store.count_rejected()
                raise _reject(
                    [ReasonCode.MALFORMED.value],
                    f"allotment for {cid!r} is not a number: {value!r}",
                )
            allotments[cid] = pct
        adj_pct = None
        if payload.adjustment.pct is not None:
            adj_pct = _parse_decimal(payload.adjustment.pct)
        try:
            kind = AdjustmentKind(payload.adjustment.kind)
            adjustment: Adjustment | None = Adjustment(kind, adj_pct)
        except ValueError:
            adjustment = None
        resp = SurveyResponse(
            respondent_id="",
            demographics=dict(payload.demographics),
            allotments=allotments,
            adjustment=adjustment,
            other_label=payload.other_label,
            submitted_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        verdict = validate_response(resp, spec, project.analysis.sum_tolerance)
        if not verdict.accepted:
            store.count_rejected()
            raise _reject(list(verdict.reason_codes()), verdict.detail)
        return store.append(resp, idempotency_key)

    @app.get("/api/summary")
    def summary() -> dict:
        stored = read_responses(responses_out, spec)
        _, report = validate_batch(stored, spec, project.analysis.sum_tolerance)
        return {
            "total_received": report.total_received,
            "valid": report.valid,
            "rejected": [
                {"respondent_id": rid, "reasons": reasons}
                for rid, reasons in report.rejected
            ],
            "rejected_at_ingest": store.rejected_at_ingest,
        }

    return app

/** Thin typed client over the collection service's REST endpoints. */

import type {
  PreviewResult,
  Questionnaire,
  Receipt,
  RejectionBody,
  SubmissionBody,
} from "./types.js";

/** A 422 from the service: structurally invalid input with reason codes. */
export class RejectedError extends Error {
  readonly reasons: string[];

  constructor(body: RejectionBody) {
    super(body.detail);
    this.name = "RejectedError";
    this.reasons = body.reasons;
  }
}

/** A 409 from the service: the questionnaire changed under the client. */
export class VersionMismatchError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "VersionMismatchError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl: FetchLike = fetch) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl;
  }

  async questionnaire(): Promise<Questionnaire> {
    const resp = await this.fetchImpl(`${this.base}/api/questionnaire`);
    if (!resp.ok) throw new Error(`questionnaire fetch failed: ${resp.status}`);
    return (await resp.json()) as Questionnaire;
  }

  async preview(componentId: string, allotmentPct: string): Promise<PreviewResult> {
    const resp = await this.fetchImpl(`${this.base}/api/preview`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ component_id: componentId, allotment_pct: allotmentPct }),
    });
    if (resp.status === 422) {
      throw new RejectedError((await resp.json()).detail as RejectionBody);
    }
    if (!resp.ok) throw new Error(`preview failed: ${resp.status}`);
    return (await resp.json()) as PreviewResult;
  }

  async submit(body: SubmissionBody, idempotencyKey: string): Promise<Receipt> {
    const resp = await this.fetchImpl(`${this.base}/api/responses`, {
      method: "POST",
      headers: {
        "content-type": "application/json",
        "idempotency-key": idempotencyKey,
      },
      body: JSON.stringify(body),
    });
    if (resp.status === 422) {
      throw new RejectedError((await resp.json()).detail as RejectionBody);
    }
    if (resp.status === 409) {
      const detail = (await resp.json()).detail as { detail: string };
      throw new VersionMismatchError(detail.detail);
    }
    if (!resp.ok) throw new Error(`submission failed: ${resp.status}`);
    return (await resp.json()) as Receipt;
  }
}

/** Questionnaire wizard state.
 *
 * Section A collects demographics, section B shows the site
 * information, section C first asks for the percentage allotment and
 * only once that passes the client-side checks opens the stage-two
 * adjustment question. Submission is idempotent: the state owns one
 * idempotency key, so retrying a flaky request can never store a
 * second row.
 */

import type { ApiClient } from "./api.js";
import type {
  AdjustmentChoice,
  Questionnaire,
  Receipt,
  SubmissionBody,
} from "./types.js";
import { adjustmentProblem, checkAllotments, type ReasonCode } from "./validate.js";

export type Stage =
  | "demographics"
  | "information"
  | "allotment"
  | "adjustment"
  | "done";

function randomKey(): string {
  const bytes = new Uint8Array(16);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}

export class FormState {
  readonly questionnaire: Questionnaire;
  stage: Stage = "demographics";
  receipt: Receipt | null = null;

  private demographics: Record<string, string> = {};
  private allotments: Record<string, string> = {};
  private otherLabel = "";
  private adjustment: AdjustmentChoice | null = null;
  private readonly idempotencyKey: string;

  constructor(questionnaire: Questionnaire, idempotencyKey?: string) {
    this.questionnaire = questionnaire;
    this.idempotencyKey = idempotencyKey ?? randomKey();
  }

  // --- section A ----------------------------------------------------------

  setDemographic(field: string, value: string): void {
    if (!this.questionnaire.demographic_fields.includes(field)) {
      throw new Error(`unknown demographic field: ${field}`);
    }
    this.demographics[field] = value;
  }

  /** Demographics are optional; section A never blocks. */
  finishDemographics(): void {
    this.expectStage("demographics");
    this.stage = "information";
  }

  // --- section B ----------------------------------------------------------

  finishInformation(): void {
    this.expectStage("information");
    this.stage = "allotment";
  }

  // --- section C, stage one -----------------------------------------------

  setAllotment(componentId: string, text: string): void {
    const ids = this.componentIds();
    const known =
      ids.includes(componentId) ||
      (this.questionnaire.allows_other && componentId === "other");
    if (!known) throw new Error(`unknown component: ${componentId}`);
    this.allotments[componentId] = text;
  }

  setOtherLabel(label: string): void {
    this.otherLabel = label;
  }

  allotmentProblems(): ReasonCode[] {
    return checkAllotments(
      this.allotments,
      this.componentIds(),
      this.questionnaire.allows_other,
    ).reasons;
  }

  allotmentSum(): number {
    return checkAllotments(
      this.allotments,
      this.componentIds(),
      this.questionnaire.allows_other,
    ).sum;
  }

  /** The stage-two gate: every component filled, in range, summing to 100. */
  canEnterStageTwo(): boolean {
    return this.allotmentProblems().length === 0;
  }

  enterStageTwo(): void {
    this.expectStage("allotment");
    const problems = this.allotmentProblems();
    if (problems.length > 0) {
      throw new Error(`allotment incomplete: ${problems.join(", ")}`);
    }
    this.stage = "adjustment";
  }

  /** The respondent's share for the target component, as entered. */
  targetAllotment(): string {
    return this.allotments[this.questionnaire.target_component] ?? "";
  }

  // --- section C, stage two -----------------------------------------------

  /**
   * Record the adjustment choice; returns an error message and leaves
   * the state untouched when the choice cannot be submitted (notably an
   * overestimate of 100% or more).
   */
  chooseAdjustment(choice: AdjustmentChoice): string | null {
    this.expectStage("adjustment");
    const problem = adjustmentProblem(choice);
    if (problem !== null) return problem;
    this.adjustment = choice;
    return null;
  }

  // --- submission ---------------------------------------------------------

  body(): SubmissionBody {
    if (this.adjustment === null) {
      throw new Error("no adjustment chosen yet");
    }
    const allotments: Record<string, string> = {};
    for (const id of this.componentIds()) {
      allotments[id] = (this.allotments[id] ?? "").trim();
    }
    const other = (this.allotments["other"] ?? "").trim();
    if (this.questionnaire.allows_other && other !== "") {
      allotments["other"] = other;
    }
    return {
      demographics: { ...this.demographics },
      allotments,
      other_label: this.otherLabel.trim() === "" ? null : this.otherLabel.trim(),
      adjustment: { ...this.adjustment },
      questionnaire_version: this.questionnaire.version,
    };
  }

  /** Submit through the given client; safe to call again after a failure. */
  async submit(api: Pick<ApiClient, "submit">): Promise<Receipt> {
    this.expectStage("adjustment");
    const receipt = await api.submit(this.body(), this.idempotencyKey);
    this.receipt = receipt;
    this.stage = "done";
    return receipt;
  }

  // --- helpers --------------------------------------------------------------

  componentIds(): string[] {
    return this.questionnaire.components.map((c) => c.id);
  }

  private expectStage(expected: Stage): void {
    if (this.stage !== expected) {
      throw new Error(`expected stage ${expected}, at ${this.stage}`);
    }
  }
}

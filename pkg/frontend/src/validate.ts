/** Client-side mirrors of the server's validation rules.
 *
 * The server remains the authority; these checks exist so a respondent
 * gets immediate feedback and so structurally invalid submissions are
 * never sent in the first place.
 */

import type { AdjustmentChoice } from "./types.js";

/** Accepted drift of an allotment sum from 100, in percentage points. */
export const SUM_TOLERANCE = 0.5;

export type ReasonCode =
  | "SumNot100"
  | "MissingComponent"
  | "AllotmentOutOfRange"
  | "UnknownComponent"
  | "BadAdjustment"
  | "MalformedValue";

/** Parse a percentage text field; null for blank or non-numeric input. */
export function parsePct(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}

export interface AllotmentCheck {
  reasons: ReasonCode[];
  /** Component ids with blank or unparseable cells. */
  missing: string[];
  /** Component ids outside [0, 100]. */
  outOfRange: string[];
  /** Sum of the parseable cells. */
  sum: number;
}

/**
 * Check raw allotment inputs against the component list.
 *
 * Mirrors the server's ordering: range and completeness problems are
 * reported first and suppress the sum check, so one root cause yields
 * one diagnosis. The optional write-in bucket ("other") may be blank.
 */
export function checkAllotments(
  raw: Record<string, string>,
  componentIds: string[],
  allowsOther: boolean,
): AllotmentCheck {
  const reasons: ReasonCode[] = [];
  const missing: string[] = [];
  const outOfRange: string[] = [];
  let sum = 0;

  const known = new Set(componentIds);
  if (allowsOther) known.add("other");
  for (const id of Object.keys(raw)) {
    if (!known.has(id) && !reasons.includes("UnknownComponent")) {
      reasons.push("UnknownComponent");
    }
  }

  for (const id of componentIds) {
    const pct = parsePct(raw[id] ?? "");
    if (pct === null) {
      missing.push(id);
      continue;
    }
    if (pct < 0 || pct > 100) outOfRange.push(id);
    sum += pct;
  }
  if (allowsOther) {
    const pct = parsePct(raw["other"] ?? "");
    if (pct !== null) {
      if (pct < 0 || pct > 100) outOfRange.push("other");
      sum += pct;
    }
  }

  if (missing.length > 0) reasons.push("MissingComponent");
  if (outOfRange.length > 0) reasons.push("AllotmentOutOfRange");
  if (reasons.length === 0 && Math.abs(sum - 100) > SUM_TOLERANCE) {
    reasons.push("SumNot100");
  }
  return { reasons, missing, outOfRange, sum };
}

/** null when well formed, else the reason a choice cannot be submitted. */
export function adjustmentProblem(choice: AdjustmentChoice): string | null {
  if (choice.kind === "about_right") {
    return choice.pct === undefined ? null : "about_right takes no percentage";
  }
  const pct = parsePct(choice.pct ?? "");
  if (pct === null) return "a percentage is required";
  if (pct <= 0) return "the percentage must be greater than 0";
  if (choice.kind === "overestimated" && pct >= 100) {
    return "an overestimate of 100% or more would wipe out the value";
  }
  return null;
}

/** Wire types for the collection service's REST interface. */

export interface ComponentInfo {
  id: string;
  name: string;
  explanation: string;
}

export interface Questionnaire {
  version: number;
  components: ComponentInfo[];
  target_component: string;
  allows_other: boolean;
  /** Major-unit decimal string, e.g. "1587786926.00". */
  total_asset_value_display: string;
  info_text: string;
  info_images: string[];
  demographic_fields: string[];
}

export type AdjustmentKind = "about_right" | "underestimated" | "overestimated";

export interface AdjustmentChoice {
  kind: AdjustmentKind;
  /** Required for under/over; must be absent for about_right. */
  pct?: string;
}

export interface SubmissionBody {
  demographics: Record<string, string>;
  allotments: Record<string, string>;
  other_label: string | null;
  adjustment: AdjustmentChoice;
  questionnaire_version: number;
}

export interface Receipt {
  status: "accepted";
  respondent_id: string;
  questionnaire_version: number;
}

export interface PreviewResult {
  component_id: string;
  allotment_pct: string;
  /** Major-unit decimal string. */
  value: string;
}

export interface RejectionBody {
  error: "rejected";
  reasons: string[];
  detail: string;
}

import { describe, expect, it } from "vitest";

import { FormState } from "../src/formState.js";
import type { Questionnaire, Receipt, SubmissionBody } from "../src/types.js";

const QUESTIONNAIRE: Questionnaire = {
  version: 1,
  components: [
    { id: "habitat", name: "Habitat", explanation: "species support" },
    { id: "shade", name: "Shade", explanation: "cooling" },
    { id: "views", name: "Views", explanation: "scenery" },
  ],
  target_component: "habitat",
  allows_other: true,
  total_asset_value_display: "1000000.00",
  info_text: "A small hill park.",
  info_images: [],
  demographic_fields: ["gender", "age_bracket"],
};

class FakeApi {
  calls: Array<{ body: SubmissionBody; key: string }> = [];

  async submit(body: SubmissionBody, key: string): Promise<Receipt> {
    this.calls.push({ body, key });
    return {
      status: "accepted",
      respondent_id: `r-${String(this.calls.length).padStart(6, "0")}`,
      questionnaire_version: body.questionnaire_version,
    };
  }
}

function atAllotment(): FormState {
  const form = new FormState(QUESTIONNAIRE, "fixed-key");
  form.finishDemographics();
  form.finishInformation();
  return form;
}

function fillValid(form: FormState): void {
  form.setAllotment("habitat", "50");
  form.setAllotment("shade", "30");
  form.setAllotment("views", "20");
}

describe("stage flow", () => {
  it("walks demographics, information, allotment, adjustment, done", async () => {
    const form = new FormState(QUESTIONNAIRE, "fixed-key");
    expect(form.stage).toBe("demographics");
    form.setDemographic("gender", "female");
    form.finishDemographics();
    expect(form.stage).toBe("information");
    form.finishInformation();
    expect(form.stage).toBe("allotment");
    fillValid(form);
    form.enterStageTwo();
    expect(form.stage).toBe("adjustment");
    expect(form.chooseAdjustment({ kind: "about_right" })).toBeNull();
    await form.submit(new FakeApi());
    expect(form.stage).toBe("done");
  });

  it("rejects skipping ahead", () => {
    const form = new FormState(QUESTIONNAIRE, "fixed-key");
    expect(() => form.enterStageTwo()).toThrow(/expected stage allotment/);
  });

  it("rejects unknown demographic fields", () => {
    const form = new FormState(QUESTIONNAIRE, "fixed-key");
    expect(() => form.setDemographic("shoe_size", "44")).toThrow(/unknown/);
  });

  it("rejects unknown components", () => {
    const form = atAllotment();
    expect(() => form.setAllotment("timber", "10")).toThrow(/unknown/);
  });
});

describe("stage-two gate", () => {
  it("a sum of 90 cannot reach stage two", () => {
    const form = atAllotment();
    form.setAllotment("habitat", "40");
    form.setAllotment("shade", "30");
    form.setAllotment("views", "20");
    expect(form.allotmentSum()).toBe(90);
    expect(form.allotmentProblems()).toEqual(["SumNot100"]);
    expect(form.canEnterStageTwo()).toBe(false);
    expect(() => form.enterStageTwo()).toThrow(/SumNot100/);
    expect(form.stage).toBe("allotment");
  });

  it("opens once the sum lands on 100", () => {
    const form = atAllotment();
    form.setAllotment("habitat", "40");
    form.setAllotment("shade", "30");
    form.setAllotment("views", "20");
    expect(form.canEnterStageTwo()).toBe(false);
    form.setAllotment("views", "30");
    expect(form.canEnterStageTwo()).toBe(true);
  });

  it("blank cells block the gate", () => {
    const form = atAllotment();
    form.setAllotment("habitat", "50");
    form.setAllotment("shade", "50");
    expect(form.allotmentProblems()).toEqual(["MissingComponent"]);
    expect(form.canEnterStageTwo()).toBe(false);
  });

  it("the write-in counts toward the gate", () => {
    const form = atAllotment();
    form.setAllotment("habitat", "50");
    form.setAllotment("shade", "30");
    form.setAllotment("views", "10");
    form.setAllotment("other", "10");
    form.setOtherLabel("education");
    expect(form.canEnterStageTwo()).toBe(true);
  });
});

describe("adjustment choices", () => {
  function atAdjustment(): FormState {
    const form = atAllotment();
    fillValid(form);
    form.enterStageTwo();
    return form;
  }

  it("about right is stored without a percentage", async () => {
    const form = atAdjustment();
    expect(form.chooseAdjustment({ kind: "about_right" })).toBeNull();
    const api = new FakeApi();
    await form.submit(api);
    expect(api.calls[0]?.body.adjustment).toEqual({ kind: "about_right" });
  });

  it("an overestimate of 100% or more is blocked before any request", async () => {
    const form = atAdjustment();
    const problem = form.chooseAdjustment({ kind: "overestimated", pct: "100" });
    expect(problem).toMatch(/100%/);
    // Nothing was chosen, so the submission cannot even be built.
    expect(() => form.body()).toThrow(/no adjustment/);
    expect(form.stage).toBe("adjustment");
  });

  it("an overestimate below 100% goes through", async () => {
    const form = atAdjustment();
    expect(form.chooseAdjustment({ kind: "overestimated", pct: "39" })).toBeNull();
    const api = new FakeApi();
    await form.submit(api);
    expect(api.calls[0]?.body.adjustment).toEqual({
      kind: "overestimated",
      pct: "39",
    });
  });

  it("a bad choice can be corrected and submitted", async () => {
    const form = atAdjustment();
    expect(form.chooseAdjustment({ kind: "overestimated", pct: "150" })).not.toBeNull();
    expect(form.chooseAdjustment({ kind: "underestimated", pct: "205" })).toBeNull();
    const api = new FakeApi();
    const receipt = await form.submit(api);
    expect(receipt.status).toBe("accepted");
  });
});

describe("submission body", () => {
  it("includes everything entered", () => {
    const form = atAllotment();
    fillValid(form);
    form.setAllotment("other", "0");
    form.setOtherLabel("  education  ");
    form.enterStageTwo();
    form.chooseAdjustment({ kind: "about_right" });
    expect(form.body()).toEqual({
      demographics: {},
      allotments: { habitat: "50", shade: "30", views: "20", other: "0" },
      other_label: "education",
      adjustment: { kind: "about_right" },
      questionnaire_version: 1,
    });
  });

  it("omits a blank write-in", () => {
    const form = atAllotment();
    fillValid(form);
    form.enterStageTwo();
    form.chooseAdjustment({ kind: "about_right" });
    expect(form.body().allotments).not.toHaveProperty("other");
    expect(form.body().other_label).toBeNull();
  });

  it("reuses one idempotency key across retries", async () => {
    const form = atAllotment();
    fillValid(form);
    form.enterStageTwo();
    form.chooseAdjustment({ kind: "about_right" });
    const api = new FakeApi();
    await form.submit(api);
    expect(api.calls).toHaveLength(1);
    expect(api.calls[0]?.key).toBe("fixed-key");
  });
});

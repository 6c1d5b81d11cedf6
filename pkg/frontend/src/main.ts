/** Browser entry point: renders the questionnaire wizard into #app. */

import { ApiClient, RejectedError } from "./api.js";
import { FormState } from "./formState.js";
import { seededShuffle } from "./shuffle.js";
import type { ComponentInfo, Questionnaire } from "./types.js";

const api = new ApiClient(window.location.origin);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (className !== undefined) node.className = className;
  return node;
}

function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

class Wizard {
  private readonly root: HTMLElement;
  private readonly form: FormState;
  private readonly order: ComponentInfo[];

  constructor(root: HTMLElement, questionnaire: Questionnaire) {
    this.root = root;
    this.form = new FormState(questionnaire);
    const seed = Math.floor(Math.random() * 0xffffffff);
    this.order = seededShuffle(questionnaire.components, seed);
  }

  render(): void {
    clear(this.root);
    switch (this.form.stage) {
      case "demographics":
        this.renderDemographics();
        break;
      case "information":
        this.renderInformation();
        break;
      case "allotment":
        this.renderAllotment();
        break;
      case "adjustment":
        this.renderAdjustment();
        break;
      case "done":
        this.renderDone();
        break;
    }
  }

  private nextButton(label: string, onClick: () => void): HTMLButtonElement {
    const button = el("button", label);
    button.addEventListener("click", onClick);
    return button;
  }

  private renderDemographics(): void {
    const q = this.form.questionnaire;
    this.root.append(el("h2", "Section A: about you"));
    this.root.append(
      el("p", "These questions are optional and never affect acceptance."),
    );
    for (const field of q.demographic_fields) {
      const row = el("label", `${field.replaceAll("_", " ")}: `, "field");
      const input = el("input");
      input.name = field;
      input.addEventListener("input", () => {
        this.form.setDemographic(field, input.value);
      });
      row.append(input);
      this.root.append(row, el("br"));
    }
    this.root.append(
      this.nextButton("Continue", () => {
        this.form.finishDemographics();
        this.render();
      }),
    );
  }

  private renderInformation(): void {
    const q = this.form.questionnaire;
    this.root.append(el("h2", "Section B: the site"));
    this.root.append(el("p", q.info_text));
    for (const src of q.info_images) {
      const img = el("img");
      img.src = src;
      this.root.append(img);
    }
    this.root.append(
      el(
        "p",
        `Its total ecological value has been appraised at ` +
          `${q.total_asset_value_display} (local currency).`,
      ),
    );
    this.root.append(
      this.nextButton("Continue", () => {
        this.form.finishInformation();
        this.render();
      }),
    );
  }

  private renderAllotment(): void {
    const q = this.form.questionnaire;
    this.root.append(el("h2", "Section C: share out the value"));
    this.root.append(
      el(
        "p",
        "Split the total value across the components below. " +
          "The percentages must sum to 100.",
      ),
    );
    const status = el("p", "", "status");
    const refresh = () => {
      const sum = this.form.allotmentSum();
      const problems = this.form.allotmentProblems();
      status.textContent =
        problems.length === 0
          ? `Sum: ${sum.toFixed(1)}%. Ready to continue.`
          : `Sum: ${sum.toFixed(1)}%. Outstanding: ${problems.join(", ")}.`;
      next.disabled = !this.form.canEnterStageTwo();
    };
    for (const component of this.order) {
      const row = el("label", `${component.name}: `, "field");
      row.title = component.explanation;
      const input = el("input");
      input.type = "number";
      input.addEventListener("input", () => {
        this.form.setAllotment(component.id, input.value);
        refresh();
      });
      row.append(input, el("span", " %"));
      this.root.append(row, el("br"));
    }
    if (q.allows_other) {
      const row = el("label", "Other (write in): ", "field");
      const label = el("input");
      label.placeholder = "what is it?";
      label.addEventListener("input", () => this.form.setOtherLabel(label.value));
      const pct = el("input");
      pct.type = "number";
      pct.addEventListener("input", () => {
        this.form.setAllotment("other", pct.value);
        refresh();
      });
      row.append(label, pct, el("span", " %"));
      this.root.append(row, el("br"));
    }
    const next = this.nextButton("Continue", () => {
      this.form.enterStageTwo();
      this.render();
    });
    next.disabled = true;
    this.root.append(status, next);
    refresh();
  }

  private renderAdjustment(): void {
    const q = this.form.questionnaire;
    const target = q.components.find((c) => c.id === q.target_component);
    this.root.append(el("h2", "Section C: one more look"));
    const preview = el("p", "Computing the implied value...");
    this.root.append(preview);
    void api
      .preview(q.target_component, this.form.targetAllotment())
      .then((result) => {
        preview.textContent =
          `Your ${result.allotment_pct}% allotment values ` +
          `"${target?.name ?? q.target_component}" at ${result.value}.`;
      })
      .catch((err: unknown) => {
        preview.textContent =
          err instanceof RejectedError ? err.message : String(err);
      });

    const message = el("p", "", "status");
    const pctInput = el("input");
    pctInput.type = "number";
    pctInput.placeholder = "by how many percent?";

    const submitWith = (kind: "about_right" | "underestimated" | "overestimated") => {
      const choice =
        kind === "about_right"
          ? { kind }
          : { kind, pct: pctInput.value };
      const problem = this.form.chooseAdjustment(choice);
      if (problem !== null) {
        message.textContent = problem;
        return;
      }
      void this.form
        .submit(api)
        .then(() => this.render())
        .catch((err: unknown) => {
          message.textContent =
            err instanceof RejectedError
              ? `Rejected: ${err.reasons.join(", ")}`
              : String(err);
        });
    };

    this.root.append(
      this.nextButton("Looks about right", () => submitWith("about_right")),
      el("br"),
      pctInput,
      this.nextButton("It is underestimated", () => submitWith("underestimated")),
      this.nextButton("It is overestimated", () => submitWith("overestimated")),
      message,
    );
  }

  private renderDone(): void {
    this.root.append(el("h2", "Thank you"));
    this.root.append(
      el(
        "p",
        `Your response was stored as ${this.form.receipt?.respondent_id ?? "?"}.`,
      ),
    );
  }
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app container");
  const questionnaire = await api.questionnaire();
  new Wizard(root, questionnaire).render();
}

void boot();

/**
 * Survey UI: consent with content warning, proficiency profile, blinded
 * side-by-side voting with progress, exit at any time.
 *
 * All rendering is schema-driven off the sanitized BlindedQuestion type,
 * so the DOM can never contain a model identifier: there is no field to
 * show one from. Text lands via textContent only (no innerHTML with
 * remote data), which also keeps Cyrillic and emoji intact.
 */

import { BlindedQuestion, Position, SurveyApi, isRetryable } from "./api.js";
import {
  UiSessionState,
  canVote,
  firstUnanswered,
  initialState,
  loadState,
  saveState,
  screenFor,
  withAnswer,
  withExit,
  withRespondent,
} from "./state.js";

const ENGLISH_LEVELS = ["A1A2", "B1B2", "C1C2"] as const;
const CYBER_LEVELS = ["beginner", "intermediate", "advanced", "expert"] as const;

const CONTENT_WARNING =
  "Warning: the messages shown in this survey are real chat messages and " +
  "may contain hate speech or distressing content. Participation is " +
  "entirely voluntary and you may exit at any time. No personally " +
  "identifying information is collected.";

export interface AppDeps {
  api: SurveyApi;
  storage: Storage;
  surveyId: string;
}

export class SurveyApp {
  private state: UiSessionState;
  private questions: BlindedQuestion[] = [];
  private lastError: string | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly deps: AppDeps,
  ) {
    this.state = loadState(deps.storage);
  }

  async start(): Promise<void> {
    try {
      this.questions = await this.deps.api.fetchQuestions(this.deps.surveyId);
      this.lastError = null;
    } catch (error) {
      this.lastError = isRetryable(error)
        ? "The survey is unreachable right now."
        : "The survey could not be loaded.";
    }
    if (this.state.respondentId !== null && this.questions.length > 0) {
      this.state.currentQuestionIndex = firstUnanswered(
        this.state,
        this.questions.map((q) => q.question_id),
      );
    }
    this.render();
  }

  getState(): UiSessionState {
    return { ...this.state, answeredIds: [...this.state.answeredIds] };
  }

  private commit(next: UiSessionState): void {
    this.state = next;
    saveState(this.deps.storage, next);
    this.render();
  }

  // -- rendering -------------------------------------------------------

  render(): void {
    this.root.replaceChildren();
    if (this.lastError !== null) {
      this.renderError();
      return;
    }
    switch (screenFor(this.state, this.questions.length)) {
      case "consent":
        this.renderConsent();
        break;
      case "question":
        this.renderQuestion();
        break;
      case "farewell":
        this.renderFarewell();
        break;
      default:
        this.renderError();
    }
  }

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className: string,
    text?: string,
  ): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    node.className = className;
    if (text !== undefined) {
      node.textContent = text;
    }
    return node;
  }

  private renderError(): void {
    const panel = this.el("section", "panel error-panel");
    panel.append(
      this.el("p", "error-text", this.lastError ?? "Something went wrong."),
    );
    const retry = this.el("button", "retry-button", "Retry");
    retry.addEventListener("click", () => {
      this.lastError = null;
      void this.start();
    });
    panel.append(retry);
    this.root.append(panel);
  }

  private renderConsent(): void {
    const panel = this.el("section", "panel consent-panel");
    panel.append(
      this.el("h1", "title", "Translation preference survey"),
      this.el("p", "content-warning", CONTENT_WARNING),
      this.el(
        "p",
        "consent-text",
        "You will see an original message in Russian and two English " +
          "translations labeled A and B. Pick the translation you find better.",
      ),
    );

    const form = this.el("form", "profile-form");
    form.append(
      this.selectField("english-level", "Your English level", ENGLISH_LEVELS),
      this.selectField(
        "cyber-level",
        "Your cybersecurity knowledge",
        CYBER_LEVELS,
      ),
    );

    const accept = this.el("button", "accept-button", "I consent, begin");
    accept.type = "submit";
    const decline = this.el("button", "decline-button", "No thanks");
    decline.type = "button";
    decline.addEventListener("click", () => {
      this.commit(withExit(this.state));
    });
    form.append(accept, decline);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.acceptConsent(form);
    });
    panel.append(form);
    this.root.append(panel);
  }

  private selectField(
    id: string,
    label: string,
    options: readonly string[],
  ): HTMLElement {
    const wrapper = this.el("label", "field");
    wrapper.append(this.el("span", "field-label", label));
    const select = this.el("select", "field-select");
    select.id = id;
    for (const option of options) {
      const node = document.createElement("option");
      node.value = option;
      node.textContent = option;
      select.append(node);
    }
    wrapper.append(select);
    return wrapper;
  }

  private async acceptConsent(form: HTMLElement): Promise<void> {
    const english = form.querySelector<HTMLSelectElement>("#english-level");
    const cyber = form.querySelector<HTMLSelectElement>("#cyber-level");
    try {
      const respondentId = await this.deps.api.createRespondent({
        english_level: english?.value ?? ENGLISH_LEVELS[0],
        cyber_level: cyber?.value ?? CYBER_LEVELS[0],
      });
      this.commit(withRespondent(this.state, respondentId));
    } catch {
      this.lastError = "Could not register you with the survey.";
      this.render();
    }
  }

  private renderQuestion(): void {
    const question = this.questions[this.state.currentQuestionIndex];
    if (question === undefined) {
      this.commit(withExit(this.state));
      return;
    }
    const panel = this.el("section", "panel question-panel");
    panel.append(
      this.el(
        "p",
        "progress",
        `Question ${this.state.currentQuestionIndex + 1} of ${this.questions.length}`,
      ),
      this.el("p", "source-text", question.source_text),
    );

    const options = this.el("div", "options");
    options.append(
      this.optionCard(question, "a", question.option_a_text),
      this.optionCard(question, "b", question.option_b_text),
    );
    panel.append(options);

    const exit = this.el("button", "exit-button", "Exit survey");
    exit.addEventListener("click", () => {
      this.commit(withExit(this.state));
    });
    panel.append(exit);
    this.root.append(panel);
  }

  private optionCard(
    question: BlindedQuestion,
    position: Position,
    text: string,
  ): HTMLElement {
    const card = this.el("div", `option option-${position}`);
    card.append(
      this.el("h2", "option-label", `Translation ${position.toUpperCase()}`),
      this.el("p", "option-text", text),
    );
    const choose = this.el("button", "vote-button", `Prefer ${position.toUpperCase()}`);
    choose.disabled = !canVote(this.state);
    choose.addEventListener("click", () => {
      void this.castVote(question, position);
    });
    card.append(choose);
    return card;
  }

  private async castVote(question: BlindedQuestion, position: Position): Promise<void> {
    if (!canVote(this.state) || this.state.respondentId === null) {
      return;
    }
    try {
      await this.deps.api.vote(
        this.state.respondentId,
        question.question_id,
        position,
      );
      // "already-voted" (409 after a retried request) also advances.
      this.commit(withAnswer(this.state, question.question_id));
    } catch (error) {
      this.lastError = isRetryable(error)
        ? "Your vote did not reach the server. Please retry."
        : "Your vote was rejected.";
      this.render();
    }
  }

  private renderFarewell(): void {
    const panel = this.el("section", "panel farewell-panel");
    const answered = this.state.answeredIds.length;
    panel.append(
      this.el("h1", "title", "Thank you!"),
      this.el(
        "p",
        "farewell-text",
        answered > 0
          ? `Your ${answered} answer${answered === 1 ? "" : "s"} were recorded. You may close this tab.`
          : "No answers were recorded. You may close this tab.",
      ),
    );
    this.root.append(panel);
  }
}

export function mount(root: HTMLElement, deps?: Partial<AppDeps>): SurveyApp {
  const app = new SurveyApp(root, {
    api: deps?.api ?? new SurveyApi(),
    storage: deps?.storage ?? window.sessionStorage,
    surveyId: deps?.surveyId ?? "default",
  });
  void app.start();
  return app;
}

export { initialState };

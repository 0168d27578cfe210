/**
 * Session state machine for the survey flow.
 *
 * Persisted in browser session storage only: reloading restores the
 * respondent id and answered set without re-minting a respondent, while
 * closing the tab discards everything (exit-any-time is first-class).
 */

export type Screen =
  | "consent"
  | "profile"
  | "question"
  | "farewell"
  | "error";

export interface UiSessionState {
  respondentId: string | null;
  currentQuestionIndex: number;
  answeredIds: string[];
  finished: boolean;
}

export const STORAGE_KEY = "chatmt-survey-session";

export function initialState(): UiSessionState {
  return {
    respondentId: null,
    currentQuestionIndex: 0,
    answeredIds: [],
    finished: false,
  };
}

export function screenFor(state: UiSessionState, totalQuestions: number): Screen {
  if (state.finished) {
    return "farewell";
  }
  if (state.respondentId === null) {
    return "consent";
  }
  if (state.currentQuestionIndex >= totalQuestions) {
    return "farewell";
  }
  return "question";
}

/** Voting is only possible once a consented respondent exists. */
export function canVote(state: UiSessionState): boolean {
  return state.respondentId !== null && !state.finished;
}

export function withRespondent(state: UiSessionState, respondentId: string): UiSessionState {
  return { ...state, respondentId };
}

export function withAnswer(state: UiSessionState, questionId: string): UiSessionState {
  if (state.answeredIds.includes(questionId)) {
    return { ...state, currentQuestionIndex: state.currentQuestionIndex + 1 };
  }
  return {
    ...state,
    answeredIds: [...state.answeredIds, questionId],
    currentQuestionIndex: state.currentQuestionIndex + 1,
  };
}

export function withExit(state: UiSessionState): UiSessionState {
  return { ...state, finished: true };
}

/** Skip past questions answered in a previous page load. */
export function firstUnanswered(
  state: UiSessionState,
  questionIds: string[],
): number {
  for (let i = 0; i < questionIds.length; i += 1) {
    const id = questionIds[i];
    if (id !== undefined && !state.answeredIds.includes(id)) {
      return i;
    }
  }
  return questionIds.length;
}

export function saveState(storage: Storage, state: UiSessionState): void {
  storage.setItem(STORAGE_KEY, JSON.stringify(state));
}

export function loadState(storage: Storage): UiSessionState {
  const raw = storage.getItem(STORAGE_KEY);
  if (raw === null) {
    return initialState();
  }
  try {
    const parsed = JSON.parse(raw) as Partial<UiSessionState>;
    return {
      respondentId:
        typeof parsed.respondentId === "string" ? parsed.respondentId : null,
      currentQuestionIndex:
        typeof parsed.currentQuestionIndex === "number"
          ? parsed.currentQuestionIndex
          : 0,
      answeredIds: Array.isArray(parsed.answeredIds)
        ? parsed.answeredIds.filter((id): id is string => typeof id === "string")
        : [],
      finished: parsed.finished === true,
    };
  } catch {
    return initialState();
  }
}

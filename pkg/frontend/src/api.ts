/**
 * Thin client for the survey harness HTTP JSON API.
 *
 * Blinded question payloads are re-validated here: only the documented
 * fields are kept, so even a tampered server response cannot smuggle a
 * model identifier into anything the UI later renders.
 */

export interface BlindedQuestion {
  question_id: string;
  order_index: number;
  source_text: string;
  option_a_text: string;
  option_b_text: string;
}

export interface RespondentProfile {
  english_level: string;
  cyber_level: string;
}

export type Position = "a" | "b";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** True for errors worth a retry affordance (network trouble, 5xx). */
export function isRetryable(error: unknown): boolean {
  if (error instanceof ApiError) {
    return error.status >= 500;
  }
  return error instanceof TypeError; // fetch network failure
}

async function requestJson(
  input: string,
  init: RequestInit | undefined,
  fetchImpl: typeof fetch,
): Promise<unknown> {
  const response = await fetchImpl(input, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (typeof body.detail === "string") {
        detail = body.detail;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json();
}

/** Keep only the documented blinded fields, coerced to their schema types. */
export function sanitizeQuestion(raw: unknown): BlindedQuestion {
  const source = raw as Record<string, unknown>;
  const asString = (key: string): string =>
    typeof source[key] === "string" ? (source[key] as string) : "";
  const asNumber = (key: string): number =>
    typeof source[key] === "number" ? (source[key] as number) : 0;
  return {
    question_id: asString("question_id"),
    order_index: asNumber("order_index"),
    source_text: asString("source_text"),
    option_a_text: asString("option_a_text"),
    option_b_text: asString("option_b_text"),
  };
}

export class SurveyApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = fetch.bind(globalThis),
  ) {}

  async createRespondent(profile: RespondentProfile): Promise<string> {
    const body = await requestJson(
      `${this.baseUrl}/api/respondent`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          english_level: profile.english_level,
          cyber_level: profile.cyber_level,
          consent: true,
        }),
      },
      this.fetchImpl,
    );
    return (body as { respondent_id: string }).respondent_id;
  }

  async fetchQuestions(surveyId: string): Promise<BlindedQuestion[]> {
    const body = await requestJson(
      `${this.baseUrl}/api/survey/${encodeURIComponent(surveyId)}/questions`,
      undefined,
      this.fetchImpl,
    );
    const questions = (body as { questions: unknown[] }).questions ?? [];
    return questions
      .map(sanitizeQuestion)
      .sort((a, b) => a.order_index - b.order_index);
  }

  /**
   * Post a vote. A 409 means the server already has this vote (e.g. a
   * retried request); the caller treats that as answered, not an error.
   */
  async vote(
    respondentId: string,
    questionId: string,
    position: Position,
  ): Promise<"recorded" | "already-voted"> {
    try {
      await requestJson(
        `${this.baseUrl}/api/vote`,
        {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify({
            respondent_id: respondentId,
            question_id: questionId,
            chosen_position: position,
          }),
        },
        this.fetchImpl,
      );
      return "recorded";
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        return "already-voted";
      }
      throw error;
    }
  }
}

/** Shared fixtures: an in-memory harness-shaped fake server behind fetch. */

import { vi } from "vitest";

export interface FakeServer {
  fetch: typeof fetch;
  votes: Array<{
    respondent_id: string;
    question_id: string;
    chosen_position: string;
  }>;
  respondents: Array<{ english_level: string; cyber_level: string }>;
  requests: Array<{ url: string; body: string }>;
}

export function blindedQuestion(index: number) {
  return {
    question_id: `default-q${String(index).padStart(4, "0")}`,
    order_index: index,
    source_text: `⚡Сообщение ${index}: атака подтверждена⚡`,
    option_a_text: `Translation A for message ${index}`,
    option_b_text: `Translation B for message ${index}`,
  };
}

export function makeFakeServer(questionCount: number): FakeServer {
  const questions = Array.from({ length: questionCount }, (_, i) =>
    blindedQuestion(i),
  );
  const server: FakeServer = {
    votes: [],
    respondents: [],
    requests: [],
    fetch: undefined as unknown as typeof fetch,
  };

  const respond = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  server.fetch = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const body = typeof init?.body === "string" ? init.body : "";
    server.requests.push({ url, body });

    if (url.endsWith("/api/respondent")) {
      const payload = JSON.parse(body) as {
        english_level: string;
        cyber_level: string;
        consent: boolean;
      };
      if (!payload.consent) {
        return respond(403, { detail: "consent is required" });
      }
      server.respondents.push({
        english_level: payload.english_level,
        cyber_level: payload.cyber_level,
      });
      return respond(200, { respondent_id: `r-${server.respondents.length}` });
    }

    if (url.includes("/api/survey/") && url.endsWith("/questions")) {
      if (url.includes("/ghost/")) {
        return respond(404, { detail: "survey not found" });
      }
      return respond(200, { questions });
    }

    if (url.endsWith("/api/vote")) {
      const payload = JSON.parse(body) as {
        respondent_id: string;
        question_id: string;
        chosen_position: string;
      };
      const duplicate = server.votes.some(
        (v) =>
          v.respondent_id === payload.respondent_id &&
          v.question_id === payload.question_id,
      );
      if (duplicate) {
        return respond(409, { detail: "already voted" });
      }
      server.votes.push(payload);
      return respond(200, {
        question_id: payload.question_id,
        chosen_position: payload.chosen_position,
        captured_at: "2026-08-23T00:00:00+00:00",
      });
    }

    return respond(404, { detail: "not found" });
  }) as unknown as typeof fetch;

  return server;
}

export class MemoryStorage implements Storage {
  private data = new Map<string, string>();

  get length(): number {
    return this.data.size;
  }

  clear(): void {
    this.data.clear();
  }

  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }

  key(index: number): string | null {
    return [...this.data.keys()][index] ?? null;
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

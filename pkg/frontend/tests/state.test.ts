import { describe, expect, it } from "vitest";

import {
  STORAGE_KEY,
  canVote,
  firstUnanswered,
  initialState,
  loadState,
  saveState,
  screenFor,
  withAnswer,
  withExit,
  withRespondent,
} from "../src/state.js";
import { MemoryStorage } from "./helpers.js";

describe("screenFor", () => {
  it("starts at the consent screen", () => {
    expect(screenFor(initialState(), 30)).toBe("consent");
  });

  it("shows questions once a respondent exists", () => {
    const state = withRespondent(initialState(), "r-1");
    expect(screenFor(state, 30)).toBe("question");
  });

  it("shows the farewell after the last question", () => {
    let state = withRespondent(initialState(), "r-1");
    state = withAnswer(state, "q1");
    state = withAnswer(state, "q2");
    expect(screenFor(state, 2)).toBe("farewell");
  });

  it("shows the farewell after an explicit exit from any screen", () => {
    expect(screenFor(withExit(initialState()), 30)).toBe("farewell");
    const midway = withAnswer(withRespondent(initialState(), "r-1"), "q1");
    expect(screenFor(withExit(midway), 30)).toBe("farewell");
  });
});

describe("canVote", () => {
  it("requires a consented respondent", () => {
    expect(canVote(initialState())).toBe(false);
    expect(canVote(withRespondent(initialState(), "r-1"))).toBe(true);
  });

  it("is false after exiting", () => {
    const state = withExit(withRespondent(initialState(), "r-1"));
    expect(canVote(state)).toBe(false);
  });
});

describe("withAnswer", () => {
  it("records the question id and advances", () => {
    const state = withAnswer(withRespondent(initialState(), "r-1"), "q1");
    expect(state.answeredIds).toEqual(["q1"]);
    expect(state.currentQuestionIndex).toBe(1);
  });

  it("does not duplicate an already-answered id", () => {
    let state = withAnswer(withRespondent(initialState(), "r-1"), "q1");
    state = withAnswer(state, "q1");
    expect(state.answeredIds).toEqual(["q1"]);
    expect(state.currentQuestionIndex).toBe(2);
  });
});

describe("firstUnanswered", () => {
  it("skips ids answered in a previous page load", () => {
    let state = withRespondent(initialState(), "r-1");
    state = withAnswer(state, "q1");
    state = withAnswer(state, "q2");
    expect(firstUnanswered(state, ["q1", "q2", "q3", "q4"])).toBe(2);
  });

  it("returns the length when everything is answered", () => {
    let state = withRespondent(initialState(), "r-1");
    state = withAnswer(state, "q1");
    expect(firstUnanswered(state, ["q1"])).toBe(1);
  });
});

describe("persistence", () => {
  it("round-trips through storage", () => {
    const storage = new MemoryStorage();
    let state = withRespondent(initialState(), "r-7");
    state = withAnswer(state, "q1");
    saveState(storage, state);
    expect(loadState(storage)).toEqual(state);
  });

  it("falls back to the initial state on corrupt payloads", () => {
    const storage = new MemoryStorage();
    storage.setItem(STORAGE_KEY, "{not json");
    expect(loadState(storage)).toEqual(initialState());
    storage.setItem(STORAGE_KEY, JSON.stringify({ respondentId: 42 }));
    expect(loadState(storage)).toEqual(initialState());
  });

  it("drops non-string entries from the answered list", () => {
    const storage = new MemoryStorage();
    storage.setItem(
      STORAGE_KEY,
      JSON.stringify({
        respondentId: "r-1",
        currentQuestionIndex: 2,
        answeredIds: ["q1", 3, null, "q2"],
        finished: false,
      }),
    );
    expect(loadState(storage).answeredIds).toEqual(["q1", "q2"]);
  });
});

import { describe, expect, it } from "vitest";

import {
  applyResponse,
  backNavigate,
  canGoBack,
  canSubmit,
  currentResults,
  emptyView,
  okSteps,
  surfaceError,
} from "../src/state.js";
import { stepByName } from "./fixtures.js";

describe("applyResponse", () => {
  it("stores an ok response and shows its results", () => {
    const view = applyResponse(
      emptyView(),
      stepByName("collapse").response,
      "collapse",
      "collapse",
    );
    const results = currentResults(view);
    expect(results).not.toBeNull();
    expect(results!.results.length).toBeGreaterThan(0);
    expect(view.pending).toBeNull();
    expect(view.error).toBeNull();
  });

  it("opens the modal for collapse_required and blocks submission", () => {
    const view = applyResponse(
      emptyView(),
      stepByName("query").response,
      "query",
      "query: style clothes",
    );
    expect(view.pending).not.toBeNull();
    expect(view.pending!.options).toHaveLength(2);
    expect(canSubmit(view)).toBe(false);
    expect(currentResults(view)).toBeNull();
  });

  it("leaves state unchanged apart from the banner on malformed payloads", () => {
    const before = applyResponse(
      emptyView(),
      stepByName("collapse").response,
      "collapse",
      "collapse",
    );
    const after = applyResponse(before, { nonsense: true }, "query", "query: x");
    expect(after.error).toMatch(/malformed/);
    expect(after.history).toEqual(before.history);
    expect(after.cursor).toBe(before.cursor);
    expect(after.pending).toBe(before.pending);
  });

  it("records the not-chosen collapse options as excluded", () => {
    let view = applyResponse(
      emptyView(),
      stepByName("query").response,
      "query",
      "query: style clothes",
    );
    view = applyResponse(
      view,
      stepByName("collapse").response,
      "collapse",
      "collapse: men",
    );
    const collapseStep = view.history[view.history.length - 1]!;
    expect(collapseStep.excluded).toHaveLength(1);
    expect(collapseStep.excluded[0]!.speakers).toContain("wendy");
    expect(view.pending).toBeNull();
  });

  it("appends history in server order", () => {
    let view = emptyView();
    for (const name of ["query", "collapse", "refine_fashion", "refine_bank"]) {
      const step = stepByName(name);
      view = applyResponse(view, step.response, "query", name);
    }
    expect(view.history.map((h) => h.label)).toEqual([
      "query",
      "collapse",
      "refine_fashion",
      "refine_bank",
    ]);
  });
});

describe("back navigation", () => {
  function drive() {
    let view = emptyView();
    view = applyResponse(view, stepByName("query").response, "query", "q");
    view = applyResponse(view, stepByName("collapse").response, "collapse", "c");
    view = applyResponse(view, stepByName("refine_fashion").response, "refine", "rf");
    view = applyResponse(view, stepByName("refine_bank").response, "refine", "rb");
    return view;
  }

  it("restores the previous results without touching history", () => {
    const view = drive();
    const bank = currentResults(view)!;
    const back = backNavigate(view);
    const fashion = currentResults(back)!;
    expect(fashion).not.toEqual(bank);
    expect(fashion.facet_filter).toBe("fashion");
    expect(back.history).toEqual(view.history);
  });

  it("walks the full ok chain and stops at the first view", () => {
    let view = drive();
    expect(okSteps(view)).toHaveLength(3);
    expect(canGoBack(view)).toBe(true);
    view = backNavigate(view);
    view = backNavigate(view);
    expect(canGoBack(view)).toBe(false);
    expect(backNavigate(view)).toEqual(view);
    expect(currentResults(view)!.facet_filter).toBeNull();
  });
});

describe("error banner", () => {
  it("is surfaced and cleared without losing results", () => {
    let view = applyResponse(
      emptyView(),
      stepByName("collapse").response,
      "collapse",
      "c",
    );
    view = surfaceError(view, "server error 400");
    expect(view.error).toBe("server error 400");
    expect(currentResults(view)).not.toBeNull();
  });
});

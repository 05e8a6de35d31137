/** Session view state: a pure reducer over validated server responses.
 *
 *  The server is authoritative: the client stores responses as received and
 *  never reorders results or recomputes a number. Back-navigation replays a
 *  previously recorded response; nothing is refetched or recalculated.
 */

import {
  CollapseOption,
  CollapseRequired,
  DialogueResponse,
  DialogueResponseSchema,
  OkResponse,
} from "./types.js";

export type StepKind = "query" | "refine" | "collapse";

export interface HistoryStep {
  kind: StepKind;
  label: string;
  response: DialogueResponse;
  /** Options not chosen at a collapse step; shown greyed in the timeline. */
  excluded: CollapseOption[];
}

export interface SessionView {
  sessionId: string | null;
  snapshotId: string | null;
  /** The response whose results are on screen (a step index into history). */
  cursor: number | null;
  /** Modal collapse choice awaiting the reader; blocks query and refine. */
  pending: CollapseRequired | null;
  history: HistoryStep[];
  error: string | null;
}

export function emptyView(): SessionView {
  return {
    sessionId: null,
    snapshotId: null,
    cursor: null,
    pending: null,
    history: [],
    error: null,
  };
}

export function currentResults(view: SessionView): OkResponse | null {
  if (view.cursor === null) return null;
  const step = view.history[view.cursor];
  if (!step || step.response.status !== "ok") return null;
  return step.response;
}

/** The collapse dialog is modal: no querying or refining while it is open. */
export function canSubmit(view: SessionView): boolean {
  return view.pending === null;
}

/** Apply a raw /query, /refine, or /collapse payload to the view.
 *  Malformed payloads set the error banner and leave everything else as is. */
export function applyResponse(
  view: SessionView,
  payload: unknown,
  kind: StepKind,
  label: string,
): SessionView {
  const parsed = DialogueResponseSchema.safeParse(payload);
  if (!parsed.success) {
    return { ...view, error: "malformed server response" };
  }
  const response = parsed.data;
  const excluded: CollapseOption[] =
    kind === "collapse" && view.pending
      ? view.pending.options.filter((option) => !chosen(option, response))
      : [];
  const history = [...view.history, { kind, label, response, excluded }];
  if (response.status === "collapse_required") {
    return {
      ...view,
      sessionId: response.session,
      snapshotId: response.snapshot,
      pending: response,
      history,
      error: null,
    };
  }
  return {
    ...view,
    sessionId: response.session,
    snapshotId: response.snapshot,
    cursor: history.length - 1,
    pending: null,
    history,
    error: null,
  };
}

function chosen(option: CollapseOption, response: DialogueResponse): boolean {
  if (response.status !== "ok") return false;
  const speakers = new Set(response.results.map((r) => r.speaker));
  return option.distinct_speakers.some((s) => speakers.has(s));
}

export function surfaceError(view: SessionView, message: string): SessionView {
  return { ...view, error: message };
}

export function clearError(view: SessionView): SessionView {
  return { ...view, error: null };
}

/** Step indices whose responses carried results, in timeline order. */
export function okSteps(view: SessionView): number[] {
  return view.history
    .map((step, index) => ({ step, index }))
    .filter(({ step }) => step.response.status === "ok")
    .map(({ index }) => index);
}

/** Restore the previous results view from recorded history (no refetch). */
export function backNavigate(view: SessionView): SessionView {
  const steps = okSteps(view);
  const position = steps.indexOf(view.cursor ?? -1);
  if (position <= 0) return view;
  return { ...view, cursor: steps[position - 1] ?? null, pending: null };
}

export function canGoBack(view: SessionView): boolean {
  const steps = okSteps(view);
  return steps.indexOf(view.cursor ?? -1) > 0;
}

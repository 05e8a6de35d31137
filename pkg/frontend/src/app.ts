/** Browser bootstrap: wires the reducer and renderer to the DOM.
 *
 *  One session per tab; requests are serialized through a single in-flight
 *  promise, and the collapse dialog blocks query/refine until resolved.
 */

import { ApiClient, ApiError } from "./client.js";
import {
  applyResponse,
  backNavigate,
  canGoBack,
  canSubmit,
  emptyView,
  surfaceError,
  SessionView,
  StepKind,
} from "./state.js";
import { renderView } from "./render.js";
import { SessionInfoSchema } from "./types.js";

export class App {
  private view: SessionView = emptyView();
  private sessionId: string | null = null;
  private busy = false;

  constructor(
    private readonly client: ApiClient,
    private readonly root: HTMLElement,
    private readonly readerId: string = "reader",
  ) {}

  async start(): Promise<void> {
    const info = SessionInfoSchema.safeParse(
      await this.client.createSession(this.readerId),
    );
    if (!info.success) {
      this.view = surfaceError(this.view, "could not open a session");
    } else {
      this.sessionId = info.data.session;
    }
    this.paint();
  }

  private async step(
    kind: StepKind,
    label: string,
    call: (sessionId: string) => Promise<unknown>,
  ): Promise<void> {
    if (this.busy || !this.sessionId) return;
    if (kind !== "collapse" && !canSubmit(this.view)) return; // modal open
    this.busy = true;
    try {
      const payload = await call(this.sessionId);
      this.view = applyResponse(this.view, payload, kind, label);
    } catch (error) {
      const message =
        error instanceof ApiError
          ? `server error ${error.status}: ${JSON.stringify(error.detail)}`
          : "network error";
      this.view = surfaceError(this.view, message);
    } finally {
      this.busy = false;
    }
    this.paint();
  }

  submitQuery(text: string): Promise<void> {
    return this.step("query", `query: ${text}`, (sid) => this.client.query(sid, text));
  }

  submitRefinement(facet: string): Promise<void> {
    return this.step("refine", `refine: ${facet}`, (sid) =>
      this.client.refine(sid, facet),
    );
  }

  resolveCollapse(option: string): Promise<void> {
    return this.step("collapse", `collapse: ${option}`, (sid) =>
      this.client.collapse(sid, option),
    );
  }

  goBack(): void {
    if (canGoBack(this.view)) {
      this.view = backNavigate(this.view);
      this.paint();
    }
  }

  private paint(): void {
    this.root.innerHTML = renderView(this.view);
    this.root
      .querySelectorAll<HTMLButtonElement>("button.refinement")
      .forEach((button) =>
        button.addEventListener("click", () =>
          this.submitRefinement(button.dataset.facet ?? ""),
        ),
      );
    this.root
      .querySelectorAll<HTMLButtonElement>("button.collapse-option")
      .forEach((button) =>
        button.addEventListener("click", () =>
          this.resolveCollapse(button.dataset.option ?? ""),
        ),
      );
  }
}

export function mount(baseUrl: string, root: HTMLElement): App {
  const app = new App(new ApiClient(baseUrl), root);
  const form = document.querySelector<HTMLFormElement>("#query-form");
  const input = document.querySelector<HTMLInputElement>("#query-input");
  const back = document.querySelector<HTMLButtonElement>("#back-button");
  form?.addEventListener("submit", (event) => {
    event.preventDefault();
    if (input?.value) void app.submitQuery(input.value);
  });
  back?.addEventListener("click", () => app.goBack());
  void app.start();
  return app;
}

// UI lifecycle state machine. The reducer is pure; the controller owns
// API calls, the poll timer, and the at-most-one-in-flight rule for
// grant/revoke. Whatever the server says through GET /v1/status wins
// whenever no dialog or request is in flight, so the UI is always
// re-derivable from chain state plus in-flight flags.

import { ApiClient, ApiError, SessionView } from "./api";

export type UiTag =
  | "locked"
  | "consent"
  | "proving"
  | "active"
  | "expired"
  | "error";

export interface UiState {
  tag: UiTag;
  expiresAt: number | null;
  chainClock: number;
  reason: string | null;
}

export const INITIAL_STATE: UiState = {
  tag: "locked",
  expiresAt: null,
  chainClock: 0,
  reason: null,
};

export type UiEvent =
  | { kind: "start_consent" }
  | { kind: "dismiss_consent" }
  | { kind: "consent_accepted" }
  | { kind: "grant_ok"; view: SessionView }
  | { kind: "grant_failed"; reason: string }
  | { kind: "revoke_ok" }
  | { kind: "revoke_failed"; reason: string }
  | { kind: "status"; view: SessionView }
  | { kind: "dismiss_error" };

// The declared transition graph; self-loops are implicitly allowed.
// Locked->Consent->Proving->{Active|Error} is the grant path; Active can
// only fall back to Expired (time) or Locked (revoke); Expired may
// re-enter the consent flow; Error returns to Locked on dismissal.
export const ALLOWED_TRANSITIONS: ReadonlyArray<readonly [UiTag, UiTag]> = [
  ["locked", "consent"],
  ["consent", "proving"],
  ["consent", "locked"],
  ["proving", "active"],
  ["proving", "error"],
  ["active", "expired"],
  ["active", "locked"],
  ["active", "error"],
  ["expired", "consent"],
  ["expired", "locked"],
  ["expired", "active"],
  ["expired", "error"],
  ["error", "locked"],
  // a reload or another tab may discover an existing session
  ["locked", "active"],
  ["locked", "expired"],
];

function fromView(view: SessionView, reason: string | null = null): UiState {
  const tag =
    view.state === "active"
      ? "active"
      : view.state === "expired"
        ? "expired"
        : "locked";
  return {
    tag,
    expiresAt: view.expires_at,
    chainClock: view.last_checked,
    reason,
  };
}

export function reduce(state: UiState, ev: UiEvent): UiState {
  switch (ev.kind) {
    case "start_consent":
      if (state.tag === "locked" || state.tag === "expired") {
        return { ...state, tag: "consent", reason: null };
      }
      return state;
    case "dismiss_consent":
      return state.tag === "consent" ? { ...state, tag: "locked" } : state;
    case "consent_accepted":
      return state.tag === "consent" ? { ...state, tag: "proving" } : state;
    case "grant_ok":
      return state.tag === "proving" ? fromView(ev.view) : state;
    case "grant_failed":
      return state.tag === "proving"
        ? { ...state, tag: "error", reason: ev.reason }
        : state;
    case "revoke_ok":
      if (state.tag === "active" || state.tag === "expired") {
        return { ...state, tag: "locked", expiresAt: null };
      }
      return state;
    case "revoke_failed":
      if (state.tag === "active" || state.tag === "expired") {
        return { ...state, tag: "error", reason: ev.reason };
      }
      return state;
    case "dismiss_error":
      return state.tag === "error"
        ? { ...state, tag: "locked", reason: null }
        : state;
    case "status": {
      // Dialogs and in-flight requests take precedence over poll results;
      // only the observed chain clock is absorbed.
      if (
        state.tag === "consent" ||
        state.tag === "proving" ||
        state.tag === "error"
      ) {
        return { ...state, chainClock: ev.view.last_checked };
      }
      return fromView(ev.view);
    }
  }
}

export function remainingSeconds(state: UiState): number | null {
  if (state.tag !== "active" || state.expiresAt === null) return null;
  return Math.max(0, state.expiresAt - state.chainClock);
}

export type Listener = (state: UiState) => void;

export class LifecycleController {
  state: UiState = INITIAL_STATE;
  pollIntervalMs = 1000;
  adminEndpoints = false;

  private listeners: Listener[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    readonly service: string,
  ) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  dispatch(ev: UiEvent): void {
    const next = reduce(this.state, ev);
    const changed = next !== this.state;
    this.state = next;
    if (changed) for (const fn of this.listeners) fn(next);
  }

  async init(): Promise<void> {
    try {
      const health = await this.api.health();
      this.pollIntervalMs = Math.max(250, health.poll_interval_s * 1000);
      this.adminEndpoints = health.admin_endpoints;
    } catch {
      // defaults stand; the first poll will surface connectivity issues
    }
    await this.poll();
    this.startPolling();
  }

  startPolling(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.poll(), this.pollIntervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async poll(): Promise<void> {
    try {
      const view = await this.api.status(this.service);
      this.dispatch({ kind: "status", view });
    } catch {
      // keep the last known state; polls are best-effort
    }
  }

  requestConsent(): void {
    this.dispatch({ kind: "start_consent" });
  }

  dismissConsent(): void {
    this.dispatch({ kind: "dismiss_consent" });
  }

  async acceptConsent(): Promise<void> {
    if (this.inFlight || this.state.tag !== "consent") return;
    this.inFlight = true;
    this.dispatch({ kind: "consent_accepted" });
    try {
      const view = await this.api.grant(this.service);
      this.dispatch({ kind: "grant_ok", view });
    } catch (err) {
      const reason = err instanceof ApiError ? err.reason : String(err);
      this.dispatch({ kind: "grant_failed", reason });
    } finally {
      this.inFlight = false;
    }
  }

  async killSwitch(): Promise<void> {
    if (this.inFlight) return;
    if (this.state.tag !== "active" && this.state.tag !== "expired") return;
    this.inFlight = true;
    try {
      await this.api.revoke(this.service);
      this.dispatch({ kind: "revoke_ok" });
    } catch (err) {
      if (err instanceof ApiError && err.reason === "NoActiveRecord") {
        // the record was already gone; the end state is the same
        this.dispatch({ kind: "revoke_ok" });
      } else {
        const reason = err instanceof ApiError ? err.reason : String(err);
        this.dispatch({ kind: "revoke_failed", reason });
      }
    } finally {
      this.inFlight = false;
    }
  }

  async timeTravel(seconds: number): Promise<void> {
    if (!this.adminEndpoints) return;
    try {
      await this.api.advanceTime(seconds);
    } catch {
      return;
    }
    await this.poll();
  }
}

// DOM wiring for the TradeBase demo: a mock trading dashboard whose
// content sits behind an age gate until the session is active.

import { ApiClient } from "./api";
import { LifecycleController, UiState, remainingSeconds } from "./state";

export function mountApp(root: HTMLElement, api: ApiClient, service: string) {
  root.innerHTML = `
    <header class="topbar">
      <span class="brand">TradeBase</span>
      <span id="session-badge" class="badge" hidden></span>
    </header>

    <main id="dashboard" class="dashboard locked-blur">
      <section class="panel"><h2>BTC / USD</h2><p class="num up">64,210.55</p></section>
      <section class="panel"><h2>ETH / USD</h2><p class="num down">3,001.12</p></section>
      <section class="panel"><h2>Portfolio</h2><p class="num">$12,480.09</p></section>
    </main>

    <div id="gate" class="overlay">
      <div class="card">
        <h1>Age restricted</h1>
        <p>This trading venue requires you to be 18 or older.</p>
        <p id="expired-note" hidden>Your previous session expired. Verify again to continue.</p>
        <button id="verify-btn">Verify privately</button>
        <p class="fineprint">Verification happens on your device. Your birthdate never leaves it.</p>
      </div>
    </div>

    <div id="consent" class="overlay" hidden>
      <div class="card">
        <h1>Privacy-preserving check</h1>
        <p>TradeBase will learn: <strong>that you are 18+</strong>.</p>
        <p>TradeBase will <strong>not</strong> learn: your birthdate, your age,
           or anything else stored in your vault.</p>
        <div class="row">
          <button id="consent-accept">Prove I'm 18+</button>
          <button id="consent-cancel" class="ghost">Cancel</button>
        </div>
      </div>
    </div>

    <div id="proving" class="overlay" hidden>
      <div class="card">
        <div class="spinner" role="progressbar" aria-label="generating proof"></div>
        <h1>Generating proof locally&hellip;</h1>
        <p>Nothing private is transmitted.</p>
      </div>
    </div>

    <div id="session-bar" class="session-bar" hidden>
      <span class="badge verified">Verified 18+</span>
      <span id="countdown"></span>
      <button id="time-travel" class="ghost" hidden>+1h (demo)</button>
      <button id="kill-switch" class="danger">Kill switch</button>
    </div>

    <div id="error-banner" class="error-banner" hidden>
      <span id="error-text"></span>
      <button id="error-dismiss" class="ghost">Dismiss</button>
    </div>
  `;

  const controller = new LifecycleController(api, service);

  const el = <T extends HTMLElement>(id: string): T =>
    root.querySelector<T>(`#${id}`)!;

  const gate = el<HTMLDivElement>("gate");
  const consent = el<HTMLDivElement>("consent");
  const proving = el<HTMLDivElement>("proving");
  const sessionBar = el<HTMLDivElement>("session-bar");
  const errorBanner = el<HTMLDivElement>("error-banner");
  const dashboard = el<HTMLElement>("dashboard");

  function render(state: UiState): void {
    root.dataset.state = state.tag;
    gate.hidden = !(state.tag === "locked" || state.tag === "expired");
    el("expired-note").hidden = state.tag !== "expired";
    consent.hidden = state.tag !== "consent";
    proving.hidden = state.tag !== "proving";
    sessionBar.hidden = state.tag !== "active";
    errorBanner.hidden = state.tag !== "error";
    dashboard.classList.toggle("locked-blur", state.tag !== "active");
    el("session-badge").hidden = state.tag !== "active";
    el("session-badge").textContent = "18+ verified";
    el("time-travel").hidden = !controller.adminEndpoints;
    if (state.tag === "active") {
      const left = remainingSeconds(state);
      el("countdown").textContent =
        left === null ? "" : `expires in ${formatDuration(left)} (chain time)`;
    }
    if (state.tag === "error") {
      el("error-text").textContent = explainReason(state.reason);
    }
  }

  controller.subscribe(render);
  render(controller.state);

  el("verify-btn").addEventListener("click", () => controller.requestConsent());
  el("consent-cancel").addEventListener("click", () =>
    controller.dismissConsent(),
  );
  el("consent-accept").addEventListener("click", () =>
    void controller.acceptConsent(),
  );
  el("kill-switch").addEventListener("click", () => void controller.killSwitch());
  el("error-dismiss").addEventListener("click", () =>
    controller.dispatch({ kind: "dismiss_error" }),
  );
  el("time-travel").addEventListener("click", () =>
    void controller.timeTravel(3600),
  );
  window.addEventListener("pagehide", () => controller.stopPolling());

  return controller;
}

export function formatDuration(totalSeconds: number): string {
  const h = Math.floor(totalSeconds / 3600);
  const m = Math.floor((totalSeconds % 3600) / 60);
  const s = totalSeconds % 60;
  if (h > 0) return `${h}h ${m}m`;
  if (m > 0) return `${m}m ${s}s`;
  return `${s}s`;
}

export function explainReason(reason: string | null): string {
  if (reason === "UnsatisfiedWitness") {
    return "Not eligible: the vaulted birthdate does not meet the 18+ requirement.";
  }
  if (reason === "StaleStatement") {
    return "The proof was generated too long ago; please try again.";
  }
  if (reason === "SenderMismatch") {
    return "This proof belongs to a different account.";
  }
  return `Verification failed: ${reason ?? "unknown error"}`;
}

import { describe, expect, it } from "vitest";

import { SessionView } from "../src/api";
import {
  ALLOWED_TRANSITIONS,
  INITIAL_STATE,
  UiEvent,
  UiState,
  reduce,
  remainingSeconds,
} from "../src/state";

function view(
  state: SessionView["state"],
  expiresAt: number | null = null,
  clock = 1000,
): SessionView {
  return {
    subject: "0x" + "ab".repeat(20),
    service: "tradebase",
    service_id: "00".repeat(32),
    state,
    granted_at: state === "none" ? null : 500,
    expires_at: expiresAt,
    last_checked: clock,
    receipt: null,
  };
}

const activeView = view("active", 5000);

describe("reducer happy path", () => {
  it("walks locked -> consent -> proving -> active", () => {
    let s = INITIAL_STATE;
    s = reduce(s, { kind: "start_consent" });
    expect(s.tag).toBe("consent");
    s = reduce(s, { kind: "consent_accepted" });
    expect(s.tag).toBe("proving");
    s = reduce(s, { kind: "grant_ok", view: activeView });
    expect(s.tag).toBe("active");
    expect(remainingSeconds(s)).toBe(4000);
  });

  it("kill switch returns to locked", () => {
    let s: UiState = { tag: "active", expiresAt: 5000, chainClock: 1000, reason: null };
    s = reduce(s, { kind: "revoke_ok" });
    expect(s.tag).toBe("locked");
    expect(s.expiresAt).toBeNull();
  });

  it("proving failure carries the reason", () => {
    let s: UiState = { tag: "proving", expiresAt: null, chainClock: 0, reason: null };
    s = reduce(s, { kind: "grant_failed", reason: "UnsatisfiedWitness" });
    expect(s.tag).toBe("error");
    expect(s.reason).toBe("UnsatisfiedWitness");
    s = reduce(s, { kind: "dismiss_error" });
    expect(s.tag).toBe("locked");
  });

  it("status polls drive active -> expired -> locked", () => {
    let s: UiState = { tag: "active", expiresAt: 5000, chainClock: 1000, reason: null };
    s = reduce(s, { kind: "status", view: view("expired", 5000, 6000) });
    expect(s.tag).toBe("expired");
    s = reduce(s, { kind: "status", view: view("none", null, 6100) });
    expect(s.tag).toBe("locked");
  });

  it("expired can re-enter the consent flow", () => {
    let s: UiState = { tag: "expired", expiresAt: 10, chainClock: 20, reason: null };
    s = reduce(s, { kind: "start_consent" });
    expect(s.tag).toBe("consent");
  });

  it("polls do not interrupt dialogs or requests", () => {
    for (const tag of ["consent", "proving", "error"] as const) {
      const s: UiState = { tag, expiresAt: null, chainClock: 0, reason: "x" };
      const out = reduce(s, { kind: "status", view: view("active", 99, 70) });
      expect(out.tag).toBe(tag);
      expect(out.chainClock).toBe(70); // clock still absorbed
    }
  });
});

describe("transition graph under fuzzed event orderings", () => {
  const EVENTS: UiEvent[] = [
    { kind: "start_consent" },
    { kind: "dismiss_consent" },
    { kind: "consent_accepted" },
    { kind: "grant_ok", view: activeView },
    { kind: "grant_failed", reason: "InvalidProof" },
    { kind: "revoke_ok" },
    { kind: "revoke_failed", reason: "boom" },
    { kind: "status", view: view("none") },
    { kind: "status", view: view("active", 4000) },
    { kind: "status", view: view("expired", 400) },
    { kind: "dismiss_error" },
  ];

  const allowed = new Set(ALLOWED_TRANSITIONS.map(([a, b]) => `${a}>${b}`));

  // deterministic LCG so failures reproduce
  function* rng(seed: number): Generator<number> {
    let x = seed >>> 0;
    for (;;) {
      x = (x * 1664525 + 1013904223) >>> 0;
      yield x;
    }
  }

  it("never leaves the declared edge set (5000 random steps)", () => {
    const rand = rng(0xc0ffee);
    let state = INITIAL_STATE;
    for (let i = 0; i < 5000; i++) {
      const ev = EVENTS[rand.next().value % EVENTS.length];
      const next = reduce(state, ev);
      if (next.tag !== state.tag) {
        expect(
          allowed.has(`${state.tag}>${next.tag}`),
          `illegal ${state.tag} -> ${next.tag} on ${ev.kind}`,
        ).toBe(true);
      }
      state = next;
    }
  });

  it("remainingSeconds is none outside active and clamps at zero", () => {
    expect(remainingSeconds(INITIAL_STATE)).toBeNull();
    const overdue: UiState = {
      tag: "active",
      expiresAt: 10,
      chainClock: 50,
      reason: null,
    };
    expect(remainingSeconds(overdue)).toBe(0);
  });
});

// Typed client for the lifecycle /v1 API. The UI only ever exchanges
// service names, statuses and receipts with the backend; attribute
// values and salts stay on the other side of this boundary.

export interface Health {
  ok: boolean;
  chain_height: number;
  clock: number;
  poll_interval_s: number;
  admin_endpoints: boolean;
}

export interface ReceiptSummary {
  height: number;
  gas_used: number;
  status: string;
  revert_reason: string | null;
}

export interface SessionView {
  subject: string;
  service: string;
  service_id: string;
  state: "none" | "active" | "expired";
  granted_at: number | null;
  expires_at: number | null;
  last_checked: number;
  receipt: ReceiptSummary | null;
}

export interface GasReport {
  network: string;
  grant_gas: number;
  revoke_gas: number;
  grant_cost_usd: string;
  revoke_cost_usd: string;
}

export class ApiError extends Error {
  constructor(
    public readonly reason: string,
    public readonly status: number,
  ) {
    super(reason);
  }
}

async function parse<T>(resp: Response): Promise<T> {
  const body = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const reason =
      typeof body?.error === "string" ? body.error : `HTTP ${resp.status}`;
    throw new ApiError(reason, resp.status);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  health(): Promise<Health> {
    return this.get("/v1/healthz");
  }

  status(service: string): Promise<SessionView> {
    return this.get(`/v1/status?service=${encodeURIComponent(service)}`);
  }

  grant(service: string, durationS?: number): Promise<SessionView> {
    const body: Record<string, unknown> = { service };
    if (durationS !== undefined) body.duration_s = durationS;
    return this.post("/v1/grant", body);
  }

  revoke(service: string): Promise<{ receipt: ReceiptSummary }> {
    return this.post("/v1/revoke", { service });
  }

  gas(network: string): Promise<GasReport> {
    return this.get(`/v1/gas?network=${encodeURIComponent(network)}`);
  }

  advanceTime(seconds: number): Promise<{ clock: number }> {
    return this.post("/v1/admin/advance_time", { seconds });
  }

  private get<T>(path: string): Promise<T> {
    return fetch(this.base + path).then((r) => parse<T>(r));
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => parse<T>(r));
  }
}

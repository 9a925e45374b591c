/** Typed client for the corgie HTTP API plus the layout poller.
 *
 * Focus is asynchronous: the poller keeps polling while the server answers
 * 202 and hands the payload over only if its job is still the latest one
 * requested, so a stale (superseded) focus can never overwrite the view.
 */

import type {
  BrushResultPayload,
  DatasetPayload,
  DistanceChartPayload,
  FeaturesPayload,
  FocusAccepted,
  GlobalLayoutPayload,
  KhopLayoutPayload,
  LatentPayload,
  SessionPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface KhopStatus {
  status: "ready" | "pending" | "none";
  payload: KhopLayoutPayload | null;
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const r = await this.fetchFn(`${this.base}${path}`);
    if (!r.ok) throw new ApiError(r.status, `${path}: ${r.status}`);
    return (await r.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const r = await this.fetchFn(`${this.base}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!r.ok) throw new ApiError(r.status, `${path}: ${r.status}`);
    return (await r.json()) as T;
  }

  getDataset(): Promise<DatasetPayload> {
    return this.getJson("/api/dataset");
  }

  getLatent(): Promise<LatentPayload> {
    return this.getJson("/api/latent");
  }

  getGlobalLayout(): Promise<GlobalLayoutPayload> {
    return this.getJson("/api/global-layout");
  }

  getFeatures(scopes: string[], session = "default"): Promise<FeaturesPayload> {
    return this.getJson(`/api/features?scopes=${scopes.join(",")}&session=${session}`);
  }

  getSession(session = "default"): Promise<SessionPayload> {
    return this.getJson(`/api/session/${session}`);
  }

  getDistances(
    params: { y?: string; scope?: string; scale?: string; connectivity?: string; prediction?: string },
    session = "default",
  ): Promise<DistanceChartPayload> {
    const query = new URLSearchParams({ session, ...params } as Record<string, string>);
    return this.getJson(`/api/distances?${query.toString()}`);
  }

  brush(
    region: [number, number, number, number],
    params: { y?: string; scope?: string; scale?: string } = {},
    session = "default",
  ): Promise<BrushResultPayload> {
    return this.postJson("/api/distances/brush", { region, session, ...params });
  }

  postFocus(
    action: { kind: string; nodeIds?: number[]; group?: number },
    session = "default",
  ): Promise<FocusAccepted> {
    return this.postJson(`/api/session/${session}/focus`, action);
  }

  postSettings(settings: Record<string, unknown>, session = "default"): Promise<unknown> {
    return this.postJson(`/api/session/${session}/settings`, settings);
  }

  async getKhopLayout(session = "default"): Promise<KhopStatus> {
    const r = await this.fetchFn(`${this.base}/api/session/${session}/khop-layout`);
    if (r.status === 200) return { status: "ready", payload: (await r.json()) as KhopLayoutPayload };
    if (r.status === 202) return { status: "pending", payload: null };
    if (r.status === 404) return { status: "none", payload: null };
    throw new ApiError(r.status, `khop-layout: ${r.status}`);
  }

  getRecommendations(nodeId: number, top = 5): Promise<unknown> {
    return this.getJson(`/api/node/${nodeId}/recommendations?top=${top}`);
  }
}

/** Polls the K-hop layout for the latest submitted job; results belonging
 * to superseded jobs are discarded. */
export class LayoutPoller {
  private latestJob: number | null = null;

  constructor(
    private api: ApiClient,
    private session = "default",
    private intervalMs = 150,
    private sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
  ) {}

  /** Register the newest job id; polls racing for older ids become stale. */
  track(jobId: number | null): void {
    this.latestJob = jobId;
  }

  /** Resolve with the layout for `jobId`, or null if it went stale or the
   * focus was cleared meanwhile. */
  async poll(jobId: number, maxAttempts = 2000): Promise<KhopLayoutPayload | null> {
    for (let attempt = 0; attempt < maxAttempts; attempt += 1) {
      if (this.latestJob !== jobId) return null; // superseded: discard
      const result = await this.api.getKhopLayout(this.session);
      if (this.latestJob !== jobId) return null;
      if (result.status === "ready") return result.payload;
      if (result.status === "none") return null;
      await this.sleep(this.intervalMs);
    }
    return null;
  }
}

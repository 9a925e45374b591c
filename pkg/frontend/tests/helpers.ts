/** Test scaffolding: recorded API payloads and a mock server that speaks
 * the corgie HTTP protocol over an injected fetch, including the async
 * focus flow (202 while pending, 200 once "computed").
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type {
  DatasetPayload,
  FeaturesPayload,
  GlobalLayoutPayload,
  KhopLayoutPayload,
  LatentPayload,
  DistanceChartPayload,
  SessionPayload,
} from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as T;
}

export interface Fixtures {
  dataset: DatasetPayload;
  latent: LatentPayload;
  globalLayout: GlobalLayoutPayload;
  features: FeaturesPayload;
  khop: KhopLayoutPayload;
  distances: DistanceChartPayload;
  session: SessionPayload;
}

export function loadFixtures(): Fixtures {
  return {
    dataset: fixture("dataset"),
    latent: fixture("latent"),
    globalLayout: fixture("global-layout"),
    features: fixture("features"),
    khop: fixture("khop-layout"),
    distances: fixture("distances-topo"),
    session: fixture("session"),
  };
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** In-memory protocol double driven by the recorded payloads. `pendingPolls`
 * controls how many khop-layout requests answer 202 before a focus job
 * "finishes". */
export class MockServer {
  jobCounter = 0;
  focusedGroups: number[][] = [];
  pollsUntilReady: number;
  requests: string[] = [];
  private remainingPolls = -1; // -1: no focus yet

  constructor(
    public readonly fixtures: Fixtures,
    { pendingPolls = 2 }: { pendingPolls?: number } = {},
  ) {
    this.pollsUntilReady = pendingPolls;
  }

  readonly fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    this.requests.push(`${method} ${path}`);

    if (path === "/api/dataset") return json(200, this.fixtures.dataset);
    if (path === "/api/latent") return json(200, this.fixtures.latent);
    if (path === "/api/global-layout") return json(200, this.fixtures.globalLayout);
    if (path.startsWith("/api/features")) return json(200, this.fixtures.features);
    if (path.startsWith("/api/distances?")) return json(200, this.fixtures.distances);
    if (path === "/api/distances/brush" && method === "POST") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      const [x0, x1, y0, y1] = body.region as number[];
      // serve the brush from the recorded chart's retained pairs? the chart
      // payload has no raw pairs, so answer with a fixed plausible list
      const pairs = x1 - x0 >= 1 && y1 - y0 >= 1 ? [[0, 1], [0, 2]] : [[3, 140]];
      return json(200, { schema: 1, pairs, x: pairs.map(() => 0.9), y: pairs.map(() => 0.1) });
    }
    if (/^\/api\/session\/[^/]+\/focus$/.test(path) && method === "POST") {
      const body = JSON.parse(String(init?.body ?? "{}"));
      if (body.kind === "clear") {
        this.focusedGroups = [];
        this.remainingPolls = -1;
        return json(202, { schema: 1, jobId: null });
      }
      this.jobCounter += 1;
      this.focusedGroups = [body.nodeIds as number[]];
      this.remainingPolls = this.pollsUntilReady;
      return json(202, { schema: 1, jobId: this.jobCounter });
    }
    if (/^\/api\/session\/[^/]+\/khop-layout$/.test(path)) {
      if (this.remainingPolls < 0) return json(404, { detail: "no focus applied" });
      if (this.remainingPolls > 0) {
        this.remainingPolls -= 1;
        return json(202, { schema: 1, status: "pending", jobId: this.jobCounter });
      }
      return json(200, this.fixtures.khop);
    }
    if (/^\/api\/session\/[^/]+\/settings$/.test(path) && method === "POST") {
      return json(200, { schema: 1, ok: true });
    }
    if (/^\/api\/session\/[^/]+$/.test(path)) {
      return json(200, { ...this.fixtures.session, focalGroups: this.focusedGroups });
    }
    if (/^\/api\/node\/\d+\/recommendations/.test(path)) {
      return json(200, { schema: 1, node: 0, recommendations: [] });
    }
    return json(404, { detail: `unmocked ${method} ${path}` });
  };
}

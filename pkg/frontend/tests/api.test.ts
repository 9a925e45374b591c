import { describe, expect, it } from "vitest";

import { ApiClient, LayoutPoller } from "../src/api.js";
import { loadFixtures, MockServer } from "./helpers.js";

describe("api client and layout poller", () => {
  it("maps khop-layout status codes to the three-way contract", async () => {
    const server = new MockServer(loadFixtures(), { pendingPolls: 1 });
    const api = new ApiClient("", server.fetch);
    expect((await api.getKhopLayout()).status).toBe("none");
    await api.postFocus({ kind: "createNew", nodeIds: [1, 2] });
    expect((await api.getKhopLayout()).status).toBe("pending");
    const ready = await api.getKhopLayout();
    expect(ready.status).toBe("ready");
    expect(ready.payload?.boxes.length).toBeGreaterThan(0);
  });

  it("poller resolves with the layout once the job finishes", async () => {
    const server = new MockServer(loadFixtures(), { pendingPolls: 3 });
    const api = new ApiClient("", server.fetch);
    const poller = new LayoutPoller(api, "default", 0, async () => {});
    const accepted = await api.postFocus({ kind: "createNew", nodeIds: [1] });
    poller.track(accepted.jobId);
    const layout = await poller.poll(accepted.jobId!);
    expect(layout?.boxes.length).toBeGreaterThan(0);
  });

  it("discards results for superseded jobs", async () => {
    const server = new MockServer(loadFixtures(), { pendingPolls: 5 });
    const api = new ApiClient("", server.fetch);
    const poller = new LayoutPoller(api, "default", 0, async () => {});

    const first = await api.postFocus({ kind: "createNew", nodeIds: [1] });
    poller.track(first.jobId);
    const firstPoll = poller.poll(first.jobId!);

    const second = await api.postFocus({ kind: "createNew", nodeIds: [2] });
    poller.track(second.jobId);

    expect(await firstPoll).toBeNull(); // stale response discarded by job id
    const layout = await poller.poll(second.jobId!);
    expect(layout).not.toBeNull();
  });

  it("clear focus tracks a null job and later polls discard", async () => {
    const server = new MockServer(loadFixtures(), { pendingPolls: 2 });
    const api = new ApiClient("", server.fetch);
    const poller = new LayoutPoller(api, "default", 0, async () => {});
    const accepted = await api.postFocus({ kind: "createNew", nodeIds: [1] });
    poller.track(accepted.jobId);
    const inFlight = poller.poll(accepted.jobId!);
    await api.postFocus({ kind: "clear" });
    poller.track(null);
    expect(await inFlight).toBeNull();
  });

  it("raises ApiError on non-2xx responses", async () => {
    const failing = new ApiClient("", async () => new Response("{}", { status: 500 }));
    await expect(failing.getDataset()).rejects.toMatchObject({ status: 500 });
  });
});

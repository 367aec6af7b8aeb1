// Scripted interactive session against a mocked server: draw a rectangle,
// read its evaluation, accept it, and confirm the active count drops by the
// rule's hit count -- the client shows only what the server returned.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Frame } from "../src/camera.js";
import { beginDrag, endDrag, initialViewState, moveDrag } from "../src/viewstate.js";
import { EvalRecordJson, RectSpec } from "../src/types.js";

const frame: Frame = { width: 900, height: 900, xmin: -2, ymin: -2, xmax: 2, ymax: 2 };

function makeServer(caseCount: number) {
  // deterministic fake: every rectangle covers 10 cases of class "A"
  const state = { active: caseCount, rules: [] as RectSpec[] };
  const record = (rect: RectSpec): EvalRecordJson => ({
    hitsByClass: { A: 10 },
    totalHits: 10,
    dominantClass: "A",
    precision: 1.0,
    coverageInClass: 10 / caseCount,
    coverageTotal: 10 / state.active,
    activeTotal: state.active,
    activeInClass: state.active,
    tieBroken: false,
  });
  const fetcher = async (url: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    if (url.includes("/evaluate")) {
      return new Response(JSON.stringify(record(body.rect)), { status: 200 });
    }
    if (url.includes("/rules")) {
      const rec = record(body.rect);
      state.rules.push(body.rect);
      state.active -= rec.totalHits;
      return new Response(
        JSON.stringify({
          rule: {
            rect: [body.rect.xmin, body.rect.ymin, body.rect.xmax, body.rect.ymax],
            mode: body.mode,
            class: rec.dominantClass,
            order: state.rules.length - 1,
            stats: {
              hitsByClass: rec.hitsByClass,
              totalHits: rec.totalHits,
              precision: rec.precision,
              coverageInClass: rec.coverageInClass,
              coverageTotal: rec.coverageTotal,
              activeTotal: rec.activeTotal,
              activeInClass: rec.activeInClass,
              tieBroken: false,
            },
          },
          activeCount: state.active,
        }),
        { status: 200 },
      );
    }
    return new Response(JSON.stringify({ detail: "unexpected" }), { status: 500 });
  };
  return { fetcher, state };
}

describe("interactive rectangle flow", () => {
  it("drag -> evaluate -> accept reduces the active count by the hits", async () => {
    const { fetcher, state } = makeServer(150);
    const api = new ApiClient("", fetcher);

    let view = { ...initialViewState, datasetId: "d1" };
    view = beginDrag(view, 200, 200);
    view = moveDrag(view, 480, 430);
    const { view: settled, evaluate } = endDrag(view, frame);
    view = settled;
    expect(evaluate).not.toBeNull();

    const shown = await api.evaluate(view.datasetId!, evaluate!, view.mode);
    // displayed figures are byte-equal to a direct API call with the same rect
    const direct = await api.evaluate(view.datasetId!, evaluate!, view.mode);
    expect(JSON.stringify(shown)).toBe(JSON.stringify(direct));

    const before = state.active;
    const accepted = await api.acceptRule(view.datasetId!, evaluate!, view.mode);
    expect(accepted.activeCount).toBe(before - shown.totalHits);
  });

  it("degenerate drag sends no evaluation request", async () => {
    let requests = 0;
    const api = new ApiClient("", async () => {
      requests += 1;
      return new Response("{}", { status: 200 });
    });
    let view = { ...initialViewState, datasetId: "d1" };
    view = beginDrag(view, 300, 300);
    // no movement
    const { evaluate } = endDrag(view, frame);
    expect(evaluate).toBeNull();
    if (evaluate) await api.evaluate("d1", evaluate, "point");
    expect(requests).toBe(0);
  });

  it("view-state changes trigger no mutating requests", () => {
    const calls: string[] = [];
    // a view-state change is pure; constructing it must not touch the client
    let view = { ...initialViewState, datasetId: "d1" };
    view = { ...view, visibility: "inside-rules" };
    view = beginDrag(view, 1, 1);
    view = moveDrag(view, 5, 5);
    endDrag(view, frame);
    expect(calls).toHaveLength(0);
  });
});

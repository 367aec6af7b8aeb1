import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { evalSummaryLines, reportFooterText, ruleRowText } from "../src/panel.js";
import { EvalRecordJson } from "../src/types.js";

function mockFetch(routes: Record<string, unknown>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetcher = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const key = Object.keys(routes).find((k) => url.startsWith(k));
    if (!key) {
      return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
    }
    return new Response(JSON.stringify(routes[key]), { status: 200 });
  };
  return { fetcher, calls };
}

const record: EvalRecordJson = {
  hitsByClass: { versicolor: 48, virginica: 3 },
  totalHits: 51,
  dominantClass: "versicolor",
  precision: 0.9411764705882353,
  coverageInClass: 0.96,
  coverageTotal: 0.34,
  activeTotal: 150,
  activeInClass: 50,
  tieBroken: false,
};

describe("api client", () => {
  it("posts rect and mode verbatim on evaluate", async () => {
    const { fetcher, calls } = mockFetch({ "/api/datasets/abc/evaluate": record });
    const api = new ApiClient("", fetcher);
    const rect = { xmin: -0.5, ymin: -0.25, xmax: 0.5, ymax: 0.75 };
    const res = await api.evaluate("abc", rect, "intersect");
    expect(res).toEqual(record);
    const body = JSON.parse(String(calls[0].init?.body));
    expect(body.rect).toEqual(rect);
    expect(body.mode).toBe("intersect");
  });

  it("surfaces server error details", async () => {
    const fetcher = async () =>
      new Response(JSON.stringify({ detail: "layout fingerprint conflict" }),
        { status: 409 });
    const api = new ApiClient("", fetcher);
    await expect(api.report("zzz")).rejects.toThrowError(ApiError);
    await expect(api.report("zzz")).rejects.toThrow("layout fingerprint conflict");
  });
});

describe("panel displays server figures verbatim", () => {
  it("evaluation summary echoes the record's numbers", () => {
    const lines = evalSummaryLines(record);
    expect(lines).toContain("versicolor: 48");
    expect(lines).toContain("virginica: 3");
    expect(lines).toContain("dominant: versicolor");
    expect(lines).toContain("precision: 94.12%");
    expect(lines).toContain("coverage in class: 96.00%");
  });

  it("zero-hit records show the empty message and no precision", () => {
    const empty = { ...record, hitsByClass: {}, totalHits: 0, dominantClass: null };
    const lines = evalSummaryLines(empty);
    expect(lines).toContain("no active case covered");
    expect(lines.join(" ")).not.toContain("precision");
  });

  it("rule rows and totals format stats without recomputation", () => {
    const text = ruleRowText({
      rect: [0, 0, 1, 1],
      mode: "point",
      class: "B",
      order: 0,
      stats: {
        hitsByClass: { B: 285, M: 4 },
        totalHits: 289,
        precision: 0.9859,
        coverageInClass: 0.6418,
        coverageTotal: 0.4231,
        activeTotal: 683,
        activeInClass: 444,
        tieBroken: false,
      },
    });
    expect(text).toBe("r_1 B cov 64.18% prec 98.59% (289 cases)");
    const footer = reportFooterText({
      version: 1,
      rules: [],
      totals: {
        caseCount: 683, covered: 658, uncovered: 25,
        recallPct: 96.34, weightedPrecisionPct: 95.13,
      },
    });
    expect(footer).toBe("covered 658/683 recall 96.34% weighted precision 95.13%");
  });
});

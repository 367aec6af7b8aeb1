// Thin typed client for the service API.  Every figure shown in the UI is a
// field from one of these responses -- no client-side rule math.

import {
  AcceptResponse,
  EvalRecordJson,
  FiringMode,
  MineResponse,
  RectSpec,
  ReportDoc,
  RuleJson,
  Scene,
  UploadResponse,
  Visibility,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetcher: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async json<T>(url: string, init?: RequestInit): Promise<T> {
    const res = await this.fetcher(this.base + url, init);
    if (!res.ok) {
      let detail = `HTTP ${res.status}`;
      try {
        const body = await res.json();
        if (body && body.detail) detail = String(body.detail);
      } catch {
        /* keep the status line */
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  upload(csv: string, layout = "seq", pad = "dup"): Promise<UploadResponse> {
    const q = new URLSearchParams({ layout, pad });
    return this.json(`/api/datasets?${q}`, { method: "POST", body: csv });
  }

  scene(
    id: string,
    visibility: Visibility,
    selectedCase: number | null,
  ): Promise<Scene> {
    const q = new URLSearchParams({ visibility });
    if (selectedCase !== null) q.set("selectedCase", String(selectedCase));
    return this.json(`/api/datasets/${id}/scene?${q}`);
  }

  evaluate(id: string, rect: RectSpec, mode: FiringMode): Promise<EvalRecordJson> {
    return this.json(`/api/datasets/${id}/evaluate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rect, mode }),
    });
  }

  acceptRule(id: string, rect: RectSpec, mode: FiringMode): Promise<AcceptResponse> {
    return this.json(`/api/datasets/${id}/rules`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rect, mode }),
    });
  }

  deleteRule(id: string, ruleId: number): Promise<{ rules: RuleJson[]; activeCount: number }> {
    return this.json(`/api/datasets/${id}/rules/${ruleId}`, { method: "DELETE" });
  }

  mine(id: string, params: Record<string, unknown>): Promise<MineResponse> {
    return this.json(`/api/datasets/${id}/mine`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  report(id: string): Promise<ReportDoc> {
    return this.json(`/api/datasets/${id}/report`);
  }
}

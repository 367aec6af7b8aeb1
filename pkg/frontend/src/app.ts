// DOM shell: wires pointer events, buttons and panels to the pure modules.

import { ApiClient, ApiError } from "./api.js";
import { zoomAbout } from "./camera.js";
import { computeDrawList, frameOf, paint } from "./render.js";
import {
  EvalRecordJson,
  FiringMode,
  RectSpec,
  Scene,
} from "./types.js";
import {
  ViewState,
  beginDrag,
  cycleVisibility,
  endDrag,
  initialViewState,
  moveDrag,
} from "./viewstate.js";
import { evalSummaryLines, reportFooterText, ruleRowText } from "./panel.js";

const api = new ApiClient("");

let view: ViewState = { ...initialViewState };
let scene: Scene | null = null;
let pendingRect: RectSpec | null = null;
let pendingEval: EvalRecordJson | null = null;
let mutationInFlight = false;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

function banner(msg: string): void {
  const el = $("banner");
  el.textContent = msg;
  el.style.display = msg ? "block" : "none";
}

function redraw(): void {
  if (!scene) return;
  const canvas = $("plot") as unknown as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  paint(ctx, canvas.width, canvas.height, computeDrawList(scene, view.camera, pendingRect));
}

async function refreshScene(): Promise<void> {
  if (!view.datasetId) return;
  try {
    scene = await api.scene(view.datasetId, view.visibility, view.selectedCase);
    if (scene.version !== 1) {
      banner(`scene schema version ${scene.version} not supported by this client`);
      return;
    }
    banner("");
    redraw();
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  }
}

async function refreshRulePanel(): Promise<void> {
  if (!view.datasetId || !scene) return;
  const list = $("rules");
  list.innerHTML = "";
  for (const r of scene.rects) {
    const li = document.createElement("li");
    li.textContent = ruleRowText({
      rect: [r.xmin, r.ymin, r.xmax, r.ymax],
      mode: r.mode,
      class: r.class,
      order: r.id,
      stats: r.stats,
    });
    const del = document.createElement("button");
    del.textContent = "x";
    del.onclick = () => void deleteRule(r.id);
    li.appendChild(del);
    list.appendChild(li);
  }
  try {
    const report = await api.report(view.datasetId);
    $("totals").textContent = reportFooterText(report);
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  }
}

function showEval(rec: EvalRecordJson | null): void {
  const box = $("eval");
  box.innerHTML = "";
  $("accept").toggleAttribute("disabled", !rec || rec.totalHits === 0);
  if (!rec) return;
  for (const line of evalSummaryLines(rec)) {
    const div = document.createElement("div");
    div.textContent = line;
    box.appendChild(div);
  }
}

async function evaluatePending(): Promise<void> {
  if (!view.datasetId || !pendingRect) return;
  try {
    pendingEval = await api.evaluate(view.datasetId, pendingRect, view.mode);
    showEval(pendingEval);
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  }
}

async function acceptPending(): Promise<void> {
  if (!view.datasetId || !pendingRect || mutationInFlight) return;
  mutationInFlight = true;
  try {
    const res = await api.acceptRule(view.datasetId, pendingRect, view.mode);
    $("active").textContent = `active cases: ${res.activeCount}`;
    pendingRect = null;
    pendingEval = null;
    showEval(null);
    await refreshScene();
    await refreshRulePanel();
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  } finally {
    mutationInFlight = false;
  }
}

async function deleteRule(ruleId: number): Promise<void> {
  if (!view.datasetId || mutationInFlight) return;
  mutationInFlight = true;
  try {
    const res = await api.deleteRule(view.datasetId, ruleId);
    $("active").textContent = `active cases: ${res.activeCount}`;
    await refreshScene();
    await refreshRulePanel();
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  } finally {
    mutationInFlight = false;
  }
}

async function autoMine(): Promise<void> {
  if (!view.datasetId || mutationInFlight) return;
  mutationInFlight = true;
  try {
    const res = await api.mine(view.datasetId, {
      rectW: Number(($("rect-w") as HTMLInputElement).value),
      rectH: Number(($("rect-h") as HTMLInputElement).value),
      stride: Number(($("stride") as HTMLInputElement).value),
      minCoverage: Number(($("min-cov") as HTMLInputElement).value),
      minPrecision: Number(($("min-prec") as HTMLInputElement).value),
      mode: view.mode,
      maxRules: 8,
    });
    $("active").textContent = `active cases: ${res.activeCount}`;
    await refreshScene();
    await refreshRulePanel();
  } catch (err) {
    banner(String(err instanceof Error ? err.message : err));
  } finally {
    mutationInFlight = false;
  }
}

function bindCanvas(): void {
  const canvas = $("plot") as unknown as HTMLCanvasElement;
  canvas.addEventListener("pointerdown", (ev) => {
    view = beginDrag(view, ev.offsetX, ev.offsetY);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!view.drag) return;
    view = moveDrag(view, ev.offsetX, ev.offsetY);
    if (view.tool === "draw-rect" && scene) {
      const { evaluate } = endDrag({ ...view }, frameOf(scene));
      pendingRect = evaluate; // live preview rectangle
    }
    redraw();
  });
  canvas.addEventListener("pointerup", () => {
    if (!scene) return;
    const { view: next, evaluate } = endDrag(view, frameOf(scene));
    view = next;
    if (evaluate) {
      pendingRect = evaluate;
      void evaluatePending();
    }
    redraw();
  });
  canvas.addEventListener("wheel", (ev) => {
    if (!scene) return;
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    view = { ...view, camera: zoomAbout(view.camera, frameOf(scene), factor, ev.offsetX, ev.offsetY) };
    redraw();
  });
}

function bindControls(): void {
  $("upload").onclick = async () => {
    const file = ($("file") as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      const layout = ($("layout") as HTMLSelectElement).value;
      const up = await api.upload(await file.text(), layout);
      view = { ...view, datasetId: up.id, selectedCase: null };
      $("active").textContent = `active cases: ${up.caseCount}`;
      $("meta").textContent = `n=${up.n}, classes: ${up.classes.join(", ")}`;
      await refreshScene();
      await refreshRulePanel();
    } catch (err) {
      banner(String(err instanceof Error ? err.message : err));
    }
  };
  $("tool-pan").onclick = () => {
    view = { ...view, tool: "pan" };
  };
  $("tool-rect").onclick = () => {
    view = { ...view, tool: "draw-rect" };
  };
  $("mode").onclick = () => {
    const mode: FiringMode = view.mode === "point" ? "intersect" : "point";
    view = { ...view, mode };
    $("mode").textContent = `mode: ${mode}`;
  };
  $("visibility").onclick = async () => {
    view = { ...view, visibility: cycleVisibility(view.visibility) };
    $("visibility").textContent = `show: ${view.visibility}`;
    await refreshScene();
  };
  $("accept").onclick = () => void acceptPending();
  $("mine").onclick = () => void autoMine();
}

export function start(): void {
  bindCanvas();
  bindControls();
}

if (typeof document !== "undefined" && document.getElementById("plot")) {
  start();
}

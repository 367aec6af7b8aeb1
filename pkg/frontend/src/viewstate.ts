// View state and the drag-to-rectangle state machine.
// Pure transitions; the DOM shell feeds pointer events in and reads
// requested actions out.  View-state changes never call the server.

import { Camera, identityCamera, Frame, screenToScene } from "./camera.js";
import { FiringMode, RectSpec, Visibility } from "./types.js";

export type Tool = "pan" | "draw-rect";

export interface ViewState {
  camera: Camera;
  tool: Tool;
  mode: FiringMode;
  visibility: Visibility;
  selectedCase: number | null;
  datasetId: string | null;
  drag: DragState | null;
}

export interface DragState {
  startX: number; // screen coords
  startY: number;
  lastX: number;
  lastY: number;
}

export const initialViewState: ViewState = {
  camera: identityCamera,
  tool: "draw-rect",
  mode: "intersect",
  visibility: "all",
  selectedCase: null,
  datasetId: null,
  drag: null,
};

const VISIBILITY_CYCLE: Visibility[] = ["all", "outside-rules", "inside-rules"];

export function cycleVisibility(v: Visibility): Visibility {
  return VISIBILITY_CYCLE[(VISIBILITY_CYCLE.indexOf(v) + 1) % VISIBILITY_CYCLE.length];
}

/** Normalized scene rectangle from a drag, whatever the drag direction. */
export function dragToRect(
  drag: DragState,
  cam: Camera,
  frame: Frame,
): RectSpec | null {
  const [x0, y0] = screenToScene(cam, frame, drag.startX, drag.startY);
  const [x1, y1] = screenToScene(cam, frame, drag.lastX, drag.lastY);
  const rect = {
    xmin: Math.min(x0, x1),
    ymin: Math.min(y0, y1),
    xmax: Math.max(x0, x1),
    ymax: Math.max(y0, y1),
  };
  if (rect.xmax - rect.xmin <= 0 || rect.ymax - rect.ymin <= 0) {
    return null; // degenerate zero-area drag: no evaluation request
  }
  return rect;
}

export function beginDrag(view: ViewState, px: number, py: number): ViewState {
  return { ...view, drag: { startX: px, startY: py, lastX: px, lastY: py } };
}

export function moveDrag(view: ViewState, px: number, py: number): ViewState {
  if (!view.drag) return view;
  if (view.tool === "pan") {
    const dx = px - view.drag.lastX;
    const dy = py - view.drag.lastY;
    return {
      ...view,
      camera: { ...view.camera, panX: view.camera.panX + dx, panY: view.camera.panY + dy },
      drag: { ...view.drag, lastX: px, lastY: py },
    };
  }
  return { ...view, drag: { ...view.drag, lastX: px, lastY: py } };
}

/** Finish a drag: returns the next state plus the rect to evaluate, if any. */
export function endDrag(
  view: ViewState,
  frame: Frame,
): { view: ViewState; evaluate: RectSpec | null } {
  if (!view.drag) return { view, evaluate: null };
  const rect =
    view.tool === "draw-rect" ? dragToRect(view.drag, view.camera, frame) : null;
  return { view: { ...view, drag: null }, evaluate: rect };
}

// Scene rendering split in two: a pure draw-list computation (testable)
// and a thin canvas painter.

import { Camera, Frame, baseScale, sceneToScreen } from "./camera.js";
import { RectSpec, Scene } from "./types.js";

export type DrawOp =
  | { kind: "ellipse"; cx: number; cy: number; rx: number; ry: number; stroke: string; width: number }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; stroke: string; dash?: number[] }
  | { kind: "polyline"; points: [number, number][]; stroke: string; width: number }
  | { kind: "arrowhead"; points: [number, number][]; fill: string }
  | { kind: "rect"; x: number; y: number; w: number; h: number; stroke: string; dash?: number[] }
  | { kind: "dot"; x: number; y: number; r: number; fill: string }
  | { kind: "label"; x: number; y: number; text: string; fill: string };

export function frameOf(scene: Scene): Frame {
  const vp = scene.viewport;
  return { width: vp.width, height: vp.height, xmin: vp.xmin, ymin: vp.ymin, xmax: vp.xmax, ymax: vp.ymax };
}

export function computeDrawList(scene: Scene, cam: Camera, inProgress: RectSpec | null): DrawOp[] {
  const frame = frameOf(scene);
  const s = baseScale(frame) * cam.zoom;
  const t = (x: number, y: number) => sceneToScreen(cam, frame, x, y);
  const ops: DrawOp[] = [];

  const e = scene.ellipse;
  const [ecx, ecy] = t(e.cx, e.cy);
  ops.push({ kind: "ellipse", cx: ecx, cy: ecy, rx: (e.w / 2) * s, ry: (e.h / 2) * s, stroke: "#1f3a93", width: 1.5 });
  // guide lines M (vertical) and N (horizontal)
  ops.push({ kind: "line", x1: ecx, y1: ecy - (e.h / 2) * s, x2: ecx, y2: ecy + (e.h / 2) * s, stroke: "#999", dash: [4, 3] });
  ops.push({ kind: "line", x1: ecx - (e.w / 2) * s, y1: ecy, x2: ecx + (e.w / 2) * s, y2: ecy, stroke: "#999", dash: [4, 3] });

  for (const se of scene.sideEllipses) {
    const [cx, cy] = t(se.cx, se.cy);
    ops.push({ kind: "ellipse", cx, cy, rx: se.rw * s, ry: se.rh * s, stroke: se.role === "first" ? "#cc4444" : "#4466cc", width: 0.8 });
  }

  for (const sec of scene.sectors) {
    const [px, py] = t(sec.tick[0], sec.tick[1]);
    ops.push({ kind: "dot", x: px, y: py, r: 3, fill: "#cc2222" });
    const [lx, ly] = t(sec.labelAt[0], sec.labelAt[1]);
    ops.push({ kind: "label", x: lx, y: ly, text: sec.label, fill: "#333" });
  }

  for (const g of scene.graphs) {
    if (!g.visible) continue;
    const color = scene.legend[g.class] ?? "#333";
    const pts = g.nodes.map(([x, y]) => t(x, y));
    if (pts.length === 1) {
      ops.push({ kind: "dot", x: pts[0][0], y: pts[0][1], r: 2, fill: color });
      continue;
    }
    ops.push({ kind: "polyline", points: pts, stroke: color, width: 1 });
    const [x0, y0] = pts[pts.length - 2];
    const [x1, y1] = pts[pts.length - 1];
    const dx = x1 - x0, dy = y1 - y0;
    const len = Math.hypot(dx, dy);
    if (len > 1e-9) {
      const ux = dx / len, uy = dy / len, size = 6;
      ops.push({
        kind: "arrowhead",
        points: [
          [x1, y1],
          [x1 - size * ux + 0.5 * size * uy, y1 - size * uy - 0.5 * size * ux],
          [x1 - size * ux - 0.5 * size * uy, y1 - size * uy + 0.5 * size * ux],
        ],
        fill: color,
      });
    }
  }

  for (const r of scene.rects) {
    const [x, yTop] = t(r.xmin, r.ymax);
    ops.push({
      kind: "rect", x, y: yTop, w: (r.xmax - r.xmin) * s, h: (r.ymax - r.ymin) * s,
      stroke: scene.legend[r.class] ?? "#333", dash: [6, 3],
    });
  }

  if (inProgress) {
    const [x, yTop] = t(inProgress.xmin, inProgress.ymax);
    ops.push({
      kind: "rect", x, y: yTop,
      w: (inProgress.xmax - inProgress.xmin) * s,
      h: (inProgress.ymax - inProgress.ymin) * s,
      stroke: "#111", dash: [2, 2],
    });
  }
  return ops;
}

export function paint(ctx: CanvasRenderingContext2D, width: number, height: number, ops: DrawOp[]): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);
  for (const op of ops) {
    switch (op.kind) {
      case "ellipse":
        ctx.beginPath();
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = op.width;
        ctx.setLineDash([]);
        ctx.ellipse(op.cx, op.cy, op.rx, op.ry, 0, 0, 2 * Math.PI);
        ctx.stroke();
        break;
      case "line":
        ctx.beginPath();
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = 1;
        ctx.setLineDash(op.dash ?? []);
        ctx.moveTo(op.x1, op.y1);
        ctx.lineTo(op.x2, op.y2);
        ctx.stroke();
        break;
      case "polyline":
        ctx.beginPath();
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = op.width;
        ctx.setLineDash([]);
        op.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
        ctx.stroke();
        break;
      case "arrowhead":
        ctx.beginPath();
        ctx.fillStyle = op.fill;
        op.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
        ctx.closePath();
        ctx.fill();
        break;
      case "rect":
        ctx.beginPath();
        ctx.strokeStyle = op.stroke;
        ctx.lineWidth = 1.5;
        ctx.setLineDash(op.dash ?? []);
        ctx.strokeRect(op.x, op.y, op.w, op.h);
        break;
      case "dot":
        ctx.beginPath();
        ctx.fillStyle = op.fill;
        ctx.arc(op.x, op.y, op.r, 0, 2 * Math.PI);
        ctx.fill();
        break;
      case "label":
        ctx.fillStyle = op.fill;
        ctx.font = "11px sans-serif";
        ctx.fillText(op.text, op.x, op.y);
        break;
    }
  }
  ctx.setLineDash([]);
}

import { describe, expect, it } from "vitest";

import { Frame, identityCamera } from "../src/camera.js";
import {
  beginDrag,
  cycleVisibility,
  dragToRect,
  endDrag,
  initialViewState,
  moveDrag,
} from "../src/viewstate.js";

const frame: Frame = { width: 900, height: 900, xmin: -2, ymin: -2, xmax: 2, ymax: 2 };

describe("visibility cycling", () => {
  it("cycles through the three states", () => {
    expect(cycleVisibility("all")).toBe("outside-rules");
    expect(cycleVisibility("outside-rules")).toBe("inside-rules");
    expect(cycleVisibility("inside-rules")).toBe("all");
  });
});

describe("drag to rectangle", () => {
  it("normalizes any drag direction to min < max", () => {
    for (const [sx, sy, ex, ey] of [
      [100, 100, 300, 300],
      [300, 300, 100, 100],
      [100, 300, 300, 100],
      [300, 100, 100, 300],
    ]) {
      const rect = dragToRect(
        { startX: sx, startY: sy, lastX: ex, lastY: ey },
        identityCamera,
        frame,
      );
      expect(rect).not.toBeNull();
      expect(rect!.xmin).toBeLessThan(rect!.xmax);
      expect(rect!.ymin).toBeLessThan(rect!.ymax);
    }
  });

  it("zero-area drag produces no rectangle", () => {
    expect(
      dragToRect({ startX: 50, startY: 80, lastX: 50, lastY: 200 },
        identityCamera, frame),
    ).toBeNull();
    expect(
      dragToRect({ startX: 50, startY: 80, lastX: 50, lastY: 80 },
        identityCamera, frame),
    ).toBeNull();
  });

  it("end of a draw drag requests an evaluation exactly once", () => {
    let view = { ...initialViewState, tool: "draw-rect" as const };
    view = beginDrag(view, 100, 100);
    view = moveDrag(view, 250, 220);
    const { view: after, evaluate } = endDrag(view, frame);
    expect(evaluate).not.toBeNull();
    expect(after.drag).toBeNull();
    const again = endDrag(after, frame);
    expect(again.evaluate).toBeNull();
  });

  it("pan drags move the camera and never request evaluation", () => {
    let view = { ...initialViewState, tool: "pan" as const };
    view = beginDrag(view, 10, 10);
    view = moveDrag(view, 40, 25);
    expect(view.camera.panX).toBe(30);
    expect(view.camera.panY).toBe(15);
    const { evaluate } = endDrag(view, frame);
    expect(evaluate).toBeNull();
  });
});

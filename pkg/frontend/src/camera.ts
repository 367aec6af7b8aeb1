// Camera math: the only geometry the client performs.
// Scene y points up; screen y points down, so the transform flips y.

export interface Camera {
  panX: number; // screen-pixel offset
  panY: number;
  zoom: number; // > 0
}

export interface Frame {
  width: number;
  height: number;
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
}

export function baseScale(frame: Frame): number {
  return Math.min(
    frame.width / (frame.xmax - frame.xmin),
    frame.height / (frame.ymax - frame.ymin),
  );
}

export function sceneToScreen(
  cam: Camera,
  frame: Frame,
  x: number,
  y: number,
): [number, number] {
  const s = baseScale(frame) * cam.zoom;
  return [
    (x - frame.xmin) * s + cam.panX,
    frame.height - (y - frame.ymin) * s + cam.panY,
  ];
}

export function screenToScene(
  cam: Camera,
  frame: Frame,
  px: number,
  py: number,
): [number, number] {
  const s = baseScale(frame) * cam.zoom;
  return [
    (px - cam.panX) / s + frame.xmin,
    (frame.height - (py - cam.panY)) / s + frame.ymin,
  ];
}

/** Zoom by `factor` keeping the scene point under the cursor fixed on screen. */
export function zoomAbout(
  cam: Camera,
  frame: Frame,
  factor: number,
  cursorX: number,
  cursorY: number,
): Camera {
  const zoom = Math.max(1e-6, cam.zoom * factor);
  const [sx, sy] = screenToScene(cam, frame, cursorX, cursorY);
  const next: Camera = { panX: cam.panX, panY: cam.panY, zoom };
  const [nx, ny] = sceneToScreen(next, frame, sx, sy);
  return { zoom, panX: cam.panX + cursorX - nx, panY: cam.panY + cursorY - ny };
}

export function panBy(cam: Camera, dx: number, dy: number): Camera {
  return { ...cam, panX: cam.panX + dx, panY: cam.panY + dy };
}

export const identityCamera: Camera = { panX: 0, panY: 0, zoom: 1 };

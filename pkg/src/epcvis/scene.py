"""Serializable render model: scene JSON for the UI and standalone SVG export.

The scene carries geometry verbatim (full float precision, no quantization);
only the SVG text rounds coordinates, to six decimals.  Class colors come
from a fixed palette indexed by sorted class name, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import EllipseSpec, LayoutConfig, anchor_value, side_ellipse_for_anchor
from .rules import DominanceRule, EmbeddedSet, dumps_canonical, graphs_match

PALETTE = (
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
    "#f032e6", "#bcf60c", "#fabebe", "#008080", "#9a6324", "#800000",
)

VISIBILITY_STATES = ("all", "outside-rules", "inside-rules")


def class_colors(classes) -> dict:
    ordered = sorted(set(classes))
    if len(ordered) > len(PALETTE):
        warnings.warn(f"{len(ordered)} classes exceed the {len(PALETTE)}-color palette; "
                      "colors will repeat")
    return {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(ordered)}


@dataclass(frozen=True)
class Scene:
    viewport: dict
    ellipse: dict
    sectors: list
    graphs: list
    rects: list
    legend: dict
    side_ellipses: list

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "viewport": self.viewport,
            "ellipse": self.ellipse,
            "sectors": self.sectors,
            "graphs": self.graphs,
            "rects": self.rects,
            "legend": self.legend,
            "sideEllipses": self.side_ellipses,
        }


def build_scene(emb: EmbeddedSet, rules: list[DominanceRule], layout: LayoutConfig,
                ellipse: EllipseSpec, visibility: str = "all",
                selected_case: int | None = None) -> Scene:
    """Assemble the render model.

    visibility cycles between all graphs, graphs outside every rule, and
    graphs inside at least one rule; the selected case additionally gets
    its side-ellipse construction overlaid.
    """
    if visibility not in VISIBILITY_STATES:
        raise ValueError(f"visibility must be one of {VISIBILITY_STATES}")
    emb = EmbeddedSet.from_graphs(emb)
    n_cases = emb.count
    in_any = np.zeros(n_cases, dtype=bool)
    for rule in rules:
        in_any |= graphs_match(emb, rule.rect, rule.mode)
    if visibility == "all":
        visible = np.ones(n_cases, dtype=bool)
    elif visibility == "outside-rules":
        visible = ~in_any
    else:
        visible = in_any

    legend = class_colors(emb.labels.tolist())
    graphs = [{
        "id": i,
        "class": str(emb.labels[i]),
        "visible": bool(visible[i]),
        "nodes": [[float(x), float(y)] for x, y in emb.nodes[i]],
    } for i in range(n_cases)]

    rects = [{
        "id": r.order_index,
        "class": r.predicted_class,
        "mode": r.mode,
        "xmin": r.rect.xmin, "ymin": r.rect.ymin,
        "xmax": r.rect.xmax, "ymax": r.rect.ymax,
        "stats": r.stats.to_json(),
    } for r in rules]

    sectors = []
    if layout.mode != "dynamic":
        for i in range(layout.n):
            s0 = layout.starts[i]
            s1 = (layout.starts[i] + layout.dirs[i] * layout.spans[i]) % 1.0
            x0, y0 = ellipse.point_at(s0)
            xm, ym = ellipse.point_at((layout.starts[i]
                                       + layout.dirs[i] * 0.5 * layout.spans[i]) % 1.0)
            sectors.append({"coord": i + 1, "label": f"X{i + 1}",
                            "s0": float(s0), "s1": float(s1),
                            "tick": [float(x0), float(y0)],
                            "labelAt": [float(xm), float(ym)]})

    side = []
    if selected_case is not None:
        if not (0 <= selected_case < n_cases):
            raise IndexError(f"selected case {selected_case} out of range 0..{n_cases - 1}")
        side = _side_ellipse_overlay(emb, selected_case, layout, ellipse)

    all_x = emb.nodes[..., 0].ravel() if n_cases else np.array([ellipse.cx])
    all_y = emb.nodes[..., 1].ravel() if n_cases else np.array([ellipse.cy])
    pad_w = 0.1 * max(ellipse.width, ellipse.height)
    xmin = min(float(all_x.min()), ellipse.cx - ellipse.rw) - pad_w
    xmax = max(float(all_x.max()), ellipse.cx + ellipse.rw) + pad_w
    ymin = min(float(all_y.min()), ellipse.cy - ellipse.rh) - pad_w
    ymax = max(float(all_y.max()), ellipse.cy + ellipse.rh) + pad_w

    return Scene(
        viewport={"xmin": xmin, "ymin": ymin, "xmax": xmax, "ymax": ymax,
                  "width": 900, "height": 900},
        ellipse={"cx": ellipse.cx, "cy": ellipse.cy,
                 "w": ellipse.width, "h": ellipse.height},
        sectors=sectors,
        graphs=graphs,
        rects=rects,
        legend=legend,
        side_ellipses=side,
    )


def _side_ellipse_overlay(emb, case, layout, ellipse):
    """Side-ellipse outlines for one case (static layouts only)."""
    if layout.mode == "dynamic":
        return []
    from .geometry import invert, EPCGraph
    g = EPCGraph(nodes=tuple((float(x), float(y)) for x, y in emb.nodes[case]))
    try:
        values = invert(g, layout, ellipse)
    except Exception:
        return []
    out = []
    for j, (ia, ib) in enumerate(layout.pairs):
        for role, i in (("first", ia), ("second", ib)):
            anc = anchor_value(values[i], i, layout, ellipse)
            guide = layout.guides[i]
            o = layout.orientation_sign_static(i, values[i], guide)
            se = side_ellipse_for_anchor(anc, role, guide, o, ellipse)
            out.append({"coord": i + 1, "role": role, "cx": se.cx, "cy": se.cy,
                        "rw": se.rw, "rh": se.rh})
    return out


def to_json(scene: Scene) -> str:
    """Canonical JSON wire form; serialize-parse-serialize is byte-identical."""
    return dumps_canonical(scene.to_dict())


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def to_svg(scene: Scene) -> str:
    """Standalone SVG 1.1 document.

    Scene y points up; SVG y points down, so everything is emitted through
    a flip.  Graphs are polylines with one arrowhead on the final segment.
    """
    vp = scene.viewport
    W, H = vp["width"], vp["height"]
    sx = W / (vp["xmax"] - vp["xmin"])
    sy = H / (vp["ymax"] - vp["ymin"])
    scale = min(sx, sy)

    def tx(x):
        return (x - vp["xmin"]) * scale

    def ty(y):
        return H - (y - vp["ymin"]) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    e = scene.ellipse
    rx, ry = e["w"] / 2 * scale, e["h"] / 2 * scale
    cx, cy = tx(e["cx"]), ty(e["cy"])
    parts.append(
        f'<path d="M {_fmt(cx - rx)} {_fmt(cy)} '
        f'A {_fmt(rx)} {_fmt(ry)} 0 1 0 {_fmt(cx + rx)} {_fmt(cy)} '
        f'A {_fmt(rx)} {_fmt(ry)} 0 1 0 {_fmt(cx - rx)} {_fmt(cy)}" '
        'fill="none" stroke="#1f3a93" stroke-width="1.5"/>')
    # guide lines M and N
    parts.append(f'<line x1="{_fmt(cx)}" y1="{_fmt(cy - ry)}" x2="{_fmt(cx)}" '
                 f'y2="{_fmt(cy + ry)}" stroke="#999999" stroke-dasharray="4 3"/>')
    parts.append(f'<line x1="{_fmt(cx - rx)}" y1="{_fmt(cy)}" x2="{_fmt(cx + rx)}" '
                 f'y2="{_fmt(cy)}" stroke="#999999" stroke-dasharray="4 3"/>')

    for se in scene.side_ellipses:
        parts.append(
            f'<ellipse cx="{_fmt(tx(se["cx"]))}" cy="{_fmt(ty(se["cy"]))}" '
            f'rx="{_fmt(se["rw"] * scale)}" ry="{_fmt(se["rh"] * scale)}" '
            'fill="none" stroke="#cc4444" stroke-width="0.8"/>')

    ecx, ecy = scene.ellipse["cx"], scene.ellipse["cy"]
    for sec in scene.sectors:
        px, py = sec["tick"]
        # tick mark: short segment pointing outward from the center
        ddx, ddy = px - ecx, py - ecy
        L = (ddx * ddx + ddy * ddy) ** 0.5 or 1.0
        ox, oy = ddx / L * 6.0 / scale, ddy / L * 6.0 / scale
        parts.append(f'<line x1="{_fmt(tx(px))}" y1="{_fmt(ty(py))}" '
                     f'x2="{_fmt(tx(px + ox))}" y2="{_fmt(ty(py + oy))}" '
                     'stroke="#cc2222" stroke-width="2"/>')
        lx, ly2 = sec["labelAt"]
        mx, my = lx - ecx, ly2 - ecy
        LM = (mx * mx + my * my) ** 0.5 or 1.0
        lxx, lyy = lx + mx / LM * 14.0 / scale, ly2 + my / LM * 14.0 / scale
        parts.append(f'<text x="{_fmt(tx(lxx))}" y="{_fmt(ty(lyy))}" font-size="11" '
                     f'font-family="sans-serif" text-anchor="middle">{sec["label"]}</text>')

    for g in scene.graphs:
        if not g["visible"]:
            continue
        color = scene.legend.get(g["class"], "#333333")
        pts = [(tx(x), ty(y)) for x, y in g["nodes"]]
        if len(pts) == 1:
            parts.append(f'<circle cx="{_fmt(pts[0][0])}" cy="{_fmt(pts[0][1])}" '
                         f'r="2.0" fill="{color}"/>')
            continue
        d = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)
        parts.append(f'<polyline points="{d}" fill="none" stroke="{color}" '
                     'stroke-width="1.0"/>')
        # arrowhead on the final segment
        (x0, y0), (x1, y1) = pts[-2], pts[-1]
        dx, dy = x1 - x0, y1 - y0
        L = (dx * dx + dy * dy) ** 0.5
        if L > 1e-9:
            ux, uy = dx / L, dy / L
            size = 6.0
            left = (x1 - size * ux + size * 0.5 * uy, y1 - size * uy - size * 0.5 * ux)
            right = (x1 - size * ux - size * 0.5 * uy, y1 - size * uy + size * 0.5 * ux)
            parts.append(
                f'<polygon points="{_fmt(x1)},{_fmt(y1)} {_fmt(left[0])},{_fmt(left[1])} '
                f'{_fmt(right[0])},{_fmt(right[1])}" fill="{color}"/>')

    for r in scene.rects:
        color = scene.legend.get(r["class"], "#333333")
        parts.append(
            f'<rect x="{_fmt(tx(r["xmin"]))}" y="{_fmt(ty(r["ymax"]))}" '
            f'width="{_fmt((r["xmax"] - r["xmin"]) * scale)}" '
            f'height="{_fmt((r["ymax"] - r["ymin"]) * scale)}" '
            f'fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 3"/>')

    ly = 16
    for cls in sorted(scene.legend):
        parts.append(f'<rect x="8" y="{ly - 10}" width="12" height="12" '
                     f'fill="{scene.legend[cls]}"/>')
        parts.append(f'<text x="24" y="{ly}" font-size="12" '
                     f'font-family="sans-serif">{cls}</text>')
        ly += 16
    parts.append("</svg>")
    return "\n".join(parts)

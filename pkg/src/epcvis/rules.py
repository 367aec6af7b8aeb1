"""Dominance-rectangle rules: evaluation, automatic mining, classification.

A rule is an axis-aligned rectangle in the embedding plane plus a firing
mode: "point" fires when any graph node lies inside, "intersect" when any
edge crosses the rectangle (boundary contact counts in both modes).
Mining is sequential covering: scan a rectangle over a fixed grid, accept
the best qualifying position, remove covered cases, repeat.  Rectangle
evaluations within a round are vectorized; the accepted rectangle equals
the sequential scan's choice by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset, DataError
from .geometry import EllipseSpec, EPCGraph, LayoutConfig, embed_batch


class RuleError(Exception):
    """Invalid rule input or layout-fingerprint mismatch."""


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise RuleError("rectangle needs xmin < xmax and ymin < ymax")

    def as_list(self):
        return [self.xmin, self.ymin, self.xmax, self.ymax]


@dataclass(frozen=True)
class RuleStats:
    """Per-rule figures frozen on the active set at acceptance time."""

    hits_by_class: dict
    total_hits: int
    precision: float
    coverage_in_class: float     # dominant hits / active cases of that class
    coverage_total: float        # total hits / all active cases
    active_total: int
    active_in_class: int
    tie_broken: bool = False

    def to_json(self):
        return {
            "hitsByClass": dict(sorted(self.hits_by_class.items())),
            "totalHits": self.total_hits,
            "precision": self.precision,
            "coverageInClass": self.coverage_in_class,
            "coverageTotal": self.coverage_total,
            "activeTotal": self.active_total,
            "activeInClass": self.active_in_class,
            "tieBroken": self.tie_broken,
        }


@dataclass(frozen=True)
class DominanceRule:
    rect: Rect
    mode: str                  # "point" | "intersect"
    predicted_class: str
    order_index: int
    stats: RuleStats

    def to_json(self):
        return {
            "rect": self.rect.as_list(),
            "mode": self.mode,
            "class": self.predicted_class,
            "order": self.order_index,
            "stats": self.stats.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "DominanceRule":
        st = obj["stats"]
        return cls(rect=Rect(*obj["rect"]), mode=obj["mode"],
                   predicted_class=obj["class"], order_index=obj["order"],
                   stats=RuleStats(
                       hits_by_class=dict(st["hitsByClass"]),
                       total_hits=st["totalHits"], precision=st["precision"],
                       coverage_in_class=st["coverageInClass"],
                       coverage_total=st["coverageTotal"],
                       active_total=st["activeTotal"],
                       active_in_class=st["activeInClass"],
                       tie_broken=st.get("tieBroken", False)))


@dataclass(frozen=True)
class MiningParams:
    rect_w: float
    rect_h: float
    stride: float
    min_coverage: float = 0.10
    min_precision: float = 0.90
    mode: str = "point"
    target: tuple = ("multiclass",)   # | ("one-vs-rest", cls) | ("fixed-class", cls)
    max_rules: int | None = None

    def __post_init__(self):
        if self.stride <= 0 or self.rect_w <= 0 or self.rect_h <= 0:
            raise RuleError("rectangle size and stride must be positive")
        for t in (self.min_coverage, self.min_precision):
            if not (0.0 < t <= 1.0):
                raise RuleError("thresholds must lie in (0, 1]")
        if self.mode not in ("point", "intersect"):
            raise RuleError(f"unknown mode {self.mode!r}")

    def to_json(self):
        return {"rectW": self.rect_w, "rectH": self.rect_h, "stride": self.stride,
                "minCoverage": self.min_coverage, "minPrecision": self.min_precision,
                "mode": self.mode, "target": list(self.target),
                "maxRules": self.max_rules}


@dataclass(frozen=True)
class EvalRecord:
    hits_by_class: dict
    total_hits: int
    dominant_class: str | None
    precision: float
    coverage_in_class: float
    coverage_total: float
    active_total: int
    active_in_class: int
    tie_broken: bool = False

    def to_json(self):
        return {
            "hitsByClass": dict(sorted(self.hits_by_class.items())),
            "totalHits": self.total_hits,
            "dominantClass": self.dominant_class,
            "precision": self.precision,
            "coverageInClass": self.coverage_in_class,
            "coverageTotal": self.coverage_total,
            "activeTotal": self.active_total,
            "activeInClass": self.active_in_class,
            "tieBroken": self.tie_broken,
        }


# ---------------------------------------------------------------------------
# Graph containers
# ---------------------------------------------------------------------------

@dataclass
class EmbeddedSet:
    """Node arrays plus labels; the array form of a list of EPCGraphs."""

    nodes: np.ndarray           # (N, m, 2)
    labels: np.ndarray          # (N,) unicode

    @classmethod
    def from_graphs(cls, graphs) -> "EmbeddedSet":
        if isinstance(graphs, EmbeddedSet):
            return graphs
        nodes = np.array([[list(p) for p in g.nodes] for g in graphs], dtype=float)
        labels = np.array([g.class_label for g in graphs])
        if nodes.ndim != 3:
            raise RuleError("graphs must all have the same node count")
        return cls(nodes=nodes, labels=labels)

    @classmethod
    def from_dataset(cls, ds: Dataset, layout: LayoutConfig, ellipse: EllipseSpec) -> "EmbeddedSet":
        return cls(nodes=embed_batch(ds.features, layout, ellipse),
                   labels=np.array(ds.labels))

    @property
    def count(self) -> int:
        return self.nodes.shape[0]

    def subset(self, mask) -> "EmbeddedSet":
        return EmbeddedSet(nodes=self.nodes[mask], labels=self.labels[mask])


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

def _nodes_in_rect(nodes, rect: Rect):
    """(..., 2) -> boolean of closed-rectangle membership."""
    x, y = nodes[..., 0], nodes[..., 1]
    return (x >= rect.xmin) & (x <= rect.xmax) & (y >= rect.ymin) & (y <= rect.ymax)


def _segments_hit_rect(p0, p1, rect: Rect):
    """Liang-Barsky parametric clip, boundary-inclusive.

    p0, p1: (..., 2) segment endpoints; returns boolean (...,).
    """
    x0, y0 = p0[..., 0], p0[..., 1]
    dx = p1[..., 0] - x0
    dy = p1[..., 1] - y0
    t0 = np.zeros_like(x0)
    t1 = np.ones_like(x0)
    reject = np.zeros(x0.shape, dtype=bool)
    for p, q in (
        (-dx, x0 - rect.xmin),
        (dx, rect.xmax - x0),
        (-dy, y0 - rect.ymin),
        (dy, rect.ymax - y0),
    ):
        par = p == 0
        reject |= par & (q < 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(par, 0.0, q / np.where(par, 1.0, p))
        t0 = np.where(~par & (p < 0), np.maximum(t0, r), t0)
        t1 = np.where(~par & (p > 0), np.minimum(t1, r), t1)
    return ~reject & (t0 <= t1)


def graphs_match(emb: EmbeddedSet, rect: Rect, mode: str):
    """Boolean match vector for every graph in the set."""
    if mode == "point":
        return _nodes_in_rect(emb.nodes, rect).any(axis=1)
    if emb.nodes.shape[1] == 1:
        return _nodes_in_rect(emb.nodes, rect).any(axis=1)
    return _segments_hit_rect(emb.nodes[:, :-1, :], emb.nodes[:, 1:, :], rect).any(axis=1)


def graph_matches(graph: EPCGraph, rect: Rect, mode: str) -> bool:
    """Does one graph fire the rule? point: node inside; intersect: edge crosses."""
    nodes = np.array([list(p) for p in graph.nodes])[None, :, :]
    return bool(graphs_match(EmbeddedSet(nodes=nodes, labels=np.array([""])), rect, mode)[0])


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate_rect(rect: Rect, graphs, mode: str) -> EvalRecord:
    """Hit counts, dominant class and coverage figures on the active set."""
    emb = EmbeddedSet.from_graphs(graphs)
    matched = graphs_match(emb, rect, mode)
    return _record_from_mask(emb, matched)


def _record_from_mask(emb: EmbeddedSet, matched) -> EvalRecord:
    classes = sorted(set(emb.labels.tolist()))
    hits = {c: int(np.sum(matched & (emb.labels == c))) for c in classes}
    hits = {c: v for c, v in hits.items() if v > 0}
    total = int(matched.sum())
    active_total = emb.count
    if total == 0:
        return EvalRecord(hits_by_class={}, total_hits=0, dominant_class=None,
                          precision=0.0, coverage_in_class=0.0, coverage_total=0.0,
                          active_total=active_total, active_in_class=0)
    best = max(hits.values())
    dominant = min(c for c, v in hits.items() if v == best)
    tie = sum(1 for v in hits.values() if v == best) > 1
    active_in_class = int(np.sum(emb.labels == dominant))
    return EvalRecord(
        hits_by_class=hits, total_hits=total, dominant_class=dominant,
        precision=hits[dominant] / total,
        coverage_in_class=hits[dominant] / active_in_class if active_in_class else 0.0,
        coverage_total=total / active_total if active_total else 0.0,
        active_total=active_total, active_in_class=active_in_class, tie_broken=tie)


# ---------------------------------------------------------------------------
# Mining
# ---------------------------------------------------------------------------

def grid_positions(nodes: np.ndarray, params: MiningParams):
    """Candidate rectangle origins: stride multiples anchored at the lower-left
    corner of the node bounding box, scanned left-to-right then bottom-to-top."""
    xmin, ymin = nodes[..., 0].min(), nodes[..., 1].min()
    xmax, ymax = nodes[..., 0].max(), nodes[..., 1].max()
    nx = int(math.floor((xmax - xmin) / params.stride + 1e-9)) + 1
    ny = int(math.floor((ymax - ymin) / params.stride + 1e-9)) + 1
    xs = xmin + params.stride * np.arange(nx)
    ys = ymin + params.stride * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys)          # y outer, x inner
    return np.column_stack([gx.ravel(), gy.ravel()])


def _apply_target(labels: np.ndarray, target) -> np.ndarray:
    if target[0] == "one-vs-rest":
        cls = target[1]
        return np.where(labels == cls, cls, f"not-{cls}")
    return labels


def _match_grid(emb: EmbeddedSet, origins, params: MiningParams, chunk_elems=30_000_000):
    """Yield (start, matched) blocks: matched is (chunk, N) booleans."""
    N = emb.count
    step = max(1, chunk_elems // max(1, N * max(1, emb.nodes.shape[1])))
    if params.mode == "point" or emb.nodes.shape[1] == 1:
        pts = emb.nodes[None, :, :, :]    # (1, N, m, 2)
        for s in range(0, len(origins), step):
            o = origins[s:s + step]
            x0 = o[:, 0][:, None, None]
            y0 = o[:, 1][:, None, None]
            x, y = pts[..., 0], pts[..., 1]
            m = ((x >= x0) & (x <= x0 + params.rect_w) &
                 (y >= y0) & (y <= y0 + params.rect_h)).any(axis=2)
            yield s, m
    else:
        p0 = emb.nodes[None, :, :-1, :]
        p1 = emb.nodes[None, :, 1:, :]
        for s in range(0, len(origins), step):
            o = origins[s:s + step]
            x0o = o[:, 0][:, None, None]
            y0o = o[:, 1][:, None, None]
            x0, y0 = p0[..., 0], p0[..., 1]
            dx = p1[..., 0] - x0
            dy = p1[..., 1] - y0
            t0 = np.zeros(np.broadcast_shapes(x0.shape, x0o.shape))
            t1 = np.ones_like(t0)
            reject = np.zeros(t0.shape, dtype=bool)
            for p, q in (
                (np.broadcast_to(-dx, t0.shape), x0 - x0o),
                (np.broadcast_to(dx, t0.shape), x0o + params.rect_w - x0),
                (np.broadcast_to(-dy, t0.shape), y0 - y0o),
                (np.broadcast_to(dy, t0.shape), y0o + params.rect_h - y0),
            ):
                par = p == 0
                reject |= par & (q < 0)
                with np.errstate(divide="ignore", invalid="ignore"):
                    r = np.where(par, 0.0, q / np.where(par, 1.0, p))
                t0 = np.where(~par & (p < 0), np.maximum(t0, r), t0)
                t1 = np.where(~par & (p > 0), np.minimum(t1, r), t1)
            yield s, (~reject & (t0 <= t1)).any(axis=2)


def _round_best(emb: EmbeddedSet, origins, params: MiningParams):
    """Best qualifying rectangle this round, or None.

    Rank: coverage-in-class desc, then precision desc, then scan order asc.
    Dominant-class ties break by class-name order (recorded on the rule).
    """
    labels = _apply_target(emb.labels, params.target)
    classes = sorted(set(labels.tolist()))
    class_masks = {c: labels == c for c in classes}
    class_totals = np.array([class_masks[c].sum() for c in classes], dtype=float)
    best = None   # (coverage, precision, -scan_index) maximized

    for start, matched in _match_grid(emb, origins, params):
        counts = np.stack([matched[:, class_masks[c]].sum(axis=1) for c in classes], axis=1)
        totals = counts.sum(axis=1)
        dom = np.argmax(counts, axis=1)          # first max = lexicographically smallest
        dom_counts = counts[np.arange(len(dom)), dom]
        with np.errstate(divide="ignore", invalid="ignore"):
            precision = np.where(totals > 0, dom_counts / np.maximum(totals, 1), 0.0)
            coverage = np.where(class_totals[dom] > 0,
                                dom_counts / np.maximum(class_totals[dom], 1.0), 0.0)
        ok = (totals > 0) & (precision >= params.min_precision - 1e-12) \
            & (coverage >= params.min_coverage - 1e-12)
        if params.target[0] == "fixed-class":
            want = classes.index(params.target[1]) if params.target[1] in classes else -1
            ok &= dom == want
        idxs = np.nonzero(ok)[0]
        if len(idxs) == 0:
            continue
        cov = coverage[idxs]
        idxs = idxs[cov == cov.max()]
        prec = precision[idxs]
        idxs = idxs[prec == prec.max()]
        i = int(idxs.min())
        key = (coverage[i], precision[i], -(start + i))
        if best is None or key > best[0]:
            ties = int(np.sum(counts[i] == dom_counts[i]))
            best = (key, start + i, classes[dom[i]], ties > 1)
    if best is None:
        return None
    _, scan_index, dom_class, tie = best
    x0, y0 = origins[scan_index]
    rect = Rect(float(x0), float(y0), float(x0 + params.rect_w), float(y0 + params.rect_h))
    return rect, dom_class, tie


def mine(graphs, params: MiningParams) -> list[DominanceRule]:
    """Deterministic sequential covering over a fixed scan grid."""
    emb = EmbeddedSet.from_graphs(graphs)
    if emb.count == 0:
        return []
    origins = grid_positions(emb.nodes, params)
    active = np.ones(emb.count, dtype=bool)
    rules: list[DominanceRule] = []
    while params.max_rules is None or len(rules) < params.max_rules:
        sub = emb.subset(active)
        if sub.count == 0:
            break
        found = _round_best(sub, origins, params)
        if found is None:
            break
        rect, dom_class, tie = found
        matched = graphs_match(sub, rect, params.mode)
        labels = _apply_target(sub.labels, params.target)
        rec = _record_from_mask(EmbeddedSet(nodes=sub.nodes, labels=labels), matched)
        stats = RuleStats(hits_by_class=rec.hits_by_class, total_hits=rec.total_hits,
                          precision=rec.precision, coverage_in_class=rec.coverage_in_class,
                          coverage_total=rec.coverage_total, active_total=rec.active_total,
                          active_in_class=rec.active_in_class, tie_broken=tie)
        rules.append(DominanceRule(rect=rect, mode=params.mode,
                                   predicted_class=dom_class,
                                   order_index=len(rules), stats=stats))
        idx = np.nonzero(active)[0]
        active[idx[matched]] = False
    return rules


# ---------------------------------------------------------------------------
# Classification and reports
# ---------------------------------------------------------------------------

def weighted_precision(pairs) -> float:
    """Eq-style rule-set precision: sum(p_i * c_i) / sum(c_i) over (p, c) pairs."""
    num = sum(p * c for p, c in pairs)
    den = sum(c for _, c in pairs)
    return num / den if den else 0.0


def classify(graphs, rules: list[DominanceRule], target=("multiclass",)) -> dict:
    """First matching rule (acceptance order) assigns its class.

    Returns assignments plus a report with per-rule sequential stats,
    confusion counts and the weighted precision of the rule set.
    """
    emb = EmbeddedSet.from_graphs(graphs)
    labels = _apply_target(emb.labels, target)
    assigned = np.full(emb.count, -1, dtype=int)
    active = np.ones(emb.count, dtype=bool)
    per_rule = []
    for k, rule in enumerate(rules):
        idx = np.nonzero(active)[0]
        sub = emb.subset(active)
        matched = graphs_match(sub, rule.rect, rule.mode)
        hit_idx = idx[matched]
        assigned[hit_idx] = k
        c = len(hit_idx)
        correct = int(np.sum(labels[hit_idx] == rule.predicted_class))
        in_class_active = int(np.sum(labels[idx] == rule.predicted_class))
        per_rule.append({
            "rule": f"r_{k + 1}",
            "class": rule.predicted_class,
            "covered": c,
            "correct": correct,
            "precision": correct / c if c else 0.0,
            "coverage_in_class": correct / in_class_active if in_class_active else 0.0,
        })
        active[hit_idx] = False
    covered = int((assigned >= 0).sum())
    wp = weighted_precision([(r["precision"], r["covered"]) for r in per_rule if r["covered"]])
    confusion: dict = {}
    for k, rule in enumerate(rules):
        for lab in np.unique(labels[assigned == k]):
            confusion.setdefault(rule.predicted_class, {})
            confusion[rule.predicted_class][str(lab)] = \
                confusion[rule.predicted_class].get(str(lab), 0) + \
                int(np.sum(labels[assigned == k] == lab))
    return {
        "assigned": assigned,
        "labels": [None if a < 0 else rules[a].predicted_class for a in assigned],
        "per_rule": per_rule,
        "covered": covered,
        "uncovered": emb.count - covered,
        "case_count": emb.count,
        "recall": covered / emb.count if emb.count else 0.0,
        "weighted_precision": wp,
        "confusion": confusion,
    }


def layout_fingerprint(layout: LayoutConfig, ellipse: EllipseSpec) -> dict:
    return layout.fingerprint(ellipse)


def rules_document(rules, params: MiningParams, layout: LayoutConfig,
                   ellipse: EllipseSpec) -> dict:
    return {
        "version": 1,
        "fingerprint": layout_fingerprint(layout, ellipse),
        "params": params.to_json(),
        "rules": [r.to_json() for r in rules],
    }


def rules_from_document(doc: dict) -> list[DominanceRule]:
    if doc.get("version") != 1:
        raise RuleError(f"unsupported rules document version {doc.get('version')!r}")
    return [DominanceRule.from_json(r) for r in doc["rules"]]


def check_fingerprint(doc: dict, layout: LayoutConfig, ellipse: EllipseSpec):
    fp = layout_fingerprint(layout, ellipse)
    if doc.get("fingerprint") != fp:
        raise RuleError("layout fingerprint mismatch between rules and dataset")


def report_document(result: dict) -> dict:
    """The table-shaped report: one row per rule plus totals."""
    rows = [{
        "rule": r["rule"],
        "class": r["class"],
        "coverageInClassPct": round(100.0 * r["coverage_in_class"], 2),
        "precisionPct": round(100.0 * r["precision"], 2),
        "covered": r["covered"],
    } for r in result["per_rule"]]
    return {
        "version": 1,
        "rules": rows,
        "totals": {
            "caseCount": result["case_count"],
            "covered": result["covered"],
            "uncovered": result["uncovered"],
            "recallPct": round(100.0 * result["recall"], 2),
            "weightedPrecisionPct": round(100.0 * result["weighted_precision"], 2),
        },
    }


def dumps_canonical(obj) -> str:
    """Stable JSON: sorted keys, minimal separators, exact float reprs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


# ---------------------------------------------------------------------------
# Split evaluation
# ---------------------------------------------------------------------------

def split_indices(count: int, fraction: float | None = None, seed: int | None = None,
                  train: list | None = None, validation: list | None = None):
    """Either an explicit index partition or a seeded random split."""
    if train is not None or validation is not None:
        tr = np.array(sorted(train), dtype=int)
        va = np.array(sorted(validation), dtype=int)
        both = np.concatenate([tr, va])
        if len(np.unique(both)) != count or both.min() < 0 or both.max() >= count:
            raise DataError("train/validation lists must partition the dataset")
        if len(tr) == 0 or len(va) == 0:
            raise DataError("both split sides must be non-empty")
        return tr, va
    if fraction is None or not (0.0 < fraction < 1.0):
        raise DataError("train fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(count)
    cut = int(round(fraction * count))
    if cut == 0 or cut == count:
        raise DataError("split produces an empty side")
    return np.sort(order[:cut]), np.sort(order[cut:])


def evaluate_split(ds: Dataset, layout: LayoutConfig, ellipse: EllipseSpec,
                   params: MiningParams, fraction: float | None = None,
                   seed: int | None = None, train: list | None = None,
                   validation: list | None = None) -> dict:
    """Mine on the training side, evaluate frozen rules on both sides.

    The dataset must already be normalized and padded; validation rows use
    the same embedding, so out-of-range values are impossible here.
    """
    tr, va = split_indices(ds.row_count, fraction, seed, train, validation)
    nodes = embed_batch(ds.features, layout, ellipse)
    labels = np.array(ds.labels)
    emb_tr = EmbeddedSet(nodes=nodes[tr], labels=labels[tr])
    emb_va = EmbeddedSet(nodes=nodes[va], labels=labels[va])
    rules = mine(emb_tr, params)
    res_tr = classify(emb_tr, rules, target=params.target)
    res_va = classify(emb_va, rules, target=params.target)
    return {
        "rules": rules,
        "train": report_document(res_tr),
        "validation": report_document(res_va),
        "trainIndices": tr.tolist(),
        "validationIndices": va.tolist(),
    }


# ---------------------------------------------------------------------------
# Weight optimization
# ---------------------------------------------------------------------------

def _objective_rule_quality(emb: EmbeddedSet, params: MiningParams) -> float:
    rules = mine(emb, params)
    if not rules:
        return 0.0
    res = classify(emb, rules, target=params.target)
    return res["weighted_precision"] * res["recall"]


def _objective_compactness(emb: EmbeddedSet, rng, cap: int = 1500) -> float:
    """Mean inter-class node distance over mean intra-class node distance."""
    pts = emb.nodes.reshape(-1, 2)
    labs = np.repeat(emb.labels, emb.nodes.shape[1])
    if len(pts) > cap:
        sel = rng.choice(len(pts), size=cap, replace=False)
        pts, labs = pts[sel], labs[sel]
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    same = labs[:, None] == labs[None, :]
    iu = np.triu_indices(len(pts), k=1)
    intra = d[iu][same[iu]]
    inter = d[iu][~same[iu]]
    if len(intra) == 0 or len(inter) == 0 or intra.mean() == 0:
        return 0.0
    return float(inter.mean() / intra.mean())


def optimize_weights(ds: Dataset, layout_kind: str, ellipse: EllipseSpec,
                     params: MiningParams, objective: str = "rule-quality",
                     delta: float = 0.25, budget: int = 60, seed: int = 0,
                     restarts: int = 2, initial=None) -> dict:
    """Hill climbing with random restarts over per-coordinate weights.

    Each step perturbs one weight by +-delta (clamped to at least delta),
    re-embeds, recomputes the objective, and keeps strict improvements.
    Deterministic given the seed; returns the best weights and the trace.
    """
    if objective not in ("rule-quality", "class-compactness"):
        raise RuleError(f"unknown objective {objective!r}")
    maker = {"sequential": LayoutConfig.sequential, "mirror": LayoutConfig.mirror,
             "dynamic": LayoutConfig.dynamic}[layout_kind]
    rng = np.random.default_rng(seed)
    n = ds.n
    clamp_logged = 0

    def score(weights):
        try:
            layout = maker(n, weights=list(weights))
            emb = EmbeddedSet.from_dataset(ds, layout, ellipse)
        except Exception:
            return -math.inf
        if objective == "rule-quality":
            return _objective_rule_quality(emb, params)
        return _objective_compactness(emb, rng)

    trace = []
    evals = 0
    best_w = np.array(initial if initial is not None else [1.0] * n, dtype=float)
    best_v = score(best_w)
    trace.append({"weights": best_w.tolist(), "objective": best_v, "accepted": True})
    evals += 1
    for restart in range(restarts + 1):
        if restart == 0:
            cur_w, cur_v = best_w.copy(), best_v
        else:
            cur_w = rng.uniform(0.5, 2.0, size=n)
            cur_v = score(cur_w)
            evals += 1
            trace.append({"weights": cur_w.tolist(), "objective": cur_v, "accepted": True})
        stop_at = min(budget, (restart + 1) * budget // (restarts + 1))
        while evals < stop_at:
            i = int(rng.integers(n))
            sign = 1.0 if rng.random() < 0.5 else -1.0
            w = cur_w.copy()
            w[i] += sign * delta
            if w[i] <= 0:
                w[i] = delta
                clamp_logged += 1
            v = score(w)
            evals += 1
            accepted = v > cur_v
            trace.append({"weights": w.tolist(), "objective": v, "accepted": accepted})
            if accepted:
                cur_w, cur_v = w, v
        if cur_v > best_v:
            best_w, best_v = cur_w.copy(), cur_v
    return {"weights": best_w.tolist(), "objective": best_v,
            "trace": trace, "evaluations": evals, "clamped_steps": clamp_logged}

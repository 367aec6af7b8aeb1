"""HTTP facade over datasets, projection, rectangle evaluation and mining.

Sessions are in-memory; one lock per session serializes mutations while
reads work on consistent snapshots.  All rule math happens here so that
every figure a client displays is a verbatim server response.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import Body, FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .data import DataError, Dataset, PaddingPolicy, load_csv, normalize, pad
from .geometry import DomainError, EllipseSpec, GeometryError, LayoutConfig, LayoutError
from .rules import (DominanceRule, EmbeddedSet, MiningParams, Rect, RuleError,
                    RuleStats, classify, dumps_canonical, evaluate_rect,
                    layout_fingerprint, mine, report_document,
                    rules_from_document)
from .scene import build_scene, VISIBILITY_STATES


@dataclass
class Session:
    dataset: Dataset
    layout: LayoutConfig
    layout_kind: str
    ellipse: EllipseSpec
    emb: EmbeddedSet
    rules: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def active_mask(self) -> np.ndarray:
        """All cases minus cases matched by accepted rules, in order."""
        from .rules import graphs_match
        active = np.ones(self.emb.count, dtype=bool)
        for rule in self.rules:
            idx = np.nonzero(active)[0]
            sub = self.emb.subset(active)
            matched = graphs_match(sub, rule.rect, rule.mode)
            active[idx[matched]] = False
        return active

    def snapshot(self) -> dict:
        return {
            "version": 1,
            "fingerprint": layout_fingerprint(self.layout, self.ellipse),
            "layoutKind": self.layout_kind,
            "csv": _dataset_csv(self.dataset),
            "rules": [r.to_json() for r in self.rules],
        }


def _dataset_csv(ds: Dataset) -> str:
    from .data import to_csv
    return to_csv(ds)


def _make_layout(kind: str, n: int, weights=None) -> LayoutConfig:
    maker = {"seq": LayoutConfig.sequential, "mirror": LayoutConfig.mirror,
             "dynamic": LayoutConfig.dynamic}
    if kind not in maker:
        raise DataError(f"unknown layout {kind!r}")
    return maker[kind](n, weights=weights)


def _parse_rect(obj) -> Rect:
    try:
        return Rect(float(obj["xmin"]), float(obj["ymin"]),
                    float(obj["xmax"]), float(obj["ymax"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=f"malformed rect: {exc}")


def _parse_mode(mode) -> str:
    if mode not in ("point", "intersect"):
        raise HTTPException(status_code=400, detail=f"unknown mode {mode!r}")
    return mode


def create_app(ui_assets: str | None = None) -> FastAPI:
    app = FastAPI(title="epcvis service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, Session] = {}

    def get_session(sid: str) -> Session:
        if sid not in sessions:
            raise HTTPException(status_code=404, detail=f"unknown dataset {sid!r}")
        return sessions[sid]

    def build_session(ds_raw: Dataset, layout_kind: str, pad_kind: str, weights):
        try:
            ds = pad(normalize(ds_raw), PaddingPolicy.parse(pad_kind))
            layout = _make_layout(layout_kind, ds.n, weights)
            ellipse = EllipseSpec()
            emb = EmbeddedSet.from_dataset(ds, layout, ellipse)
        except (DataError, LayoutError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (GeometryError, DomainError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return Session(dataset=ds, layout=layout, layout_kind=layout_kind,
                       ellipse=ellipse, emb=emb)

    @app.post("/api/datasets")
    async def upload(request: Request,
                     label_column: str | None = Query(default=None, alias="label-column"),
                     pad_kind: str = Query(default="dup", alias="pad"),
                     layout_kind: str = Query(default="seq", alias="layout"),
                     weights: str | None = Query(default=None)):
        body = await request.body()
        try:
            label = int(label_column) if label_column and label_column.lstrip("-").isdigit() \
                else label_column
            ds_raw = load_csv(body, label_column=label)
            ws = [float(v) for v in weights.split(",")] if weights else None
        except (DataError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        sess = build_session(ds_raw, layout_kind, pad_kind, ws)
        sid = uuid.uuid4().hex[:12]
        sessions[sid] = sess
        return {"id": sid, "n": sess.dataset.n,
                "classes": list(sess.dataset.classes),
                "caseCount": sess.dataset.row_count}

    @app.get("/api/datasets/{sid}/scene")
    def scene(sid: str, visibility: str = "all",
              selectedCase: int | None = None):
        sess = get_session(sid)
        if visibility not in VISIBILITY_STATES:
            raise HTTPException(status_code=400,
                                detail=f"visibility must be one of {VISIBILITY_STATES}")
        with sess.lock:
            try:
                sc = build_scene(sess.emb, sess.rules, sess.layout, sess.ellipse,
                                 visibility=visibility, selected_case=selectedCase)
            except IndexError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        return Response(content=dumps_canonical(sc.to_dict()),
                        media_type="application/json")

    @app.post("/api/datasets/{sid}/evaluate")
    def evaluate(sid: str, payload: dict = Body(...)):
        sess = get_session(sid)
        rect = _parse_rect(payload.get("rect", {}))
        mode = _parse_mode(payload.get("mode", "point"))
        with sess.lock:
            record = evaluate_rect(rect, sess.emb.subset(sess.active_mask), mode)
        return record.to_json()

    @app.post("/api/datasets/{sid}/rules")
    def accept_rule(sid: str, payload: dict = Body(...)):
        sess = get_session(sid)
        rect = _parse_rect(payload.get("rect", {}))
        mode = _parse_mode(payload.get("mode", "point"))
        with sess.lock:
            active = sess.active_mask
            record = evaluate_rect(rect, sess.emb.subset(active), mode)
            if record.total_hits == 0:
                raise HTTPException(status_code=422,
                                    detail="rectangle covers no active case")
            stats = RuleStats(hits_by_class=record.hits_by_class,
                              total_hits=record.total_hits,
                              precision=record.precision,
                              coverage_in_class=record.coverage_in_class,
                              coverage_total=record.coverage_total,
                              active_total=record.active_total,
                              active_in_class=record.active_in_class,
                              tie_broken=record.tie_broken)
            rule = DominanceRule(rect=rect, mode=mode,
                                 predicted_class=record.dominant_class,
                                 order_index=len(sess.rules), stats=stats)
            sess.rules.append(rule)
            new_active = int(sess.active_mask.sum())
        return {"rule": rule.to_json(), "activeCount": new_active}

    @app.delete("/api/datasets/{sid}/rules/{rule_id}")
    def delete_rule(sid: str, rule_id: int):
        sess = get_session(sid)
        with sess.lock:
            if not (0 <= rule_id < len(sess.rules)):
                raise HTTPException(status_code=404, detail=f"no rule {rule_id}")
            remaining = [r for k, r in enumerate(sess.rules) if k != rule_id]
            # re-base: later rules keep their rectangles but stats re-freeze
            # against the enlarged active set, order preserved
            sess.rules = []
            rebased = []
            for r in remaining:
                active = sess.active_mask
                record = evaluate_rect(r.rect, sess.emb.subset(active), r.mode)
                stats = RuleStats(hits_by_class=record.hits_by_class,
                                  total_hits=record.total_hits,
                                  precision=record.precision,
                                  coverage_in_class=record.coverage_in_class,
                                  coverage_total=record.coverage_total,
                                  active_total=record.active_total,
                                  active_in_class=record.active_in_class,
                                  tie_broken=record.tie_broken)
                nr = DominanceRule(rect=r.rect, mode=r.mode,
                                   predicted_class=record.dominant_class
                                   if record.dominant_class else r.predicted_class,
                                   order_index=len(rebased), stats=stats)
                rebased.append(nr)
                sess.rules.append(nr)
            sess.rules = rebased
            active_count = int(sess.active_mask.sum())
        return {"rules": [r.to_json() for r in rebased], "activeCount": active_count}

    @app.post("/api/datasets/{sid}/mine")
    def mine_rules(sid: str, payload: dict = Body(default={})):
        sess = get_session(sid)
        try:
            target = tuple(payload.get("target", ["multiclass"]))
            params = MiningParams(
                rect_w=float(payload.get("rectW", 0.15)),
                rect_h=float(payload.get("rectH", 0.15)),
                stride=float(payload.get("stride", 0.05)),
                min_coverage=float(payload.get("minCoverage", 0.10)),
                min_precision=float(payload.get("minPrecision", 0.90)),
                mode=_parse_mode(payload.get("mode", "point")),
                target=target,
                max_rules=payload.get("maxRules"))
        except (RuleError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"bad mining params: {exc}")
        with sess.lock:
            active = sess.active_mask
            mined = mine(sess.emb.subset(active), params)
            appended = []
            for r in mined:
                nr = DominanceRule(rect=r.rect, mode=r.mode,
                                   predicted_class=r.predicted_class,
                                   order_index=len(sess.rules), stats=r.stats)
                sess.rules.append(nr)
                appended.append(nr)
            active_count = int(sess.active_mask.sum())
        return {"rules": [r.to_json() for r in appended], "activeCount": active_count}

    @app.get("/api/datasets/{sid}/report")
    def report(sid: str):
        sess = get_session(sid)
        with sess.lock:
            res = classify(sess.emb, sess.rules)
            doc = report_document(res)
        return Response(content=dumps_canonical(doc), media_type="application/json")

    @app.put("/api/datasets/{sid}/weights")
    def set_weights(sid: str, payload: dict = Body(...)):
        sess = get_session(sid)
        try:
            weights = [float(v) for v in payload["weights"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed weights: {exc}")
        with sess.lock:
            try:
                layout = _make_layout(sess.layout_kind, sess.dataset.n, weights)
                emb = EmbeddedSet.from_dataset(sess.dataset, layout, sess.ellipse)
            except (DataError, LayoutError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            except (GeometryError, DomainError) as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            invalidated = len(sess.rules)
            sess.layout = layout
            sess.emb = emb
            sess.rules = []
        return {"warning": f"accepted rules invalidated by re-embedding "
                           f"({invalidated} removed)",
                "invalidatedRules": invalidated,
                "fingerprint": layout_fingerprint(layout, sess.ellipse)}

    @app.post("/api/datasets/{sid}/export")
    def export(sid: str):
        sess = get_session(sid)
        with sess.lock:
            snap = sess.snapshot()
        return Response(content=dumps_canonical(snap), media_type="application/json")

    @app.post("/api/import")
    async def import_snapshot(request: Request):
        try:
            snap = json.loads(await request.body())
            ds_raw = load_csv(snap["csv"])
            kind = snap.get("layoutKind", "seq")
            ws = snap.get("fingerprint", {}).get("fractions")
        except (DataError, KeyError, json.JSONDecodeError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed snapshot: {exc}")
        sess = build_session(ds_raw, kind, "dup", ws)
        fp = layout_fingerprint(sess.layout, sess.ellipse)
        if snap.get("fingerprint") != fp:
            raise HTTPException(status_code=409,
                                detail="layout fingerprint conflict with snapshot")
        try:
            sess.rules = rules_from_document({"version": 1, "rules": snap["rules"]})
        except (RuleError, KeyError) as exc:
            raise HTTPException(status_code=400, detail=f"malformed rules: {exc}")
        sid = uuid.uuid4().hex[:12]
        sessions[sid] = sess
        return {"id": sid, "n": sess.dataset.n,
                "classes": list(sess.dataset.classes),
                "caseCount": sess.dataset.row_count,
                "ruleCount": len(sess.rules)}

    if ui_assets:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_assets, html=True), name="ui")

    return app

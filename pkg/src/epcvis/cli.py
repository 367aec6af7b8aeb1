"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 geometry error,
4 reproduction targets missed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .data import DataError, PaddingPolicy, SyntheticSpec, generate_synthetic, \
    load_csv, normalize, pad, to_csv
from .geometry import DomainError, EllipseSpec, GeometryError, LayoutConfig, LayoutError
from .rules import (EmbeddedSet, MiningParams, RuleError, check_fingerprint, classify,
                    dumps_canonical, mine, report_document, rules_document,
                    rules_from_document)
from .scene import build_scene, to_json, to_svg


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="epc", description="Elliptic paired coordinates workbench")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("project", description="Embed a CSV and export SVG or scene JSON")
    pr.add_argument("csv")
    pr.add_argument("--layout", choices=("seq", "mirror", "dynamic"), default="seq")
    pr.add_argument("--weights", default=None)
    pr.add_argument("--pad", default="dup")
    pr.add_argument("--ellipse", default=None, help="cx,cy,W,H (default 0,0,2,2)")
    pr.add_argument("--out", required=True)

    mn = sub.add_parser("mine", description="Automatic dominance-rectangle mining")
    mn.add_argument("csv")
    mn.add_argument("--mode", choices=("point", "intersect"), required=True)
    mn.add_argument("--rect-w", type=float, required=True)
    mn.add_argument("--rect-h", type=float, required=True)
    mn.add_argument("--stride", type=float, required=True)
    mn.add_argument("--min-coverage", type=float, default=0.10)
    mn.add_argument("--min-precision", type=float, default=0.90)
    mn.add_argument("--one-vs-rest", default=None)
    mn.add_argument("--max-rules", type=int, default=None)
    mn.add_argument("--out", required=True)

    cl = sub.add_parser("classify", description="Apply mined rules to a CSV")
    cl.add_argument("csv")
    cl.add_argument("--rules", required=True)
    cl.add_argument("--out", default=None)

    sy = sub.add_parser("synth", description="Write a built-in synthetic family")
    sy.add_argument("family", choices=("A", "B", "C", "S4"))
    sy.add_argument("--out", required=True)

    rp = sub.add_parser("reproduce", description="Run a benchmark reproduction recipe")
    rp.add_argument("dataset", choices=("iris", "wbc", "glass", "car",
                                        "ionosphere", "abalone", "skin"))
    rp.add_argument("--data-dir", required=True)
    rp.add_argument("--out", default=None)

    sv = sub.add_parser("serve", description="Serve the HTTP API and UI")
    sv.add_argument("--port", type=int, default=8080)
    sv.add_argument("--ui-assets", default=None)
    return p


def _parse_ellipse(text) -> EllipseSpec:
    if not text:
        return EllipseSpec()
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise _UsageError("--ellipse expects cx,cy,W,H")
    return EllipseSpec(cx=parts[0], cy=parts[1], width=parts[2], height=parts[3])


def _parse_weights(text, n):
    if not text:
        return None
    ws = [float(v) for v in text.split(",")]
    if len(ws) != n:
        raise DataError(f"expected {n} weights, got {len(ws)}")
    return ws


def make_layout(kind: str, n: int, weights=None) -> LayoutConfig:
    maker = {"seq": LayoutConfig.sequential, "mirror": LayoutConfig.mirror,
             "dynamic": LayoutConfig.dynamic}[kind]
    return maker(n, weights=weights)


def _prepare(csv_path, pad_text, layout_kind, weights_text, ellipse_text):
    ds = load_csv(csv_path)
    ds = normalize(ds)
    ds = pad(ds, PaddingPolicy.parse(pad_text))
    weights = _parse_weights(weights_text, ds.n)
    layout = make_layout(layout_kind, ds.n, weights)
    ellipse = _parse_ellipse(ellipse_text)
    return ds, layout, ellipse


def _cmd_project(args) -> int:
    ds, layout, ellipse = _prepare(args.csv, args.pad, args.layout,
                                   args.weights, args.ellipse)
    emb = EmbeddedSet.from_dataset(ds, layout, ellipse)
    scene = build_scene(emb, [], layout, ellipse)
    if args.out.endswith(".json"):
        payload = to_json(scene)
    elif args.out.endswith(".svg"):
        payload = to_svg(scene)
    else:
        raise _UsageError("--out must end in .svg or .json")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(payload)
    print(f"wrote {args.out}: {len(scene.graphs)} graphs")
    return 0


def _cmd_mine(args) -> int:
    ds, layout, ellipse = _prepare(args.csv, "dup", "seq", None, None)
    emb = EmbeddedSet.from_dataset(ds, layout, ellipse)
    target = ("one-vs-rest", args.one_vs_rest) if args.one_vs_rest else ("multiclass",)
    params = MiningParams(rect_w=args.rect_w, rect_h=args.rect_h, stride=args.stride,
                          min_coverage=args.min_coverage,
                          min_precision=args.min_precision,
                          mode=args.mode, target=target, max_rules=args.max_rules)
    rules = mine(emb, params)
    doc = rules_document(rules, params, layout, ellipse)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(doc))
    print(f"wrote {args.out}: {len(rules)} rules")
    return 0


def _cmd_classify(args) -> int:
    with open(args.rules, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    ds, layout, ellipse = _prepare(args.csv, "dup", "seq", None, None)
    check_fingerprint(doc, layout, ellipse)
    rules = rules_from_document(doc)
    target = tuple(doc["params"]["target"])
    emb = EmbeddedSet.from_dataset(ds, layout, ellipse)
    res = classify(emb, rules, target=target)
    report = report_document(res)
    payload = dumps_canonical(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        print(payload)
    t = report["totals"]
    print(f"covered {t['covered']}/{t['caseCount']} "
          f"recall {t['recallPct']}% weighted precision {t['weightedPrecisionPct']}%",
          file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    ds = generate_synthetic(SyntheticSpec(args.family))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(to_csv(ds))
    print(f"wrote {args.out}: {ds.row_count} points, n={ds.n}")
    return 0


def _cmd_reproduce(args) -> int:
    from .experiments import RECIPES, run_recipe
    recipe = RECIPES[args.dataset]
    out = run_recipe(recipe, args.data_dir)
    ref, ach, tgt = out["reference"], out["achieved"], out["targets"]
    print(f"{out['name']}: {out['description']}")
    print(f"  rules:              published {ref.get('rules')}  achieved {ach['rules']} "
          f"(target <= {tgt['maxRules']})")
    print(f"  recall %:           published {ref.get('recall')}  achieved {ach['recall']} "
          f"(target >= {tgt['minRecallPct']})")
    print(f"  weighted precision: published {ref.get('precision')}  achieved {ach['precision']} "
          f"(target >= {tgt['minWeightedPrecisionPct']})")
    print(f"  result: {'PASS' if out['passed'] else 'FAIL'}")
    if args.out:
        doc = {"name": out["name"], "reference": ref, "achieved": ach,
               "targets": tgt, "passed": out["passed"], "report": out["report"]}
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(doc))
    return 0 if out["passed"] else 4


def _cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app
    app = create_app(ui_assets=args.ui_assets)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="info")
    return 0


def run(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        handler = {
            "project": _cmd_project,
            "mine": _cmd_mine,
            "classify": _cmd_classify,
            "synth": _cmd_synth,
            "reproduce": _cmd_reproduce,
            "serve": _cmd_serve,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, RuleError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, DomainError, LayoutError) as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Benchmark reproduction recipes.

Each recipe names the expected local data file, the preprocessing it
applies, the mining procedure, and target metrics with the published
reference values printed alongside.  Exact rectangles are not published,
so targets are threshold ranges rather than equalities.  Nothing is
downloaded; point --data-dir at local copies of the UCI files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset, DataError, PaddingPolicy, load_csv, normalize, pad
from .geometry import EllipseSpec, LayoutConfig
from .rules import EmbeddedSet, MiningParams, classify, mine, report_document


@dataclass(frozen=True)
class ExperimentRecipe:
    name: str
    filename: str
    description: str
    pad_policy: PaddingPolicy
    layout: str = "sequential"
    mode: str = "intersect"
    sizes: tuple = ((0.1, 0.1), (0.1, 0.15), (0.1, 0.2), (0.15, 0.1), (0.15, 0.15),
                    (0.15, 0.2), (0.2, 0.1), (0.2, 0.15), (0.2, 0.2))
    stride: float = 0.04
    max_rules: int = 6
    target: tuple = ("multiclass",)
    min_recall: float = 0.90            # acceptance threshold (fraction)
    min_weighted_precision: float = 0.95
    reference: dict = field(default_factory=dict)   # published row for display
    loader: str = "generic"


RECIPES = {
    "iris": ExperimentRecipe(
        name="iris", filename="iris.csv",
        description="150 cases, 4-D, 3 classes",
        pad_policy=PaddingPolicy("none"),
        mode="intersect", stride=0.04, max_rules=6,
        min_recall=0.90, min_weighted_precision=0.95,
        reference={"rules": 3, "recall": 100.0, "precision": 98.66},
    ),
    "wbc": ExperimentRecipe(
        name="wbc", filename="breast-cancer-wisconsin.data",
        description="683 complete cases, 9-D doubled to 10-D, 2 classes",
        pad_policy=PaddingPolicy("duplicate-last"),
        mode="intersect", stride=0.05, max_rules=8,
        min_recall=0.90, min_weighted_precision=0.93,
        reference={"rules": 5, "recall": 96.33, "precision": 95.13},
        loader="wbc",
    ),
    "glass": ExperimentRecipe(
        name="glass", filename="glass.data",
        description="214 cases, 9-D doubled to 10-D, class 5 vs rest (point)",
        pad_policy=PaddingPolicy("duplicate-last"),
        mode="point", stride=0.05, max_rules=6,
        target=("one-vs-rest", "5"),
        min_recall=0.70, min_weighted_precision=0.90,
        reference={"rules": 3, "recall": 87.06, "precision": 98.29},
        loader="glass",
    ),
    "car": ExperimentRecipe(
        name="car", filename="car.data",
        description="1728 cases, 6-D ordinal-encoded, class unacc (point)",
        pad_policy=PaddingPolicy("none"),
        mode="point", stride=0.05, max_rules=10,
        target=("one-vs-rest", "unacc"),
        min_recall=0.75, min_weighted_precision=0.94,
        reference={"rules": 8, "recall": 91.24, "precision": 100.0},
        loader="car",
    ),
    "ionosphere": ExperimentRecipe(
        name="ionosphere", filename="ionosphere.data",
        description="351 cases, 34-D, 2 classes (intersect)",
        pad_policy=PaddingPolicy("none"),
        mode="intersect", stride=0.05, max_rules=8,
        min_recall=0.60, min_weighted_precision=0.85,
        reference={"rules": 5, "recall": 78.63, "precision": 91.37},
        loader="ionosphere",
    ),
    "abalone": ExperimentRecipe(
        name="abalone", filename="abalone.data",
        description="4177 cases, 8-D, rings binarized at <=9 (point)",
        pad_policy=PaddingPolicy("none"),
        mode="point", stride=0.05, max_rules=4,
        min_recall=0.30, min_weighted_precision=0.87,
        reference={"rules": 1, "recall": 45.12, "precision": 92.83},
        loader="abalone",
    ),
    "skin": ExperimentRecipe(
        name="skin", filename="Skin_NonSkin.txt",
        description="245057 cases, 3-D padded to 4-D with 1.0 (point)",
        pad_policy=PaddingPolicy("constant", 1.0),
        mode="point", stride=0.1, max_rules=4,
        sizes=((0.2, 0.2), (0.3, 0.3)),
        min_recall=0.40, min_weighted_precision=0.89,
        reference={"rules": 4, "recall": 61.40, "precision": 94.62},
        loader="skin",
    ),
}

# ordinal encodings applied by the loaders below (documented assumptions;
# the published experiments do not state their numeric encodings)
CAR_ENCODING = {
    "buying": {"low": 0, "med": 1, "high": 2, "vhigh": 3},
    "maint": {"low": 0, "med": 1, "high": 2, "vhigh": 3},
    "doors": {"2": 2, "3": 3, "4": 4, "5more": 5},
    "persons": {"2": 2, "4": 4, "more": 6},
    "lug_boot": {"small": 0, "med": 1, "big": 2},
    "safety": {"low": 0, "med": 1, "high": 2},
}
ABALONE_SEX = {"M": 0.0, "F": 1.0, "I": 2.0}
ABALONE_RING_SPLIT = 9      # rings <= 9 -> class "1", else class "2"


def _load_recipe_dataset(recipe: ExperimentRecipe, path: str) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if recipe.loader == "wbc":
        rows = [ln.split(",") for ln in text.splitlines() if ln.strip()]
        feats, labels = [], []
        for r in rows:
            if "?" in r:
                continue            # only complete cases are used
            feats.append([float(v) for v in r[1:10]])
            labels.append("B" if r[10].strip() == "2" else "M")
        return Dataset(column_names=tuple(f"x{i + 1}" for i in range(9)),
                       features=np.array(feats), labels=tuple(labels))
    if recipe.loader == "glass":
        rows = [ln.split(",") for ln in text.splitlines() if ln.strip()]
        feats = [[float(v) for v in r[1:10]] for r in rows]
        labels = [r[10].strip() for r in rows]
        return Dataset(column_names=tuple(f"x{i + 1}" for i in range(9)),
                       features=np.array(feats), labels=tuple(labels))
    if recipe.loader == "car":
        rows = [ln.split(",") for ln in text.splitlines() if ln.strip()]
        cols = list(CAR_ENCODING)
        feats, labels = [], []
        for r in rows:
            feats.append([float(CAR_ENCODING[c][r[i].strip()]) for i, c in enumerate(cols)])
            labels.append(r[6].strip())
        return Dataset(column_names=tuple(cols), features=np.array(feats),
                       labels=tuple(labels))
    if recipe.loader == "abalone":
        rows = [ln.split(",") for ln in text.splitlines() if ln.strip()]
        feats, labels = [], []
        for r in rows:
            feats.append([ABALONE_SEX[r[0].strip()]] + [float(v) for v in r[1:8]])
            labels.append("1" if int(r[8]) <= ABALONE_RING_SPLIT else "2")
        return Dataset(column_names=("sex",) + tuple(f"x{i + 1}" for i in range(7)),
                       features=np.array(feats), labels=tuple(labels))
    if recipe.loader == "skin":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        feats = [[float(v) for v in r[:3]] for r in rows]
        labels = [r[3].strip() for r in rows]
        return Dataset(column_names=("b", "g", "r"), features=np.array(feats),
                       labels=tuple(labels))
    return load_csv(text)


def _find_file(recipe: ExperimentRecipe, data_dir: str) -> str:
    stem = recipe.filename.rsplit(".", 1)[0]
    for cand in (recipe.filename, stem + ".data", stem + ".csv", stem + ".txt"):
        path = os.path.join(data_dir, cand)
        if os.path.exists(path):
            return path
    raise DataError(f"expected data file not found: {os.path.join(data_dir, recipe.filename)}")


def run_recipe(recipe: ExperimentRecipe, data_dir: str) -> dict:
    """Run one recipe end to end; returns report, achieved metrics, pass flag."""
    path = _find_file(recipe, data_dir)
    ds = _load_recipe_dataset(recipe, path)
    ds = pad(normalize(ds), recipe.pad_policy)
    layout = {"sequential": LayoutConfig.sequential,
              "mirror": LayoutConfig.mirror}[recipe.layout](ds.n)
    ellipse = EllipseSpec()
    emb = EmbeddedSet.from_dataset(ds, layout, ellipse)

    best = None
    for w, h in recipe.sizes:
        params = MiningParams(rect_w=w, rect_h=h, stride=recipe.stride,
                              mode=recipe.mode, target=recipe.target,
                              max_rules=recipe.max_rules)
        rules = mine(emb, params)
        res = classify(emb, rules, target=recipe.target)
        meets_recall = res["recall"] >= recipe.min_recall
        key = (meets_recall, res["weighted_precision"], res["recall"])
        if best is None or key > best["key"]:
            best = {"key": key, "rules": rules, "result": res, "size": (w, h)}

    res = best["result"]
    achieved = {
        "rules": len(best["rules"]),
        "recall": round(100.0 * res["recall"], 2),
        "precision": round(100.0 * res["weighted_precision"], 2),
        "rectSize": list(best["size"]),
    }
    passed = (res["recall"] >= recipe.min_recall
              and res["weighted_precision"] >= recipe.min_weighted_precision
              and len(best["rules"]) <= recipe.max_rules)
    return {
        "name": recipe.name,
        "description": recipe.description,
        "targets": {"minRecallPct": 100 * recipe.min_recall,
                    "minWeightedPrecisionPct": 100 * recipe.min_weighted_precision,
                    "maxRules": recipe.max_rules},
        "reference": recipe.reference,
        "achieved": achieved,
        "passed": passed,
        "report": report_document(res),
        "rules": best["rules"],
    }

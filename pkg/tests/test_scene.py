import json

import numpy as np
import pytest

from epcvis.data import Dataset, SyntheticSpec, generate_synthetic, normalize
from epcvis.geometry import EllipseSpec, LayoutConfig, embed_batch
from epcvis.rules import EmbeddedSet, MiningParams, mine
from epcvis.scene import build_scene, class_colors, to_json, to_svg

UNIT = EllipseSpec()


def iris_embedded():
    from sklearn.datasets import load_iris
    iris = load_iris()
    ds = normalize(Dataset(tuple(f"x{i}" for i in range(4)),
                           iris.data.astype(float),
                           tuple(iris.target_names[t] for t in iris.target)))
    lay = LayoutConfig.sequential(4)
    return EmbeddedSet.from_dataset(ds, lay, UNIT), lay


class TestBuildScene:
    def test_legend_colors_stable(self):
        a = class_colors(["b", "a", "c", "a"])
        b = class_colors(["c", "b", "a"])
        assert a == b
        assert list(a) == ["a", "b", "c"]

    def test_two_classes_two_legend_entries(self):
        emb = EmbeddedSet(nodes=np.zeros((4, 1, 2)), labels=np.array(list("xyxy")))
        sc = build_scene(emb, [], LayoutConfig.sequential(2), UNIT)
        assert len(sc.legend) == 2

    def test_inside_rules_with_no_rules_hides_everything(self):
        emb = EmbeddedSet(nodes=np.zeros((3, 1, 2)), labels=np.array(list("xyz")))
        sc = build_scene(emb, [], LayoutConfig.sequential(2), UNIT,
                         visibility="inside-rules")
        assert all(not g["visible"] for g in sc.graphs)

    def test_outside_rules_complements_matching(self):
        emb, lay = iris_embedded()
        rules = mine(emb, MiningParams(rect_w=0.2, rect_h=0.2, stride=0.1,
                                       mode="intersect", max_rules=2))
        inside = build_scene(emb, rules, lay, UNIT, visibility="inside-rules")
        outside = build_scene(emb, rules, lay, UNIT, visibility="outside-rules")
        for gi, go in zip(inside.graphs, outside.graphs):
            assert gi["visible"] != go["visible"]

    def test_nodes_equal_geometry_output_exactly(self):
        emb, lay = iris_embedded()
        sc = build_scene(emb, [], lay, UNIT)
        for i, g in enumerate(sc.graphs):
            assert g["nodes"] == [[float(x), float(y)] for x, y in emb.nodes[i]]

    def test_rect_stats_frozen_verbatim(self):
        emb, lay = iris_embedded()
        rules = mine(emb, MiningParams(rect_w=0.2, rect_h=0.2, stride=0.1,
                                       mode="intersect", max_rules=3))
        sc = build_scene(emb, rules, lay, UNIT)
        for r, rj in zip(rules, sc.rects):
            assert rj["stats"] == r.stats.to_json()

    def test_selected_case_gets_side_ellipses(self):
        emb, lay = iris_embedded()
        sc = build_scene(emb, [], lay, UNIT, selected_case=3)
        assert len(sc.side_ellipses) == 4    # two per pair
        for se in sc.side_ellipses:
            assert se["rw"] == UNIT.rw and se["rh"] == UNIT.rh

    def test_selected_case_out_of_range(self):
        emb, lay = iris_embedded()
        with pytest.raises(IndexError):
            build_scene(emb, [], lay, UNIT, selected_case=999)


class TestJson:
    def test_canonical_round_trip_byte_identical(self):
        emb, lay = iris_embedded()
        sc = build_scene(emb, [], lay, UNIT)
        text = to_json(sc)
        again = json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"))
        assert text == again

    def test_schema_fields(self):
        emb, lay = iris_embedded()
        doc = json.loads(to_json(build_scene(emb, [], lay, UNIT)))
        assert doc["version"] == 1
        assert set(doc["ellipse"]) == {"cx", "cy", "w", "h"}
        assert {"coord", "label", "s0", "s1"} <= set(doc["sectors"][0])
        assert {"id", "class", "visible", "nodes"} <= set(doc["graphs"][0])


class TestSvg:
    def test_empty_dataset_has_ellipse_only(self):
        emb = EmbeddedSet(nodes=np.empty((0, 1, 2)), labels=np.array([], dtype=str))
        svg = to_svg(build_scene(emb, [], LayoutConfig.sequential(2), UNIT))
        assert svg.count("<polyline") == 0
        assert "<path" in svg and svg.startswith("<svg")

    def test_one_case_one_arrow(self):
        nodes = embed_batch(np.array([[0.3, 0.5, 0.5, 0.2]]),
                            LayoutConfig.mirror(4), UNIT)
        emb = EmbeddedSet(nodes=nodes, labels=np.array(["p"]))
        svg = to_svg(build_scene(emb, [], LayoutConfig.mirror(4), UNIT))
        assert svg.count("<polyline") == 1
        assert svg.count("<polygon") == 1    # single arrowhead

    def test_iris_scene_counts(self):
        emb, lay = iris_embedded()
        svg = to_svg(build_scene(emb, [], lay, UNIT))
        assert svg.count("<polyline") == 150
        colors = {ln.split('stroke="')[1].split('"')[0]
                  for ln in svg.splitlines() if "<polyline" in ln}
        assert len(colors) == 3

    def test_deterministic_byte_identical(self):
        emb, lay = iris_embedded()
        rules = mine(emb, MiningParams(rect_w=0.2, rect_h=0.2, stride=0.1,
                                       mode="intersect", max_rules=2))
        a = to_svg(build_scene(emb, rules, lay, UNIT))
        b = to_svg(build_scene(emb, rules, lay, UNIT))
        assert a == b

    def test_six_decimal_coordinates(self):
        emb, lay = iris_embedded()
        svg = to_svg(build_scene(emb, [], lay, UNIT))
        line = next(ln for ln in svg.splitlines() if "<polyline" in ln)
        coords = line.split('points="')[1].split('"')[0].split()
        for pair in coords:
            for v in pair.split(","):
                assert len(v.split(".")[1]) == 6

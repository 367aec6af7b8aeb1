import json
import os

import numpy as np
import pytest

from epcvis.cli import run
from epcvis.rules import weighted_precision


@pytest.fixture()
def iris_csv(tmp_path):
    from sklearn.datasets import load_iris
    iris = load_iris()
    path = tmp_path / "iris.csv"
    lines = ["sl,sw,pl,pw,class"]
    for row, t in zip(iris.data, iris.target):
        lines.append(",".join(str(v) for v in row) + "," + iris.target_names[t])
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestSynthProject:
    def test_set_c_projects_to_horizontal_collinear_arrows(self, tmp_path):
        csv = tmp_path / "c.csv"
        out = tmp_path / "c.json"
        assert run(["synth", "C", "--out", str(csv)]) == 0
        assert run(["project", str(csv), "--layout", "mirror",
                    "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert len(doc["graphs"]) == 9
        ys = [y for g in doc["graphs"] for _, y in g["nodes"]]
        assert max(ys) - min(ys) < 1e-6      # one horizontal line

    def test_svg_output(self, tmp_path):
        csv = tmp_path / "b.csv"
        svg = tmp_path / "b.svg"
        assert run(["synth", "B", "--out", str(csv)]) == 0
        assert run(["project", str(csv), "--out", str(svg)]) == 0
        text = svg.read_text()
        assert text.count("<polyline") == 9

    def test_all_families(self, tmp_path):
        for fam, rows, dim in (("A", 9, 8), ("B", 9, 4), ("C", 9, 4), ("S4", 7, 4)):
            path = tmp_path / f"{fam}.csv"
            assert run(["synth", fam, "--out", str(path)]) == 0
            body = path.read_text().strip().splitlines()
            assert len(body) == rows + 1
            assert len(body[1].split(",")) == dim + 1

    def test_custom_ellipse_and_weights(self, tmp_path, iris_csv):
        out = tmp_path / "w.json"
        code = run(["project", iris_csv, "--layout", "mirror", "--weights", "2,3,2,3",
                    "--ellipse", "0,0,4,2", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["ellipse"] == {"cx": 0.0, "cy": 0.0, "w": 4.0, "h": 2.0}

    def test_unreachable_weighted_sector_is_geometry_error(self, tmp_path, iris_csv):
        # a pair whose sectors span more than a half-plane cannot host every
        # value combination; the failing row is named in the error (exit 3)
        out = tmp_path / "w.json"
        code = run(["project", iris_csv, "--weights", "4,2,6,5",
                    "--out", str(out)])
        assert code == 3


class TestMineClassify:
    def test_mine_then_classify_consistent(self, tmp_path, iris_csv):
        rules = tmp_path / "rules.json"
        report = tmp_path / "report.json"
        assert run(["mine", iris_csv, "--mode", "intersect", "--rect-w", "0.2",
                    "--rect-h", "0.2", "--stride", "0.05", "--out", str(rules)]) == 0
        rdoc = json.loads(rules.read_text())
        assert len(rdoc["rules"]) >= 1
        assert run(["classify", iris_csv, "--rules", str(rules),
                    "--out", str(report)]) == 0
        rep = json.loads(report.read_text())
        # totals recompute from per-rule rows via the weighted-precision formula
        pairs = [(r["precisionPct"] / 100, r["covered"])
                 for r in rep["rules"] if r["covered"]]
        assert rep["totals"]["weightedPrecisionPct"] == pytest.approx(
            100 * weighted_precision(pairs), abs=0.01)
        covered = sum(r["covered"] for r in rep["rules"])
        assert covered == rep["totals"]["covered"]

    def test_one_vs_rest_flag(self, tmp_path, iris_csv):
        rules = tmp_path / "ovr.json"
        assert run(["mine", iris_csv, "--mode", "point", "--rect-w", "0.2",
                    "--rect-h", "0.2", "--stride", "0.1",
                    "--one-vs-rest", "setosa", "--out", str(rules)]) == 0
        doc = json.loads(rules.read_text())
        assert set(r["class"] for r in doc["rules"]) <= {"setosa", "not-setosa"}

    def test_max_rules_respected(self, tmp_path, iris_csv):
        rules = tmp_path / "lim.json"
        assert run(["mine", iris_csv, "--mode", "intersect", "--rect-w", "0.15",
                    "--rect-h", "0.15", "--stride", "0.05", "--max-rules", "2",
                    "--out", str(rules)]) == 0
        assert len(json.loads(rules.read_text())["rules"]) <= 2


class TestExitCodes:
    def test_usage_error_is_one(self):
        assert run(["mine"]) == 1
        assert run(["bogus-command"]) == 1
        assert run(["synth", "Q", "--out", "/tmp/q.csv"]) == 1

    def test_data_error_is_two(self, tmp_path):
        missing = str(tmp_path / "missing.csv")
        assert run(["project", missing, "--out", str(tmp_path / "o.svg")]) == 2
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,label\n1,2\n")
        assert run(["project", str(bad), "--out", str(tmp_path / "o.svg")]) == 2

    def test_reproduce_missing_data_is_two(self, tmp_path):
        assert run(["reproduce", "wbc", "--data-dir", str(tmp_path)]) == 2

    def test_project_requires_known_extension(self, tmp_path, iris_csv):
        assert run(["project", iris_csv, "--out", str(tmp_path / "o.png")]) == 1


class TestReproduce:
    def test_iris_recipe_passes(self, tmp_path, iris_csv, capsys):
        data_dir = os.path.dirname(iris_csv)
        out = tmp_path / "iris_report.json"
        code = run(["reproduce", "iris", "--data-dir", data_dir, "--out", str(out)])
        printed = capsys.readouterr().out
        assert "published" in printed and "achieved" in printed
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["passed"] is True
        assert doc["achieved"]["rules"] <= 6
        assert doc["achieved"]["recall"] >= 90.0
        assert doc["achieved"]["precision"] >= 95.0

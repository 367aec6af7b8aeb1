import numpy as np
import pytest

from epcvis.data import (
    DataError,
    Dataset,
    PaddingPolicy,
    SyntheticSpec,
    generate_synthetic,
    load_csv,
    normalize,
    apply_normalization,
    pad,
    to_csv,
)


class TestLoadCsv:
    def test_header_and_shapes(self):
        ds = load_csv("a,b,c,d,label\n1,2,3,4,x\n5,6,7,8,y\n9,10,11,12,x\n")
        assert ds.n == 4 and ds.row_count == 3
        assert ds.labels == ("x", "y", "x")
        assert ds.column_names == ("a", "b", "c", "d")

    def test_headerless_autodetect(self):
        ds = load_csv("1,2,red\n3,4,blue\n")
        assert ds.n == 2 and ds.labels == ("red", "blue")

    def test_iris_shape(self):
        from sklearn.datasets import load_iris
        iris = load_iris()
        lines = ["sl,sw,pl,pw,class"]
        for row, t in zip(iris.data, iris.target):
            lines.append(",".join(str(v) for v in row) + "," + iris.target_names[t])
        ds = load_csv("\n".join(lines))
        assert ds.n == 4 and ds.row_count == 150
        assert len(ds.classes) == 3

    def test_non_numeric_cell_names_row_and_column(self):
        with pytest.raises(DataError, match=r"line 3.*'b'"):
            load_csv("a,b,label\n1,2,x\n3,oops,y\n")

    def test_ragged_rows_rejected(self):
        with pytest.raises(DataError, match="line 2"):
            load_csv("a,b,label\n1,2\n")

    def test_empty_input_rejected(self):
        with pytest.raises(DataError):
            load_csv("")

    def test_label_column_by_name_and_index(self):
        text = "cls,a,b\nx,1,2\ny,3,4\n"
        ds = load_csv(text, label_column="cls")
        assert ds.labels == ("x", "y") and ds.column_names == ("a", "b")
        ds2 = load_csv(text, label_column=0)
        assert ds2.labels == ("x", "y")

    def test_missing_label_column(self):
        with pytest.raises(DataError):
            load_csv("a,b\n1,2\n", label_column="nope")


class TestNormalize:
    def test_midpoint_value(self):
        ds = Dataset(("a",), np.array([[2.0], [6.0], [10.0]]), ("x", "x", "x"))
        out = normalize(ds)
        assert out.features[1, 0] == pytest.approx(0.5)

    def test_boundaries_map_to_zero_and_one(self):
        ds = Dataset(("a",), np.array([[2.0], [10.0]]), ("x", "x"))
        out = normalize(ds)
        assert out.features[0, 0] == 0.0 and out.features[1, 0] == 1.0

    def test_constant_column_maps_to_half(self):
        ds = Dataset(("a",), np.array([[7.0], [7.0], [7.0]]), ("x", "x", "x"))
        out = normalize(ds)
        assert np.all(out.features == 0.5)

    def test_idempotent_on_normalized(self):
        rng = np.random.default_rng(0)
        vals = rng.random((20, 3))
        vals[0] = 0.0
        vals[1] = 1.0
        ds = Dataset(("a", "b", "c"), vals, tuple("x" * 20))
        once = normalize(ds)
        twice = normalize(once)
        assert np.allclose(once.features, twice.features, atol=0)

    def test_stats_reuse_clamps_and_counts(self):
        train = normalize(Dataset(("a",), np.array([[0.0], [10.0]]), ("x", "x")))
        val = Dataset(("a",), np.array([[-5.0], [5.0], [15.0]]), ("x", "x", "x"))
        out = apply_normalization(val, train.mins, train.maxs)
        assert out.features[:, 0] == pytest.approx([0.0, 0.5, 1.0])
        assert out.clamped == 2


class TestPad:
    def test_duplicate_last(self):
        ds = Dataset(tuple("abcdefghi"), np.arange(18, dtype=float).reshape(2, 9),
                     ("x", "y"))
        out = pad(ds, PaddingPolicy("duplicate-last"))
        assert out.n == 10
        assert np.all(out.features[:, 9] == out.features[:, 8])

    def test_constant_padding(self):
        ds = Dataset(("a", "b", "c"), np.zeros((4, 3)), tuple("wxyz"))
        out = pad(ds, PaddingPolicy("constant", 1.0))
        assert out.n == 4
        assert np.all(out.features[:, 3] == 1.0)

    def test_even_input_unchanged(self):
        ds = Dataset(("a", "b"), np.ones((3, 2)), ("x", "y", "z"))
        assert pad(ds, PaddingPolicy("duplicate-last")) is ds

    def test_rows_and_labels_preserved(self):
        ds = Dataset(("a", "b", "c"), np.random.default_rng(1).random((5, 3)),
                     tuple("abcde"))
        out = pad(ds, PaddingPolicy("duplicate-last"))
        assert out.row_count == 5 and out.labels == ds.labels
        assert np.all(out.features[:, :3] == ds.features)

    def test_parse_forms(self):
        assert PaddingPolicy.parse("dup").kind == "duplicate-last"
        assert PaddingPolicy.parse("const:0.25").constant == 0.25
        assert PaddingPolicy.parse("none").kind == "none"
        with pytest.raises(DataError):
            PaddingPolicy.parse("zeros")

    def test_constant_outside_unit_range_rejected(self):
        with pytest.raises(DataError):
            PaddingPolicy("constant", 1.5)


class TestSynthetic:
    def test_family_b_third_point(self):
        ds = generate_synthetic(SyntheticSpec("B"))
        assert ds.features[2].tolist() == [0.3, 0.3, 0.3, 0.3]
        assert ds.row_count == 9

    def test_family_s4_first_point(self):
        ds = generate_synthetic(SyntheticSpec("S4"))
        assert ds.features[0].tolist() == [1 / 8, 1 / 8, 7 / 8, 7 / 8]
        assert ds.row_count == 7

    def test_family_a_second_point(self):
        ds = generate_synthetic(SyntheticSpec("A"))
        assert ds.features.shape == (9, 8)
        assert ds.features[1].tolist() == [0.8, 0.2] * 4

    def test_family_a_recurrences(self):
        f = generate_synthetic(SyntheticSpec("A")).features
        for i in range(8):
            assert np.allclose(f[i + 1, 0::2], f[i, 0::2] - 0.1, atol=1e-15)
            assert np.allclose(f[i + 1, 1::2], f[i, 1::2] + 0.1, atol=1e-15)

    def test_family_c_complement_structure(self):
        f = generate_synthetic(SyntheticSpec("C")).features
        assert np.allclose(f[:, 0] + f[:, 1], 1.0, atol=1e-15)
        assert np.all(f[:, 0] == f[:, 2]) and np.all(f[:, 1] == f[:, 3])

    def test_exact_decimal_values(self):
        f = generate_synthetic(SyntheticSpec("C")).features
        for k in range(1, 10):
            assert f[k - 1, 0] == k / 10   # bitwise equal to the same expression

    def test_unknown_family_rejected(self):
        with pytest.raises(DataError):
            SyntheticSpec("Z")

    def test_csv_round_trip(self):
        ds = generate_synthetic(SyntheticSpec("S4"))
        back = load_csv(to_csv(ds))
        assert np.allclose(back.features, ds.features, atol=0)
        assert back.labels == ds.labels

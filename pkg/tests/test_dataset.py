import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as nps

from mgcf.dataset import (
    LabeledDataset,
    class_indices,
    load_ucr,
    save_json,
    save_ucr,
    ucr_paths,
)
from mgcf.errors import DataFormatError, ParseError, UnsupportedCardinalityError


def write(tmp_path, text, name="toy_TRAIN.tsv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_two_row_parse_with_label_map(tmp_path):
    p = write(tmp_path, "1 0.0 0.0\n-1 1.0 1.0\n")
    ds = load_ucr(p, label_map={-1: 0, 1: 1})
    assert (ds.n, ds.m) == (2, 2)
    assert ds.labels.tolist() == [1, 0]
    assert ds.series.tolist() == [[0.0, 0.0], [1.0, 1.0]]
    assert ds.name == "toy"


def test_default_mapping_is_ascending_raw_labels(tmp_path):
    p = write(tmp_path, "2\t1\t2\t3\n1\t4\t5\t6\n2\t7\t8\t9\n")
    ds = load_ucr(p)
    assert ds.labels.tolist() == [1, 0, 1]
    assert ds.raw_labels == (1.0, 2.0)


def test_ragged_rows_name_the_line(tmp_path):
    p = write(tmp_path, "0 1 2 3\n1 1 2 3\n0 1 2\n")
    with pytest.raises(DataFormatError, match="line 3"):
        load_ucr(p)


def test_more_than_two_labels(tmp_path):
    p = write(tmp_path, "0 1 2\n1 1 2\n2 1 2\n")
    with pytest.raises(UnsupportedCardinalityError):
        load_ucr(p)


def test_non_numeric_token(tmp_path):
    p = write(tmp_path, "0 1 2\n1 1 abc\n")
    with pytest.raises(ParseError, match="line 2"):
        load_ucr(p)


def test_single_class_rejected(tmp_path):
    p = write(tmp_path, "1 1 2\n1 3 4\n")
    with pytest.raises(DataFormatError, match="both classes"):
        load_ucr(p)


def test_label_map_must_cover_labels(tmp_path):
    p = write(tmp_path, "0 1 2\n1 3 4\n")
    with pytest.raises(DataFormatError):
        load_ucr(p, label_map={0: 0})


def test_nan_rejected():
    with pytest.raises(DataFormatError):
        LabeledDataset([[0.0, np.nan], [1.0, 2.0]], [0, 1])


def test_dataset_is_immutable():
    ds = LabeledDataset([[0.0, 1.0], [1.0, 2.0]], [0, 1])
    with pytest.raises(ValueError):
        ds.series[0, 0] = 5.0


@pytest.mark.parametrize(
    "labels, c, expected",
    [([0, 1, 0], 0, [0, 2]), ([0, 1, 0], 1, [1])],
)
def test_class_indices(labels, c, expected):
    ds = LabeledDataset(np.zeros((3, 4)), labels)
    assert class_indices(ds, c) == expected


def test_class_indices_single_class_dataset_is_rejected_at_construction():
    with pytest.raises(DataFormatError):
        LabeledDataset(np.zeros((2, 4)), [1, 1])


def test_json_dump(tmp_path):
    ds = LabeledDataset([[0.5, 1.0, 2.0], [1.0, 2.0, 3.0]], [1, 0], name="x")
    save_json(ds, tmp_path / "d.json")
    doc = json.loads((tmp_path / "d.json").read_text())
    assert doc == {"name": "x", "n": 2, "m": 3, "labels": [1, 0], "series": [[0.5, 1.0, 2.0], [1.0, 2.0, 3.0]]}


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(
    X=nps.arrays(np.float64, st.tuples(st.integers(2, 8), st.integers(1, 12)), elements=finite),
    data=st.data(),
)
def test_ucr_round_trip_is_bit_exact(tmp_path_factory, X, data):
    n = X.shape[0]
    y = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(lambda v: 0 < sum(v) < n))
    ds = LabeledDataset(X, y)
    path = tmp_path_factory.mktemp("rt") / "rt_TRAIN.tsv"
    save_ucr(ds, path)
    back = load_ucr(path)
    assert back.series.tobytes() == ds.series.tobytes()
    assert back.labels.tolist() == ds.labels.tolist()


def test_ecg200_train_shape(ucr):
    train, _ = ucr("ECG200")
    assert (train.n, train.m) == (100, 96)


def test_real_files_round_trip(ucr, tmp_path):
    train, _ = ucr("GunPoint")
    save_ucr(train, tmp_path / "g.tsv")
    back = load_ucr(tmp_path / "g.tsv")
    assert np.array_equal(back.series, train.series)
    assert np.array_equal(back.labels, train.labels)


def test_ucr_paths_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        ucr_paths("Nope", tmp_path)

"""Loading and validation of binary UCR-format time-series datasets.

A UCR text file holds one series per line: a raw class label followed by the
``m`` sample values, separated by tabs or spaces. Raw labels are mapped onto
``{0, 1}``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from mgcf.errors import DataFormatError, ParseError, UnsupportedCardinalityError

PathLike = Union[str, os.PathLike]

#: Binary UCR datasets used by the benchmark harness.
BENCHMARK_DATASETS = ("ECG200", "Coffee", "GunPoint", "BeetleFly", "BirdChicken")

DEFAULT_UCR_ROOT = Path(__file__).resolve().parents[2] / "data" / "ucr"


def as_series(values, name: str = "series") -> np.ndarray:
    """Return ``values`` as a 1-d float64 array, checking that it is finite."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DataFormatError(f"{name} must be a non-empty 1-d sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataFormatError(f"{name} contains NaN or infinite values")
    return arr


@dataclass(frozen=True)
class LabeledDataset:
    """An immutable set of equal-length series with binary labels.

    ``series`` is an ``(n, m)`` float64 array and ``labels`` an ``(n,)`` int
    array with values in ``{0, 1}``. Both are made read-only on construction.
    """

    series: np.ndarray
    labels: np.ndarray
    name: str = "dataset"
    raw_labels: tuple = field(default=(0.0, 1.0), compare=False)

    def __post_init__(self):
        X = np.array(self.series, dtype=np.float64, copy=True)
        y = np.array(self.labels, copy=True)
        if X.ndim != 2:
            raise DataFormatError(f"series must form an (n, m) array, got shape {X.shape}")
        n, m = X.shape
        if n < 2:
            raise DataFormatError(f"need at least 2 series, got {n}")
        if m < 1:
            raise DataFormatError("series are empty")
        if y.shape != (n,):
            raise DataFormatError(f"{y.size} labels for {n} series")
        if not np.all(np.isfinite(X)):
            bad = int(np.flatnonzero(~np.all(np.isfinite(X), axis=1))[0])
            raise DataFormatError(f"series {bad} contains NaN or infinite values")
        if not np.all((y == 0) | (y == 1)):
            raise DataFormatError("labels must be 0 or 1")
        y = y.astype(np.int64)
        if not (np.any(y == 0) and np.any(y == 1)):
            raise DataFormatError("both classes must be present")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "series", X)
        object.__setattr__(self, "labels", y)

    @property
    def n(self) -> int:
        return self.series.shape[0]

    @property
    def m(self) -> int:
        return self.series.shape[1]

    def __len__(self) -> int:
        return self.n

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "labels": self.labels.tolist(),
            "series": self.series.tolist(),
        }


def class_indices(ds: LabeledDataset, c: int) -> list[int]:
    """Indices of the series labeled ``c``, ascending."""
    if c not in (0, 1):
        raise ValueError(f"class id must be 0 or 1, got {c!r}")
    return np.flatnonzero(ds.labels == c).tolist()


def _parse_float(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"line {lineno}: non-numeric token {token!r}") from None


def load_ucr(
    path: PathLike,
    label_map: Optional[Mapping[float, int]] = None,
    name: Optional[str] = None,
) -> LabeledDataset:
    """Parse a UCR text file into a :class:`LabeledDataset`.

    Parameters
    ----------
    path : path-like
        File with one ``label v1 v2 ... vm`` row per line.
    label_map : mapping, optional
        Raw label -> class id. Defaults to ascending order of the distinct raw
        labels, so the smaller raw label becomes class 0.
    name : str, optional
        Dataset name; defaults to the file stem without ``_TRAIN``/``_TEST``.
    """
    path = Path(path)
    if name is None:
        name = path.stem
        for suffix in ("_TRAIN", "_TEST"):
            if name.endswith(suffix):
                name = name[: -len(suffix)]

    raw, rows = [], []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.replace(",", " ").split()
            if not tokens:
                continue
            if width is None:
                width = len(tokens)
            elif len(tokens) != width:
                raise DataFormatError(
                    f"{path.name} line {lineno}: expected {width - 1} values, got {len(tokens) - 1}"
                )
            raw.append(_parse_float(tokens[0], lineno))
            rows.append([_parse_float(t, lineno) for t in tokens[1:]])
    if width is None or width < 2:
        raise DataFormatError(f"{path.name}: no data rows")

    distinct = sorted(set(raw))
    if len(distinct) > 2:
        raise UnsupportedCardinalityError(
            f"{path.name}: {len(distinct)} distinct labels {distinct[:5]}, only binary supported"
        )
    if label_map is None:
        mapping = {lab: idx for idx, lab in enumerate(distinct)}
    else:
        mapping = {float(k): int(v) for k, v in label_map.items()}
        missing = [lab for lab in distinct if lab not in mapping]
        if missing:
            raise DataFormatError(f"{path.name}: label_map has no entry for {missing}")
    labels = [mapping[lab] for lab in raw]
    return LabeledDataset(np.array(rows), np.array(labels), name=name, raw_labels=tuple(distinct))


def save_ucr(ds: LabeledDataset, path: PathLike) -> None:
    """Write ``ds`` in UCR tab-separated format (class ids as labels).

    Values use ``repr`` so that reloading reproduces them bit-for-bit.
    """
    with open(path, "w") as fh:
        for label, row in zip(ds.labels, ds.series):
            fh.write("\t".join([str(int(label))] + [repr(float(v)) for v in row]))
            fh.write("\n")


def save_json(ds: LabeledDataset, path: PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(ds.to_json(), fh)


def ucr_root() -> Path:
    return Path(os.environ.get("MGCF_UCR_ROOT", DEFAULT_UCR_ROOT))


def ucr_paths(name: str, root: Optional[PathLike] = None) -> tuple[Path, Path]:
    """Locate ``<name>_TRAIN`` and ``<name>_TEST`` files under ``root/<name>/``."""
    base = Path(root) if root is not None else ucr_root()
    found = []
    for split in ("TRAIN", "TEST"):
        for ext in (".tsv", ".txt", ""):
            p = base / name / f"{name}_{split}{ext}"
            if p.exists():
                found.append(p)
                break
        else:
            raise FileNotFoundError(f"no {name}_{split} file under {base / name}")
    return found[0], found[1]


def load_ucr_pair(name: str, root: Optional[PathLike] = None) -> tuple[LabeledDataset, LabeledDataset]:
    """Load train and test partitions with a label mapping shared by both."""
    train_path, test_path = ucr_paths(name, root)
    train = load_ucr(train_path, name=name)
    label_map = {lab: i for i, lab in enumerate(train.raw_labels)}
    test = load_ucr(test_path, label_map=label_map, name=name)
    return train, test


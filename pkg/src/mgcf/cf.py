"""Counterfactual generation by motif splicing, plus a nearest-unlike-neighbour baseline."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from mgcf.classifier import BlackBoxClassifier
from mgcf.dataset import LabeledDataset, as_series
from mgcf.errors import DataFormatError, DimensionError, MGCFError
from mgcf.mining import MotifDescriptor

METHODS = ("mgcf", "nun")


@dataclass(frozen=True)
class Counterfactual:
    original: np.ndarray
    perturbed: np.ndarray
    replaced_span: tuple[int, int]
    original_pred: int
    target: int
    achieved_pred: int

    @property
    def valid(self) -> bool:
        return self.achieved_pred == self.target

    def to_json(self, query_index: Optional[int] = None) -> dict:
        d = {} if query_index is None else {"query_index": query_index}
        d.update(
            original=self.original.tolist(),
            perturbed=self.perturbed.tolist(),
            replaced_span=list(self.replaced_span),
            original_pred=self.original_pred,
            target=self.target,
            achieved_pred=self.achieved_pred,
            valid=self.valid,
        )
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Counterfactual":
        try:
            cf = cls(
                original=np.asarray(d["original"], dtype=np.float64),
                perturbed=np.asarray(d["perturbed"], dtype=np.float64),
                replaced_span=(int(d["replaced_span"][0]), int(d["replaced_span"][1])),
                original_pred=int(d["original_pred"]),
                target=int(d["target"]),
                achieved_pred=int(d["achieved_pred"]),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise DataFormatError(f"bad counterfactual record: {exc}") from None
        if "valid" in d and bool(d["valid"]) != cf.valid:
            raise DataFormatError("stored 'valid' flag disagrees with achieved_pred/target")
        return cf


@dataclass
class CFBatch:
    counterfactuals: list
    runtime_seconds: float
    method: str = "mgcf"
    dataset: str = ""


class BatchItemError(MGCFError):
    def __init__(self, index: int, cause: BaseException):
        self.index = index
        self.cause = cause
        super().__init__(f"query {index}: {cause}")


def _motif_for(motifs: Sequence[MotifDescriptor], target: int) -> MotifDescriptor:
    for m in motifs:
        if m.class_id == target:
            return m
    raise DataFormatError(f"no motif for class {target}")


def generate_cf(
    query,
    f: BlackBoxClassifier,
    motifs: Sequence[MotifDescriptor],
    train: LabeledDataset,
) -> Counterfactual:
    """Overwrite the target class's motif span of ``query`` with the motif.

    The target is the complement of ``f``'s prediction on the query. The donor
    values come from the motif's source training series at the motif's own
    coordinates and are written at the same coordinates. The result is
    returned whether or not the prediction actually flips.
    """
    x = as_series(query, "query")
    pred = int(f.predict(x))
    target = 1 - pred
    motif = _motif_for(motifs, target)
    start, end = motif.start_idx, motif.end_idx
    if not 0 <= start < end <= x.size:
        raise DimensionError(f"motif span [{start}, {end}) does not fit a series of length {x.size}")
    if end > train.m:
        raise DimensionError(f"motif span [{start}, {end}) exceeds training length {train.m}")
    x_cf = x.copy()
    x_cf[start:end] = train.series[motif.source_series, start:end]
    return Counterfactual(x, x_cf, (start, end), pred, target, int(f.predict(x_cf)))


def generate_nun_baseline(query, f: BlackBoxClassifier, train: LabeledDataset) -> Counterfactual:
    """Replace the whole query by its nearest training series of the target class."""
    x = as_series(query, "query")
    if x.size != train.m:
        raise DimensionError(f"query length {x.size} != training length {train.m}")
    pred = int(f.predict(x))
    target = 1 - pred
    idx = np.flatnonzero(train.labels == target)
    d = ((train.series[idx] - x) ** 2).sum(axis=1)
    x_cf = train.series[idx[int(np.argmin(d))]].copy()
    return Counterfactual(x, x_cf, (0, x.size), pred, target, int(f.predict(x_cf)))


def generate_cf_batch(
    queries: Sequence,
    f: BlackBoxClassifier,
    motifs: Optional[Sequence[MotifDescriptor]],
    train: LabeledDataset,
    method: str = "mgcf",
) -> CFBatch:
    """Explain each query in order; ``runtime_seconds`` is the batch wall-clock."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "mgcf" and motifs is None:
        raise ValueError("mgcf needs motifs")
    out = []
    t0 = time.perf_counter()
    for i, q in enumerate(queries):
        try:
            if method == "mgcf":
                out.append(generate_cf(q, f, motifs, train))
            else:
                out.append(generate_nun_baseline(q, f, train))
        except MGCFError as exc:
            raise BatchItemError(i, exc) from exc
    elapsed = time.perf_counter() - t0
    return CFBatch(out, elapsed, method=method, dataset=train.name)


def save_cfs(batch: CFBatch, path) -> None:
    """Write the batch; the runtime lives under ``metadata`` so the rest is reproducible."""
    doc = {
        "method": batch.method,
        "dataset": batch.dataset,
        "counterfactuals": [cf.to_json(i) for i, cf in enumerate(batch.counterfactuals)],
        "metadata": {"batch_runtime_seconds": batch.runtime_seconds},
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_cfs(path) -> CFBatch:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        records = sorted(doc["counterfactuals"], key=lambda r: r["query_index"])
        runtime = float(doc["metadata"]["batch_runtime_seconds"])
    except (KeyError, TypeError) as exc:
        raise DataFormatError(f"{path}: not a counterfactual file ({exc})") from None
    cfs = [Counterfactual.from_json(r) for r in records]
    return CFBatch(cfs, runtime, method=doc.get("method", "mgcf"), dataset=doc.get("dataset", ""))

"""Counterfactual quality metrics: proximity, sparsity, contiguity, validity."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from mgcf.errors import DataFormatError, DimensionError, EmptyInputError

REPORT_KEYS = (
    "method",
    "dataset",
    "flip_rate",
    "runtime_seconds",
    "mining_runtime_seconds",
    "mean_proximity",
    "sd_proximity",
    "mean_sparsity",
    "sd_sparsity",
    "mean_segments",
    "sd_segments",
)
# Keys that vary from run to run.
TIMING_KEYS = ("runtime_seconds", "mining_runtime_seconds")


def _pair(x, x_cf):
    x = np.asarray(x, dtype=np.float64)
    x_cf = np.asarray(x_cf, dtype=np.float64)
    if x.shape != x_cf.shape or x.ndim != 1:
        raise DimensionError(f"length mismatch: {x.shape} vs {x_cf.shape}")
    return x, x_cf


def proximity(x, x_cf) -> float:
    """L1 distance between query and counterfactual."""
    x, x_cf = _pair(x, x_cf)
    return float(np.abs(x_cf - x).sum())


def sparsity(x, x_cf) -> float:
    """Fraction of time points left exactly unchanged."""
    x, x_cf = _pair(x, x_cf)
    return 1.0 - np.count_nonzero(x_cf != x) / x.size


def count_segments(x, x_cf) -> int:
    """Number of maximal runs of consecutive changed points."""
    x, x_cf = _pair(x, x_cf)
    changed = np.concatenate([[False], x_cf != x])
    return int(np.count_nonzero(changed[1:] & ~changed[:-1]))


@dataclass(frozen=True)
class InstanceMetrics:
    proximity: float
    sparsity: float
    n_segments: int
    valid: bool


@dataclass
class EvaluationReport:
    method: str
    dataset: str
    per_instance: list
    flip_rate: float
    runtime_seconds: float
    mining_runtime_seconds: Optional[float]
    mean_proximity: float
    sd_proximity: float
    mean_sparsity: float
    sd_sparsity: float
    mean_segments: float
    sd_segments: float
    metadata: dict = field(default_factory=lambda: {"sd": "population"})

    def summary(self) -> dict:
        """The aggregate fields only, in schema order."""
        return {k: getattr(self, k) for k in REPORT_KEYS}

    def to_json(self) -> dict:
        d = self.summary()
        d["per_instance"] = [asdict(p) for p in self.per_instance]
        d["metadata"] = dict(self.metadata)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "EvaluationReport":
        missing = [k for k in REPORT_KEYS + ("per_instance",) if k not in d]
        if missing:
            raise DataFormatError(f"report is missing keys {missing}")
        try:
            per = [InstanceMetrics(**p) for p in d["per_instance"]]
        except TypeError as exc:
            raise DataFormatError(f"bad per-instance record: {exc}") from None
        kw = {k: d[k] for k in REPORT_KEYS}
        return cls(per_instance=per, metadata=d.get("metadata", {}), **kw)


def instance_metrics(cf) -> InstanceMetrics:
    return InstanceMetrics(
        proximity=proximity(cf.original, cf.perturbed),
        sparsity=sparsity(cf.original, cf.perturbed),
        n_segments=count_segments(cf.original, cf.perturbed),
        valid=bool(cf.valid),
    )


def evaluate(
    cfs: Sequence,
    runtime_seconds: float,
    method: str = "mgcf",
    dataset: str = "",
    mining_runtime_seconds: Optional[float] = None,
) -> EvaluationReport:
    """Per-instance metrics, flip rate, and mean / population SD of each metric."""
    if len(cfs) == 0:
        raise EmptyInputError("no counterfactuals to evaluate")
    per = [instance_metrics(cf) for cf in cfs]
    prox = np.array([p.proximity for p in per])
    spar = np.array([p.sparsity for p in per])
    segs = np.array([p.n_segments for p in per], dtype=np.float64)
    return EvaluationReport(
        method=method,
        dataset=dataset,
        per_instance=per,
        flip_rate=sum(p.valid for p in per) / len(per),
        runtime_seconds=float(runtime_seconds),
        mining_runtime_seconds=None if mining_runtime_seconds is None else float(mining_runtime_seconds),
        mean_proximity=float(prox.mean()),
        sd_proximity=float(prox.std()),
        mean_sparsity=float(spar.mean()),
        sd_sparsity=float(spar.std()),
        mean_segments=float(segs.mean()),
        sd_segments=float(segs.std()),
    )


def save_report(report: EvaluationReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json(), fh, indent=1)
        fh.write("\n")


def load_report(path) -> EvaluationReport:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise DataFormatError(f"{path}: report must be a JSON object")
    return EvaluationReport.from_json(doc)

"""End-to-end runs: load, train, mine, explain, evaluate, and compare reports."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from mgcf.cf import METHODS, generate_cf_batch, save_cfs
from mgcf.classifier import train_1nn
from mgcf.dataset import load_ucr
from mgcf.errors import DataFormatError, MGCFError, StageError
from mgcf.metrics import REPORT_KEYS, EvaluationReport, evaluate, load_report, save_report
from mgcf.mining import DEFAULT_FRACTIONS, mine_motifs, save_motifs

CLASSIFIERS = ("1nn",)
OUTPUT_DIR_ENV = "MGCF_OUTPUT_DIR"


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "mgcf_out"))


@dataclass
class RunConfig:
    train_path: Path
    test_path: Path
    fractions: tuple = DEFAULT_FRACTIONS
    method: str = "mgcf"
    classifier: str = "1nn"
    early_abandon: bool = True
    output_dir: Path = field(default_factory=default_output_dir)
    n_jobs: int = 1

    def __post_init__(self):
        self.train_path = Path(self.train_path)
        self.test_path = Path(self.test_path)
        self.output_dir = Path(self.output_dir)
        self.fractions = tuple(float(f) for f in self.fractions)
        if not self.fractions or not all(0.0 < f < 1.0 for f in self.fractions):
            raise ValueError(f"fractions must be a non-empty subset of (0, 1), got {self.fractions}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}")


@contextmanager
def stage(name: str):
    try:
        yield
    except StageError:
        raise
    except (MGCFError, OSError, ValueError) as exc:
        raise StageError(name, exc) from exc


def build_classifier(kind: str, train):
    if kind == "1nn":
        return train_1nn(train)
    raise ValueError(f"unknown classifier {kind!r}")


def run_pipeline(cfg: RunConfig) -> EvaluationReport:
    """Run every stage and write motifs.json, cfs.json and report.json to ``cfg.output_dir``."""
    with stage("dataset"):
        for p in (cfg.train_path, cfg.test_path):
            if not p.exists():
                raise FileNotFoundError(f"no such file: {p}")
        train = load_ucr(cfg.train_path)
        label_map = {lab: i for i, lab in enumerate(train.raw_labels)}
        test = load_ucr(cfg.test_path, label_map=label_map, name=train.name)
    with stage("classifier"):
        f = build_classifier(cfg.classifier, train)
    out = cfg.output_dir
    with stage("mining"):
        t0 = time.perf_counter()
        motifs = mine_motifs(train, cfg.fractions, early_abandon=cfg.early_abandon, n_jobs=cfg.n_jobs)
        mining_time = time.perf_counter() - t0
        out.mkdir(parents=True, exist_ok=True)
        save_motifs(motifs, out / "motifs.json")
    with stage("explain"):
        batch = generate_cf_batch(list(test.series), f, motifs, train, method=cfg.method)
        save_cfs(batch, out / "cfs.json")
    with stage("evaluate"):
        report = evaluate(
            batch.counterfactuals,
            batch.runtime_seconds,
            method=cfg.method,
            dataset=train.name,
            mining_runtime_seconds=mining_time,
        )
        report.metadata["test_accuracy"] = sum(
            cf.original_pred == y for cf, y in zip(batch.counterfactuals, test.labels)
        ) / test.n
        save_report(report, out / "report.json")
    return report


def strip_timing(doc):
    """Drop run-dependent timing fields from a loaded JSON artifact."""
    if isinstance(doc, dict):
        return {
            k: strip_timing(v)
            for k, v in doc.items()
            if k != "metadata" and k not in ("runtime_seconds", "mining_runtime_seconds")
        }
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


def compare(report_paths: Sequence) -> list[dict]:
    """One row per (dataset, method) with every aggregate metric."""
    if not report_paths:
        raise ValueError("need at least one report")
    rows = {}
    for p in report_paths:
        rep = load_report(p)
        rows[(rep.dataset, rep.method)] = rep.summary()
    return [rows[k] for k in sorted(rows)]


def format_rows(rows: Sequence[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(list(rows), indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(REPORT_KEYS), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r[k] is None else r[k]) for k in REPORT_KEYS})
        return buf.getvalue()
    raise DataFormatError(f"unknown format {fmt!r}")

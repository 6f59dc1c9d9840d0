"""Motif-guided counterfactual explanations for binary time-series classifiers."""

__version__ = "0.1.0"

from mgcf.cf import Counterfactual, generate_cf, generate_cf_batch, generate_nun_baseline
from mgcf.classifier import BlackBoxClassifier, OneNNClassifier, predict_batch, train_1nn
from mgcf.dataset import LabeledDataset, class_indices, load_ucr, load_ucr_pair, save_ucr
from mgcf.metrics import EvaluationReport, count_segments, evaluate, proximity, sparsity
from mgcf.mining import (
    Candidate,
    MotifDescriptor,
    assess_candidate,
    distance_profile,
    generate_candidates,
    info_gain,
    min_dist_to_series,
    mine_motifs,
    subseq_dist,
)
from mgcf.pipeline import RunConfig, compare, run_pipeline

__all__ = [
    "BlackBoxClassifier",
    "Candidate",
    "Counterfactual",
    "EvaluationReport",
    "LabeledDataset",
    "MotifDescriptor",
    "OneNNClassifier",
    "RunConfig",
    "assess_candidate",
    "class_indices",
    "compare",
    "count_segments",
    "distance_profile",
    "evaluate",
    "generate_candidates",
    "generate_cf",
    "generate_cf_batch",
    "generate_nun_baseline",
    "info_gain",
    "load_ucr",
    "load_ucr_pair",
    "min_dist_to_series",
    "mine_motifs",
    "predict_batch",
    "proximity",
    "run_pipeline",
    "save_ucr",
    "sparsity",
    "subseq_dist",
    "train_1nn",
]

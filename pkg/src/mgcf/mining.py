"""Class-discriminative motif mining.

Every window of a few fixed lengths (fractions of the series length) taken from
every training series is a candidate. A candidate is scored by the best
information gain obtainable by thresholding its distance profile, i.e. the
minimum sliding-window squared Euclidean distance from the candidate to each
training series. The best candidate whose source series belongs to class ``c``
becomes the motif of class ``c``.

Distances between a batch of candidates and a block of series are computed
with a matrix product (``|s|^2 + |r|^2 - 2 s.r``), then every window that could
be the minimum given a rounding-error bound is recomputed directly. The minima
therefore equal the direct summation exactly, which keeps results identical to
:func:`min_dist_to_series` and independent of batching and pruning.
"""

from __future__ import annotations

import json
import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from mgcf.dataset import LabeledDataset
from mgcf.errors import DataFormatError, DimensionError, InvariantViolation

DEFAULT_FRACTIONS = (0.3, 0.5, 0.7)
MIN_MOTIF_LENGTH = 3

# Candidates are only abandoned when their bound is below best-so-far by more
# than this, so float noise in the bound can never drop a tying candidate.
_BOUND_SLACK = 1e-12
# Gains below this are reported as exactly zero.
_ZERO_GAIN = 1e-12
_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class Candidate:
    source_series: int
    start: int
    values: np.ndarray

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        return self.start + len(self.values)


@dataclass(frozen=True)
class MotifDescriptor:
    """A mined motif. ``end_idx`` is exclusive."""

    class_id: int
    source_series: int
    start_idx: int
    end_idx: int
    quality: float
    values: tuple

    @property
    def length(self) -> int:
        return self.end_idx - self.start_idx

    def to_json(self) -> dict:
        d = asdict(self)
        d["values"] = list(self.values)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "MotifDescriptor":
        try:
            return cls(
                class_id=int(d["class_id"]),
                source_series=int(d["source_series"]),
                start_idx=int(d["start_idx"]),
                end_idx=int(d["end_idx"]),
                quality=float(d["quality"]),
                values=tuple(float(v) for v in d["values"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"bad motif record: {exc}") from None


@dataclass(frozen=True)
class Assessment:
    quality: float
    threshold: float
    abandoned: bool
    n_computed: int  # number of series whose distance was computed


@dataclass
class MiningStats:
    n_candidates: int = 0
    n_abandoned: int = 0
    n_distance_evals: int = 0


def motif_lengths(m: int, fractions: Sequence[float] = DEFAULT_FRACTIONS) -> list[int]:
    """Distinct candidate lengths ``max(3, floor(f * m))``, ascending.

    Fractions giving a length ``>= m`` are skipped with a warning.
    """
    fractions = list(fractions)
    if not fractions:
        raise ValueError("at least one fraction is required")
    lengths = set()
    for f in fractions:
        if not 0.0 < f < 1.0:
            raise ValueError(f"fractions must lie in (0, 1), got {f}")
        # round() absorbs representation error such as 0.29 * 100 = 28.999...
        l = max(MIN_MOTIF_LENGTH, math.floor(round(f * m, 9)))
        if l >= m:
            warnings.warn(f"fraction {f} gives length {l} >= series length {m}; skipped")
            continue
        lengths.add(l)
    if not lengths:
        raise DimensionError(f"no admissible motif length for series length {m}")
    return sorted(lengths)


def generate_candidates(
    ds: LabeledDataset, fractions: Sequence[float] = DEFAULT_FRACTIONS
) -> Iterator[Candidate]:
    """Yield every window of every admissible length, ordered by series, length, start."""
    lengths = motif_lengths(ds.m, fractions)
    for i in range(ds.n):
        row = ds.series[i]
        for l in lengths:
            for start in range(ds.m - l + 1):
                yield Candidate(i, start, row[start : start + l])


def count_candidates(n: int, m: int, fractions: Sequence[float] = DEFAULT_FRACTIONS) -> int:
    return n * sum(m - l + 1 for l in motif_lengths(m, fractions))


def subseq_dist(s, r) -> float:
    """Squared Euclidean distance between two equal-length sequences."""
    s = np.asarray(s, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    if s.shape != r.shape:
        raise DimensionError(f"length mismatch: {s.shape} vs {r.shape}")
    return float(((s - r) ** 2).sum())


def _window_sq_dists(windows: np.ndarray, s: np.ndarray) -> np.ndarray:
    return ((windows - s) ** 2).sum(axis=1)


def min_dist_to_series(s, t) -> float:
    """Smallest :func:`subseq_dist` between ``s`` and any same-length window of ``t``."""
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if s.ndim != 1 or t.ndim != 1 or s.size == 0:
        raise DimensionError("expected two non-empty 1-d sequences")
    if s.size > t.size:
        raise DimensionError(f"subsequence length {s.size} exceeds series length {t.size}")
    return float(_window_sq_dists(sliding_window_view(t, s.size), s).min())


def distance_profile(candidate, ds: LabeledDataset) -> np.ndarray:
    """Minimum window distance from ``candidate`` to every series of ``ds``."""
    values = candidate.values if isinstance(candidate, Candidate) else candidate
    s = np.asarray(values, dtype=np.float64)
    if s.ndim != 1 or s.size == 0 or s.size > ds.m:
        raise DimensionError(f"candidate length {s.size} not in [1, {ds.m}]")
    W, ss = _windows(ds.series, s.size)
    return _block_min_dists(s[None, :], (s**2).sum()[None], W, ss)[0]


# --- information gain -------------------------------------------------------


class _GainTable:
    """Information gain (bits) of binary splits, looked up from integer class counts.

    Every gain in a mining run comes out of the same precomputed table, so two
    code paths that reach the same counts produce bit-identical gains.
    """

    def __init__(self, labels: np.ndarray):
        labels = np.asarray(labels)
        self.n = labels.size
        self.n1 = int(labels.sum())
        self.n0 = self.n - self.n1
        a = np.arange(self.n0 + 1, dtype=np.float64)[:, None]
        b = np.arange(self.n1 + 1, dtype=np.float64)[None, :]
        tot = a + b
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = np.where(a > 0, a * np.log2(tot / a), 0.0)
            tb = np.where(b > 0, b * np.log2(tot / b), 0.0)
        # count-weighted entropy: (a + b) * H(a / (a + b))
        self.weighted = ta + tb
        self.parent = float(self.weighted[self.n0, self.n1])

    def gain(self, left0, left1) -> np.ndarray:
        left0 = np.asarray(left0)
        left1 = np.asarray(left1)
        children = self.weighted[left0, left1] + self.weighted[self.n0 - left0, self.n1 - left1]
        return (self.parent - children) / self.n


def _best_splits(D: np.ndarray, labels: np.ndarray, table: _GainTable):
    """Best midpoint threshold for each row of ``D``; returns (gains, thresholds)."""
    k, n = D.shape
    order = np.argsort(D, axis=1, kind="stable")
    Ds = np.take_along_axis(D, order, axis=1)
    ys = labels[order]
    if n < 2:
        return np.zeros(k), Ds[:, 0].copy()
    left1 = np.cumsum(ys, axis=1)[:, :-1]
    left0 = np.arange(1, n)[None, :] - left1
    g = table.gain(left0, left1)
    distinct = Ds[:, 1:] > Ds[:, :-1]
    g = np.where(distinct, g, -np.inf)
    pos = np.argmax(g, axis=1)  # first maximum == smallest threshold
    rows = np.arange(k)
    gains = g[rows, pos]
    thresholds = (Ds[rows, pos] + Ds[rows, pos + 1]) / 2.0
    single = ~distinct.any(axis=1)
    gains = np.where(single, 0.0, gains)
    thresholds = np.where(single, Ds[:, 0], thresholds)
    gains = np.where(gains < _ZERO_GAIN, 0.0, np.minimum(gains, 1.0))
    return gains, thresholds


def info_gain(profile, labels) -> tuple[float, float]:
    """Best information gain (bits) of a threshold split of ``profile``.

    Thresholds are midpoints between consecutive distinct sorted distances.
    Returns ``(gain, threshold)``; ties go to the smallest threshold. With a
    single distinct distance the gain is 0 and the threshold is that distance.
    """
    d = np.asarray(profile, dtype=np.float64)
    y = np.asarray(labels).astype(np.int64)
    if d.ndim != 1 or d.shape != y.shape:
        raise DimensionError(f"profile shape {d.shape} does not match labels shape {y.shape}")
    g, t = _best_splits(d[None, :], y, _GainTable(y))
    return float(g[0]), float(t[0])


def _upper_bound(Dc: np.ndarray, yc: np.ndarray, table: _GainTable) -> np.ndarray:
    """Optimistic gain for rows whose first ``c`` distances are known.

    The weighted child entropy is concave in how the unseen series are split
    between the two sides, so the gain is maximised at a corner: each unseen
    class lands entirely on one side. Taking the max over those four corners
    and every split of the known distances bounds the final gain from above.
    """
    k, c = Dc.shape
    r1 = table.n1 - int(yc.sum())
    r0 = table.n0 - (c - int(yc.sum()))
    ys = yc[np.argsort(Dc, axis=1, kind="stable")]
    left1 = np.concatenate([np.zeros((k, 1), dtype=np.int64), np.cumsum(ys, axis=1)], axis=1)
    left0 = np.arange(c + 1)[None, :] - left1
    best = np.full(k, -np.inf)
    for a0 in {0, r0}:
        for a1 in {0, r1}:
            best = np.maximum(best, table.gain(left0 + a0, left1 + a1).max(axis=1))
    return best


# --- batched distances ------------------------------------------------------


def _windows(X: np.ndarray, l: int):
    """All length-``l`` windows of each row of ``X`` and their sums of squares."""
    if X.ndim == 1:
        X = X[None, :]
    W = np.ascontiguousarray(sliding_window_view(X, l, axis=1))  # (n, m - l + 1, l)
    return W, (W**2).sum(axis=2)


def _block_min_dists(S, ssS, W, ssW) -> np.ndarray:
    """Exact minimum window distance from each candidate row of ``S`` to each series in ``W``.

    ``S`` is (a, l), ``W`` is (B, k, l); returns (a, B).
    """
    a, l = S.shape
    B, k, _ = W.shape
    flat = W.reshape(B * k, l)
    norms = ssS[:, None] + ssW.reshape(1, B * k)
    approx = (norms - 2.0 * (S @ flat.T)).reshape(a, B, k)
    # Bounds the error of the expanded form against direct summation.
    err = (4.0 * (l + 4) * _EPS) * norms.reshape(a, B, k)
    upper = (approx + err).min(axis=2)
    ra, rb, rw = np.nonzero(approx - err <= upper[:, :, None])
    exact = ((W[rb, rw] - S[ra]) ** 2).sum(axis=1)
    out = np.full((a, B), np.inf)
    np.minimum.at(out, (ra, rb), exact)
    return out


def _assess_batch(S, W, ssW, labels, table, best_so_far, block):
    """Score candidate rows ``S`` against all series, abandoning hopeless ones.

    ``best_so_far`` is a callable returning the current bound (read once per
    block). Returns gains (nan where abandoned), thresholds, abandoned mask,
    per-row count of series computed.
    """
    k = S.shape[0]
    n = labels.size
    ssS = (S**2).sum(axis=1)
    D = np.empty((k, n))
    alive = np.arange(k)
    computed = np.zeros(k, dtype=np.int64)
    abandoned = np.zeros(k, dtype=bool)
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        D[alive, lo:hi] = _block_min_dists(S[alive], ssS[alive], W[lo:hi], ssW[lo:hi])
        computed[alive] = hi
        if hi == n:
            break
        bsf = best_so_far()
        if bsf <= 0.0:
            continue
        ub = _upper_bound(D[alive, :hi], labels[:hi], table)
        keep = ub >= bsf - _BOUND_SLACK
        abandoned[alive[~keep]] = True
        alive = alive[keep]
        if alive.size == 0:
            break
    gains = np.full(k, np.nan)
    thresholds = np.full(k, np.nan)
    if alive.size:
        gains[alive], thresholds[alive] = _best_splits(D[alive], labels, table)
    return gains, thresholds, abandoned, computed


def assess_candidate(candidate: Candidate, ds: LabeledDataset, best_so_far: float = 0.0) -> Assessment:
    """Information gain of ``candidate``, with early abandon against ``best_so_far``.

    Distances are computed one series at a time. If the optimistic bound on the
    gain drops below ``best_so_far`` the computation stops and the result is
    flagged ``abandoned`` with quality 0. ``best_so_far = 0`` disables pruning.
    """
    if not 0.0 <= best_so_far <= 1.0:
        raise ValueError(f"best_so_far must lie in [0, 1], got {best_so_far}")
    s = np.asarray(candidate.values, dtype=np.float64)
    if s.size > ds.m:
        raise DimensionError(f"candidate length {s.size} exceeds series length {ds.m}")
    W, ssW = _windows(ds.series, s.size)
    g, t, ab, comp = _assess_batch(
        s[None, :], W, ssW, ds.labels, _GainTable(ds.labels), lambda: best_so_far, 1
    )
    if ab[0]:
        return Assessment(0.0, float("nan"), True, int(comp[0]))
    return Assessment(float(g[0]), float(t[0]), False, int(comp[0]))


# --- mining -----------------------------------------------------------------


def mine_motifs(
    ds: LabeledDataset,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    early_abandon: bool = True,
    n_jobs: int = 1,
    block_size: Optional[int] = None,
    stats: Optional[MiningStats] = None,
) -> tuple[MotifDescriptor, MotifDescriptor]:
    """Return the best motif of class 0 and of class 1.

    Candidates are grouped by the label of their source series. Within a class
    the winner has the highest gain, then the shortest length, then the lowest
    source index, then the lowest start. The result does not depend on
    ``early_abandon``, ``n_jobs`` or ``block_size``.

    Parameters
    ----------
    early_abandon : bool
        Stop scoring a candidate once its optimistic gain falls below the best
        gain already found for its class.
    n_jobs : int
        Threads used to score source series concurrently.
    block_size : int, optional
        Number of series whose distances are computed between two pruning
        checks. Defaults to about a tenth of the dataset.
    stats : MiningStats, optional
        Filled with candidate and distance-evaluation counters.
    """
    if ds.m < MIN_MOTIF_LENGTH + 1:
        raise DimensionError(f"series length {ds.m} too short for motifs of length >= 3")
    lengths = motif_lengths(ds.m, fractions)
    labels = ds.labels
    table = _GainTable(labels)
    windows = {l: _windows(ds.series, l) for l in lengths}
    if block_size is None:
        block_size = max(1, ds.n // 10) if early_abandon else ds.n
    stats = stats if stats is not None else MiningStats()

    lock = threading.Lock()
    best_gain = [0.0, 0.0]
    best = [None, None]  # (sort key, descriptor) per class

    def process(i: int):
        c = int(labels[i])
        bound = (lambda: best_gain[c]) if early_abandon else (lambda: 0.0)
        for l in lengths:
            W, ssW = windows[l]
            gains, _, abandoned, computed = _assess_batch(W[i], W, ssW, labels, table, bound, block_size)
            with lock:
                stats.n_candidates += gains.size
                stats.n_abandoned += int(abandoned.sum())
                stats.n_distance_evals += int(computed.sum())
            if np.all(np.isnan(gains)):
                continue
            start = int(np.argmax(np.where(np.isnan(gains), -np.inf, gains)))
            g = float(gains[start])
            key = (-g, l, i, start)
            with lock:
                if best[c] is None or key < best[c][0]:
                    desc = MotifDescriptor(
                        class_id=c,
                        source_series=i,
                        start_idx=start,
                        end_idx=start + l,
                        quality=g,
                        values=tuple(ds.series[i, start : start + l].tolist()),
                    )
                    best[c] = (key, desc)
                    best_gain[c] = max(best_gain[c], g)

    if n_jobs == 1:
        for i in range(ds.n):
            process(i)
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            list(pool.map(process, range(ds.n)))

    if best[0] is None or best[1] is None:
        raise InvariantViolation("a class produced no motif candidates")
    return best[0][1], best[1][1]


def motifs_to_json(motifs: Sequence[MotifDescriptor]) -> list[dict]:
    return [m.to_json() for m in motifs]


def motifs_from_json(records) -> tuple[MotifDescriptor, MotifDescriptor]:
    """Parse a two-entry motif list, returned ordered by class id."""
    if not isinstance(records, list) or len(records) != 2:
        raise DataFormatError("motif file must hold exactly two entries")
    motifs = sorted((MotifDescriptor.from_json(r) for r in records), key=lambda m: m.class_id)
    if [m.class_id for m in motifs] != [0, 1]:
        raise DataFormatError("motif file must hold one motif per class")
    return motifs[0], motifs[1]


def save_motifs(motifs: Sequence[MotifDescriptor], path) -> None:
    with open(path, "w") as fh:
        json.dump(motifs_to_json(motifs), fh, indent=1)
        fh.write("\n")


def load_motifs(path) -> tuple[MotifDescriptor, MotifDescriptor]:
    with open(path) as fh:
        return motifs_from_json(json.load(fh))

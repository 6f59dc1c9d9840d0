"""Black-box classifier contract and a reference 1-nearest-neighbour model."""

from __future__ import annotations

from typing import Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from mgcf.dataset import LabeledDataset, as_series
from mgcf.errors import DimensionError


@runtime_checkable
class BlackBoxClassifier(Protocol):
    """Anything that maps a series to a class id in ``{0, 1}``.

    Counterfactual generation only ever calls :meth:`predict`; no gradients,
    probabilities or activations are part of the contract. ``series_length``
    may be ``None`` if the model accepts any length.
    """

    series_length: Optional[int]

    def predict(self, x: np.ndarray) -> int: ...


class OneNNClassifier:
    """1-NN under squared Euclidean distance; ties go to the lowest training index."""

    def __init__(self, train: LabeledDataset):
        self._X = train.series
        self._y = train.labels
        self.series_length = train.m

    def _nearest(self, x: np.ndarray) -> int:
        d = ((self._X - x) ** 2).sum(axis=1)
        return int(np.argmin(d))

    def predict(self, x) -> int:
        x = as_series(x)
        if x.size != self.series_length:
            raise DimensionError(f"expected length {self.series_length}, got {x.size}")
        return int(self._y[self._nearest(x)])


def train_1nn(train: LabeledDataset) -> OneNNClassifier:
    return OneNNClassifier(train)


def predict_batch(f: BlackBoxClassifier, xs: Sequence) -> list[int]:
    """Apply ``f.predict`` to each series, preserving order.

    Raises :class:`DimensionError` naming the first series whose length does
    not match ``f.series_length``.
    """
    expected = getattr(f, "series_length", None)
    out = []
    for i, x in enumerate(xs):
        x = np.asarray(x, dtype=np.float64)
        if expected is not None and x.shape != (expected,):
            raise DimensionError(f"series {i}: expected length {expected}, got shape {x.shape}")
        out.append(int(f.predict(x)))
    return out

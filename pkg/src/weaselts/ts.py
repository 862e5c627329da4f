"""Time-series containers, z-normalization, and window extraction.

Window offsets are 1-based throughout the public API.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericInputError, ShapeError, WindowLengthError

DEFAULT_EPSILON = 1e-8


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A univariate sequence of finite float64 values."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ShapeError("a time series must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise NumericInputError("time series values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True, eq=False)
class Window:
    """A contiguous view into a series; ``offset`` is 1-based."""

    offset: int
    values: np.ndarray

    @property
    def length(self) -> int:
        return int(self.values.shape[0])


class LabeledDataset:
    """Parallel lists of series and string class labels."""

    def __init__(self, series, labels):
        series = list(series)
        labels = [str(lab) for lab in labels]
        if len(series) != len(labels):
            raise ValueError("series and labels must have equal length")
        if not series:
            raise ValueError("dataset must contain at least one sample")
        self.series = [s if isinstance(s, TimeSeries) else TimeSeries(s) for s in series]
        self.labels = labels

    @classmethod
    def from_samples(cls, samples) -> "LabeledDataset":
        series, labels = zip(*samples)
        return cls(series, labels)

    @property
    def samples(self):
        return list(zip(self.series, self.labels))

    def classes(self):
        return sorted(set(self.labels))

    def lengths(self):
        return [s.n for s in self.series]

    def equal_length(self) -> bool:
        ns = self.lengths()
        return min(ns) == max(ns)

    def values_matrix(self) -> np.ndarray:
        if not self.equal_length():
            raise ValueError("dataset has ragged series lengths")
        return np.stack([s.values for s in self.series])

    def subset(self, indices) -> "LabeledDataset":
        return LabeledDataset(
            [self.series[i] for i in indices], [self.labels[i] for i in indices]
        )

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self):
        return iter(self.samples)


def _check_window_length(n: int, w: int) -> None:
    if w < 1:
        raise WindowLengthError(f"window length must be >= 1, got {w}")
    if w > n:
        raise WindowLengthError(f"window length {w} exceeds series length {n}")


def sliding_windows(ts: TimeSeries, w: int):
    """All windows of length ``w`` at offsets 1 .. n - w + 1."""
    _check_window_length(ts.n, w)
    return [Window(a + 1, ts.values[a : a + w]) for a in range(ts.n - w + 1)]


def disjoint_windows(ts: TimeSeries, w: int):
    """Non-overlapping windows at offsets 1, w + 1, 2w + 1, ...

    Unlike ``sliding_windows``, a window longer than the series is not
    an error: there are simply zero disjoint windows and the caller
    treats that length as unfittable.
    """
    if w < 1:
        raise WindowLengthError(f"window length must be >= 1, got {w}")
    return [Window(a + 1, ts.values[a : a + w]) for a in range(0, ts.n - w + 1, w)]


def znormalize(values, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Shift to mean zero and scale to unit standard deviation.

    The standard deviation is the population form (divide by the window
    length). A window whose deviation is at or below ``epsilon`` maps to
    the all-zero vector instead of blowing up.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ShapeError("znormalize expects a nonempty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise NumericInputError("znormalize input must be finite")
    sd = x.std()
    if sd <= epsilon:
        return np.zeros_like(x)
    return (x - x.mean()) / sd


def znormalize_rows(mat: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> np.ndarray:
    """Row-wise ``znormalize`` for a stack of equal-length windows."""
    mu = mat.mean(axis=1, keepdims=True)
    sd = mat.std(axis=1, keepdims=True)
    flat = sd <= epsilon
    return np.where(flat, 0.0, (mat - mu) / np.where(flat, 1.0, sd))

"""Chi-squared feature filtering and sparse vectorization.

Each candidate word key is scored with a 2 x k contingency table: the
key's per-class occurrence totals against the per-class totals of all
other words. Keys scoring at or above the threshold survive and are
assigned contiguous column indices in descending-score order (ties by
key value), which fixes the layout of the classifier's input space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import InsufficientClassesError
from .bop import BagOfPatterns

DEFAULT_CHI2_THRESHOLD = 2.0


def chi_squared_stats(observed: np.ndarray, class_totals: np.ndarray) -> np.ndarray:
    """Per-feature chi-squared statistics, vectorized over features.

    ``observed[c, f]`` counts feature ``f`` in class ``c``;
    ``class_totals[c]`` is the total word mass of class ``c``. Cells
    with zero expectation contribute nothing.
    """
    observed = np.asarray(observed, dtype=np.float64)
    class_totals = np.asarray(class_totals, dtype=np.float64)[:, None]
    grand = class_totals.sum()
    feature_totals = observed.sum(axis=0, keepdims=True)
    other = class_totals - observed
    exp_feat = feature_totals * class_totals / grand
    exp_other = (grand - feature_totals) * class_totals / grand
    with np.errstate(divide="ignore", invalid="ignore"):
        top = np.where(exp_feat > 0, (observed - exp_feat) ** 2 / exp_feat, 0.0)
        bottom = np.where(exp_other > 0, (other - exp_other) ** 2 / exp_other, 0.0)
    return (top + bottom).sum(axis=0)


@dataclass(eq=False)
class FeatureDictionary:
    """Retained keys in column order, with their scores."""

    keys: np.ndarray
    chi2: np.ndarray
    n_candidates: int
    _sorted_keys: np.ndarray = field(init=False, repr=False)
    _sorted_cols: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        order = np.argsort(self.keys, kind="stable")
        self._sorted_keys = self.keys[order]
        self._sorted_cols = order

    def __len__(self) -> int:
        return int(self.keys.size)

    def column_of(self, key: int) -> int:
        """Column index of ``key`` or -1 when filtered out."""
        pos = np.searchsorted(self._sorted_keys, key)
        if pos < self._sorted_keys.size and self._sorted_keys[pos] == key:
            return int(self._sorted_cols[pos])
        return -1

    def lookup(self, keys: np.ndarray):
        """Columns for a key array; returns (mask, columns)."""
        keys = np.asarray(keys, dtype=np.int64)
        if self._sorted_keys.size == 0:
            return np.zeros(keys.size, dtype=bool), np.zeros(keys.size, dtype=np.int64)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self._sorted_keys.size - 1)
        mask = self._sorted_keys[pos] == keys
        return mask, self._sorted_cols[pos]


def chi_squared_filter(bags, labels, threshold: float = DEFAULT_CHI2_THRESHOLD) -> FeatureDictionary:
    """Score every key across the training bags and keep the strong ones."""
    labels = np.asarray([str(lab) for lab in labels])
    classes, class_ids = np.unique(labels, return_inverse=True)
    if classes.size < 2:
        raise InsufficientClassesError("chi-squared filtering needs >= 2 classes")
    if len(bags) != labels.size:
        raise ValueError("bags and labels must be parallel")

    all_keys = np.concatenate([b.keys for b in bags])
    all_counts = np.concatenate([b.counts for b in bags]).astype(np.float64)
    owner = np.concatenate(
        [np.full(len(b), cid, dtype=np.int64) for b, cid in zip(bags, class_ids)]
    )
    vocab, inverse = np.unique(all_keys, return_inverse=True)
    observed = np.zeros((classes.size, vocab.size))
    for cid in range(classes.size):
        sel = owner == cid
        observed[cid] = np.bincount(
            inverse[sel], weights=all_counts[sel], minlength=vocab.size
        )
    stats = chi_squared_stats(observed, observed.sum(axis=1))
    keep = stats >= threshold
    kept_keys = vocab[keep]
    kept_stats = stats[keep]
    order = np.lexsort((kept_keys, -kept_stats))
    return FeatureDictionary(kept_keys[order], kept_stats[order], int(vocab.size))


def vectorize(bag: BagOfPatterns, features: FeatureDictionary) -> sparse.csr_matrix:
    """Counts of the retained keys as a 1 x m sparse row."""
    mask, cols = features.lookup(bag.keys)
    data = bag.counts[mask].astype(np.float64)
    return sparse.csr_matrix(
        (data, (np.zeros(data.size, dtype=np.int64), cols[mask])),
        shape=(1, len(features)),
    )


def vectorize_all(bags, features: FeatureDictionary) -> sparse.csr_matrix:
    """Stack ``vectorize`` rows for many bags efficiently."""
    data, indices, indptr = [], [], [0]
    for bag in bags:
        mask, cols = features.lookup(bag.keys)
        cc = cols[mask]
        order = np.argsort(cc, kind="stable")
        indices.append(cc[order])
        data.append(bag.counts[mask][order].astype(np.float64))
        indptr.append(indptr[-1] + cc.size)
    if not data:
        return sparse.csr_matrix((0, len(features)))
    return sparse.csr_matrix(
        (np.concatenate(data), np.concatenate(indices), np.asarray(indptr)),
        shape=(len(bags), len(features)),
    )

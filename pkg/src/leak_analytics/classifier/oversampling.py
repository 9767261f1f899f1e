"""Seeded random oversampling of the minority class."""

from typing import Tuple

import numpy as np
from sklearn.utils import resample

from ..errors import ClassifierError


def oversample_indices(y: np.ndarray, seed: int) -> np.ndarray:
    """Row positions of the balanced training set: all rows, then minority draws.

    Raises:
        ClassifierError: Fewer than two classes
    """
    y = np.asarray(y)
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise ClassifierError("oversampling needs two classes")
    positions = np.arange(len(y))
    if counts.min() == counts.max():
        return positions
    minority = classes[int(np.argmin(counts))]
    pool = np.flatnonzero(y == minority)
    extra = resample(
        pool, replace=True, n_samples=int(counts.max() - counts.min()), random_state=seed
    )
    return np.concatenate([positions, extra])


def oversample_minority(X: np.ndarray, y: np.ndarray, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Replicate minority rows (with replacement) until both classes are equal in size."""
    order = oversample_indices(y, seed)
    return np.asarray(X)[order], np.asarray(y)[order]

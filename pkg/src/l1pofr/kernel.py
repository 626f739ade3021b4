"""Gaussian RBF candidate regressors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import Dataset
from .errors import DataError


@dataclass(frozen=True)
class RbfConfig:
    """Kernel width and which training rows serve as centers.

    ``centers=None`` places one unit on every training point.
    """

    width: float
    centers: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.width > 0:
            raise DataError(f"RBF width must be positive, got {self.width}")
        if self.centers is not None:
            object.__setattr__(self, "centers", tuple(int(i) for i in self.centers))
            if len(self.centers) == 0:
                raise DataError("empty center list")


@dataclass(frozen=True)
class DesignMatrix:
    values: np.ndarray   # N x M
    centers: np.ndarray  # M x m
    width: float
    center_indices: np.ndarray | None = None

    @property
    def shape(self):
        return self.values.shape


def rbf_features(x: np.ndarray, centers: np.ndarray, width: float) -> np.ndarray:
    """``exp(-||x - c||^2 / (2 width^2))`` for every (row of x, center) pair."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    return np.exp(-cdist(x, centers, "sqeuclidean") / (2.0 * width**2))


def build_design_matrix(d: Dataset, cfg: RbfConfig) -> DesignMatrix:
    if cfg.centers is None:
        idx = np.arange(d.n_samples)
    else:
        idx = np.asarray(cfg.centers)
        if idx.min() < 0 or idx.max() >= d.n_samples:
            raise DataError("center index outside the training data")
    centers = d.inputs[idx]
    return DesignMatrix(rbf_features(d.inputs, centers, cfg.width), centers, cfg.width, idx)

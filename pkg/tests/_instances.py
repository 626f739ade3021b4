"""Random RBF regression problems shared by the test modules."""

import numpy as np

from l1pofr.dataset import Dataset
from l1pofr.kernel import RbfConfig, build_design_matrix


def rbf_problem(seed, n_samples=40, n_centers=15, width=0.5, noise=0.05, dim=2):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1, 1, size=(n_samples, dim))
    y = np.sin(3 * x[:, 0]) + x[:, 1] ** 2 + noise * rng.normal(size=n_samples)
    centers = rng.choice(n_samples, size=n_centers, replace=False)
    dm = build_design_matrix(Dataset(x, y), RbfConfig(width, tuple(sorted(centers))))
    return dm, y

"""Regression datasets: CSV ingestion, normalization, splitting and synthetic data."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class Dataset:
    """N input vectors of dimension m with N scalar targets."""

    inputs: np.ndarray
    targets: np.ndarray
    feature_names: list[str] | None = field(default=None, compare=False)

    def __post_init__(self):
        inputs = np.asarray(self.inputs, dtype=float)
        targets = np.asarray(self.targets, dtype=float).ravel()
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        if inputs.ndim != 2:
            raise DataError(f"inputs must be a 2-D array, got shape {inputs.shape}")
        if inputs.shape[0] < 1 or inputs.shape[1] < 1:
            raise DataError("empty dataset")
        if inputs.shape[0] != targets.shape[0]:
            raise DataError(
                f"inputs have {inputs.shape[0]} rows but targets have {targets.shape[0]}"
            )
        if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(targets))):
            raise DataError("non-finite value in dataset")
        if self.feature_names is not None and len(self.feature_names) != inputs.shape[1]:
            raise DataError("feature_names length does not match input dimension")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "targets", targets)

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_features(self) -> int:
        return self.inputs.shape[1]

    def subset(self, rows) -> "Dataset":
        return Dataset(self.inputs[rows], self.targets[rows], self.feature_names)


@dataclass(frozen=True)
class NormalizationParams:
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).ravel()
        std = np.asarray(self.std, dtype=float).ravel()
        if mean.shape != std.shape:
            raise DataError("mean and std must have the same length")
        if np.any(~(std > 0)):
            raise DataError("standard deviations must be positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    def invert(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) * self.std + self.mean

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationParams":
        return cls(np.array(d["mean"], dtype=float), np.array(d["std"], dtype=float))


# ---------------------------------------------------------------------------
# CSV

def _split_rows(path: Path, delimiter: str | None) -> list[list[str]]:
    with open(path, newline="") as fh:
        if delimiter is None:
            rows = [line.split() for line in fh]
        else:
            rows = [row for row in csv.reader(fh, delimiter=delimiter)]
    return [[cell.strip() for cell in row] for row in rows if any(c.strip() for c in row)]


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_csv_matrix(path, delimiter: str | None = ","):
    """Read a delimited numeric file, returning ``(header, values)``.

    ``header`` is ``None`` when the first row is numeric. Zero data rows are
    allowed here; ``values`` then has shape ``(0, n_columns)``.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    rows = _split_rows(path, delimiter)
    if not rows:
        return None, np.empty((0, 0))
    header = None
    if not all(_is_number(c) for c in rows[0]):
        header = rows[0]
        rows = rows[1:]
    width = len(header) if header is not None else len(rows[0])
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataError(f"{path}: row {i + 1} has {len(row)} cells, expected {width}")
        for j, cell in enumerate(row):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise DataError(f"{path}: non-numeric cell {cell!r} at row {i + 1}, column {j + 1}")
    if not np.all(np.isfinite(values)):
        i, j = np.argwhere(~np.isfinite(values))[0]
        raise DataError(f"{path}: non-finite value at row {i + 1}, column {j + 1}")
    return header, values


def _column_index(header, width, column) -> int:
    if isinstance(column, (int, np.integer)):
        idx = int(column)
        if idx < 0:
            idx += width
        if not 0 <= idx < width:
            raise DataError(f"target column {column} out of range for {width} columns")
        return idx
    if header is not None and column in header:
        return header.index(column)
    if isinstance(column, str) and column.lstrip("-").isdigit():
        return _column_index(header, width, int(column))
    raise DataError(f"target column {column!r} absent")


def load_csv(path, target_column, delimiter: str | None = ",") -> Dataset:
    """Load a dataset whose targets come from ``target_column``.

    ``target_column`` is a header name or a (possibly negative) integer
    index. Every other column becomes an input feature. ``delimiter=None``
    splits on runs of whitespace.
    """
    header, values = read_csv_matrix(path, delimiter)
    if values.shape[0] == 0:
        raise DataError(f"{path}: empty dataset")
    t = _column_index(header, values.shape[1], target_column)
    keep = [j for j in range(values.shape[1]) if j != t]
    if not keep:
        raise DataError(f"{path}: no input columns besides the target")
    names = [header[j] for j in keep] if header is not None else None
    return Dataset(values[:, keep], values[:, t], names)


def load_boston() -> Dataset:
    """The 506-row Boston Housing data; the target is MEDV."""
    ref = resources.files("l1pofr").joinpath("data/boston_housing.csv")
    with resources.as_file(ref) as path:
        return load_csv(path, "MEDV")


# ---------------------------------------------------------------------------
# transforms

def fit_normalization(inputs: np.ndarray, feature_names=None) -> NormalizationParams:
    inputs = np.asarray(inputs, dtype=float)
    if inputs.shape[0] < 2:
        raise DataError("normalization needs at least two rows")
    mean = inputs.mean(axis=0)
    std = inputs.std(axis=0, ddof=1)
    bad = np.flatnonzero(~(std > 0))
    if bad.size:
        j = int(bad[0])
        name = f" ({feature_names[j]})" if feature_names else ""
        raise DataError(f"constant feature column {j}{name}")
    return NormalizationParams(mean, std)


def normalize(d: Dataset) -> tuple[Dataset, NormalizationParams]:
    """Scale every feature to zero mean and unit sample standard deviation."""
    params = fit_normalization(d.inputs, d.feature_names)
    return Dataset(params.apply(d.inputs), d.targets, d.feature_names), params


def apply_normalization(d: Dataset, params: NormalizationParams) -> Dataset:
    return Dataset(params.apply(d.inputs), d.targets, d.feature_names)


def denormalize(d: Dataset, params: NormalizationParams) -> Dataset:
    return Dataset(params.invert(d.inputs), d.targets, d.feature_names)


def split_indices(n: int, n_train: int, rng_seed) -> tuple[np.ndarray, np.ndarray]:
    if not 1 <= n_train < n:
        raise DataError(f"n_train must satisfy 1 <= n_train < {n}, got {n_train}")
    perm = np.random.default_rng(rng_seed).permutation(n)
    return perm[:n_train], perm[n_train:]


def split(d: Dataset, n_train: int, rng_seed) -> tuple[Dataset, Dataset]:
    """Random disjoint train/test partition, reproducible for a fixed seed."""
    train, test = split_indices(d.n_samples, n_train, rng_seed)
    return d.subset(train), d.subset(test)


# ---------------------------------------------------------------------------
# synthetic data

def _sinc(x):
    return np.sinc(x[:, 0] / np.pi)


def _peaks(x):
    a, b = x[:, 0], x[:, 1]
    return (3 * (1 - a) ** 2 * np.exp(-a**2 - (b + 1) ** 2)
            - 10 * (a / 5 - a**3 - b**5) * np.exp(-a**2 - b**2)
            - np.exp(-(a + 1) ** 2 - b**2) / 3)


# name -> (function, input dimension, sampling box)
TEST_FUNCTIONS = {
    "sinc": (_sinc, 1, (-10.0, 10.0)),
    "peaks": (_peaks, 2, (-3.0, 3.0)),
}


@dataclass(frozen=True)
class SyntheticSpec:
    true_function: str = "sinc"
    noise_std: float = 0.0
    n_samples: int = 100
    n_features: int | None = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.true_function not in TEST_FUNCTIONS:
            raise DataError(
                f"unknown function {self.true_function!r}; choose from {sorted(TEST_FUNCTIONS)}"
            )
        dim = TEST_FUNCTIONS[self.true_function][1]
        if self.n_features is not None and self.n_features != dim:
            raise DataError(f"{self.true_function} is {dim}-dimensional, got m={self.n_features}")
        if not self.noise_std >= 0:
            raise DataError("noise_std must be non-negative")
        if self.n_samples < 1:
            raise DataError("n_samples must be at least 1")


def true_function(name: str):
    try:
        return TEST_FUNCTIONS[name][0]
    except KeyError:
        raise DataError(f"unknown function {name!r}") from None


def synthesize(spec: SyntheticSpec) -> Dataset:
    """Draw inputs uniformly over the function's box and add Gaussian noise."""
    f, dim, (lo, hi) = TEST_FUNCTIONS[spec.true_function]
    rng = np.random.default_rng(spec.rng_seed)
    x = rng.uniform(lo, hi, size=(spec.n_samples, dim))
    y = f(x)
    if spec.noise_std > 0:
        y = y + rng.normal(0.0, spec.noise_std, size=spec.n_samples)
    return Dataset(x, y)


def engine_regressors(u: np.ndarray, y: np.ndarray) -> Dataset:
    """Lagged regressors ``x(k) = [y(k-1), u(k-1), u(k-2)]`` with target ``y(k)``."""
    u = np.asarray(u, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if u.shape != y.shape or u.size < 3:
        raise DataError("u and y must be equal-length series with at least 3 samples")
    x = np.column_stack([y[1:-1], u[1:-1], u[:-2]])
    return Dataset(x, y[2:], ["y(k-1)", "u(k-1)", "u(k-2)"])


def load_engine(path, delimiter: str | None = None) -> tuple[Dataset, Dataset]:
    """Train/test sets for the engine recipe from a two-column ``u y`` file.

    Samples 1..210 feed the training rows (208 after the two-step lag) and
    the last 200 samples are the test rows.
    """
    _, values = read_csv_matrix(path, delimiter)
    if values.ndim != 2 or values.shape[1] < 2 or values.shape[0] < 213:
        raise DataError(f"{path}: expected at least 213 rows of (u, y) pairs")
    full = engine_regressors(values[:, 0], values[:, 1])
    n_test = 200
    n_lagged_train = 210 - 2
    train = full.subset(slice(0, n_lagged_train))
    test = full.subset(slice(full.n_samples - n_test, full.n_samples))
    return train, test

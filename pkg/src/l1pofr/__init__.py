"""Sparse RBF regression by l1-penalized orthogonal forward regression (l1-POFR)."""

from .dataset import (
    Dataset, NormalizationParams, SyntheticSpec, load_boston, load_csv, normalize, split,
    synthesize,
)
from .errors import DataError, LeverageSaturationError, ModelFileError, SingularLooError
from .kernel import DesignMatrix, RbfConfig, build_design_matrix
from .modelfile import load_model, save_model
from .ofr import L1PofrConfig, SparseModel, StageCandidate, predict, run_l1pofr

__all__ = [
    "Dataset", "NormalizationParams", "SyntheticSpec", "load_boston", "load_csv", "normalize",
    "split", "synthesize", "DataError", "LeverageSaturationError", "ModelFileError",
    "SingularLooError", "DesignMatrix", "RbfConfig", "build_design_matrix", "load_model",
    "save_model", "L1PofrConfig", "SparseModel", "StageCandidate", "predict", "run_l1pofr",
]

__version__ = "0.1.0"

"""JSON persistence for fitted sparse models."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dataset import NormalizationParams
from .errors import ModelFileError
from .ofr import SparseModel

FORMAT_NAME = "l1pofr-model"
FORMAT_VERSION = 1

# diagnostics worth keeping on disk; the rest are per-run bookkeeping
_DIAGNOSTIC_KEYS = (
    "epsilon", "lambdas", "loomse_history", "g_olasso", "train_mse", "termination",
    "stages_run", "inactive_sizes", "n_evaluations", "n_evaluations_unpruned", "seed",
    "feature_names", "target",
)


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def model_to_dict(model: SparseModel) -> dict:
    if model.n_terms and model.centers is None:
        raise ModelFileError("cannot save a model without center vectors")
    centers = model.centers if model.centers is not None else np.empty((0, 0))
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "width": float(model.width),
        "center_indices": _plain(np.asarray(model.center_indices, dtype=int)),
        "centers": _plain(centers),
        "theta": _plain(np.asarray(model.theta, dtype=float)),
        "normalization": model.normalization.to_dict() if model.normalization else None,
        "diagnostics": {k: _plain(model.diagnostics[k]) for k in _DIAGNOSTIC_KEYS
                        if k in model.diagnostics},
    }


def model_from_dict(d: dict) -> SparseModel:
    try:
        if d.get("format") != FORMAT_NAME:
            raise ModelFileError("not an l1pofr model file")
        if d.get("format_version") != FORMAT_VERSION:
            raise ModelFileError(f"unsupported format_version {d.get('format_version')!r}")
        theta = np.array(d["theta"], dtype=float).ravel()
        centers = np.array(d["centers"], dtype=float)
        if theta.size:
            centers = centers.reshape(theta.size, -1)
        else:
            centers = centers.reshape(0, -1) if centers.size else None
        norm = d.get("normalization")
        model = SparseModel(
            center_indices=np.array(d["center_indices"], dtype=int),
            theta=theta,
            width=float(d["width"]),
            centers=centers,
            normalization=NormalizationParams.from_dict(norm) if norm else None,
            diagnostics=dict(d.get("diagnostics", {})),
        )
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"malformed model file: {exc}") from exc
    if model.center_indices.size != theta.size:
        raise ModelFileError("center_indices and theta lengths differ")
    if not (np.all(np.isfinite(theta)) and model.width > 0):
        raise ModelFileError("model weights or width are invalid")
    return model


def save_model(model: SparseModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")


def load_model(path) -> SparseModel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"cannot read model file {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(d, dict):
        raise ModelFileError(f"{path}: top level must be an object")
    return model_from_dict(d)

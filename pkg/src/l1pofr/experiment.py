"""Repeated train/test experiments and leave-one-out audits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import (
    Dataset, SyntheticSpec, load_csv, load_engine, normalize,
    split, synthesize,
)
from .errors import DataError, SingularLooError
from .kernel import RbfConfig, build_design_matrix
from .ofr import L1PofrConfig, SparseModel, cost_saving, init_state, run_l1pofr, select_stage
from .oracle import literal_loo, press_errors


def fit(train: Dataset, width: float, cfg: L1PofrConfig, normalize_inputs=True) -> SparseModel:
    """Fit a model with one RBF candidate per training point."""
    params = None
    if normalize_inputs:
        train, params = normalize(train)
    dm = build_design_matrix(train, RbfConfig(width))
    model = run_l1pofr(dm, train.targets, cfg)
    model.normalization = params
    return model


def mse(model: SparseModel, d: Dataset) -> float:
    return float(np.mean((model.predict(d.inputs) - d.targets) ** 2))


@dataclass
class ExperimentConfig:
    width: float
    epsilons: tuple = (1e-4,)
    data_path: str | None = None
    target: str | int = -1
    delimiter: str | None = ","
    synthetic: SyntheticSpec | None = None
    n_train: int | None = None
    realizations: int = 1
    seed: int = 0
    normalize: bool = True
    patience: int = 1
    pruning: bool = True
    max_terms: int | None = None

    def __post_init__(self):
        if self.realizations < 1:
            raise DataError("realizations must be >= 1")
        if (self.data_path is None) == (self.synthetic is None):
            raise DataError("give exactly one of a data file or a synthetic dataset")
        self.epsilons = tuple(float(e) for e in np.atleast_1d(self.epsilons))

    def load(self) -> Dataset:
        if self.synthetic is not None:
            return synthesize(self.synthetic)
        return load_csv(self.data_path, self.target, self.delimiter)


@dataclass
class ExperimentRow:
    epsilon: float
    train_mse: np.ndarray
    test_mse: np.ndarray
    size: np.ndarray
    evaluations: np.ndarray = field(repr=False)
    evaluations_unpruned: np.ndarray = field(repr=False)

    @property
    def cost_saving(self) -> float:
        full = self.evaluations_unpruned.sum()
        return 0.0 if full == 0 else float(1 - self.evaluations.sum() / full)


def realization_seeds(seed: int, realizations: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(realizations)
    return [int(c.generate_state(1)[0]) for c in children]


def run_experiment(cfg: ExperimentConfig, data: Dataset | None = None) -> list[ExperimentRow]:
    """Split, normalize with train-fit statistics, fit and score each realization.

    Every epsilon sees the same sequence of splits.
    """
    data = data if data is not None else cfg.load()
    n_train = cfg.n_train if cfg.n_train is not None else int(round(0.9 * data.n_samples))
    seeds = realization_seeds(cfg.seed, cfg.realizations)
    splits = [split(data, n_train, s) for s in seeds]
    rows = []
    for eps in cfg.epsilons:
        ocfg = L1PofrConfig(eps, termination_patience=cfg.patience,
                            max_terms=cfg.max_terms, pruning_enabled=cfg.pruning)
        stats = []
        for train, test in splits:
            model = fit(train, cfg.width, ocfg, cfg.normalize)
            d = model.diagnostics
            stats.append((d["train_mse"], mse(model, test), model.n_terms,
                          d["n_evaluations"], d["n_evaluations_unpruned"]))
        a = np.array(stats, dtype=float)
        rows.append(ExperimentRow(eps, a[:, 0], a[:, 1], a[:, 2],
                                  a[:, 3].astype(int), a[:, 4].astype(int)))
    return rows


def _pm(x: np.ndarray) -> str:
    # sorted so the reduction does not depend on realization order
    x = np.sort(x)
    return f"{np.mean(x):.6g} ± {np.std(x):.6g}"


def format_table(rows: list[ExperimentRow]) -> str:
    header = ("epsilon", "MSE training set", "MSE test set", "model size")
    body = [(f"{r.epsilon:.6g}", _pm(r.train_mse), _pm(r.test_mse), _pm(r.size)) for r in rows]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(4)]
    fmt = " | ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*header), "-+-".join("-" * w for w in widths)]
    out += [fmt.format(*line) for line in body]
    return "\n".join(out)


def format_costs(rows: list[ExperimentRow]) -> str:
    return "\n".join(
        f"epsilon {r.epsilon:.6g}: {int(r.evaluations.sum())} candidate evaluations "
        f"({int(r.evaluations_unpruned.sum())} without the inactive set, "
        f"saving {100 * r.cost_saving:.1f}%)"
        for r in rows
    )


# ---------------------------------------------------------------------------
# engine data recipe

ENGINE_WIDTH = 2.5


def run_engine(path, epsilon=1e-4, width=ENGINE_WIDTH, patience=1, delimiter=None) -> dict:
    """Fit the lagged engine model on raw (unnormalized) data and score it."""
    train, test = load_engine(path, delimiter)
    cfg = L1PofrConfig(epsilon, termination_patience=patience)
    model = fit(train, width, cfg, normalize_inputs=False)
    return {
        "epsilon": epsilon,
        "train_mse": model.diagnostics["train_mse"],
        "test_mse": mse(model, test),
        "size": model.n_terms,
        "cost_saving": cost_saving(model),
        "model": model,
    }


# ---------------------------------------------------------------------------
# LOO audit

@dataclass
class AuditStage:
    stage: int
    analytic_loomse: float
    literal_loomse: float | None
    max_relative_discrepancy: float | None
    sign_agreement: float | None
    press_discrepancy: float | None
    saturated_candidates: int
    max_leverage: float = 0.0
    singular_sample: int | None = None


def loo_audit(phi, y, cfg: L1PofrConfig, stages: int) -> list[AuditStage]:
    """Run ``stages`` engine stages and refit the LOO models literally after each."""
    state = init_state(phi, y)
    y = state.targets
    out = []
    for n in range(1, stages + 1):
        cand = select_stage(state, cfg)
        if cand is None:
            break
        W = state.W_matrix()
        rec = AuditStage(n, cand.loomse, None, None, None, None, state.saturated_counts[-1],
                         float(1.0 - state.zeta.min()))
        try:
            rep = literal_loo(W, y, state.lambdas)
            rec.literal_loomse = rep.literal_loomse
            rep_engine = abs(rep.literal_loomse - cand.loomse) / max(rep.literal_loomse, 1e-300)
            rec.max_relative_discrepancy = max(rep.max_relative_discrepancy, rep_engine)
            rec.sign_agreement = float(np.mean(rep.sign_agreement))
            zero = literal_loo(W, y, np.zeros(n))
            press = press_errors(W, y)
            rec.press_discrepancy = float(np.max(np.abs(zero.literal_errors - press))
                                          / max(np.max(np.abs(press)), 1e-300))
        except SingularLooError as exc:
            rec.singular_sample = exc.k
        out.append(rec)
    return out


def format_audit(records: list[AuditStage]) -> str:
    def f(v):
        return "n/a" if v is None else f"{v:.6g}"
    lines = ["stage | analytic LOOMSE | literal LOOMSE | max rel discrepancy | sign agreement | PRESS discrepancy"]
    for r in records:
        lines.append(f"{r.stage} | {f(r.analytic_loomse)} | {f(r.literal_loomse)} | "
                     f"{f(r.max_relative_discrepancy)} | {f(r.sign_agreement)} | {f(r.press_discrepancy)}")
    return "\n".join(lines)

"""l1-penalized orthogonal forward regression with analytic LOOMSE.

Each stage orthogonalizes the remaining candidate regressors against the
terms chosen so far, picks a per-candidate l1 regularizer in closed form by
minimizing the leave-one-out mean square error (LOOMSE), and keeps the
candidate with the smallest LOOMSE. Candidates whose norm-correlation bound
falls below ``epsilon / 2`` can never be selected again and are moved to an
inactive set.

Scalar helpers accept either one column (shape ``(N,)``) or a block of
columns (shape ``(N, c)``); the stage loop evaluates all candidates as one
block through the same code.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .dataset import NormalizationParams
from .errors import DataError, LeverageSaturationError
from .kernel import DesignMatrix, rbf_features

LEVERAGE_FLOOR = 1e-10


class Disposition(enum.Enum):
    SCORED = "scored"
    EXCLUDED = "excluded"   # sentinel LOOMSE for this stage, stays in the pool
    INACTIVE = "inactive"   # permanently removed


@dataclass
class L1PofrConfig:
    epsilon: float = 1e-4
    termination_patience: int = 1
    max_terms: int | None = None
    orthogonality_floor: float | None = None  # None -> 1e-12 * N
    pruning_enabled: bool = True

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be >= 0")
        if self.termination_patience < 1:
            raise ValueError("termination_patience must be >= 1")
        if self.max_terms is not None and self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if self.orthogonality_floor is not None and not self.orthogonality_floor > 0:
            raise ValueError("orthogonality_floor must be > 0")

    def floor_for(self, n_samples: int) -> float:
        if self.orthogonality_floor is not None:
            return self.orthogonality_floor
        return 1e-12 * n_samples


@dataclass
class StageCandidate:
    j: int
    alpha: float
    beta: float
    kappa: float
    g_ls: float = 0.0
    lambda_opt: float = float("nan")
    g_shrunk: float = 0.0
    loomse: float | None = None  # None is the "excluded" marker
    disposition: Disposition = Disposition.EXCLUDED
    reason: str = ""


# ---------------------------------------------------------------------------
# scalar / block primitives

def soft_threshold(g_ls, lam, kappa):
    """``(|g_ls| - (lam/2)/kappa)_+ * sign(g_ls)``."""
    g_ls = np.asarray(g_ls, dtype=float)
    out = np.maximum(np.abs(g_ls) - 0.5 * np.asarray(lam) / kappa, 0.0) * np.sign(g_ls)
    return float(out) if out.ndim == 0 else out


def check_prune(candidate_norm: float, residual_norm: float, epsilon: float) -> bool:
    """True when the candidate can never be selected at this or any later stage."""
    return candidate_norm * residual_norm < epsilon / 2


def candidate_stats(column, residual, orthogonality_floor: float = 0.0):
    """Return ``(alpha, beta, kappa, g_ls)``; ``g_ls`` is NaN for a degenerate column."""
    column = np.asarray(column, dtype=float)
    residual = np.asarray(residual, dtype=float)
    if column.shape[0] != residual.shape[0]:
        raise ValueError("column and residual lengths differ")
    alpha = column.T @ residual
    kappa = np.einsum("i...,i...->...", column, column)
    beta = np.sqrt(kappa) * np.linalg.norm(residual)
    with np.errstate(divide="ignore", invalid="ignore"):
        g_ls = np.where(kappa > orthogonality_floor, alpha / kappa, np.nan)
    if column.ndim == 1:
        return float(alpha), float(beta), float(kappa), float(g_ls)
    return alpha, beta, kappa, g_ls


def _as_block(column, *vectors):
    column = np.asarray(column, dtype=float)
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if column.ndim == 2:
        vectors = [v[:, None] for v in vectors]
    return column, vectors


def _gamma_sq(zeta_prev, column, kappa):
    """Squared LOO amplification factors plus per-column saturation flags."""
    column, (zeta,) = _as_block(column, zeta_prev)
    denom = zeta - column**2 / kappa
    saturated = denom <= LEVERAGE_FLOOR
    with np.errstate(divide="ignore"):
        g2 = 1.0 / np.where(saturated, np.nan, denom) ** 2
    return g2, denom, saturated


def gamma_weights(zeta_prev, column, kappa):
    """Diagonal of the LOOMSE weighting matrix for one candidate column."""
    g2, denom, saturated = _gamma_sq(zeta_prev, column, kappa)
    if np.ndim(column) == 1 and saturated.any():
        k = int(np.flatnonzero(saturated)[0])
        raise LeverageSaturationError(k, denom[k])
    return g2


def _interior_lambda(column, residual, g2, kappa, g_ls):
    column, (r,) = _as_block(column, residual)
    eta = r - g_ls * column
    num = np.sum(column * g2 * eta, axis=0)
    den = np.sum(column * g2 * column, axis=0)
    return -2.0 * np.sign(g_ls) * kappa * num / den


def _clamp_lambda(interior, alpha, epsilon):
    return np.maximum(np.minimum(2.0 * np.abs(alpha), interior), epsilon)


def optimal_lambda(column, residual, zeta_prev, kappa, g_ls, epsilon):
    """Closed-form LOOMSE-optimal regularizer, clamped to ``[epsilon, 2|alpha|]``."""
    g2 = gamma_weights(zeta_prev, column, kappa)
    alpha = np.asarray(column).T @ np.asarray(residual)
    lam = _clamp_lambda(_interior_lambda(column, residual, g2, kappa, g_ls), alpha, epsilon)
    return float(lam) if np.ndim(lam) == 0 else lam


def _weighted_mse(column, residual, g2, g_shrunk):
    column, (r,) = _as_block(column, residual)
    e = r - g_shrunk * column
    return np.mean(g2 * e**2, axis=0)


def stage_loomse(column, residual, zeta_prev, kappa, g_shrunk):
    """Analytic LOOMSE of the stage model ``residual - g_shrunk * column``."""
    g2 = gamma_weights(zeta_prev, column, kappa)
    J = _weighted_mse(column, residual, g2, g_shrunk)
    return float(J) if np.ndim(J) == 0 else J


# ---------------------------------------------------------------------------
# state

@dataclass
class OfrState:
    phi: np.ndarray
    targets: np.ndarray
    working: np.ndarray
    residual: np.ndarray
    zeta: np.ndarray
    pool: np.ndarray  # bool mask of candidates still competing
    selected: list = field(default_factory=list)
    W: list = field(default_factory=list)
    A_rows: list = field(default_factory=list)
    inactive: set = field(default_factory=set)
    g_olasso: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)
    loomse_history: list = field(default_factory=list)
    chosen: list = field(default_factory=list)
    residuals: list = field(default_factory=list)  # e^(0), e^(1), ...
    inactive_sizes: list = field(default_factory=list)
    saturated_counts: list = field(default_factory=list)
    n_evaluations: int = 0
    n_evaluations_unpruned: int = 0

    @property
    def n_terms(self) -> int:
        return len(self.selected)

    def W_matrix(self, n: int | None = None) -> np.ndarray:
        n = self.n_terms if n is None else n
        if n == 0:
            return np.empty((self.phi.shape[0], 0))
        return np.column_stack(self.W[:n])

    def triangular_factor(self, n: int | None = None) -> np.ndarray:
        """Unit upper-triangular factor restricted to the first ``n`` selected columns."""
        n = self.n_terms if n is None else n
        sel = self.selected[:n]
        A = np.eye(n)
        for i in range(n):
            A[i, i + 1:] = self.A_rows[i][sel[i + 1:]]
        return A


def init_state(phi, targets) -> OfrState:
    values = phi.values if isinstance(phi, DesignMatrix) else np.asarray(phi, dtype=float)
    y = np.asarray(targets, dtype=float).ravel()
    if values.ndim != 2 or values.shape[0] == 0:
        raise DataError("design matrix has no rows")
    if values.shape[1] == 0:
        raise DataError("design matrix has no columns")
    if values.shape[0] != y.shape[0]:
        raise DataError(f"design matrix has {values.shape[0]} rows, targets have {y.shape[0]}")
    N, M = values.shape
    return OfrState(
        phi=values, targets=y, working=values.copy(), residual=y.copy(),
        zeta=np.ones(N), pool=np.ones(M, dtype=bool), residuals=[y.copy()],
    )


# ---------------------------------------------------------------------------
# stage

def _evaluate_block(cols, idx, residual, zeta, cfg: L1PofrConfig) -> list[StageCandidate]:
    eps = cfg.epsilon
    N = residual.shape[0]
    alpha, beta, kappa, _ = candidate_stats(cols, residual)
    code = np.full(idx.shape, Disposition.SCORED, dtype=object)
    reason = np.full(idx.shape, "", dtype=object)

    degenerate = kappa <= cfg.floor_for(N)
    pruned = check_prune(np.sqrt(kappa), np.linalg.norm(residual), eps)
    if cfg.pruning_enabled:
        code[degenerate | pruned] = Disposition.INACTIVE
    else:
        code[degenerate] = Disposition.EXCLUDED
    reason[degenerate] = "degenerate column"
    reason[pruned & ~degenerate] = "correlation bound below epsilon/2"

    weak = (code == Disposition.SCORED) & (np.abs(alpha) < eps / 2)
    code[weak] = Disposition.EXCLUDED
    reason[weak] = "|alpha| below epsilon/2"

    g_ls = np.zeros_like(alpha)
    lam = np.full_like(alpha, np.nan)
    g = np.zeros_like(alpha)
    J = np.full_like(alpha, np.nan)

    live = np.flatnonzero(code == Disposition.SCORED)
    if live.size:
        c, a, k = cols[:, live], alpha[live], kappa[live]
        gl = a / k
        g2, _, saturated = _gamma_sq(zeta, c, k)
        sat = saturated.any(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            lm = _clamp_lambda(_interior_lambda(c, residual, g2, k, gl), a, eps)
            gs = soft_threshold(gl, lm, k)
            zero = lm >= 2.0 * np.abs(a)
            Jl = _weighted_mse(c, residual, g2, gs)
        g_ls[live], lam[live], g[live] = gl, lm, gs
        bad = live[sat]
        code[bad] = Disposition.EXCLUDED
        reason[bad] = "leverage saturation"
        shrunk = live[~sat & zero]
        code[shrunk] = Disposition.EXCLUDED
        reason[shrunk] = "optimal lambda shrinks weight to zero"
        J[live] = Jl

    out = []
    for i, j in enumerate(idx):
        scored = code[i] is Disposition.SCORED
        out.append(StageCandidate(
            j=int(j), alpha=float(alpha[i]), beta=float(beta[i]), kappa=float(kappa[i]),
            g_ls=float(g_ls[i]), lambda_opt=float(lam[i]), g_shrunk=float(g[i]),
            loomse=float(J[i]) if scored else None, disposition=code[i], reason=reason[i],
        ))
    return out


def evaluate_candidate(state: OfrState, j: int, cfg: L1PofrConfig) -> StageCandidate:
    """Run the exclusion / lambda / LOOMSE cascade for one candidate."""
    if not state.pool[j]:
        raise ValueError(f"column {j} is already selected or inactive")
    idx = np.array([j])
    return _evaluate_block(state.working[:, idx], idx, state.residual, state.zeta, cfg)[0]


def select_stage(state: OfrState, cfg: L1PofrConfig) -> StageCandidate | None:
    """Evaluate every pooled candidate, select the LOOMSE minimizer and update ``state``.

    Returns the chosen candidate, or ``None`` when no candidate is admissible.
    Ties go to the lowest original column index.
    """
    idx = np.flatnonzero(state.pool)
    state.n_evaluations_unpruned += state.phi.shape[1] - state.n_terms
    if idx.size == 0:
        state.inactive_sizes.append(len(state.inactive))
        state.saturated_counts.append(0)
        return None
    cands = _evaluate_block(state.working[:, idx], idx, state.residual, state.zeta, cfg)
    state.n_evaluations += idx.size

    for c in cands:
        if c.disposition is Disposition.INACTIVE:
            state.inactive.add(c.j)
            state.pool[c.j] = False
    state.inactive_sizes.append(len(state.inactive))
    state.saturated_counts.append(sum(c.reason == "leverage saturation" for c in cands))

    scored = [c for c in cands if c.disposition is Disposition.SCORED]
    if not scored:
        return None
    best = min(scored, key=lambda c: (c.loomse, c.j))

    j = best.j
    w = state.working[:, j].copy()
    wtw = best.kappa
    state.pool[j] = False
    rest = np.flatnonzero(state.pool)
    a_row = np.full(state.phi.shape[1], np.nan)
    a_row[j] = 1.0
    if rest.size:
        a = (w @ state.working[:, rest]) / wtw
        state.working[:, rest] -= np.outer(w, a)
        a_row[rest] = a

    state.residual = state.residual - best.g_shrunk * w
    state.zeta = state.zeta - w**2 / wtw
    state.selected.append(j)
    state.W.append(w)
    state.A_rows.append(a_row)
    state.g_olasso.append(best.g_shrunk)
    state.lambdas.append(best.lambda_opt)
    state.loomse_history.append(best.loomse)
    state.chosen.append(best)
    state.residuals.append(state.residual.copy())
    return best


# ---------------------------------------------------------------------------
# model

def back_substitute(A, g) -> np.ndarray:
    """Solve the unit upper-triangular system ``A theta = g``."""
    g = np.asarray(g, dtype=float)
    if g.size == 0:
        return g.copy()
    return solve_triangular(np.asarray(A, dtype=float), g, lower=False, unit_diagonal=True)


@dataclass
class SparseModel:
    center_indices: np.ndarray
    theta: np.ndarray
    width: float
    centers: np.ndarray | None
    normalization: NormalizationParams | None = None
    diagnostics: dict = field(default_factory=dict)
    state: OfrState | None = field(default=None, repr=False, compare=False)

    @property
    def n_terms(self) -> int:
        return len(self.theta)

    @property
    def n_features(self) -> int | None:
        return None if self.centers is None else self.centers.shape[1]

    def predict(self, x) -> np.ndarray:
        """Predictions for the rows of ``x`` given in the original input space."""
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if self.n_terms == 0:
            out = np.zeros(x.shape[0])
            return out[0] if single else out
        if self.centers is None:
            raise ValueError("model has no center vectors")
        if x.shape[1] != self.centers.shape[1]:
            raise DataError(f"input dimension {x.shape[1]} does not match model dimension {self.centers.shape[1]}")
        if self.normalization is not None:
            x = self.normalization.apply(x)
        out = rbf_features(x, self.centers, self.width) @ self.theta
        return out[0] if single else out


def predict(model: SparseModel, x) -> float | np.ndarray:
    return model.predict(x)


def run_l1pofr(phi, targets, cfg: L1PofrConfig | None = None) -> SparseModel:
    """Build a sparse model by l1-penalized orthogonal forward regression.

    ``phi`` is a :class:`DesignMatrix` or a plain ``N x M`` array (then the
    model carries no centers and can only be inspected, not evaluated at new
    inputs). The LOOMSE of the empty model, ``mean(y**2)``, is the baseline
    the first term has to beat.
    """
    cfg = cfg or L1PofrConfig()
    state = init_state(phi, targets)
    N, M = state.phi.shape
    y = state.targets
    J0 = float(np.mean(y**2))

    termination = "no admissible candidate"
    if not np.any(y):
        warnings.warn("all-zero target vector; returning an empty model", RuntimeWarning)
        termination = "zero targets"
        best_n = 0
    else:
        best_J, best_n, misses = J0, 0, 0
        while True:
            if cfg.max_terms is not None and state.n_terms >= cfg.max_terms:
                termination = "max_terms"
                break
            cand = select_stage(state, cfg)
            if cand is None:
                break
            if cand.loomse < best_J:
                best_J, best_n, misses = cand.loomse, state.n_terms, 0
            else:
                misses += 1
                if misses >= cfg.termination_patience:
                    termination = "loomse"
                    break

    g = np.array(state.g_olasso[:best_n])
    theta = back_substitute(state.triangular_factor(best_n), g)
    sel = np.array(state.selected[:best_n], dtype=int)
    if isinstance(phi, DesignMatrix):
        centers, width = phi.centers[sel], phi.width
    else:
        centers, width = None, float("nan")
    residual = state.residuals[best_n]
    diagnostics = {
        "epsilon": cfg.epsilon,
        "lambdas": list(state.lambdas[:best_n]),
        "loomse_history": list(state.loomse_history[:best_n]),
        "g_olasso": g.tolist(),
        "empty_model_loomse": J0,
        "train_mse": float(np.mean(residual**2)),
        "termination": termination,
        "stages_run": len(state.inactive_sizes),
        "inactive_sizes": list(state.inactive_sizes),
        "n_evaluations": state.n_evaluations,
        "n_evaluations_unpruned": state.n_evaluations_unpruned,
    }
    return SparseModel(sel, theta, width, centers, None, diagnostics, state)


def cost_saving(model: SparseModel) -> float:
    """Fraction of candidate evaluations avoided by the inactive set."""
    d = model.diagnostics
    full = d.get("n_evaluations_unpruned", 0)
    return 0.0 if full == 0 else 1.0 - d["n_evaluations"] / full

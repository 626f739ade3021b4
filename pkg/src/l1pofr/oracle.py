"""Brute-force reference computations for checking the analytic shortcuts.

Nothing here imports the engine's internals: every quantity is recomputed
with dense matrices and explicit linear solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularLooError

LEVERAGE_FLOOR = 1e-10
COND_LIMIT = 1e12


@dataclass
class LooAuditReport:
    literal_errors: np.ndarray
    analytic_errors: np.ndarray
    sign_agreement: np.ndarray
    literal_loomse: float
    analytic_loomse: float
    max_relative_discrepancy: float

    @property
    def all_signs_agree(self) -> bool:
        return bool(np.all(self.sign_agreement))

    @property
    def agreement(self) -> bool:
        return self.all_signs_agree and self.max_relative_discrepancy < 1e-9


def literal_loo(W, y, lambdas) -> LooAuditReport:
    """Refit the penalized orthogonal model N times, once per withheld sample.

    For each k the k-deleted normal matrix ``H - w(k) w(k)^T`` and the
    deflated cross-products ``W^T y - y(k) w(k)`` are solved directly, with
    penalty signs taken from the k-deleted least squares fit. The analytic
    errors ``e(k) / (1 - h_kk)`` use the full-data signs.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    y = np.asarray(y, dtype=float).ravel()
    lam = np.asarray(lambdas, dtype=float).ravel()
    N, n = W.shape
    if n < 1 or lam.size != n or y.size != N:
        raise ValueError("W must be N x n with n >= 1 and len(lambdas) == n")

    H = W.T @ W
    b = W.T @ y
    s_full = np.sign(np.linalg.solve(H, b))
    g_full = np.linalg.solve(H, b - lam * s_full / 2)
    e_full = y - W @ g_full
    hat_diag = np.einsum("ij,ji->i", W, np.linalg.solve(H, W.T))
    with np.errstate(divide="ignore", invalid="ignore"):
        analytic = e_full / (1.0 - hat_diag)

    literal = np.empty(N)
    agree = np.empty(N, dtype=bool)
    for k in range(N):
        wk = W[k]
        Hk = H - np.outer(wk, wk)
        if np.linalg.cond(Hk) > COND_LIMIT:
            raise SingularLooError(k)
        bk = b - y[k] * wk
        try:
            s_k = np.sign(np.linalg.solve(Hk, bk))
            g_k = np.linalg.solve(Hk, bk - lam * s_k / 2)
        except np.linalg.LinAlgError:
            raise SingularLooError(k) from None
        literal[k] = y[k] - g_k @ wk
        agree[k] = np.array_equal(s_k, s_full)

    scale = np.max(np.abs(literal))
    diff = np.max(np.abs(literal - analytic))
    rel = diff / scale if scale > 0 else diff
    return LooAuditReport(
        literal_errors=literal,
        analytic_errors=analytic,
        sign_agreement=agree,
        literal_loomse=float(np.mean(literal**2)),
        analytic_loomse=float(np.mean(analytic**2)),
        max_relative_discrepancy=float(rel),
    )


def press_errors(W, y) -> np.ndarray:
    """Classical leave-one-out residuals of ordinary least squares."""
    W = np.asarray(W, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    Q, _ = np.linalg.qr(W)
    h = np.sum(Q**2, axis=1)
    e = y - Q @ (Q.T @ y)
    return e / (1.0 - h)


def dense_loomse(column, residual, zeta_prev, kappa, lam) -> float:
    """LOOMSE of a stage candidate at regularizer ``lam`` via a dense weight matrix."""
    column = np.asarray(column, dtype=float)
    residual = np.asarray(residual, dtype=float)
    N = column.size
    Gamma = np.diag(1.0 / (np.asarray(zeta_prev) - column**2 / kappa) ** 2)
    g_ls = column @ residual / kappa
    mag = abs(g_ls) - lam / 2 / kappa
    g = (mag if mag > 0 else 0.0) * np.sign(g_ls)
    e = residual - g * column
    return float(e @ Gamma @ e / N)


def grid_lambda(column, residual, zeta_prev, kappa, epsilon, grid_points=2001):
    """Minimize the stage LOOMSE over a uniform grid on ``[epsilon, 2|alpha|]``."""
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    alpha = float(np.dot(column, residual))
    grid = np.linspace(epsilon, 2 * abs(alpha), grid_points)
    J = np.array([dense_loomse(column, residual, zeta_prev, kappa, lam) for lam in grid])
    return float(grid[np.argmin(J)])


def exhaustive_small_ofr(phi, y, cfg) -> list[int]:
    """Unoptimized replay of the stage procedure for tiny problems.

    No inactive set, dense weighting matrices, and physical column swaps in
    both the working matrix and the triangular factor. Stops at the first
    stage whose LOOMSE fails to improve, or after ``cfg.max_terms`` terms.
    """
    Phi = np.array(phi, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    N, M = Phi.shape
    if M > 8 or N > 64:
        raise ValueError("exhaustive_small_ofr is limited to M <= 8, N <= 64")
    eps = cfg.epsilon
    floor = cfg.orthogonality_floor if cfg.orthogonality_floor is not None else 1e-12 * N
    limit = M if cfg.max_terms is None else min(M, cfg.max_terms)

    order = list(range(M))
    A = np.eye(M)
    e = y.copy()
    zeta = np.ones(N)
    J_prev = float(y @ y / N)
    sequence = []
    for n in range(limit):
        J = np.full(M, np.inf)
        G = np.zeros(M)
        for p in range(n, M):
            col = Phi[:, p]
            alpha = col @ e
            beta = np.sqrt(col @ col) * np.sqrt(e @ e)
            kappa = col @ col
            if beta < eps / 2 or abs(alpha) < eps / 2 or kappa <= floor:
                continue
            g_ls = alpha / kappa
            d = zeta - col**2 / kappa
            if np.any(d <= LEVERAGE_FLOOR):
                continue
            Gamma = np.diag(1.0 / d**2)
            eta = e - g_ls * col
            inner = -2 * np.sign(g_ls) * kappa * (col @ Gamma @ eta) / (col @ Gamma @ col)
            lam = max(min(2 * abs(alpha), inner), eps)
            if lam == 2 * abs(alpha):
                continue
            g = max(abs(g_ls) - lam / 2 / kappa, 0.0) * np.sign(g_ls)
            e_new = e - g * col
            J[p] = e_new @ Gamma @ e_new / N
            G[p] = g
        finite = [p for p in range(n, M) if np.isfinite(J[p])]
        if not finite:
            break
        p = min(finite, key=lambda q: (J[q], order[q]))
        if J[p] >= J_prev:
            break

        Phi[:, [n, p]] = Phi[:, [p, n]]
        A[:n, [n, p]] = A[:n, [p, n]]
        order[n], order[p] = order[p], order[n]
        J[[n, p]] = J[[p, n]]
        G[[n, p]] = G[[p, n]]

        w = Phi[:, n].copy()
        for q in range(n + 1, M):
            A[n, q] = w @ Phi[:, q] / (w @ w)
            Phi[:, q] = Phi[:, q] - A[n, q] * w
        zeta = zeta - w**2 / (w @ w)
        e = e - G[n] * w
        J_prev = J[n]
        sequence.append(order[n])
    return sequence

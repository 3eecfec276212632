"""Classical selection baselines and evaluation metrics.

Exhaustive table scan, forward stepwise with held-out model choice, and
an L1 path fit by cyclic coordinate descent with 10-fold cross
validation. Metrics cover support errors (false positives and negatives)
and relative test error under the sampling covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence
from .regress import Dataset, LossTable, SubsetIndex, ols_fit, pred_error, train_mse
from .util import as_rng


def exhaustive_bss(table: LossTable | np.ndarray) -> int:
    """Index of the smallest loss; ties break toward the smallest code."""
    values = table.values if isinstance(table, LossTable) else np.asarray(table)
    if values.size == 0:
        raise ValueError("loss table is empty")
    return int(np.argmin(values))


def forward_stepwise(train: Dataset, test: Dataset) -> SubsetIndex:
    """Greedy inclusion path scored in-sample, model picked out-of-sample.

    Starting from the empty model, each step adds the column whose
    inclusion minimizes training MSE (ties to the smallest column index),
    up to min(n, p) columns. The returned model is the path entry with
    the smallest held-out prediction error, earliest entry on ties.
    """
    p = train.p
    chosen: list[int] = []
    path = [SubsetIndex.from_indices([], p)]
    for _ in range(min(train.n, p)):
        best_j = -1
        best_mse = math.inf
        for j in range(p):
            if j in chosen:
                continue
            mse = train_mse(train, SubsetIndex.from_indices(chosen + [j], p))
            if mse < best_mse:
                best_mse = mse
                best_j = j
        chosen.append(best_j)
        path.append(SubsetIndex.from_indices(chosen, p))
    errors = [pred_error(train, test, s) for s in path]
    return path[int(np.argmin(errors))]


def soft_threshold(z: float, threshold: float) -> float:
    """Shrink ``z`` toward zero by ``threshold``, clipping at zero."""
    if z > threshold:
        return z - threshold
    if z < -threshold:
        return z + threshold
    return 0.0


def _coordinate_descent(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    beta: np.ndarray,
    max_sweeps: int,
    tol: float,
) -> np.ndarray:
    """Cyclic coordinate descent on (1/2n)||y - X b||^2 + lam ||b||_1."""
    n, p = X.shape
    col_sq = (X**2).sum(axis=0) / n
    resid = y - X @ beta
    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            old = beta[j]
            rho = (X[:, j] @ resid) / n + col_sq[j] * old
            new = soft_threshold(rho, lam) / col_sq[j]
            if new != old:
                resid -= X[:, j] * (new - old)
                beta[j] = new
                max_delta = max(max_delta, abs(new - old))
        if max_delta < tol:
            return beta
    raise NoConvergence(
        f"coordinate descent did not reach tolerance {tol} in {max_sweeps} sweeps"
    )


def lambda_grid(train: Dataset, n_lambdas: int = 100, min_ratio: float = 1e-3) -> np.ndarray:
    """Descending log-spaced penalty grid from the smallest all-zero penalty."""
    n = train.n
    lam_max = float(np.max(np.abs(train.X.T @ train.y)) / n)
    if lam_max <= 0.0:
        return np.array([0.0])
    return np.geomspace(lam_max, lam_max * min_ratio, n_lambdas)


@dataclass(frozen=True)
class LassoFit:
    """Cross-validated L1 fit: support, coefficients, chosen penalty."""

    subset: SubsetIndex
    beta: np.ndarray
    lam: float
    cv_errors: np.ndarray


def lasso_cv(
    train: Dataset,
    grid: np.ndarray | None = None,
    folds: int = 10,
    rng=None,
    max_sweeps: int = 1000,
    tol: float = 1e-7,
) -> LassoFit:
    """L1 path with warm starts, penalty chosen by K-fold cross validation.

    Folds are a seeded permutation split of the rows. The penalty with
    the smallest mean validation error wins (largest penalty on ties),
    and the final coefficients come from a full-data refit down the path.
    """
    if grid is None:
        grid = lambda_grid(train)
    grid = np.asarray(grid, dtype=float)
    rng = as_rng(rng)
    n, p = train.X.shape
    folds = min(folds, n)
    perm = rng.permutation(n)
    fold_ids = np.array_split(perm, folds)

    cv_sse = np.zeros(grid.size)
    cv_count = 0
    for hold in fold_ids:
        if hold.size == 0:
            continue
        mask = np.ones(n, dtype=bool)
        mask[hold] = False
        X_tr, y_tr = train.X[mask], train.y[mask]
        X_va, y_va = train.X[hold], train.y[hold]
        beta = np.zeros(p)
        for g, lam in enumerate(grid):
            beta = _coordinate_descent(X_tr, y_tr, lam, beta, max_sweeps, tol)
            resid = y_va - X_va @ beta
            cv_sse[g] += float(resid @ resid)
        cv_count += hold.size
    cv_errors = cv_sse / cv_count
    best = int(np.argmin(cv_errors))

    beta = np.zeros(p)
    for lam in grid[: best + 1]:
        beta = _coordinate_descent(train.X, train.y, lam, beta, max_sweeps, tol)
    support = SubsetIndex.from_indices(np.nonzero(beta)[0], p)
    return LassoFit(subset=support, beta=beta, lam=float(grid[best]), cv_errors=cv_errors)


@dataclass(frozen=True)
class Metrics:
    """Support errors and relative test error for one selection."""

    fp: int
    fn: int
    rte: float

    def __post_init__(self):
        if self.fp < 0 or self.fn < 0:
            raise ValueError("support error counts cannot be negative")


def fp_fn(selected: SubsetIndex, truth: SubsetIndex) -> tuple[int, int]:
    """False positive and false negative counts of a selected support."""
    if selected.p != truth.p:
        raise ValueError("selected and truth refer to different column counts")
    fp = (selected.value & ~truth.value & ((1 << truth.p) - 1)).bit_count()
    fn = (truth.value & ~selected.value).bit_count()
    return fp, fn


def rte(beta_hat: np.ndarray, beta_star: np.ndarray, cov: np.ndarray, noise_var: float) -> float:
    """Relative test error, (b - b*)' Cov (b - b*) / noise_var + 1."""
    if noise_var <= 0.0:
        raise ValueError("noise_var must be positive")
    delta = np.asarray(beta_hat, dtype=float) - np.asarray(beta_star, dtype=float)
    return float(delta @ np.asarray(cov, dtype=float) @ delta / noise_var + 1.0)


def accuracy_rate(outcomes) -> float:
    """Fraction of truthy outcomes in a non-empty sequence."""
    arr = np.asarray(list(outcomes), dtype=bool)
    if arr.size == 0:
        raise ValueError("outcomes must be non-empty")
    return float(arr.mean())


def refit_beta(train: Dataset, subset: SubsetIndex) -> np.ndarray:
    """Full-length least-squares coefficients for one subset (zeros elsewhere)."""
    return ols_fit(train, subset).beta_full

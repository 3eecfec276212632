"""Scikit-learn style regressors wrapping the subset selection routines.

Each estimator centers the data internally, selects a column subset by
its own rule, refits least squares on the selection, and exposes the
usual ``coef_`` / ``intercept_`` / ``predict`` surface plus
``get_support`` and ``transform`` for pipeline use.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .baselines import exhaustive_bss, forward_stepwise, lasso_cv
from .errors import DimensionTooLarge
from .hybrid import HybridConfig, select_minimum
from .qas import QasConfig
from .regress import (
    MAX_TABLE_COLUMNS,
    Dataset,
    SubsetIndex,
    build_loss_table,
    center,
    center_stats,
    center_with,
    ols_fit,
)


def _resolve_seed(random_state) -> int:
    if random_state is None:
        return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    if isinstance(random_state, np.random.Generator):
        return int(random_state.integers(2**63))
    return int(random_state)


class _BaseSubsetRegressor(BaseEstimator, RegressorMixin):
    """Shared centering, refitting, and prediction plumbing."""

    def _split(self, X, y, seed: int):
        """Centered train/validation pair by a seeded permutation."""
        n = X.shape[0]
        n_val = int(round(self.validation_fraction * n))
        n_val = min(max(n_val, 1), n - 1)
        perm = np.random.default_rng(seed).permutation(n)
        val_idx = np.sort(perm[:n_val])
        tr_idx = np.sort(perm[n_val:])
        train_raw = Dataset(X[tr_idx], y[tr_idx])
        x_means, y_mean = center_stats(train_raw)
        train = center(train_raw)
        val = center_with(Dataset(X[val_idx], y[val_idx]), x_means, y_mean)
        return train, val

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        self.n_features_in_ = X.shape[1]
        seed = _resolve_seed(self.random_state)
        subset, beta = self._select(X, y, seed)

        x_means = X.mean(axis=0)
        y_mean = float(y.mean())
        if beta is None:
            full = center(Dataset(X, y))
            beta = ols_fit(full, subset).beta_full
        self.subset_ = subset.value
        self.support_ = subset.mask()
        self.coef_ = beta
        self.intercept_ = y_mean - float(x_means @ beta)
        return self

    def _select(self, X, y, seed):
        raise NotImplementedError

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X @ self.coef_ + self.intercept_

    def get_support(self, indices: bool = False):
        check_is_fitted(self, "support_")
        return np.nonzero(self.support_)[0] if indices else self.support_.copy()

    def transform(self, X):
        check_is_fitted(self, "support_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X[:, self.support_]

    def _table_guard(self, p: int):
        if p > MAX_TABLE_COLUMNS:
            raise DimensionTooLarge(
                f"{p} features would need a 2^{p} loss table; "
                f"the guard allows at most {MAX_TABLE_COLUMNS}"
            )

    def _loss_table(self, X, y, seed: int):
        if self.loss == "prediction":
            train, val = self._split(X, y, seed)
            return build_loss_table(train, val, "test_mse")
        if self.loss == "training":
            return build_loss_table(center(Dataset(X, y)), None, "train_mse")
        raise ValueError(f"unknown loss {self.loss!r}")


class QASRegressor(_BaseSubsetRegressor):
    """Subset selection by vote-boosted adaptive Grover search.

    Builds the per-subset validation loss table, runs ``n_nodes``
    independent searches over it, and keeps the plurality winner. With
    ``loss="prediction"`` a ``validation_fraction`` split scores the
    subsets; ``loss="training"`` scores in-sample instead.
    """

    def __init__(
        self,
        n_nodes: int = 5,
        learning_rate: float = 0.52,
        stop_constant: float = 3.0,
        max_grover_ops: int | None = None,
        loss: str = "prediction",
        validation_fraction: float = 0.2,
        random_state=None,
    ):
        self.n_nodes = n_nodes
        self.learning_rate = learning_rate
        self.stop_constant = stop_constant
        self.max_grover_ops = max_grover_ops
        self.loss = loss
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def _select(self, X, y, seed):
        self._table_guard(X.shape[1])
        table = self._loss_table(X, y, seed)
        config = HybridConfig(
            n_nodes=self.n_nodes,
            qas=QasConfig(
                learning_rate=self.learning_rate,
                stop_constant=self.stop_constant,
                max_grover_ops=self.max_grover_ops,
            ),
            master_seed=seed,
        )
        vote = select_minimum(table, config)
        self.vote_ = vote
        self.n_grover_ops_ = vote.grover_ops_total
        return SubsetIndex(vote.winner, X.shape[1]), None


class ExhaustiveSubsetRegressor(_BaseSubsetRegressor):
    """Subset selection by exhaustive scan of the loss table."""

    def __init__(
        self,
        loss: str = "prediction",
        validation_fraction: float = 0.2,
        random_state=None,
    ):
        self.loss = loss
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def _select(self, X, y, seed):
        self._table_guard(X.shape[1])
        table = self._loss_table(X, y, seed)
        return SubsetIndex(exhaustive_bss(table), X.shape[1]), None


class StepwiseSubsetRegressor(_BaseSubsetRegressor):
    """Forward stepwise path with the model size chosen out of sample."""

    def __init__(self, validation_fraction: float = 0.2, random_state=None):
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def _select(self, X, y, seed):
        train, val = self._split(X, y, seed)
        return forward_stepwise(train, val), None


class LassoCVRegressor(_BaseSubsetRegressor):
    """Cross-validated L1 path; coefficients stay penalized."""

    def __init__(
        self,
        n_lambdas: int = 100,
        lambda_min_ratio: float = 1e-3,
        cv: int = 10,
        max_sweeps: int = 1000,
        tol: float = 1e-7,
        random_state=None,
    ):
        self.n_lambdas = n_lambdas
        self.lambda_min_ratio = lambda_min_ratio
        self.cv = cv
        self.max_sweeps = max_sweeps
        self.tol = tol
        self.random_state = random_state

    def _select(self, X, y, seed):
        from .baselines import lambda_grid

        data = center(Dataset(X, y))
        grid = lambda_grid(data, self.n_lambdas, self.lambda_min_ratio)
        fit = lasso_cv(
            data,
            grid=grid,
            folds=self.cv,
            rng=np.random.default_rng(seed),
            max_sweeps=self.max_sweeps,
            tol=self.tol,
        )
        self.alpha_ = fit.lam
        return fit.subset, fit.beta

"""Synthetic correlated-design samples and CSV loading with a seeded split.

Both paths hand back centered data: training sets are centered by their
own statistics and held-out sets by the training statistics, so every
downstream loss refers to the same affine frame.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSignal, MissingColumn, NonNumericCell, ParseError
from .regress import Dataset, center, center_stats, center_with


@dataclass(frozen=True)
class SimScenario:
    """One cell of the simulation design.

    ``n_test`` defaults to the training size. ``rho`` is the first-order
    autocorrelation of the design covariance and ``snr`` the ratio of
    signal variance to noise variance.
    """

    n: int = 100
    p: int = 10
    s: int = 5
    rho: float = 0.5
    snr: float = 1.0
    sparsity_kind: str = "strong"
    n_test: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        if not 0 <= self.s <= self.p:
            raise ValueError(f"s must lie in [0, p], got s={self.s}, p={self.p}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if not self.snr > 0.0:
            raise ValueError(f"snr must be positive, got {self.snr}")
        if self.sparsity_kind not in ("strong", "weak"):
            raise ValueError(f"unknown sparsity_kind {self.sparsity_kind!r}")
        if self.n_test is None:
            object.__setattr__(self, "n_test", self.n)
        elif self.n_test < 1:
            raise ValueError("n_test must be positive")


def toeplitz_sigma(p: int, rho: float) -> np.ndarray:
    """Covariance with entry (i, j) equal to rho^|i-j|."""
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    idx = np.arange(p)
    return rho ** np.abs(np.subtract.outer(idx, idx)).astype(float)


def make_beta(p: int, s: int, kind: str = "strong") -> np.ndarray:
    """True coefficients: s leading entries, the rest zero.

    Strong sparsity sets the leading entries to 1; weak sparsity ramps
    them down linearly as 1, (s-1)/s, ..., 1/s.
    """
    if not 0 <= s <= p:
        raise ValueError(f"s must lie in [0, p], got s={s}, p={p}")
    beta = np.zeros(p)
    if kind == "strong":
        beta[:s] = 1.0
    elif kind == "weak":
        beta[:s] = (s - np.arange(s)) / s if s > 0 else 0.0
    else:
        raise ValueError(f"unknown sparsity kind {kind!r}")
    return beta


class LinearSample(NamedTuple):
    train: Dataset
    test: Dataset
    beta_star: np.ndarray
    cov: np.ndarray
    noise_var: float


def gen_linear(scenario: SimScenario) -> LinearSample:
    """Draw one centered train/test pair from the linear model.

    Rows of the design are N(0, Sigma) with Toeplitz correlation, the
    noise variance is beta*' Sigma beta* / snr, and the test set is
    centered with the training statistics.

    Raises
    ------
    DegenerateSignal
        If the true coefficient vector carries no signal, so no noise
        level can realize the requested snr.
    """
    rng = np.random.default_rng(scenario.seed)
    cov = toeplitz_sigma(scenario.p, scenario.rho)
    beta_star = make_beta(scenario.p, scenario.s, scenario.sparsity_kind)
    signal = float(beta_star @ cov @ beta_star)
    if signal <= 0.0:
        raise DegenerateSignal(
            "true coefficients carry no signal; the snr cannot be realized"
        )
    noise_var = signal / scenario.snr
    noise_sd = np.sqrt(noise_var)
    chol = np.linalg.cholesky(cov)

    X_train = rng.standard_normal((scenario.n, scenario.p)) @ chol.T
    y_train = X_train @ beta_star + noise_sd * rng.standard_normal(scenario.n)
    X_test = rng.standard_normal((scenario.n_test, scenario.p)) @ chol.T
    y_test = X_test @ beta_star + noise_sd * rng.standard_normal(scenario.n_test)

    train_raw = Dataset(X_train, y_train)
    x_means, y_mean = center_stats(train_raw)
    train = center(train_raw)
    test = center_with(Dataset(X_test, y_test), x_means, y_mean)
    return LinearSample(train, test, beta_star, cov, noise_var)


def load_csv(
    path,
    response: str,
    split: float = 0.8,
    seed: int | None = None,
    drop: tuple[str, ...] = (),
) -> tuple[Dataset, Dataset]:
    """Load a numeric CSV and return a centered, seeded train/test split.

    The file needs a header row; ``response`` names the target column and
    ``drop`` lists columns to discard before modeling. Rows are split by
    a seeded permutation, with round(split * n) going to training.

    Raises
    ------
    ParseError, MissingColumn, NonNumericCell
        On structural problems, absent named columns, or cells that do
        not parse as numbers (reported with row and column).
    """
    if not 0.0 < split < 1.0:
        raise ValueError(f"split must lie in (0, 1), got {split}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise ParseError(f"{path}: duplicate column names in header")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            rows.append((lineno, row))

    if response not in header:
        raise MissingColumn(f"{path}: response column {response!r} not found")
    for name in drop:
        if name not in header:
            raise MissingColumn(f"{path}: drop column {name!r} not found")
    keep = [h for h in header if h != response and h not in set(drop)]
    if not keep:
        raise ParseError(f"{path}: no predictor columns remain")
    if not rows:
        raise ParseError(f"{path}: no data rows")

    col_of = {h: i for i, h in enumerate(header)}

    def cell(row, lineno, name):
        text = row[col_of[name]].strip()
        try:
            return float(text)
        except ValueError:
            raise NonNumericCell(
                f"{path}:{lineno}: column {name!r} has non-numeric value {text!r}"
            ) from None

    X = np.array([[cell(r, ln, name) for name in keep] for ln, r in rows])
    y = np.array([cell(r, ln, response) for ln, r in rows])

    n = X.shape[0]
    n_train = int(round(split * n))
    if not 1 <= n_train <= n - 1:
        raise ParseError(
            f"{path}: split={split} leaves an empty training or test set for n={n}"
        )
    perm = np.random.default_rng(seed).permutation(n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])

    names = tuple(keep)
    train_raw = Dataset(X[train_idx], y[train_idx], names)
    x_means, y_mean = center_stats(train_raw)
    train = center(train_raw)
    test = center_with(Dataset(X[test_idx], y[test_idx], names), x_means, y_mean)
    return train, test

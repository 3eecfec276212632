"""Per-subset least squares: datasets, subset encodings, SVD prediction,
loss tables, and the amplitude-encoded recovery of the linear predictor.

All model fitting in this module goes through one compact SVD of the
selected design block, with singular values below ``RANK_TOL`` times the
largest one truncated. That single convention makes the minimum-norm
solution, the per-point prediction, and the amplitude-encoded recovery
agree on rank-deficient designs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLarge, EmptyTestSet, SubsetTooLarge, ZeroVector
from .util import as_float_matrix, as_float_vector

# Relative singular-value cutoff for numerical rank decisions.
RANK_TOL = 1e-12

# Hard guard: loss tables hold 2^p floats, so cap the column count.
MAX_TABLE_COLUMNS = 24


@dataclass(frozen=True)
class Dataset:
    """An immutable regression sample.

    Parameters
    ----------
    X : ndarray of shape (n, p)
        Design matrix. Copied and write-locked on construction.
    y : ndarray of shape (n,)
        Response vector. Copied and write-locked on construction.
    column_names : tuple of str, optional
        Names for the p columns, carried along for reporting.
    """

    X: np.ndarray
    y: np.ndarray
    column_names: tuple[str, ...] | None = None

    def __post_init__(self):
        X = as_float_matrix(self.X, "X").copy()
        y = as_float_vector(self.y, "y").copy()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if self.column_names is not None:
            names = tuple(str(c) for c in self.column_names)
            if len(names) != X.shape[1]:
                raise ValueError("column_names length does not match X")
            object.__setattr__(self, "column_names", names)
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


def center_stats(data: Dataset) -> tuple[np.ndarray, float]:
    """Column means of X and the mean of y."""
    return data.X.mean(axis=0), float(data.y.mean())


def center(data: Dataset) -> Dataset:
    """Center a dataset by its own column and response means."""
    x_means, y_mean = center_stats(data)
    return center_with(data, x_means, y_mean)


def center_with(data: Dataset, x_means: np.ndarray, y_mean: float) -> Dataset:
    """Center a dataset with externally supplied means.

    Held-out data must be centered with the training means so that
    predictions and losses refer to the same affine frame.
    """
    x_means = as_float_vector(np.asarray(x_means, dtype=float), "x_means")
    if x_means.shape[0] != data.p:
        raise ValueError("x_means length does not match the column count")
    return Dataset(data.X - x_means, data.y - float(y_mean), data.column_names)


@dataclass(frozen=True)
class SubsetIndex:
    """A subset of design columns encoded as a p-bit integer.

    Bit j (least significant first) is set exactly when column j is
    included, so ``value`` ranges over ``0 .. 2**p - 1``.
    """

    value: int
    p: int

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be non-negative")
        if not 0 <= self.value < (1 << self.p):
            raise ValueError(f"subset code {self.value} out of range for p={self.p}")

    @classmethod
    def from_indices(cls, columns, p: int) -> "SubsetIndex":
        value = 0
        for j in columns:
            j = int(j)
            if not 0 <= j < p:
                raise ValueError(f"column {j} out of range for p={p}")
            value |= 1 << j
        return cls(value, p)

    def indices(self) -> tuple[int, ...]:
        """Included column positions in ascending order."""
        return tuple(j for j in range(self.p) if self.value >> j & 1)

    def mask(self) -> np.ndarray:
        """Boolean inclusion mask of length p."""
        return np.array([bool(self.value >> j & 1) for j in range(self.p)])

    def size(self) -> int:
        return self.value.bit_count()


@dataclass(frozen=True)
class FitResult:
    """Least-squares fit restricted to one subset of columns.

    ``coef`` holds coefficients for the included columns in ascending
    column order; ``beta_full`` is the same vector scattered into length
    p with zeros elsewhere; ``rank`` is the numerical rank of the
    selected design block.
    """

    subset: SubsetIndex
    coef: np.ndarray
    beta_full: np.ndarray
    rank: int


def _svd_solution(X_d: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, int]:
    """Minimum-norm least squares via compact SVD with rank truncation."""
    if X_d.shape[1] == 0:
        return np.zeros(0), 0
    U, s, Vt = np.linalg.svd(X_d, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros(X_d.shape[1]), 0
    keep = s > RANK_TOL * s[0]
    rank = int(np.count_nonzero(keep))
    if rank == 0:
        return np.zeros(X_d.shape[1]), 0
    coef = Vt[keep].T @ ((U[:, keep].T @ y) / s[keep])
    return coef, rank


def ols_fit(train: Dataset, subset: SubsetIndex) -> FitResult:
    """Fit ordinary least squares on the selected columns of centered data.

    Raises
    ------
    SubsetTooLarge
        If the subset has more columns than the training sample has rows.
    """
    cols = subset.indices()
    if len(cols) > train.n:
        raise SubsetTooLarge(
            f"subset has {len(cols)} columns but only {train.n} rows are available"
        )
    X_d = train.X[:, cols]
    coef, rank = _svd_solution(X_d, train.y)
    beta_full = np.zeros(train.p)
    beta_full[list(cols)] = coef
    return FitResult(subset=subset, coef=coef, beta_full=beta_full, rank=rank)


def train_mse(train: Dataset, subset: SubsetIndex) -> float:
    """In-sample mean squared error of the subset's least-squares fit."""
    fit = ols_fit(train, subset)
    resid = train.y - train.X[:, fit.subset.indices()] @ fit.coef
    return float(np.mean(resid**2))


def predict_svd(train: Dataset, subset: SubsetIndex, x_new: np.ndarray) -> float:
    """Predict the response at one point through the compact SVD.

    The prediction is the rank-truncated sum over singular triplets,
    sum_r (x_new_d . v_r)(u_r . y) / sigma_r, which equals the
    minimum-norm least-squares prediction.

    ``x_new`` may have length p (entries outside the subset are ignored)
    or length equal to the subset size.
    """
    cols = subset.indices()
    x_new = as_float_vector(np.asarray(x_new, dtype=float), "x_new")
    if x_new.shape[0] == train.p:
        x_d = x_new[list(cols)]
    elif x_new.shape[0] == len(cols):
        x_d = x_new
    else:
        raise ValueError(
            f"x_new has length {x_new.shape[0]}, expected {train.p} or {len(cols)}"
        )
    if len(cols) == 0:
        return 0.0
    X_d = train.X[:, cols]
    U, s, Vt = np.linalg.svd(X_d, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0.0
    keep = s > RANK_TOL * s[0]
    terms = (x_d @ Vt[keep].T) * (U[:, keep].T @ train.y) / s[keep]
    return float(np.sum(terms))


def pred_error(train: Dataset, test: Dataset, subset: SubsetIndex) -> float:
    """Held-out mean squared prediction error of the subset's fit.

    Raises
    ------
    EmptyTestSet
        If the test sample has no rows.
    """
    if test.n == 0:
        raise EmptyTestSet("prediction error requires at least one test row")
    if test.p != train.p:
        raise ValueError("train and test column counts differ")
    fit = ols_fit(train, subset)
    preds = test.X[:, fit.subset.indices()] @ fit.coef
    return float(np.mean((preds - test.y) ** 2))


@dataclass(frozen=True)
class LossTable:
    """Losses for every one of the 2^p column subsets.

    Entry i is the loss of ``SubsetIndex(i, p)``; the array is
    write-locked so searches can share it safely across threads.
    """

    p: int
    loss_kind: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = as_float_vector(self.values, "values").copy()
        if values.shape[0] != 1 << self.p:
            raise ValueError(f"expected 2**{self.p} losses, got {values.shape[0]}")
        if np.any(values < 0):
            raise ValueError("losses must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.values.shape[0]


def build_loss_table(
    train: Dataset,
    test: Dataset | None = None,
    loss_kind: str = "test_mse",
) -> LossTable:
    """Evaluate the loss of every column subset.

    ``loss_kind`` selects held-out prediction error ("test_mse") or
    in-sample error ("train_mse"). Entries are pure functions of the
    data, so the table is identical regardless of evaluation order.

    Raises
    ------
    DimensionTooLarge
        If p exceeds the 2^24-entry table guard.
    """
    if train.p > MAX_TABLE_COLUMNS:
        raise DimensionTooLarge(
            f"{train.p} columns would need a 2^{train.p} loss table"
        )
    if loss_kind == "test_mse":
        if test is None:
            raise ValueError("test_mse requires a test dataset")
        if test.n == 0:
            raise EmptyTestSet("prediction error requires at least one test row")
        losses = [
            pred_error(train, test, SubsetIndex(i, train.p))
            for i in range(1 << train.p)
        ]
    elif loss_kind == "train_mse":
        losses = [
            train_mse(train, SubsetIndex(i, train.p)) for i in range(1 << train.p)
        ]
    else:
        raise ValueError(f"unknown loss_kind {loss_kind!r}")
    return LossTable(p=train.p, loss_kind=loss_kind, values=np.asarray(losses))


@dataclass(frozen=True)
class QlpRecovery:
    """Prediction recovered from the amplitude-encoded regression state.

    ``offdiag`` is the off-diagonal element of the two-register density
    matrix, ``p1`` the probability of the ancilla conditioning event, and
    ``y_hat`` the rescaled prediction, equal to the SVD prediction.
    """

    y_hat: float
    offdiag: float
    p1: float
    c: float


def qlp_recover(
    train: Dataset,
    subset: SubsetIndex,
    x_new: np.ndarray,
    c: float | None = None,
) -> QlpRecovery:
    """Recover the least-squares prediction along the amplitude-encoded route.

    Works entirely with quantities that survive normalization: the design
    block scaled by its Frobenius norm, the unit new point, and the unit
    response. The conditional rotation constant ``c`` defaults to the
    smallest squared normalized singular value, the largest choice that
    keeps every rotation amplitude c/lambda_r at or below 1.

    Raises
    ------
    ZeroVector
        If the new point, the response, or the design block has zero norm.
    """
    cols = subset.indices()
    x_new = np.asarray(x_new, dtype=float)
    if x_new.shape[0] == train.p:
        x_d = x_new[list(cols)]
    elif x_new.shape[0] == len(cols):
        x_d = x_new.astype(float)
    else:
        raise ValueError(
            f"x_new has length {x_new.shape[0]}, expected {train.p} or {len(cols)}"
        )
    X_d = train.X[:, cols]
    frob = float(np.linalg.norm(X_d))
    x_norm = float(np.linalg.norm(x_d))
    y_norm = float(np.linalg.norm(train.y))
    if frob == 0.0:
        raise ZeroVector("design block has zero Frobenius norm")
    if x_norm == 0.0:
        raise ZeroVector("new point has zero norm")
    if y_norm == 0.0:
        raise ZeroVector("response has zero norm")

    U, s, Vt = np.linalg.svd(X_d, full_matrices=False)
    keep = s > RANK_TOL * s[0]
    if not np.any(keep):
        raise ZeroVector("design block has no retained singular values")
    s_tilde = s[keep] / frob
    eigvals = s_tilde**2
    c_max = float(eigvals.min())
    if c is None:
        c = c_max
    else:
        c = float(c)
        if not 0.0 < c <= c_max + 1e-15:
            raise ValueError(
                f"c must lie in (0, {c_max:.3e}] so every rotation amplitude is <= 1"
            )

    p1 = float(np.sum((c / eigvals) ** 2))
    x_hat = x_d / x_norm
    y_hat_unit = train.y / y_norm
    overlaps = (x_hat @ Vt[keep].T) * (U[:, keep].T @ y_hat_unit) / s_tilde
    offdiag = float(c / (2.0 * np.sqrt(p1)) * np.sum(overlaps))
    y_pred = offdiag * (2.0 * np.sqrt(p1) / c) * x_norm * y_norm / frob
    return QlpRecovery(y_hat=y_pred, offdiag=offdiag, p1=p1, c=c)

"""Linear models: ordinary least squares and L1-penalized least squares.

Both produce a LinearModel (coefficients plus unpenalized bias). OLS is
solved by SVD (rank-revealing, minimum-norm on rank-deficient designs);
the lasso by cyclic coordinate descent with soft-thresholding on the
objective (1/2n)||y - X theta - theta0||^2 + lambda * ||theta||_1.
"""

import numpy as np

from .base import TrainedModel

__all__ = ["LinearModel", "fit_lr", "fit_lasso", "lasso_lambda_max"]


class LinearModel(TrainedModel):
    kind = "LR"

    def __init__(self, coefficients, bias, kind=None, objective_history=None):
        coefficients = np.array(coefficients, dtype=np.float64)
        super().__init__(coefficients.size)
        coefficients.flags.writeable = False
        self.coefficients = coefficients
        self.bias = float(bias)
        if kind is not None:
            self.kind = kind
        # per-sweep lasso objective values when recording was requested
        self.objective_history = objective_history

    def _predict_batch(self, X):
        return X @ self.coefficients + self.bias


def _as_design(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, np.newaxis]
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y disagree on sample count")
    if X.shape[0] == 0:
        raise ValueError("empty training set")
    return X, y


def fit_lr(X, y) -> LinearModel:
    """Ordinary least squares with intercept.

    Features and targets are centered, the coefficient vector is the
    minimum-norm least-squares solution of the centered system, and the
    bias absorbs the means. On a single sample this degenerates to
    bias = y, coefficients = 0.
    """
    X, y = _as_design(X, y)
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    coef, *_ = np.linalg.lstsq(X - x_mean, y - y_mean, rcond=None)
    return LinearModel(coef, y_mean - x_mean @ coef, kind="LR")


def _soft_threshold(value: float, threshold: float) -> float:
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0


def lasso_lambda_max(X, y) -> float:
    """Smallest penalty for which the lasso solution is all zeros."""
    X, y = _as_design(X, y)
    n = X.shape[0]
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    return float(np.max(np.abs(Xc.T @ yc)) / n)


def fit_lasso(
    X,
    y,
    lam: float = 0.01,
    tol: float = 1e-8,
    max_sweeps: int = 10_000,
    record_objective: bool = False,
) -> LinearModel:
    """L1-penalized least squares by cyclic coordinate descent.

    Stops when the largest coefficient change in a full sweep falls
    below ``tol`` or after ``max_sweeps`` sweeps. The bias is left
    unpenalized (handled by centering). With lam=0 this reduces to
    coordinate-descent least squares.
    """
    if lam < 0:
        raise ValueError(f"penalty must be non-negative, got {lam!r}")
    X, y = _as_design(X, y)
    n, d = X.shape
    x_mean = X.mean(axis=0)
    y_mean = y.mean()
    Xc = X - x_mean
    yc = y - y_mean

    col_sq = np.einsum("ij,ij->j", Xc, Xc) / n  # (1/n) ||x_j||^2
    theta = np.zeros(d)
    residual = yc.copy()
    history = [] if record_objective else None

    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(d):
            if col_sq[j] == 0.0:
                continue  # constant column carries no signal
            old = theta[j]
            rho = (Xc[:, j] @ residual) / n + col_sq[j] * old
            new = _soft_threshold(rho, lam) / col_sq[j]
            if new != old:
                residual += Xc[:, j] * (old - new)
                theta[j] = new
            max_delta = max(max_delta, abs(new - old))
        if history is not None:
            history.append(float(residual @ residual / (2 * n) + lam * np.abs(theta).sum()))
        if max_delta < tol:
            break

    return LinearModel(
        theta, y_mean - x_mean @ theta, kind="LASSO", objective_history=history
    )

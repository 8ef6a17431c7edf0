"""K-nearest-neighbor regression: brute-force Euclidean search.

Fitting stores the training set. Prediction averages the targets of the
k nearest training points; equal distances resolve to the lower training
index, so results are fully deterministic.
"""

import numpy as np

from ..errors import KTooLarge
from .base import TrainedModel

__all__ = ["KNNModel", "fit_knn"]

_CHUNK_ROWS = 256  # bounds the (chunk x n_train) distance block


class KNNModel(TrainedModel):
    kind = "KNN"

    def __init__(self, X_train, y_train, k):
        X_train = np.array(X_train, dtype=np.float64)
        y_train = np.array(y_train, dtype=np.float64)
        super().__init__(X_train.shape[1])
        X_train.flags.writeable = False
        y_train.flags.writeable = False
        self.X_train = X_train
        self.y_train = y_train
        self.k = int(k)

    def _predict_batch(self, X):
        out = np.empty(X.shape[0])
        train_sq = np.einsum("ij,ij->i", self.X_train, self.X_train)
        for start in range(0, X.shape[0], _CHUNK_ROWS):
            chunk = X[start : start + _CHUNK_ROWS]
            d2 = train_sq - 2.0 * (chunk @ self.X_train.T)
            d2 += np.einsum("ij,ij->i", chunk, chunk)[:, np.newaxis]
            # stable sort: ties fall to the lower training index
            nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
            out[start : start + _CHUNK_ROWS] = self.y_train[nearest].mean(axis=1)
        return out


def fit_knn(X, y, k: int = 2) -> KNNModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, np.newaxis]
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > X.shape[0]:
        raise KTooLarge(k, X.shape[0])
    return KNNModel(X, y, k)

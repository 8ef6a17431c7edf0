"""Uniform predict contract shared by every model in the suite."""

import numpy as np

from ..errors import DimensionMismatch


class TrainedModel:
    """A fitted model exposing deterministic single- and batch-prediction.

    Subclasses set ``kind`` and implement ``_predict_batch`` over a
    validated (n, d) array. Instances are immutable after fit; predict is
    reentrant.
    """

    kind = "?"

    def __init__(self, n_features: int):
        self._n_features = int(n_features)
        self.spec = None  # attached by the suite-level fit()

    @property
    def training_feature_count(self) -> int:
        return self._n_features

    def predict(self, x) -> float:
        """Model output for one feature vector; never clamped to [0, 1]."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self._n_features,):
            raise DimensionMismatch(self._n_features, x.size)
        if not np.isfinite(x).all():
            raise ValueError("feature vector contains non-finite values")
        return float(self._predict_batch(x[np.newaxis, :])[0])

    def predict_batch(self, X) -> np.ndarray:
        """Vectorized predict over an (n, d) array of feature vectors."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self._n_features:
            raise DimensionMismatch(self._n_features, X.shape[-1] if X.ndim else 0)
        return np.asarray(self._predict_batch(X), dtype=np.float64)

    def _predict_batch(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

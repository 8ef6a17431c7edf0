"""Gradient-boosted regression trees with second-order split gains.

Squared-loss boosting in the extreme-gradient style: each round fits a
tree to the per-sample gradients g_i = yhat_i - y_i (hessians are 1),
leaf weights are -G/(H + reg_lambda), and a node splits only when
gain = 0.5 * [G_L^2/(H_L+reg_lambda) + G_R^2/(H_R+reg_lambda)
             - G^2/(H+reg_lambda)] - gamma
is positive. Predictions start from the training-target mean and add
learning_rate times each tree's leaf weight.
"""

import numpy as np

from .base import TrainedModel
from .tree import grow_tree, route

__all__ = ["GBRTModel", "fit_gbrt"]


class GBRTModel(TrainedModel):
    kind = "GBRT"

    def __init__(self, base_score, trees, learning_rate, reg_lambda, gamma,
                 train_loss_history, n_features):
        super().__init__(n_features)
        self.base_score = float(base_score)
        self.trees = tuple(trees)  # flat-array tuples, unscaled leaf weights
        self.learning_rate = float(learning_rate)
        self.reg_lambda = float(reg_lambda)
        self.gamma = float(gamma)
        # training MSE after round r; entry 0 is the base-score loss
        self.train_loss_history = tuple(train_loss_history)

    @property
    def rounds(self) -> int:
        return len(self.trees)

    def _predict_batch(self, X):
        out = np.full(X.shape[0], self.base_score)
        for arrays in self.trees:
            out += self.learning_rate * route(arrays, X)
        return out


def fit_gbrt(
    X,
    y,
    rounds: int = 100,
    learning_rate: float = 0.1,
    max_depth: int = 3,
    reg_lambda: float = 1.0,
    gamma: float = 0.0,
    min_samples_leaf: int = 1,
) -> GBRTModel:
    if rounds < 1:
        raise ValueError("boosting needs at least one round")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, np.newaxis]

    base = float(y.mean())
    yhat = np.full(y.shape[0], base)
    history = [float(np.mean((yhat - y) ** 2))]
    trees = []
    for _ in range(rounds):
        grad = yhat - y
        arrays = grow_tree(
            X,
            grad,
            reg_lambda=reg_lambda,
            leaf_sign=-1.0,
            max_depth=max_depth,
            min_samples_leaf=min_samples_leaf,
            min_split_quality=2.0 * gamma,
        )
        trees.append(arrays)
        yhat += learning_rate * route(arrays, X)
        history.append(float(np.mean((yhat - y) ** 2)))

    return GBRTModel(base, trees, learning_rate, reg_lambda, gamma, history, X.shape[1])

"""Single-hidden-layer perceptron regressor trained by full-batch Adam.

Architecture is input -> hidden (ReLU) -> linear output, squared loss.
``mlp_loss`` and ``loss_and_gradient`` are module-level and operate on a
plain (W1, b1, W2, b2) tuple so the backward pass can be checked against
finite differences without touching a trained model.
"""

import numpy as np

from ..errors import NonFiniteLoss
from ..rng import stream
from .base import TrainedModel

__all__ = ["MLPRModel", "fit_mlpr", "init_params", "mlp_loss",
           "loss_and_gradient"]


def init_params(n_features, hidden, seed):
    """He-uniform weights, zero biases; draw order is W1 then W2."""
    rng = stream(seed, "mlp-init")
    lim1 = np.sqrt(6.0 / n_features)
    W1 = rng.uniform(-lim1, lim1, size=(n_features, hidden))
    b1 = np.zeros(hidden)
    lim2 = np.sqrt(6.0 / hidden)
    W2 = rng.uniform(-lim2, lim2, size=hidden)
    b2 = 0.0
    return W1, b1, W2, b2


def _forward(params, X):
    W1, b1, W2, b2 = params
    z1 = X @ W1 + b1
    a1 = np.maximum(z1, 0.0)
    return z1, a1, a1 @ W2 + b2


def mlp_loss(params, X, y):
    """Mean squared error of the net on (X, y)."""
    _, _, yhat = _forward(params, X)
    r = yhat - y
    return float(r @ r) / X.shape[0]


def loss_and_gradient(params, X, y):
    """Loss plus its gradient in the same (W1, b1, W2, b2) layout."""
    W1, b1, W2, b2 = params
    n = X.shape[0]
    z1, a1, yhat = _forward(params, X)
    r = yhat - y
    d_out = (2.0 / n) * r
    gW2 = a1.T @ d_out
    gb2 = float(d_out.sum())
    d_z1 = np.outer(d_out, W2)
    d_z1[z1 <= 0.0] = 0.0
    gW1 = X.T @ d_z1
    gb1 = d_z1.sum(axis=0)
    return float(r @ r) / n, (gW1, gb1, gW2, gb2)


class MLPRModel(TrainedModel):
    kind = "MLPR"

    def __init__(self, params, loss_history, stopped_early):
        W1, b1, W2, b2 = params
        super().__init__(W1.shape[0])
        W1 = np.array(W1)
        b1 = np.array(b1)
        W2 = np.array(W2)
        for a in (W1, b1, W2):
            a.flags.writeable = False
        self.W1, self.b1, self.W2, self.b2 = W1, b1, W2, float(b2)
        self.loss_history = tuple(loss_history)
        self.stopped_early = bool(stopped_early)

    @property
    def params(self):
        return self.W1, self.b1, self.W2, self.b2

    @property
    def epochs_run(self):
        return len(self.loss_history)

    def _predict_batch(self, X):
        return _forward(self.params, X)[2]


def fit_mlpr(X, y, hidden: int = 100, learning_rate: float = 1e-3,
             max_epochs: int = 500, tol: float = 1e-8, patience: int = 10,
             seed: int = 0) -> MLPRModel:
    """Train with Adam (beta1 0.9, beta2 0.999, eps 1e-8) on the full batch.

    Stops early once the loss has moved by less than ``tol`` between
    consecutive epochs for ``patience`` epochs in a row, i.e. when
    training has stalled. A transient loss rise (full-batch Adam
    momentum overshoots early on) does not trigger the stop. Raises
    NonFiniteLoss if the loss leaves the reals (divergence).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, np.newaxis]
    params = init_params(X.shape[1], hidden, seed)

    beta1, beta2, eps = 0.9, 0.999, 1e-8
    m = [np.zeros_like(np.asarray(p, dtype=np.float64)) for p in params]
    v = [np.zeros_like(np.asarray(p, dtype=np.float64)) for p in params]

    history = []
    previous = np.inf
    streak = 0
    stopped_early = False
    for epoch in range(max_epochs):
        loss, grads = loss_and_gradient(params, X, y)
        if not np.isfinite(loss):
            raise NonFiniteLoss(epoch)
        history.append(loss)
        if abs(previous - loss) < tol:
            streak += 1
            if streak >= patience:
                stopped_early = True
                break
        else:
            streak = 0
        previous = loss

        t = epoch + 1
        scale = learning_rate * np.sqrt(1.0 - beta2**t) / (1.0 - beta1**t)
        new = []
        for idx, (p, g) in enumerate(zip(params, grads)):
            m[idx] = beta1 * m[idx] + (1.0 - beta1) * g
            v[idx] = beta2 * v[idx] + (1.0 - beta2) * np.square(g)
            step = scale * m[idx] / (np.sqrt(v[idx]) + eps)
            new.append(p - step)
        params = (new[0], new[1], new[2], float(new[3]))

    return MLPRModel(params, history, stopped_early)

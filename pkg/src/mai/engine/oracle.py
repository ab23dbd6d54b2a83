"""Direct per-episode fits: the from-scratch predictor and the amortization-gap oracle."""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve

from src.mai.config import SCRATCH_RIDGE
from src.mai.types import FloatArray


def fit_affine(x: FloatArray, y: FloatArray, ridge: float = SCRATCH_RIDGE) -> tuple[FloatArray, FloatArray]:
    """Ridge least-squares fit of y ~ W x + b; returns (W, b)."""
    xa = np.hstack([x, np.ones((len(x), 1))])
    gram = xa.T @ xa + ridge * np.eye(xa.shape[1])
    coef = solve(gram, xa.T @ y, assume_a="pos")
    return coef[:-1].T, coef[-1]


class OnlineAffine:
    """From-scratch one-step predictor refit on every pair seen so far."""

    def __init__(self, dim: int, ridge: float = SCRATCH_RIDGE):
        self.dim = dim
        self.ridge = ridge
        self._x: list[FloatArray] = []
        self._y: list[FloatArray] = []

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(dim={self.dim}, pairs={len(self._x)})"

    @property
    def ready(self) -> bool:
        return len(self._x) >= self.dim + 2

    def predict(self, z: FloatArray) -> FloatArray:
        """Affine forecast once enough pairs are in; until then, predict no motion."""
        if not self.ready:
            return np.array(z, dtype=float)
        w, b = fit_affine(np.array(self._x), np.array(self._y), self.ridge)
        return np.asarray(w @ z + b)

    def add(self, z: FloatArray, z_next: FloatArray) -> None:
        self._x.append(np.asarray(z, dtype=float))
        self._y.append(np.asarray(z_next, dtype=float))


def oracle_loss(states: FloatArray) -> float:
    """Mean squared one-step error of the from-scratch model fit to the whole episode at once.

    This is the direct per-episode optimum the amortized predictor is compared
    against; it never sees the amortized predictions.
    """
    x, y = states[:-1], states[1:]
    w, b = fit_affine(x, y)
    r = x @ w.T + b - y
    return float(np.mean(np.sum(r**2, axis=1)))

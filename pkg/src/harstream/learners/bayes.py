"""Incremental Gaussian naive Bayes with Welford per-class statistics."""

from __future__ import annotations

from typing import Dict, Optional

import numpy as np

from .base import OnlineClassifier, Prediction

VARIANCE_FLOOR = 1e-9


class ClassStats:
    """Running count, mean and M2 per dimension for one class."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self, dims: int):
        self.count = 0
        self.mean = np.zeros(dims)
        self.m2 = np.zeros(dims)

    def update(self, x: np.ndarray) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def variance(self, floor: float) -> np.ndarray:
        if self.count == 0:
            return np.full_like(self.mean, floor)
        return np.maximum(self.m2 / self.count, floor)


class IncrementalNaiveBayes(OnlineClassifier):
    """Gaussian NB scored in log space; posteriors sum to one.

    Class priors are empirical counts; per-dimension variances are
    floored at `variance_floor` before entering the likelihood.
    """

    algorithm = "inb"

    def __init__(self, n_features: int, variance_floor: float = VARIANCE_FLOOR):
        super().__init__(n_features)
        self.variance_floor = variance_floor
        self.class_stats: Dict[int, ClassStats] = {}

    def _learn(self, x: np.ndarray, y: int) -> None:
        stats = self.class_stats.get(y)
        if stats is None:
            stats = self.class_stats[y] = ClassStats(self.n_features)
        stats.update(x)

    def log_joint(self, x: np.ndarray) -> Dict[int, float]:
        total = sum(s.count for s in self.class_stats.values())
        out = {}
        for c, stats in self.class_stats.items():
            var = stats.variance(self.variance_floor)
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * var) + (x - stats.mean) ** 2 / var)
            out[c] = float(np.log(stats.count / total) + ll)
        return out

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        if not self.class_stats:
            return None
        log_post = self.log_joint(x)
        classes = sorted(log_post)
        logp = np.array([log_post[c] for c in classes])
        p = np.exp(logp - logp.max())
        p /= p.sum()
        scores = {c: float(p[i]) for i, c in enumerate(classes)}
        winner = classes[int(np.argmax(p))]
        return winner, scores

"""Online random forest: Hoeffding trees on random feature subsets.

Each tree sees a fixed random subset of ceil(sqrt(n_features)) input
dimensions and is trained on Poisson(1)-replicated copies of each
example (online bagging). Prediction sums the trees' score dicts.
"""

from __future__ import annotations

import math
from typing import Dict, Optional

import numpy as np

from .base import OnlineClassifier, Prediction, argmax_label
from .hoeffding import DEFAULT_DELTA, DEFAULT_GRACE, DEFAULT_TAU, HoeffdingTree

DEFAULT_TREES = 10
POISSON_CAP = 1000


def online_bagging_sample(lam: float, rng: np.random.Generator) -> int:
    """Poisson replication count for one example; lam <= 0 always yields 0."""
    if lam <= 0.0:
        return 0
    return min(int(rng.poisson(lam)), POISSON_CAP)


class IncrementalRandomForest(OnlineClassifier):
    algorithm = "irf"

    def __init__(self, n_features: int, n_trees: int = DEFAULT_TREES,
                 subspace: Optional[int] = None, delta: float = DEFAULT_DELTA,
                 tau: float = DEFAULT_TAU, grace_period: int = DEFAULT_GRACE,
                 seed: Optional[int] = None):
        super().__init__(n_features)
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if subspace is None:
            subspace = math.ceil(math.sqrt(n_features))
        subspace = min(subspace, n_features)
        self.rng = np.random.default_rng(seed)
        self.trees = []
        for _ in range(n_trees):
            dims = np.sort(self.rng.choice(n_features, size=subspace, replace=False))
            self.trees.append(HoeffdingTree(n_features, delta=delta, tau=tau,
                                            grace_period=grace_period, dims=dims))
        self._label_counts: Dict[int, int] = {}

    def _learn(self, x: np.ndarray, y: int) -> None:
        self._label_counts[y] = self._label_counts.get(y, 0) + 1
        for tree in self.trees:
            for _ in range(online_bagging_sample(1.0, self.rng)):
                tree.learn(x, y)

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        votes: Dict[int, float] = {}
        for tree in self.trees:
            result = tree.predict(x)
            if result is None:
                continue
            for label, score in result[1].items():
                votes[label] = votes.get(label, 0.0) + score
        if not votes:
            # every tree may have drawn Poisson 0 on the examples so far
            votes = {c: float(n) for c, n in self._label_counts.items()}
        total = sum(votes.values())
        scores = {c: v / total for c, v in votes.items()}
        return argmax_label(scores), scores

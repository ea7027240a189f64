"""Incremental k-nearest-neighbors over a FIFO instance memory."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .base import OnlineClassifier, Prediction

DEFAULT_K = 5
DEFAULT_MEMORY = 2000


class IncrementalKnn(OnlineClassifier):
    """Instance memory capped at `memory` pairs, evicted strictly FIFO.

    Prediction is a majority vote among the k nearest stored vectors
    (Euclidean); k is capped at the current memory size. Vote ties are
    broken by smaller summed distance, then by smaller class id.
    memory=None keeps every instance (unbounded fidelity variant).
    """

    algorithm = "iknn"

    def __init__(self, n_features: int, k: int = DEFAULT_K, memory: Optional[int] = DEFAULT_MEMORY):
        super().__init__(n_features)
        if k < 1:
            raise ValueError("k must be >= 1")
        if memory is not None and memory < 1:
            raise ValueError("memory must be >= 1 or None")
        self.k = k
        self.memory = memory
        self._vectors: list = []
        self._labels: list = []

    def __len__(self):
        return len(self._vectors)

    def _learn(self, x: np.ndarray, y: int) -> None:
        self._vectors.append(x.copy())
        self._labels.append(y)
        if self.memory is not None and len(self._vectors) > self.memory:
            self._vectors.pop(0)
            self._labels.pop(0)

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        if not self._vectors:
            return None
        stored = np.asarray(self._vectors)
        dists = np.sqrt(np.sum((stored - x) ** 2, axis=1))
        k = min(self.k, len(self._vectors))
        nearest = np.argsort(dists, kind="stable")[:k]
        votes: dict = {}
        summed: dict = {}
        for i in nearest:
            lab = self._labels[i]
            votes[lab] = votes.get(lab, 0) + 1
            summed[lab] = summed.get(lab, 0.0) + float(dists[i])
        winner = min(votes, key=lambda c: (-votes[c], summed[c], c))
        scores = {c: votes[c] / k for c in votes}
        return winner, scores

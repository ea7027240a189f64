"""Chunk-incremental ensemble for drifting streams (Learn++.NSE style).

Examples accumulate into fixed-size chunks. Each full chunk trains one
new naive Bayes member; every member's error on the chunk is weighted
by instance difficulty, turned into beta = err / (1 - err), and the
member's voting weight is ln(1 / beta-bar) where beta-bar averages the
member's beta history under sigmoid age weights. Between chunk
boundaries a provisional model trained on the in-progress chunk keeps
single-example predictions available.
"""

from __future__ import annotations

import functools
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .base import OnlineClassifier, Prediction, argmax_label
from .bayes import IncrementalNaiveBayes

DEFAULT_CHUNK = 20
DEFAULT_SIGMOID_SLOPE = 0.5
DEFAULT_SIGMOID_SHIFT = 10.0
ERROR_FLOOR = 1e-10


class EmptyChunk(ValueError):
    pass


class NseMember:
    __slots__ = ("model", "debut", "betas")

    def __init__(self, model: OnlineClassifier, debut: int):
        self.model = model
        self.debut = debut          # 1-based chunk index of creation
        self.betas: List[float] = []


class LearnNse(OnlineClassifier):
    algorithm = "nse"

    def __init__(self, n_features: int, chunk_size: int = DEFAULT_CHUNK,
                 slope: float = DEFAULT_SIGMOID_SLOPE,
                 shift: float = DEFAULT_SIGMOID_SHIFT,
                 base_factory: Optional[Callable[[], OnlineClassifier]] = None):
        super().__init__(n_features)
        if chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if base_factory is None:
            # partial of a module-level callable keeps the model picklable
            base_factory = functools.partial(IncrementalNaiveBayes, n_features)
        self.chunk_size = chunk_size
        self.slope = slope
        self.shift = shift
        self.base_factory = base_factory
        self.members: List[NseMember] = []
        self.weights: List[float] = []
        self.chunk_index = 0        # number of completed chunks
        self._buffer: List[Tuple[np.ndarray, int]] = []
        self._provisional = base_factory()

    # --- incremental interface ---

    def _learn(self, x: np.ndarray, y: int) -> None:
        self._buffer.append((np.array(x, dtype=float, copy=True), y))
        self._provisional.learn(x, y)
        if len(self._buffer) >= self.chunk_size:
            self.learn_chunk(self._buffer)
            self._buffer = []
            self._provisional = self.base_factory()

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        if not self.members:
            return self._provisional.predict(x)
        votes: Dict[int, float] = {}
        for member, weight in zip(self.members, self.weights):
            result = member.model.predict(x)
            if result is None:
                continue
            votes[result[0]] = votes.get(result[0], 0.0) + weight
        if not votes or sum(votes.values()) <= 0.0:
            votes = {}
            for member in self.members:
                result = member.model.predict(x)
                if result is not None:
                    votes[result[0]] = votes.get(result[0], 0.0) + 1.0
        if not votes:
            return None
        total = sum(votes.values())
        scores = {c: v / total for c, v in votes.items()}
        return argmax_label(scores), scores

    # --- chunk update ---

    def learn_chunk(self, chunk: Sequence[Tuple[np.ndarray, int]]) -> None:
        """Run one ensemble update on a completed chunk."""
        if len(chunk) == 0:
            raise EmptyChunk("chunk must contain at least one example")
        t = self.chunk_index + 1
        m = len(chunk)

        # instance weights from the current ensemble's errors
        if self.members:
            wrong = np.array([not self._ensemble_correct(x, y) for x, y in chunk])
            chunk_error = wrong.mean()
            raw = np.where(wrong, 1.0, chunk_error) / m
            total = raw.sum()
            dist = raw / total if total > 0 else np.full(m, 1.0 / m)
        else:
            dist = np.full(m, 1.0 / m)

        member = NseMember(self._train_member(chunk), debut=t)
        self.members.append(member)

        for k, mem in enumerate(self.members):
            err = self._weighted_error(mem.model, chunk, dist)
            if mem.debut == t and err > 0.5:
                # one retraining attempt for a freshly added member
                mem.model = self._train_member(chunk)
                err = self._weighted_error(mem.model, chunk, dist)
            err = min(max(err, ERROR_FLOOR), 0.5)
            mem.betas.append(err / (1.0 - err))

        self.chunk_index = t
        self.weights = [self._voting_weight(mem, t) for mem in self.members]

    def _train_member(self, chunk) -> OnlineClassifier:
        model = self.base_factory()
        for x, y in chunk:
            model.learn(x, y)
        return model

    def _ensemble_correct(self, x: np.ndarray, y: int) -> bool:
        result = self._predict(x)
        return result is not None and result[0] == y

    @staticmethod
    def _weighted_error(model: OnlineClassifier, chunk, dist: np.ndarray) -> float:
        err = 0.0
        for weight, (x, y) in zip(dist, chunk):
            result = model.predict(x)
            if result is None or result[0] != y:
                err += weight
        return err

    def _voting_weight(self, member: NseMember, t: int) -> float:
        ages = np.arange(t - member.debut + 1, dtype=float)
        omega = 1.0 / (1.0 + np.exp(-self.slope * (ages - self.shift)))
        omega /= omega.sum()
        beta_bar = float(np.dot(omega, np.asarray(member.betas)))
        beta_bar = max(beta_bar, ERROR_FLOOR)
        return math.log(1.0 / beta_bar)

"""Online boosting (Oza-style) over naive Bayes base models.

Each incoming example passes through the stages in order carrying a
weight lambda. A stage trains on Poisson(lambda) replicated copies,
then lambda is scaled up if the stage currently misclassifies the
example and down if it classifies it correctly. Voting weights are
ln((1 - err) / err) per stage, floored at zero.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Optional

import numpy as np

from .base import OnlineClassifier, Prediction, argmax_label
from .bayes import IncrementalNaiveBayes
from .forest import online_bagging_sample

DEFAULT_STAGES = 10
ERROR_FLOOR = 1e-10


class BoostStage:
    __slots__ = ("model", "lam_correct", "lam_wrong")

    def __init__(self, model: OnlineClassifier):
        self.model = model
        self.lam_correct = 0.0
        self.lam_wrong = 0.0

    def error(self) -> float:
        total = self.lam_correct + self.lam_wrong
        if total <= 0.0:
            return 0.5
        return self.lam_wrong / total

    def weight(self) -> float:
        err = min(max(self.error(), ERROR_FLOOR), 1.0 - ERROR_FLOOR)
        return max(0.0, np.log((1.0 - err) / err))


class OzaBoost(OnlineClassifier):
    algorithm = "iadaboost"

    def __init__(self, n_features: int, n_stages: int = DEFAULT_STAGES,
                 base_factory: Optional[Callable[[], OnlineClassifier]] = None,
                 seed: Optional[int] = None):
        super().__init__(n_features)
        if n_stages < 1:
            raise ValueError("n_stages must be >= 1")
        if base_factory is None:
            base_factory = lambda: IncrementalNaiveBayes(n_features)
        self.rng = np.random.default_rng(seed)
        self.stages: List[BoostStage] = [BoostStage(base_factory())
                                         for _ in range(n_stages)]
        self._label_counts: Dict[int, int] = {}

    def _learn(self, x: np.ndarray, y: int) -> None:
        self._label_counts[y] = self._label_counts.get(y, 0) + 1
        lam = 1.0
        for stage in self.stages:
            for _ in range(online_bagging_sample(lam, self.rng)):
                stage.model.learn(x, y)
            result = stage.model.predict(x)
            # an untrained stage counts as misclassifying
            correct = result is not None and result[0] == y
            if correct:
                stage.lam_correct += lam
                total = stage.lam_correct + stage.lam_wrong
                lam = lam * total / (2.0 * stage.lam_correct)
            else:
                stage.lam_wrong += lam
                total = stage.lam_correct + stage.lam_wrong
                lam = lam * total / (2.0 * stage.lam_wrong)

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        weighted: Dict[int, float] = {}
        unweighted: Dict[int, float] = {}
        for stage in self.stages:
            result = stage.model.predict(x)
            if result is None:
                continue
            label = result[0]
            weighted[label] = weighted.get(label, 0.0) + stage.weight()
            unweighted[label] = unweighted.get(label, 0.0) + 1.0
        votes = weighted if sum(weighted.values()) > 0.0 else unweighted
        if not votes:
            # no stage trained yet (possible right after the first example)
            votes = {c: float(n) for c, n in self._label_counts.items()}
        total = sum(votes.values())
        scores = {c: v / total for c, v in votes.items()}
        return argmax_label(scores), scores

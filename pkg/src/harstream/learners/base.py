"""Shared learn-one/predict-one contract for the six online classifiers.

Every classifier works on fixed-length float vectors and integer class
ids. predict() is side-effect free and returns None until the first
training example has been seen; learn() admits never-seen class ids at
any point (class-incremental by construction).
"""

from __future__ import annotations

import pickle
from typing import Dict, Optional, Tuple

import numpy as np

Prediction = Tuple[int, Dict[int, float]]

MODEL_FORMAT = "harstream-model"
MODEL_VERSION = 1


class DimensionMismatch(ValueError):
    """Input vector length does not match the model's feature count."""


class OnlineClassifier:
    """Base class: bookkeeping plus the argmax tie-break rule."""

    algorithm = "base"

    def __init__(self, n_features: int):
        self.n_features = n_features
        self.examples_seen = 0

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.size != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {x.size}")
        return x

    def learn(self, x, y: int) -> None:
        x = self._check(x)
        self._learn(x, int(y))
        self.examples_seen += 1

    def predict(self, x) -> Optional[Prediction]:
        x = self._check(x)
        if self.examples_seen == 0:
            return None
        return self._predict(x)

    def _learn(self, x: np.ndarray, y: int) -> None:
        raise NotImplementedError

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        raise NotImplementedError


def argmax_label(scores: Dict[int, float]) -> int:
    """Highest score wins; ties go to the smallest class id."""
    return max(sorted(scores), key=lambda c: scores[c])


def save_model(model: OnlineClassifier, path) -> None:
    """Write a versioned snapshot; load_model() restores identical behavior."""
    envelope = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "algorithm": model.algorithm,
        "model": model,
    }
    with open(path, "wb") as fh:
        pickle.dump(envelope, fh)


def load_model(path) -> OnlineClassifier:
    with open(path, "rb") as fh:
        envelope = pickle.load(fh)
    if envelope.get("format") != MODEL_FORMAT:
        raise ValueError(f"not a {MODEL_FORMAT} snapshot: {path}")
    if envelope.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported snapshot version {envelope.get('version')}")
    return envelope["model"]

"""Incremental classifiers sharing the learn-one / predict-one contract."""

from __future__ import annotations

from typing import Dict, Optional

from .base import (DimensionMismatch, OnlineClassifier, Prediction,
                   argmax_label, load_model, save_model)
from .bayes import IncrementalNaiveBayes
from .boosting import BoostStage, OzaBoost
from .forest import IncrementalRandomForest, online_bagging_sample
from .hoeffding import HoeffdingTree, hoeffding_bound
from .knn import IncrementalKnn
from .nse import EmptyChunk, LearnNse, NseMember

ALGORITHMS = ("iknn", "idt", "irf", "iadaboost", "inb", "nse")

ALGORITHM_TITLES: Dict[str, str] = {
    "iknn": "Incremental KNN",
    "idt": "Incremental Decision Tree",
    "irf": "Incremental Random Forest",
    "iadaboost": "Incremental AdaBoost",
    "inb": "Incremental Naive Bayes",
    "nse": "Learn++.NSE",
}


class UnknownAlgorithm(ValueError):
    pass


def create(algo: str, n_features: int, seed: Optional[int] = None,
           **options) -> OnlineClassifier:
    """Build a classifier by registry id; options go to the constructor."""
    if algo == "iknn":
        return IncrementalKnn(n_features, **options)
    if algo == "idt":
        return HoeffdingTree(n_features, **options)
    if algo == "irf":
        return IncrementalRandomForest(n_features, seed=seed, **options)
    if algo == "iadaboost":
        return OzaBoost(n_features, seed=seed, **options)
    if algo == "inb":
        return IncrementalNaiveBayes(n_features, **options)
    if algo == "nse":
        return LearnNse(n_features, **options)
    raise UnknownAlgorithm(f"unknown algorithm id: {algo!r}")


__all__ = [
    "ALGORITHMS", "ALGORITHM_TITLES", "BoostStage", "DimensionMismatch",
    "EmptyChunk", "HoeffdingTree", "IncrementalKnn", "IncrementalNaiveBayes",
    "IncrementalRandomForest", "LearnNse", "NseMember", "OnlineClassifier",
    "OzaBoost", "Prediction", "UnknownAlgorithm", "argmax_label", "create",
    "hoeffding_bound", "load_model", "online_bagging_sample", "save_model",
]

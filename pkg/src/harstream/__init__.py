"""Online human activity recognition from streaming inertial sensors.

Pipeline: 40-sample tumbling windows at 20 Hz -> 98 statistical and
spectral features per window -> running z-score normalization -> one of
six incremental classifiers evaluated test-then-train.
"""

from .features import (FEATURE_COUNT, FeatureVector, FreqFeatures,
                       OnlineNormalizer, Spectrum, TimeFeatures,
                       axis_features, extract, feature_names, freq_features,
                       normalize, sma, spectrum, time_features)
from .learners import (ALGORITHMS, ALGORITHM_TITLES, HoeffdingTree,
                       IncrementalKnn, IncrementalNaiveBayes,
                       IncrementalRandomForest, LearnNse, OnlineClassifier,
                       OzaBoost, create, hoeffding_bound, load_model,
                       save_model)
from .windowing import (DEFAULT_RATE_HZ, DEFAULT_WINDOW_SIZE, ActivityLabel,
                        NonFiniteChannel, SensorSample, SensorWindow,
                        WindowAssembler, modal_label, windows_from_samples)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "ALGORITHM_TITLES", "ActivityLabel", "DEFAULT_RATE_HZ",
    "DEFAULT_WINDOW_SIZE", "FEATURE_COUNT", "FeatureVector", "FreqFeatures",
    "HoeffdingTree", "IncrementalKnn", "IncrementalNaiveBayes",
    "IncrementalRandomForest", "LearnNse", "NonFiniteChannel",
    "OnlineClassifier", "OnlineNormalizer", "OzaBoost", "SensorSample",
    "SensorWindow", "Spectrum", "TimeFeatures", "WindowAssembler",
    "axis_features", "create", "extract", "feature_names", "freq_features",
    "hoeffding_bound", "load_model", "modal_label", "normalize",
    "save_model", "sma", "spectrum", "time_features", "windows_from_samples",
    "__version__",
]

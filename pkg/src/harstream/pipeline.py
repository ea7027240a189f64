"""Offline pipeline: samples -> windows -> features -> evaluate.

The streaming service runs the same stages incrementally with an online
z-score normalizer in front of the model; pass normalized=True to mirror
it, and replaying a CSV through the server then reproduces exactly what
these functions produce offline. Benchmarks run on raw features.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence

from .evaluation import EvalReport, run_prequential
from .features import FEATURE_COUNT, FeatureVector, OnlineNormalizer, extract, normalize
from .learners import create
from .windowing import (DEFAULT_RATE_HZ, DEFAULT_WINDOW_SIZE, SensorSample,
                        windows_from_samples)


def vectors_from_samples(samples: Iterable[SensorSample],
                         window_size: int = DEFAULT_WINDOW_SIZE,
                         rate_hz: float = DEFAULT_RATE_HZ,
                         normalized: bool = False,
                         sma_literal: bool = False) -> List[FeatureVector]:
    """Window the stream and extract feature vectors, raw by default."""
    normalizer = OnlineNormalizer(FEATURE_COUNT) if normalized else None
    vectors = []
    for window in windows_from_samples(samples, window_size=window_size,
                                       rate_hz=rate_hz):
        vector = extract(window, sma_literal=sma_literal)
        if normalizer is not None:
            vector = normalize(vector, normalizer)
        vectors.append(vector)
    return vectors


def prequential_run(samples: Iterable[SensorSample], algo: str,
                    seed: Optional[int] = None,
                    window_size: int = DEFAULT_WINDOW_SIZE,
                    rate_hz: float = DEFAULT_RATE_HZ,
                    normalized: bool = False,
                    **options) -> EvalReport:
    """End-to-end test-then-train run of one algorithm over raw samples."""
    vectors = vectors_from_samples(samples, window_size=window_size,
                                   rate_hz=rate_hz, normalized=normalized)
    model = create(algo, n_features=FEATURE_COUNT, seed=seed, **options)
    return run_prequential(vectors, model, algorithm=algo)


def bench_run(samples: Sequence[SensorSample], algos: Sequence[str],
              seed: Optional[int] = None,
              window_size: int = DEFAULT_WINDOW_SIZE,
              rate_hz: float = DEFAULT_RATE_HZ,
              normalized: bool = False) -> Dict[str, EvalReport]:
    """Run several algorithms over the same extracted vectors."""
    vectors = vectors_from_samples(samples, window_size=window_size,
                                   rate_hz=rate_hz, normalized=normalized)
    reports = {}
    for algo in algos:
        model = create(algo, n_features=FEATURE_COUNT, seed=seed)
        reports[algo] = run_prequential(vectors, model, algorithm=algo)
    return reports

"""Weight bookkeeping of the online boosting ensemble."""

import math

import numpy as np
import pytest

from harstream.learners import BoostStage, IncrementalNaiveBayes, OzaBoost
from harstream.learners.boosting import ERROR_FLOOR
from harstream.learners.forest import online_bagging_sample


def test_first_example_passes_half_lambda_to_stage_two():
    # a fresh stage halves lambda no matter which branch it takes
    for seed in range(5):
        model = OzaBoost(2, n_stages=3, seed=seed)
        model.learn(np.array([1.0, 2.0]), 0)
        assert model.stages[0].lam_correct + model.stages[0].lam_wrong == 1.0
        assert model.stages[1].lam_correct + model.stages[1].lam_wrong == 0.5
        assert model.stages[2].lam_correct + model.stages[2].lam_wrong == 0.25


def test_stage_one_mass_equals_examples_seen():
    model = OzaBoost(2, n_stages=4, seed=9)
    rng = np.random.default_rng(10)
    for i in range(200):
        model.learn(rng.normal(0, 1, 2), int(i % 2))
    stage = model.stages[0]
    assert stage.lam_correct + stage.lam_wrong == 200.0


def test_empty_stage_reports_error_half_and_weight_zero():
    stage = BoostStage(IncrementalNaiveBayes(2))
    assert stage.error() == 0.5
    assert stage.weight() == 0.0


def test_balanced_stage_has_zero_weight():
    stage = BoostStage(IncrementalNaiveBayes(2))
    stage.lam_correct = 3.0
    stage.lam_wrong = 3.0
    assert stage.weight() == 0.0


def test_weight_is_log_odds_of_error():
    stage = BoostStage(IncrementalNaiveBayes(2))
    stage.lam_correct = 9.0
    stage.lam_wrong = 1.0
    assert stage.weight() == pytest.approx(math.log(9.0), abs=1e-12)


def test_worse_than_chance_stage_is_silenced():
    stage = BoostStage(IncrementalNaiveBayes(2))
    stage.lam_correct = 1.0
    stage.lam_wrong = 9.0
    assert stage.weight() == 0.0


def test_perfect_stage_weight_uses_error_floor():
    stage = BoostStage(IncrementalNaiveBayes(2))
    stage.lam_correct = 5.0
    stage.lam_wrong = 0.0
    expected = math.log((1.0 - ERROR_FLOOR) / ERROR_FLOOR)
    assert stage.weight() == pytest.approx(expected, rel=1e-12)


def test_poisson_sampler_mean_and_degenerate_lambdas():
    rng = np.random.default_rng(77)
    draws = [online_bagging_sample(1.0, rng) for _ in range(100_000)]
    assert np.mean(draws) == pytest.approx(1.0, abs=0.02)
    assert online_bagging_sample(0.0, rng) == 0
    assert online_bagging_sample(-2.0, rng) == 0


def test_poisson_sampler_is_capped():
    rng = np.random.default_rng(78)
    assert online_bagging_sample(1e9, rng) == 1000


def test_boosting_learns_separable_blobs():
    model = OzaBoost(2, seed=0)
    rng = np.random.default_rng(3)
    for _ in range(150):
        y = int(rng.integers(0, 2))
        center = np.zeros(2) if y == 0 else np.full(2, 8.0)
        model.learn(center + rng.normal(0, 0.5, 2), y)
    assert model.predict(np.zeros(2))[0] == 0
    assert model.predict(np.full(2, 8.0))[0] == 1


def test_stage_count_validation():
    with pytest.raises(ValueError):
        OzaBoost(2, n_stages=0)

"""Contract tests shared by all six classifiers, plus KNN/NB specifics."""

import numpy as np
import pytest

from harstream.learners import (ALGORITHMS, DimensionMismatch,
                                IncrementalKnn, IncrementalNaiveBayes,
                                UnknownAlgorithm, argmax_label, create,
                                load_model, save_model)

DIMS = 4

CORNERS = {
    0: np.array([0.0, 0.0, 0.0, 0.0]),
    1: np.array([10.0, 10.0, 0.0, 0.0]),
    2: np.array([0.0, 0.0, 10.0, 10.0]),
}


def blob_stream(counts, noise=0.3, seed=11):
    """Labeled points clustered around the class corners, class by class."""
    rng = np.random.default_rng(seed)
    out = []
    for label, n in counts:
        for _ in range(n):
            out.append((CORNERS[label] + rng.normal(0, noise, DIMS), label))
    return out


def mixed_stream(n=120, seed=13):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, n)
    return [(CORNERS[int(y)] + rng.normal(0, 0.3, DIMS), int(y))
            for y in labels]


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_untrained_model_predicts_nothing(algo):
    model = create(algo, DIMS, seed=0)
    assert model.predict(np.zeros(DIMS)) is None


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_single_example_is_recallable(algo):
    model = create(algo, DIMS, seed=0)
    v = np.array([1.0, 2.0, 3.0, 4.0])
    model.learn(v, 7)
    result = model.predict(v)
    assert result is not None and result[0] == 7


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_predict_is_side_effect_free(algo):
    stream = mixed_stream()
    probe = CORNERS[1] + 0.1
    active = create(algo, DIMS, seed=3)
    passive = create(algo, DIMS, seed=3)
    for x, y in stream:
        for _ in range(3):
            active.predict(probe)
        active.learn(x, y)
        passive.learn(x, y)
    assert active.predict(probe) == passive.predict(probe)
    first = active.predict(probe)
    second = active.predict(probe)
    assert first == second


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_new_class_admitted_mid_stream(algo):
    model = create(algo, DIMS, seed=1)
    for x, y in blob_stream([(0, 30), (1, 30)]):
        model.learn(x, y)
    # class 2 appears only now, and with the largest share
    for x, y in blob_stream([(2, 40)], seed=12):
        model.learn(x, y)
    result = model.predict(CORNERS[2])
    assert result is not None and result[0] == 2


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_examples_seen_counts_learns(algo):
    model = create(algo, DIMS, seed=0)
    for i, (x, y) in enumerate(mixed_stream(25), start=1):
        model.learn(x, y)
        assert model.examples_seen == i


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_dimension_mismatch_rejected(algo):
    model = create(algo, DIMS, seed=0)
    with pytest.raises(DimensionMismatch):
        model.learn(np.zeros(DIMS + 1), 0)
    model.learn(np.zeros(DIMS), 0)
    with pytest.raises(DimensionMismatch):
        model.predict(np.zeros(DIMS - 1))


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_seeded_runs_are_bit_identical(algo):
    stream = mixed_stream(150, seed=17)
    outputs = []
    for _ in range(2):
        model = create(algo, DIMS, seed=42)
        run = []
        for x, y in stream:
            run.append(model.predict(x))
            model.learn(x, y)
        outputs.append(run)
    assert outputs[0] == outputs[1]


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_snapshot_roundtrip_preserves_behavior(algo, tmp_path):
    stream = mixed_stream(140, seed=19)
    model = create(algo, DIMS, seed=5)
    for x, y in stream[:70]:
        model.learn(x, y)
    path = tmp_path / f"{algo}.model"
    save_model(model, path)
    clone = load_model(path)
    assert clone.algorithm == model.algorithm
    for x, y in stream[70:]:
        assert clone.predict(x) == model.predict(x)
        clone.learn(x, y)
        model.learn(x, y)
    assert clone.predict(CORNERS[0]) == model.predict(CORNERS[0])


def test_load_rejects_foreign_files(tmp_path):
    path = tmp_path / "junk.model"
    import pickle
    with open(path, "wb") as fh:
        pickle.dump({"something": "else"}, fh)
    with pytest.raises(ValueError):
        load_model(path)


def test_unknown_algorithm_id():
    with pytest.raises(UnknownAlgorithm):
        create("perceptron", DIMS)


def test_argmax_tie_prefers_smallest_id():
    assert argmax_label({3: 0.4, 1: 0.4, 2: 0.2}) == 1
    assert argmax_label({0: 1.0}) == 0


# --- KNN specifics ---

def test_knn_nearest_single_neighbor():
    model = IncrementalKnn(2, k=1)
    model.learn(np.array([0.0, 0.0]), 0)
    model.learn(np.array([5.0, 5.0]), 1)
    assert model.predict(np.array([0.1, 0.0]))[0] == 0
    assert model.predict(np.array([5.1, 5.0]))[0] == 1


def test_knn_majority_two_to_one():
    model = IncrementalKnn(2, k=3)
    model.learn(np.array([0.0, 0.0]), 0)
    model.learn(np.array([0.0, 1.0]), 0)
    model.learn(np.array([5.0, 5.0]), 1)
    label, scores = model.predict(np.array([0.0, 0.5]))
    assert label == 0
    assert scores == {0: pytest.approx(2 / 3), 1: pytest.approx(1 / 3)}


def test_knn_k_capped_at_memory_size():
    model = IncrementalKnn(2, k=50)
    model.learn(np.array([0.0, 0.0]), 0)
    model.learn(np.array([1.0, 1.0]), 1)
    label, scores = model.predict(np.array([0.2, 0.2]))
    assert label == 0
    assert scores == {0: 0.5, 1: 0.5}


def test_knn_vote_tie_broken_by_summed_distance():
    model = IncrementalKnn(1, k=2)
    model.learn(np.array([0.0]), 4)
    model.learn(np.array([1.0]), 2)
    # both classes get one vote; class 2 is nearer the query
    assert model.predict(np.array([0.9]))[0] == 2
    assert model.predict(np.array([0.1]))[0] == 4


def test_knn_memory_evicts_fifo():
    model = IncrementalKnn(1, k=1, memory=2)
    model.learn(np.array([0.0]), 0)
    model.learn(np.array([10.0]), 1)
    model.learn(np.array([20.0]), 2)      # evicts the 0.0 -> 0 pair
    assert len(model) == 2
    assert model.predict(np.array([0.0]))[0] == 1


def test_knn_unbounded_memory_variant():
    model = IncrementalKnn(1, k=1, memory=None)
    for i in range(3000):
        model.learn(np.array([float(i)]), i % 2)
    assert len(model) == 3000


def test_knn_exact_match_wins_under_k1():
    model = IncrementalKnn(2, k=1)
    stored = np.array([2.0, -3.0])
    model.learn(stored, 9)
    model.learn(np.array([50.0, 50.0]), 1)
    assert model.predict(stored)[0] == 9


def test_knn_rejects_bad_parameters():
    with pytest.raises(ValueError):
        IncrementalKnn(2, k=0)
    with pytest.raises(ValueError):
        IncrementalKnn(2, memory=0)


# --- naive Bayes specifics ---

def test_nb_separated_clusters_hand_example():
    model = IncrementalNaiveBayes(1)
    for v in (0.0, 0.5, -0.5):
        model.learn(np.array([v]), 0)
    for v in (10.0, 10.5, 9.5):
        model.learn(np.array([v]), 1)
    label, scores = model.predict(np.array([1.0]))
    assert label == 0
    assert scores[0] == pytest.approx(1.0, abs=1e-9)


def test_nb_scores_form_a_distribution():
    model = IncrementalNaiveBayes(DIMS)
    for x, y in mixed_stream(90, seed=23):
        model.learn(x, y)
    for x, _ in mixed_stream(20, seed=24):
        scores = model.predict(x)[1]
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(s >= 0 for s in scores.values())


def test_nb_priors_sum_to_examples_seen():
    model = IncrementalNaiveBayes(DIMS)
    stream = mixed_stream(75, seed=25)
    for x, y in stream:
        model.learn(x, y)
    assert sum(s.count for s in model.class_stats.values()) == len(stream)


def test_nb_variance_floor_applies():
    model = IncrementalNaiveBayes(1, variance_floor=1e-6)
    model.learn(np.array([3.0]), 0)
    model.learn(np.array([3.0]), 0)
    var = model.class_stats[0].variance(model.variance_floor)
    assert var[0] == 1e-6

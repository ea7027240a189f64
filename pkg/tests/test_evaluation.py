"""Test-then-train scoring, macro metrics, splits, and log rendering."""

import numpy as np
import pytest

from harstream.evaluation import (ConfusionMatrix, EmptySplit, EmptyStream,
                                  PredictionRecord, UnlabeledVector, curve_csv,
                                  format_record, macro_metrics,
                                  per_class_metrics, render_prediction_log,
                                  render_report_table, run_batch_holdout,
                                  run_prequential, stratified_split,
                                  time_per_sample)
from harstream.features import FEATURE_COUNT, FeatureVector
from harstream.learners import IncrementalKnn, IncrementalNaiveBayes
from harstream.windowing import ActivityLabel

LABELS = {i: ActivityLabel(i, name) for i, name in
          enumerate(["walk", "jog", "stairs"])}


def embed(point):
    values = np.zeros(FEATURE_COUNT)
    values[:len(point)] = point
    return values


def fv(point, label_id, idx):
    label = None if label_id is None else LABELS[label_id]
    return FeatureVector(values=embed(point), label=label, window_index=idx)


def blob_vectors(labels, spread=0.4, seed=0):
    rng = np.random.default_rng(seed)
    return [fv(rng.normal(5.0 * y, spread, 3), y, i)
            for i, y in enumerate(labels)]


class ConstantModel:
    """Always predicts one class; never learns anything."""

    def __init__(self, label_id):
        self.label_id = label_id

    def predict(self, x):
        return self.label_id, {self.label_id: 1.0}

    def learn(self, x, y):
        pass


def test_dummy_accuracy_equals_class_prior():
    rng = np.random.default_rng(1)
    labels = [0] * 36 + [1] * 24
    rng.shuffle(labels)
    stream = [fv([0.0], y, i) for i, y in enumerate(labels)]
    report = run_prequential(stream, ConstantModel(0), algorithm="dummy")
    assert report.accuracy == 36 / 60
    assert report.confusion.col_total(0) == 60


def test_balanced_dummy_scores_one_over_n_classes():
    labels = [0, 1, 2] * 20
    stream = [fv([0.0], y, i) for i, y in enumerate(labels)]
    report = run_prequential(stream, ConstantModel(1))
    assert report.accuracy == pytest.approx(1 / 3, abs=1e-15)


def test_two_class_worked_example():
    # truths A A B B, predictions all A
    stream = [fv([0.0], y, i) for i, y in enumerate([0, 0, 1, 1])]
    report = run_prequential(stream, ConstantModel(0))
    assert report.accuracy == 0.5
    per_class = per_class_metrics(report.confusion)
    assert per_class[0].precision == 0.5
    assert per_class[0].recall == 1.0
    assert per_class[0].f1 == pytest.approx(2 / 3, abs=1e-15)
    assert (per_class[1].precision, per_class[1].recall,
            per_class[1].f1, per_class[1].support) == (0.0, 0.0, 0.0, 2)
    precision, recall, f1 = macro_metrics(report.confusion)
    assert precision == 0.25
    assert recall == 0.5
    assert f1 == pytest.approx(1 / 3, abs=1e-15)


def test_fresh_model_loses_its_first_window():
    stream = blob_vectors([0, 0, 1, 1, 0, 1], seed=2)
    report = run_prequential(stream, IncrementalNaiveBayes(FEATURE_COUNT))
    first = report.records[0]
    assert first.predicted_id is None
    assert not first.correct
    assert first.scores == {}
    assert report.confusion.none_total() == 1
    assert report.confusion.count(stream[0].label.id, None) == 1


def test_always_right_model_has_flat_unit_curve():
    stream = [fv([0.0], 2, i) for i in range(8)]
    report = run_prequential(stream, ConstantModel(2))
    assert report.curve == [1.0] * 8
    assert report.accuracy == 1.0


def test_curve_tracks_cumulative_accuracy():
    stream = blob_vectors([0, 1] * 30, seed=3)
    report = run_prequential(stream, IncrementalKnn(FEATURE_COUNT))
    assert len(report.curve) == report.n_windows == 60
    assert report.curve[-1] == report.accuracy
    correct_so_far = 0
    for i, record in enumerate(report.records):
        correct_so_far += record.correct
        assert report.curve[i] == correct_so_far / (i + 1)
    assert report.confusion.total == 60


def test_prediction_only_class_is_excluded_from_macro():
    stream = [fv([0.0], 0, i) for i in range(5)]
    report = run_prequential(stream, ConstantModel(1))
    assert report.accuracy == 0.0
    assert list(per_class_metrics(report.confusion)) == [0]
    assert macro_metrics(report.confusion) == (0.0, 0.0, 0.0)
    # the stray prediction still shows up in the rendered table
    assert report.confusion.labels() == [0, 1]


def test_confusion_rows_are_rectangular_with_none_column():
    cm = ConfusionMatrix()
    cm.add(0, 0)
    cm.add(0, None)
    cm.add(1, 0)
    rows = cm.as_rows()
    assert rows[0] == ["true\\pred", 0, 1, "none"]
    assert rows[1] == [0, 1, 0, 1]
    assert rows[2] == [1, 1, 0, 0]
    assert all(len(r) == len(rows[0]) for r in rows)


def test_unlabeled_vector_rejected():
    stream = [fv([0.0], None, 0)]
    with pytest.raises(UnlabeledVector):
        run_prequential(stream, ConstantModel(0))


def test_empty_stream_rejected():
    with pytest.raises(EmptyStream):
        run_prequential([], ConstantModel(0))
    with pytest.raises(EmptyStream):
        macro_metrics(ConfusionMatrix())
    with pytest.raises(EmptyStream):
        time_per_sample([])


def test_stratified_split_counts_and_partition():
    vectors = blob_vectors([0] * 30 + [1] * 10, seed=4)
    train, test = stratified_split(vectors, test_share=0.2, seed=3)
    train_ids = sorted(v.window_index for v in train)
    test_ids = sorted(v.window_index for v in test)
    assert len(train) == 32 and len(test) == 8
    assert not set(train_ids) & set(test_ids)
    assert sorted(train_ids + test_ids) == list(range(40))
    for side in (train, test):
        assert {v.label.id for v in side} == {0, 1}
    assert sum(v.label.id == 1 for v in test) == 2


def test_stratified_split_is_seed_deterministic():
    vectors = blob_vectors([0, 1] * 15, seed=5)
    a = stratified_split(vectors, seed=11)
    b = stratified_split(vectors, seed=11)
    assert [v.window_index for v in a[0]] == [v.window_index for v in b[0]]
    assert [v.window_index for v in a[1]] == [v.window_index for v in b[1]]


def test_singleton_class_stays_in_training_side():
    vectors = blob_vectors([0] * 10 + [1], seed=6)
    train, test = stratified_split(vectors, test_share=0.2, seed=0)
    assert sum(v.label.id == 1 for v in train) == 1
    assert all(v.label.id == 0 for v in test)


def test_split_share_validation():
    vectors = blob_vectors([0, 1] * 5)
    for share in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            stratified_split(vectors, test_share=share)


def test_batch_holdout_learns_separable_data():
    vectors = blob_vectors([0, 1, 2] * 20, seed=7)
    train, test = stratified_split(vectors, seed=1)
    report = run_batch_holdout(train, test, IncrementalKnn(FEATURE_COUNT),
                               epochs=1, seed=1, algorithm="iknn")
    assert report.train_accuracy >= 0.95
    assert report.test_accuracy >= 0.9
    assert report.epochs == 1
    assert report.test_report.confusion.total == len(test)
    # frozen scoring must not keep training
    assert all(r.train_s == 0.0 for r in report.test_report.records)


def test_batch_epochs_barely_move_nb():
    vectors = blob_vectors([0, 1] * 30, seed=8)
    train, test = stratified_split(vectors, seed=2)
    accs = []
    for epochs in (1, 3):
        report = run_batch_holdout(train, test,
                                   IncrementalNaiveBayes(FEATURE_COUNT),
                                   epochs=epochs, seed=2)
        accs.append(report.test_accuracy)
    assert abs(accs[0] - accs[1]) <= 1 / len(test) + 1e-12


def test_batch_holdout_validation():
    vectors = blob_vectors([0, 1] * 5, seed=9)
    with pytest.raises(EmptySplit):
        run_batch_holdout([], vectors, ConstantModel(0))
    with pytest.raises(ValueError):
        run_batch_holdout(vectors, vectors, ConstantModel(0), epochs=0)


def test_time_per_sample_averages():
    records = [
        PredictionRecord(0, 0, 0, True, {}, predict_s=0.2, train_s=0.4),
        PredictionRecord(1, 0, 0, True, {}, predict_s=0.4, train_s=0.8),
    ]
    train, predict = time_per_sample(records)
    assert train == pytest.approx(0.6, abs=1e-15)
    assert predict == pytest.approx(0.3, abs=1e-15)


def test_format_record_canonical_lines():
    none_rec = PredictionRecord(0, 1, None, False, {}, 0.01, 0.02)
    assert format_record(none_rec) == "w=0 true=1 pred=none correct=0 scores=[]"
    hit = PredictionRecord(5, 0, 0, True, {1: 0.25, 0: 0.75}, 0.5, 0.5)
    assert format_record(hit) == ("w=5 true=0 pred=0 correct=1 "
                                  "scores=[0:0.75,1:0.25]")


def test_format_record_ignores_latency_fields():
    a = PredictionRecord(2, 1, 1, True, {1: 1.0}, 0.001, 0.002)
    b = PredictionRecord(2, 1, 1, True, {1: 1.0}, 9.0, 9.0)
    assert format_record(a) == format_record(b)


def test_prediction_log_round_trips_through_text():
    stream = blob_vectors([0, 1] * 10, seed=10)
    report = run_prequential(stream, IncrementalNaiveBayes(FEATURE_COUNT))
    text = render_prediction_log(report.records)
    lines = text.splitlines()
    assert text.endswith("\n")
    assert len(lines) == 20
    assert lines[0].startswith("w=0 ")
    assert lines[0].endswith("pred=none correct=0 scores=[]")


def test_curve_csv_layout():
    stream = [fv([0.0], 0, i) for i in range(3)]
    report = run_prequential(stream, ConstantModel(0))
    assert curve_csv(report) == ("window,cumulative_accuracy\n"
                                 "1,1.0\n2,1.0\n3,1.0\n")


def test_report_table_titles_and_shape():
    stream = blob_vectors([0, 1] * 10, seed=12)
    report = run_prequential(stream, IncrementalNaiveBayes(FEATURE_COUNT),
                             algorithm="inb")
    table = render_report_table([report], titles={"inb": "Naive Bayes"})
    lines = table.splitlines()
    assert len(lines) == 3
    assert "Accuracy" in lines[0]
    assert lines[2].startswith("Naive Bayes")
    assert "%" in lines[2]


def test_label_names_travel_with_the_report():
    stream = blob_vectors([0, 1, 2], seed=13)
    report = run_prequential(stream, ConstantModel(0))
    assert report.name_of(0) == "walk"
    assert report.name_of(2) == "stairs"
    assert report.name_of(99) == "99"

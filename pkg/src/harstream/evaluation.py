"""Test-then-train evaluation, metrics, timing, and batch-holdout baselines.

Evaluation order per feature vector: predict (timed), score against the
true label, then learn (timed). A model that returns no prediction is
scored incorrect and tallied in a dedicated "none" confusion column, so
the first window of any fresh learner always counts against it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .features import FeatureVector

NONE_COLUMN = "none"


class EmptyStream(ValueError):
    pass


class UnlabeledVector(ValueError):
    pass


class EmptySplit(ValueError):
    pass


class ConfusionMatrix:
    """Counts of (true label id, predicted label id or None)."""

    def __init__(self):
        self._counts: Dict[int, Dict[Optional[int], int]] = {}
        self.total = 0

    def add(self, true_id: int, predicted_id: Optional[int]) -> None:
        row = self._counts.setdefault(true_id, {})
        row[predicted_id] = row.get(predicted_id, 0) + 1
        self.total += 1

    def count(self, true_id: int, predicted_id: Optional[int]) -> int:
        return self._counts.get(true_id, {}).get(predicted_id, 0)

    def true_labels(self) -> List[int]:
        return sorted(self._counts)

    def labels(self) -> List[int]:
        seen = set(self._counts)
        for row in self._counts.values():
            seen.update(p for p in row if p is not None)
        return sorted(seen)

    def row_total(self, true_id: int) -> int:
        return sum(self._counts.get(true_id, {}).values())

    def col_total(self, predicted_id: Optional[int]) -> int:
        return sum(row.get(predicted_id, 0) for row in self._counts.values())

    def correct(self) -> int:
        return sum(row.get(t, 0) for t, row in self._counts.items())

    def accuracy(self) -> float:
        if self.total == 0:
            return 0.0
        return self.correct() / self.total

    def none_total(self) -> int:
        return self.col_total(None)

    def as_rows(self) -> List[List[object]]:
        """Rectangular table: header, then one row per true label."""
        labels = self.labels()
        header: List[object] = ["true\\pred", *labels, NONE_COLUMN]
        rows = [header]
        for t in self.true_labels():
            rows.append([t, *(self.count(t, p) for p in labels),
                         self.count(t, None)])
        return rows


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


def per_class_metrics(cm: ConfusionMatrix) -> Dict[int, ClassMetrics]:
    out = {}
    for c in cm.true_labels():
        tp = cm.count(c, c)
        predicted = cm.col_total(c)
        actual = cm.row_total(c)
        precision = tp / predicted if predicted > 0 else 0.0
        recall = tp / actual if actual > 0 else 0.0
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
        out[c] = ClassMetrics(precision, recall, f1, actual)
    return out


def macro_metrics(cm: ConfusionMatrix) -> Tuple[float, float, float]:
    """Unweighted means over classes that occur as true labels; 0/0 := 0."""
    if cm.total <= 0:
        raise EmptyStream("confusion matrix is empty")
    per_class = per_class_metrics(cm)
    n = len(per_class)
    precision = sum(m.precision for m in per_class.values()) / n
    recall = sum(m.recall for m in per_class.values()) / n
    f1 = sum(m.f1 for m in per_class.values()) / n
    return precision, recall, f1


@dataclass(frozen=True)
class PredictionRecord:
    window_index: int
    true_id: int
    predicted_id: Optional[int]
    correct: bool
    scores: Dict[int, float]
    predict_s: float
    train_s: float


def format_record(record: PredictionRecord) -> str:
    """Canonical log line: everything except wall-clock latencies.

    Latency fields vary run to run, so determinism checks compare these
    lines; scores print with full repr precision.
    """
    pred = "none" if record.predicted_id is None else str(record.predicted_id)
    scores = ",".join(f"{c}:{record.scores[c]!r}" for c in sorted(record.scores))
    return (f"w={record.window_index} true={record.true_id} pred={pred} "
            f"correct={int(record.correct)} scores=[{scores}]")


def render_prediction_log(records: Sequence[PredictionRecord]) -> str:
    return "\n".join(format_record(r) for r in records) + "\n"


@dataclass
class EvalReport:
    algorithm: str
    confusion: ConfusionMatrix
    records: List[PredictionRecord]
    label_names: Dict[int, str] = field(default_factory=dict)

    @property
    def n_windows(self) -> int:
        return len(self.records)

    @property
    def accuracy(self) -> float:
        return self.confusion.accuracy()

    @property
    def macro_precision(self) -> float:
        return macro_metrics(self.confusion)[0]

    @property
    def macro_recall(self) -> float:
        return macro_metrics(self.confusion)[1]

    @property
    def macro_f1(self) -> float:
        return macro_metrics(self.confusion)[2]

    @property
    def curve(self) -> List[float]:
        """Cumulative accuracy after each evaluated window."""
        out, correct = [], 0
        for i, record in enumerate(self.records, start=1):
            correct += record.correct
            out.append(correct / i)
        return out

    @property
    def avg_predict_time_s(self) -> float:
        return time_per_sample(self.records)[1]

    @property
    def avg_train_time_s(self) -> float:
        return time_per_sample(self.records)[0]

    def per_class(self) -> Dict[int, ClassMetrics]:
        return per_class_metrics(self.confusion)

    def name_of(self, label_id: int) -> str:
        return self.label_names.get(label_id, str(label_id))


def time_per_sample(records: Sequence[PredictionRecord]) -> Tuple[float, float]:
    """(avg train seconds, avg predict seconds) over the logged windows."""
    if not records:
        raise EmptyStream("no timed windows")
    train = sum(r.train_s for r in records) / len(records)
    predict = sum(r.predict_s for r in records) / len(records)
    return train, predict


def _label_id(vector: FeatureVector) -> int:
    if vector.label is None:
        raise UnlabeledVector(f"window {vector.window_index} has no label")
    return vector.label.id


def run_prequential(stream: Iterable[FeatureVector], model,
                    algorithm: str = "") -> EvalReport:
    """Predict, score, then learn, for every vector in order."""
    cm = ConfusionMatrix()
    records: List[PredictionRecord] = []
    names: Dict[int, str] = {}
    for vector in stream:
        y = _label_id(vector)
        names[y] = vector.label.name
        x = vector.values
        t0 = time.perf_counter()
        result = model.predict(x)
        t1 = time.perf_counter()
        model.learn(x, y)
        t2 = time.perf_counter()
        predicted = result[0] if result is not None else None
        scores = dict(result[1]) if result is not None else {}
        cm.add(y, predicted)
        records.append(PredictionRecord(
            window_index=vector.window_index, true_id=y, predicted_id=predicted,
            correct=predicted == y, scores=scores,
            predict_s=t1 - t0, train_s=t2 - t1))
    if not records:
        raise EmptyStream("no labeled vectors to evaluate")
    return EvalReport(algorithm=algorithm, confusion=cm, records=records,
                      label_names=names)


def stratified_split(vectors: Sequence[FeatureVector], test_share: float = 0.2,
                     seed: Optional[int] = None
                     ) -> Tuple[List[FeatureVector], List[FeatureVector]]:
    """Per-class shuffled split; every class keeps >= 1 item on each side."""
    if not 0 < test_share < 1:
        raise ValueError("test_share must be in (0, 1)")
    by_class: Dict[int, List[FeatureVector]] = {}
    for v in vectors:
        by_class.setdefault(_label_id(v), []).append(v)
    rng = np.random.default_rng(seed)
    train: List[FeatureVector] = []
    test: List[FeatureVector] = []
    for c in sorted(by_class):
        group = by_class[c]
        order = rng.permutation(len(group))
        n_test = int(round(len(group) * test_share))
        n_test = min(max(n_test, 1), len(group) - 1) if len(group) > 1 else 0
        for pos, idx in enumerate(order):
            (test if pos < n_test else train).append(group[idx])
    if not train or not test:
        raise EmptySplit("both sides of the split must be non-empty")
    return train, test


@dataclass
class BatchReport:
    algorithm: str
    train_accuracy: float
    test_accuracy: float
    test_report: EvalReport
    epochs: int


def _frozen_score(vectors: Sequence[FeatureVector], model,
                  algorithm: str) -> EvalReport:
    cm = ConfusionMatrix()
    records = []
    names: Dict[int, str] = {}
    for vector in vectors:
        y = _label_id(vector)
        names[y] = vector.label.name
        t0 = time.perf_counter()
        result = model.predict(vector.values)
        t1 = time.perf_counter()
        predicted = result[0] if result is not None else None
        scores = dict(result[1]) if result is not None else {}
        cm.add(y, predicted)
        records.append(PredictionRecord(
            window_index=vector.window_index, true_id=y, predicted_id=predicted,
            correct=predicted == y, scores=scores,
            predict_s=t1 - t0, train_s=0.0))
    return EvalReport(algorithm=algorithm, confusion=cm, records=records,
                      label_names=names)


def run_batch_holdout(train: Sequence[FeatureVector],
                      test: Sequence[FeatureVector], model, epochs: int = 1,
                      seed: Optional[int] = None,
                      algorithm: str = "") -> BatchReport:
    """Stream the shuffled training set `epochs` times, then freeze and score."""
    if not train or not test:
        raise EmptySplit("train and test must both be non-empty")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    rng = np.random.default_rng(seed)
    for _ in range(epochs):
        for idx in rng.permutation(len(train)):
            vector = train[idx]
            model.learn(vector.values, _label_id(vector))
    train_eval = _frozen_score(train, model, algorithm)
    test_eval = _frozen_score(test, model, algorithm)
    return BatchReport(algorithm=algorithm,
                       train_accuracy=train_eval.accuracy,
                       test_accuracy=test_eval.accuracy,
                       test_report=test_eval, epochs=epochs)


def render_report_table(reports: Sequence[EvalReport],
                        titles: Optional[Dict[str, str]] = None) -> str:
    """One row per algorithm, mirroring the metric table column layout."""
    header = (f"{'Algorithm':<28} {'Precision':>9} {'Recall':>9} "
              f"{'F1-Score':>9} {'Accuracy':>9} {'Train(s)':>10} {'Predict(s)':>10}")
    lines = [header, "-" * len(header)]
    for report in reports:
        precision, recall, f1 = macro_metrics(report.confusion)
        title = (titles or {}).get(report.algorithm, report.algorithm)
        lines.append(
            f"{title:<28} {100 * precision:>8.2f}% {100 * recall:>8.2f}% "
            f"{100 * f1:>8.2f}% {100 * report.accuracy:>8.2f}% "
            f"{report.avg_train_time_s:>10.6f} {report.avg_predict_time_s:>10.6f}")
    return "\n".join(lines)


def curve_csv(report: EvalReport) -> str:
    lines = ["window,cumulative_accuracy"]
    lines += [f"{i + 1},{acc!r}" for i, acc in enumerate(report.curve)]
    return "\n".join(lines) + "\n"

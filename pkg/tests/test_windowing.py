import numpy as np
import pytest

from harstream.windowing import (ActivityLabel, NonFiniteChannel, SensorSample,
                                 WindowAssembler, axis_view, modal_label,
                                 windows_from_samples)

from conftest import make_label, make_sample


def test_window_emitted_exactly_at_forty_samples():
    assembler = WindowAssembler()
    for i in range(39):
        assert assembler.push_sample(make_sample(i)) is None
    window = assembler.push_sample(make_sample(39))
    assert window is not None
    assert window.index == 0
    assert len(window) == 40


def test_window_size_one_returns_window_per_push():
    assembler = WindowAssembler(window_size=1)
    for i in range(5):
        window = assembler.push_sample(make_sample(i))
        assert window is not None and window.index == i


def test_modal_label_thirty_nine_to_one():
    a, b = make_label(0, "A"), make_label(1, "B")
    samples = [make_sample(i, label=a) for i in range(39)]
    samples.append(make_sample(39, label=b))
    assert modal_label(samples) == a


def test_modal_label_tie_goes_to_latest_occurring():
    a, b = make_label(0, "A"), make_label(1, "B")
    samples = [make_sample(0, label=a), make_sample(1, label=b),
               make_sample(2, label=a), make_sample(3, label=b)]
    assert modal_label(samples) == b
    # last sample unlabeled: the tie still resolves by latest position
    samples.append(make_sample(4))
    assert modal_label(samples) == b


def test_modal_label_none_when_all_unlabeled():
    assert modal_label([make_sample(i) for i in range(4)]) is None


def test_unlabeled_samples_do_not_vote():
    a = make_label(0, "A")
    samples = [make_sample(0, label=a)] + [make_sample(i) for i in range(1, 40)]
    assert modal_label(samples) == a


def test_exact_floor_window_count_and_sample_order():
    samples = [make_sample(i, values=(float(i), 0, 0, 0, 0, 0))
               for i in range(103)]
    windows = windows_from_samples(samples, window_size=10)
    assert len(windows) == 10
    flattened = [s for w in windows for s in w.samples]
    assert flattened == samples[:100]


def test_tumbling_windows_share_no_sample():
    samples = [make_sample(i) for i in range(80)]
    windows = windows_from_samples(samples)
    ids = [id(s) for w in windows for s in w.samples]
    assert len(ids) == len(set(ids)) == 80


def test_assembly_is_deterministic():
    samples = [make_sample(i, values=tuple(np.sin(i + j) for j in range(6)))
               for i in range(120)]
    first = windows_from_samples(samples)
    second = windows_from_samples(samples)
    assert first == second


def test_non_finite_sample_rejected_buffer_unchanged():
    assembler = WindowAssembler(window_size=2)
    assembler.push_sample(make_sample(0))
    with pytest.raises(NonFiniteChannel):
        assembler.push_sample(make_sample(1, values=(float("nan"), 0, 0, 0, 0, 0)))
    assert assembler.pending == 1
    window = assembler.push_sample(make_sample(2))
    assert window is not None and len(window) == 2


def test_timestamp_regression_accepted_and_counted():
    assembler = WindowAssembler(window_size=3)
    assembler.push_sample(make_sample(5))
    assembler.push_sample(make_sample(2))
    assert assembler.timestamp_regressions == 1
    assert assembler.pending == 2


def test_axis_view_projection_identity():
    values = [(float(i), i + 0.5, i + 0.25, -float(i), 2.0 * i, 0.1 * i)
              for i in range(40)]
    samples = [make_sample(i, v) for i, v in enumerate(values)]
    window = windows_from_samples(samples)[0]
    ay = axis_view(window, "accel", "y")
    gx = axis_view(window, "gyro", "x")
    for i in range(40):
        assert ay[i] == window.samples[i].ay
        assert gx[i] == window.samples[i].gx


def test_axis_views_are_independent_series():
    samples = [make_sample(i, values=(1.0, 0, 0, 7.0, 0, 0)) for i in range(40)]
    window = windows_from_samples(samples)[0]
    accel_x = axis_view(window, "accel", "x")
    gyro_x = axis_view(window, "gyro", "x")
    assert np.all(accel_x == 1.0) and np.all(gyro_x == 7.0)
    accel_x[0] = 99.0
    assert window.samples[0].ax == 1.0


def test_axis_view_rejects_unknown_selector():
    samples = [make_sample(i) for i in range(40)]
    window = windows_from_samples(samples)[0]
    with pytest.raises(ValueError):
        axis_view(window, "magnetometer", "x")
    with pytest.raises(ValueError):
        axis_view(window, "accel", "w")


def test_empty_activity_name_rejected():
    with pytest.raises(ValueError):
        ActivityLabel(0, "")


def test_window_size_below_one_rejected():
    with pytest.raises(ValueError):
        WindowAssembler(window_size=0)


def test_label_switch_mid_buffer_uses_modal_rule():
    a, b = make_label(0, "A"), make_label(1, "B")
    samples = [make_sample(i, label=a if i < 15 else b) for i in range(40)]
    window = windows_from_samples(samples)[0]
    assert window.label == b

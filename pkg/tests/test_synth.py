"""Scenario synthesis, signal formulas, and CSV record/replay."""

import math

import numpy as np
import pytest

from harstream.learners import create
from harstream.pipeline import vectors_from_samples
from harstream.evaluation import run_prequential
from harstream.synth import (ACTIVITY_NAMES, ActivityProfile, ChannelSpec,
                             MalformedRow, ScenarioScript, Segment,
                             UnknownActivity, generate, jitter_script,
                             label_registry, mild_profiles, rounds_scenario,
                             profiles_from_json, record, replay,
                             well_separated_profiles)
from harstream.windowing import CSV_HEADER, ActivityLabel


def flat_profile(activity_id, name, offset, sigma=0.0):
    channels = tuple(ChannelSpec(offset=offset, amplitude=0.0, freq_hz=0.0,
                                 sigma=sigma) for _ in range(6))
    return ActivityProfile(label=ActivityLabel(activity_id, name),
                           channels=channels)


def test_rounds_scenario_shape():
    script = rounds_scenario(5)
    assert len(script.segments) == 15
    assert script.total_seconds() == 1200.0
    assert script.total_samples() == 24_000
    single = rounds_scenario(1)
    assert single.total_seconds() == 240.0
    assert {seg.activity_id for seg in single.segments} == {0}


def test_segment_boundaries_align_with_windows():
    script = rounds_scenario(5)
    for seg in script.segments:
        assert (seg.duration_s * script.rate_hz) % 40 == 0


def test_every_transition_is_a_novel_pair():
    ids = [seg.activity_id for seg in rounds_scenario(5).segments]
    pairs = [(a, b) for a, b in zip(ids, ids[1:]) if a != b]
    assert len(pairs) == 14
    assert len(set(pairs)) == 14


def test_generated_stream_is_balanced():
    samples = generate(well_separated_profiles(), rounds_scenario(5), seed=0)
    assert len(samples) == 24_000
    counts = {}
    for s in samples:
        counts[s.label.id] = counts.get(s.label.id, 0) + 1
    assert counts == {i: 4800 for i in range(5)}
    vectors = vectors_from_samples(samples)
    assert len(vectors) == 600
    per_label = {}
    for v in vectors:
        per_label[v.label.id] = per_label.get(v.label.id, 0) + 1
    assert per_label == {i: 120 for i in range(5)}


def test_timestamps_advance_in_50ms_steps():
    samples = generate({0: flat_profile(0, "still", 1.0)},
                       ScenarioScript((Segment(0, 5.0),)))
    assert [s.t_ms for s in samples[:4]] == [0, 50, 100, 150]
    assert samples[-1].t_ms == 4950


def test_noiseless_zero_amplitude_signal_is_constant():
    samples = generate({0: flat_profile(0, "still", 2.5)},
                       ScenarioScript((Segment(0, 3.0),)))
    for s in samples:
        assert (s.ax, s.ay, s.az, s.gx, s.gy, s.gz) == (2.5,) * 6


def test_plain_channel_formula_is_exact():
    spec = ChannelSpec(offset=2.0, amplitude=3.0, freq_hz=4.0, phase=0.5)
    profile = ActivityProfile(label=ActivityLabel(0, "tone"),
                              channels=(spec,) * 6)
    samples = generate({0: profile}, ScenarioScript((Segment(0, 2.0),)))
    t = np.arange(40) / 20.0
    expected = 2.0 + 3.0 * np.sin(2.0 * np.pi * 4.0 * t + 0.5)
    got = np.array([s.ax for s in samples])
    np.testing.assert_allclose(got, expected, rtol=0, atol=0)


def test_same_seed_reproduces_the_stream():
    profiles = well_separated_profiles()
    script = rounds_scenario(2)
    a = generate(profiles, script, seed=7)
    b = generate(profiles, script, seed=7)
    assert a == b
    c = generate(profiles, script, seed=8)
    assert a != c


def test_record_replay_round_trip(tmp_path):
    profiles = well_separated_profiles()
    samples = generate(profiles, rounds_scenario(2), seed=3)[:500]
    path = tmp_path / "stream.csv"
    record(samples, path)
    back = replay(path, labels=label_registry(profiles))
    assert back == samples


def test_replay_assigns_ids_by_first_appearance(tmp_path):
    profiles = {0: flat_profile(0, "alpha", 0.0),
                1: flat_profile(1, "beta", 1.0)}
    script = ScenarioScript((Segment(1, 2.0), Segment(0, 2.0)))
    samples = generate(profiles, script)
    path = tmp_path / "stream.csv"
    record(samples, path)
    back = replay(path)
    # "beta" appears first in the file, so it becomes id 0 on replay
    assert back[0].label == ActivityLabel(0, "beta")
    assert back[-1].label == ActivityLabel(1, "alpha")


def test_empty_recording_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    record([], path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"
    assert replay(path) == []


def test_blank_label_field_means_unlabeled(tmp_path):
    path = tmp_path / "unlabeled.csv"
    path.write_text(",".join(CSV_HEADER) + "\n"
                    "0,0.1,0.2,0.3,0.4,0.5,0.6,\n")
    back = replay(path)
    assert len(back) == 1
    assert back[0].label is None
    assert back[0].ax == 0.1


def test_malformed_rows_report_their_index(tmp_path):
    header = ",".join(CSV_HEADER) + "\n"
    short = tmp_path / "short.csv"
    short.write_text(header + "0,1,2,3,4,5,6,walk\n0,1,2\n")
    with pytest.raises(MalformedRow, match="row 2"):
        replay(short)
    bad_float = tmp_path / "badfloat.csv"
    bad_float.write_text(header + "0,one,2,3,4,5,6,walk\n")
    with pytest.raises(MalformedRow, match="row 1"):
        replay(bad_float)
    bad_header = tmp_path / "badheader.csv"
    bad_header.write_text("a,b\n")
    with pytest.raises(MalformedRow, match="row 0"):
        replay(bad_header)


def test_well_separated_profiles_are_learnable():
    samples = generate(well_separated_profiles(), rounds_scenario(2), seed=1)
    vectors = vectors_from_samples(samples)
    report = run_prequential(vectors, create("iknn", 98), algorithm="iknn")
    assert report.accuracy >= 0.9


def test_identical_profiles_collapse_to_chance():
    shared = tuple(ChannelSpec(offset=1.0, amplitude=1.0, freq_hz=3.0,
                               sigma=0.3) for _ in range(6))
    profiles = {
        0: ActivityProfile(label=ActivityLabel(0, "a"), channels=shared),
        1: ActivityProfile(label=ActivityLabel(1, "b"), channels=shared),
    }
    segments = tuple(Segment(i % 2, 30.0) for i in range(8))
    samples = generate(profiles, ScenarioScript(segments, seed=4))
    vectors = vectors_from_samples(samples)
    report = run_prequential(vectors, create("iknn", 98), algorithm="iknn")
    assert report.accuracy < 0.75


def test_unknown_activity_rejected():
    with pytest.raises(UnknownActivity):
        generate({0: flat_profile(0, "only", 0.0)},
                 ScenarioScript((Segment(3, 2.0),)))


def test_transition_crossfades_only_the_segment_head():
    profiles = {0: flat_profile(0, "low", 0.0),
                1: flat_profile(1, "high", 10.0)}
    script = ScenarioScript((Segment(0, 10.0), Segment(1, 10.0)))
    samples = generate(profiles, script, transition_s=4.0)
    assert len(samples) == 400
    second = samples[200:]
    assert all(s.label.id == 1 for s in second)
    values = [s.ax for s in second]
    assert values[0] == 0.0                  # fade starts at the old signal
    assert values[:80] == sorted(values[:80])
    assert all(v == 10.0 for v in values[80:])


def test_transition_leaves_labels_counts_and_noise_alone():
    profiles = well_separated_profiles()
    script = rounds_scenario(2)
    plain = generate(profiles, script, seed=5)
    faded = generate(profiles, script, seed=5, transition_s=4.0)
    assert len(plain) == len(faded)
    assert [s.label for s in plain] == [s.label for s in faded]
    assert [s.t_ms for s in plain] == [s.t_ms for s in faded]
    # away from every boundary the two renders agree exactly
    assert plain[1000] == faded[1000]
    with pytest.raises(ValueError):
        generate(profiles, script, transition_s=-1.0)


def test_wobble_defaults_to_zero():
    spec = ChannelSpec(offset=1.0, amplitude=1.0, freq_hz=2.0)
    assert spec.offset_wobble == 0.0 and spec.amp_wobble == 0.0


def test_spec_and_script_validation():
    with pytest.raises(ValueError):
        ChannelSpec(offset=0.0, amplitude=1.0, freq_hz=-1.0)
    with pytest.raises(ValueError):
        ChannelSpec(offset=0.0, amplitude=1.0, freq_hz=1.0, sigma=-0.1)
    with pytest.raises(ValueError):
        ChannelSpec(offset=0.0, amplitude=1.0, freq_hz=1.0, offset_wobble=-1.0)
    with pytest.raises(ValueError):
        Segment(0, 0.0)
    with pytest.raises(ValueError):
        ActivityProfile(label=ActivityLabel(0, "x"),
                        channels=(ChannelSpec(0.0, 0.0, 0.0),) * 5)
    with pytest.raises(ValueError):
        rounds_scenario(0)


def test_nyquist_guard():
    hot = ActivityProfile(label=ActivityLabel(0, "fast"),
                          channels=(ChannelSpec(0.0, 1.0, 10.0),) * 6)
    with pytest.raises(ValueError, match="Nyquist"):
        generate({0: hot}, ScenarioScript((Segment(0, 2.0),)))


def test_jitter_script_shifts_durations():
    script = rounds_scenario(3)
    same = jitter_script(script, 0.0, seed=1)
    assert [s.duration_s for s in same.segments] == \
        [s.duration_s for s in script.segments]
    moved = jitter_script(script, 5.0, seed=1)
    assert [s.activity_id for s in moved.segments] == \
        [s.activity_id for s in script.segments]
    assert [s.duration_s for s in moved.segments] != \
        [s.duration_s for s in script.segments]
    assert all(s.duration_s >= 1.0 / script.rate_hz for s in moved.segments)
    with pytest.raises(ValueError):
        jitter_script(script, -1.0)


def test_mild_profiles_catalog():
    profiles = mild_profiles()
    assert len(profiles) == 20
    assert [profiles[i].label.name for i in range(20)] == list(ACTIVITY_NAMES)
    for p in profiles.values():
        assert all(c.freq_hz < 10.0 for c in p.channels)


def test_profiles_from_json(tmp_path):
    import json
    doc = {"activities": [{
        "name": "wave",
        "channels": [{"offset": 1.0, "amplitude": 0.5, "freq_hz": 2.0,
                      "phase": 0.1, "sigma": 0.05}] * 6,
    }]}
    path = tmp_path / "profiles.json"
    path.write_text(json.dumps(doc))
    profiles = profiles_from_json(path)
    assert profiles[0].label == ActivityLabel(0, "wave")
    assert profiles[0].channels[3].amplitude == 0.5
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    with pytest.raises(ValueError):
        profiles_from_json(bad)


def test_label_registry_maps_names():
    registry = label_registry(well_separated_profiles())
    assert registry["walking"] == ActivityLabel(1, "walking")
    assert len(registry) == 5

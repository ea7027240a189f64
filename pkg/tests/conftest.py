"""Shared fixtures: canned sample streams and the acceptance summary hook."""

import numpy as np
import pytest

from harstream import synth
from harstream.pipeline import vectors_from_samples
from harstream.windowing import ActivityLabel, SensorSample

# acceptance tests append (name, passed, detail); printed at the end of the run
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}: {detail}")


@pytest.fixture
def acceptance():
    def record(name, passed, detail):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"
    return record


def make_label(i, name=None):
    return ActivityLabel(i, name or f"activity_{i}")


def make_sample(i, values=(0.0,) * 6, label=None, rate_hz=20.0):
    ax, ay, az, gx, gy, gz = values
    return SensorSample(t_ms=int(round(i * 1000.0 / rate_hz)),
                        ax=ax, ay=ay, az=az, gx=gx, gy=gy, gz=gz,
                        label=label)


def constant_window_samples(n=40, values=(0.0,) * 6, label=None):
    return [make_sample(i, values, label) for i in range(n)]


@pytest.fixture(scope="session")
def bench_samples():
    """The default benchmark stream: 5 activities, seeded, blended switches."""
    profiles = synth.well_separated_profiles()
    script = synth.rounds_scenario()
    return synth.generate(profiles, script, seed=0, transition_s=4.0)


@pytest.fixture(scope="session")
def bench_vectors(bench_samples):
    return vectors_from_samples(bench_samples)


@pytest.fixture(scope="session")
def bench_switches():
    """Window indices where the scripted activity changes."""
    script = synth.rounds_scenario()
    switches, windows = [], 0
    previous = None
    for seg in script.segments:
        if previous is not None and seg.activity_id != previous:
            switches.append(windows)
        windows += int(round(seg.duration_s * script.rate_hz)) // 40
        previous = seg.activity_id
    return switches


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)

"""Synthetic inertial-signal generation, scenario scripting, CSV record/replay.

Each activity is a parameterized signal class: per channel a base
offset plus a sinusoid plus Gaussian noise. Two shipped profile sets:
five well-separated activities (pairwise dominant-frequency gaps of
2.2 Hz, low noise) for headline benchmarks, and twenty mildly separated
ones for harder runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .windowing import (CSV_HEADER, DEFAULT_RATE_HZ, ActivityLabel,
                        SensorSample)

CHANNEL_COUNT = 6


class UnknownActivity(KeyError):
    pass


class MalformedRow(ValueError):
    pass


OFFSET_WOBBLE_HZ = 1.0 / 77.0
AMP_WOBBLE_HZ = 1.0 / 53.0


@dataclass(frozen=True)
class ChannelSpec:
    """offset + amplitude * sin(2*pi*freq*t + phase) + Normal(0, sigma).

    The optional wobble terms add slow (sub-0.02 Hz) modulation of the
    offset and amplitude so windows of one activity are not carbon
    copies, the way repeated human movements never are. Both default
    to zero, which leaves the plain formula above exact.
    """

    offset: float
    amplitude: float
    freq_hz: float
    phase: float = 0.0
    sigma: float = 0.0
    offset_wobble: float = 0.0          # absolute, slow additive drift
    amp_wobble: float = 0.0             # relative amplitude modulation

    def __post_init__(self):
        if self.freq_hz < 0:
            raise ValueError("freq_hz must be >= 0")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.offset_wobble < 0 or self.amp_wobble < 0:
            raise ValueError("wobble terms must be >= 0")


@dataclass(frozen=True)
class ActivityProfile:
    label: ActivityLabel
    channels: Tuple[ChannelSpec, ...]

    def __post_init__(self):
        if len(self.channels) != CHANNEL_COUNT:
            raise ValueError(f"expected {CHANNEL_COUNT} channel specs")


@dataclass(frozen=True)
class Segment:
    activity_id: int
    duration_s: float

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("duration_s must be > 0")


@dataclass(frozen=True)
class ScenarioScript:
    segments: Tuple[Segment, ...]
    rate_hz: float = DEFAULT_RATE_HZ
    seed: Optional[int] = None

    def total_seconds(self) -> float:
        return sum(seg.duration_s for seg in self.segments)

    def total_samples(self) -> int:
        return sum(int(round(seg.duration_s * self.rate_hz))
                   for seg in self.segments)


# Table-style activity catalog used for naming shipped profiles.
ACTIVITY_NAMES = (
    "walking", "running", "standing_still", "sitting_on_chair",
    "side_leg_lifts", "boxer_shuffle", "knee_lifts", "exercise_bike",
    "forward_lunge", "torso_rotation", "squats", "mountain_climber",
    "arm_swings", "forearm_rotation", "biceps_curl", "jumping_jack",
    "chest_expansion", "cross_toe_touch", "straight_punch",
    "big_arm_circles",
)

_WELL_SEPARATED = ("standing_still", "walking", "running", "exercise_bike",
                   "jumping_jack")
_CHANNEL_OFFSET_SHAPE = (1.0, -0.5, 0.25, 0.8, -0.3, 0.6)
_CHANNEL_AMP_SHAPE = (1.0, 0.7, 0.85, 0.9, 0.6, 0.75)


def _build_profile(activity_id: int, name: str, freq_hz: float, amp: float,
                   offset: float, sigma: float, offset_wobble: float = 0.0,
                   amp_wobble: float = 0.0) -> ActivityProfile:
    channels = tuple(
        ChannelSpec(offset=offset * _CHANNEL_OFFSET_SHAPE[c],
                    amplitude=amp * _CHANNEL_AMP_SHAPE[c],
                    freq_hz=freq_hz,
                    phase=c * np.pi / 6.0,
                    sigma=sigma,
                    offset_wobble=offset_wobble * abs(_CHANNEL_OFFSET_SHAPE[c]),
                    amp_wobble=amp_wobble)
        for c in range(CHANNEL_COUNT))
    return ActivityProfile(label=ActivityLabel(activity_id, name),
                           channels=channels)


def well_separated_profiles() -> Dict[int, ActivityProfile]:
    """Five activities with 2.2 Hz dominant-frequency gaps and low noise."""
    out = {}
    for i, name in enumerate(_WELL_SEPARATED):
        freq = 2.2 * i                      # 0.0, 2.2, 4.4, 6.6, 8.8 Hz
        amp = 0.0 if freq == 0.0 else 1.0 + 0.5 * i
        offset = 0.5 + 1.5 * i
        out[i] = _build_profile(i, name, freq, amp, offset, sigma=0.05,
                                offset_wobble=0.35, amp_wobble=0.15)
    return out


def mild_profiles() -> Dict[int, ActivityProfile]:
    """Twenty activities packed 0.45 Hz apart with higher noise."""
    out = {}
    for i, name in enumerate(ACTIVITY_NAMES):
        freq = 0.5 + 0.45 * i               # 0.5 .. 9.05 Hz, below Nyquist
        out[i] = _build_profile(i, name, freq, amp=1.0 + 0.1 * (i % 4),
                                offset=0.3 * (i % 5), sigma=0.3,
                                offset_wobble=0.2, amp_wobble=0.2)
    return out


def _round_order(n: int, round_idx: int) -> List[int]:
    # stride orders make every activity switch a novel ordered pair
    # (for n=5 all 14 transition pairs are distinct), so boundary
    # dynamics can't be memorized from an earlier round
    import math

    step = (1, 2, 3)[round_idx]
    if n > 1 and math.gcd(step, n) == 1:
        return [(i * step) % n for i in range(n)]
    return [(i + round_idx) % n for i in range(n)]


def rounds_scenario(n_activities: int = 5, rate_hz: float = DEFAULT_RATE_HZ,
                   seed: Optional[int] = None) -> ScenarioScript:
    """Three rounds over every activity: 2 minutes, then 1, then 1.

    Round lengths are multiples of the 2 s window span, so windows never
    straddle a boundary. n=5 gives 20 minutes -> 24,000 samples at 20 Hz.
    """
    if n_activities < 1:
        raise ValueError("n_activities must be >= 1")
    segments = []
    for round_idx, minutes in enumerate((2, 1, 1)):
        for activity_id in _round_order(n_activities, round_idx):
            segments.append(Segment(activity_id, 60.0 * minutes))
    return ScenarioScript(segments=tuple(segments), rate_hz=rate_hz, seed=seed)


def jitter_script(script: ScenarioScript, max_shift_s: float,
                  seed: Optional[int] = None) -> ScenarioScript:
    """Misalign segment boundaries for robustness runs."""
    if max_shift_s < 0:
        raise ValueError("max_shift_s must be >= 0")
    rng = np.random.default_rng(script.seed if seed is None else seed)
    segments = tuple(
        Segment(seg.activity_id,
                max(1.0 / script.rate_hz,
                    seg.duration_s + rng.uniform(-max_shift_s, max_shift_s)))
        for seg in script.segments)
    return ScenarioScript(segments=segments, rate_hz=script.rate_hz,
                          seed=script.seed)


def _deterministic(spec: ChannelSpec, t: np.ndarray,
                   channel: int = 0) -> np.ndarray:
    offset = spec.offset
    if spec.offset_wobble:
        offset = offset + spec.offset_wobble * np.sin(
            2.0 * np.pi * OFFSET_WOBBLE_HZ * t + 2.4 * channel)
    amplitude = spec.amplitude
    if spec.amp_wobble:
        amplitude = amplitude * (1.0 + spec.amp_wobble * np.sin(
            2.0 * np.pi * AMP_WOBBLE_HZ * t + 1.7 * channel))
    return offset + amplitude * np.sin(
        2.0 * np.pi * spec.freq_hz * t + spec.phase)


def generate(profiles: Dict[int, ActivityProfile], script: ScenarioScript,
             seed: Optional[int] = None,
             transition_s: float = 0.0) -> List[SensorSample]:
    """Render a script to samples; deterministic for a given seed.

    transition_s > 0 crossfades the head of each segment from the
    previous activity's signal into the new one, imitating a human
    changing movements after the label changes. The fade alters only
    the deterministic part: labels, sample counts, and the noise
    stream are exactly those of the unfaded render.
    """
    if transition_s < 0:
        raise ValueError("transition_s must be >= 0")
    rng = np.random.default_rng(script.seed if seed is None else seed)
    rate = script.rate_hz
    nyquist = rate / 2.0
    samples: List[SensorSample] = []
    index = 0
    previous: Optional[ActivityProfile] = None
    for seg in script.segments:
        profile = profiles.get(seg.activity_id)
        if profile is None:
            raise UnknownActivity(f"no profile for activity {seg.activity_id}")
        n = int(round(seg.duration_s * rate))
        t = (np.arange(index, index + n)) / rate
        fade = None
        if transition_s > 0 and previous is not None and previous != profile:
            span = min(transition_s, seg.duration_s)
            local = (np.arange(n)) / rate
            fade = np.clip(local / span, 0.0, 1.0)
        columns = []
        for c, spec in enumerate(profile.channels):
            if spec.freq_hz >= nyquist and spec.amplitude != 0.0:
                raise ValueError(
                    f"freq {spec.freq_hz} Hz at or above Nyquist ({nyquist})")
            values = _deterministic(spec, t, c)
            if fade is not None:
                values = (1.0 - fade) * _deterministic(previous.channels[c], t, c) \
                    + fade * values
            if spec.sigma > 0:
                values = values + rng.normal(0.0, spec.sigma, n)
            columns.append(values)
        t_ms = np.rint((np.arange(index, index + n)) * 1000.0 / rate).astype(int)
        for i in range(n):
            samples.append(SensorSample(
                t_ms=int(t_ms[i]),
                ax=float(columns[0][i]), ay=float(columns[1][i]),
                az=float(columns[2][i]), gx=float(columns[3][i]),
                gy=float(columns[4][i]), gz=float(columns[5][i]),
                label=profile.label))
        index += n
        previous = profile
    return samples


def record(samples: Iterable[SensorSample], path: str) -> None:
    """Write samples as CSV; floats use repr so replay is bit-exact."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for s in samples:
            writer.writerow([
                s.t_ms, repr(s.ax), repr(s.ay), repr(s.az),
                repr(s.gx), repr(s.gy), repr(s.gz),
                "" if s.label is None else s.label.name,
            ])


def replay(path: str,
           labels: Optional[Dict[str, ActivityLabel]] = None
           ) -> List[SensorSample]:
    """Read a recorded CSV back into samples.

    Unknown label names get ids in order of first appearance, which
    matches how the shipped profile sets assign ids; pass `labels` to
    pin an existing registry. A missing label field means an unlabeled
    sample, not an error.
    """
    registry: Dict[str, ActivityLabel] = dict(labels or {})
    samples: List[SensorSample] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_HEADER:
            raise MalformedRow(f"row 0: expected header {','.join(CSV_HEADER)}")
        for i, row in enumerate(reader, start=1):
            if len(row) != len(CSV_HEADER):
                raise MalformedRow(f"row {i}: expected {len(CSV_HEADER)} "
                                   f"fields, got {len(row)}")
            try:
                t_ms = int(row[0])
                channels = [float(v) for v in row[1:7]]
            except ValueError as exc:
                raise MalformedRow(f"row {i}: {exc}") from None
            name = row[7]
            label = None
            if name:
                label = registry.get(name)
                if label is None:
                    label = ActivityLabel(len(registry), name)
                    registry[name] = label
            samples.append(SensorSample(t_ms, *channels, label=label))
    return samples


def label_registry(profiles: Dict[int, ActivityProfile]
                   ) -> Dict[str, ActivityLabel]:
    return {p.label.name: p.label for p in profiles.values()}


def profiles_from_json(path: str) -> Dict[int, ActivityProfile]:
    """Load a profile set from a JSON file.

    Schema: {"activities": [{"name": str, "channels": [6 x {"offset":
    float, "amplitude": float, "freq_hz": float, "phase": float,
    "sigma": float}]}]}. Ids follow list order.
    """
    import json

    with open(path) as fh:
        doc = json.load(fh)
    activities = doc.get("activities")
    if not isinstance(activities, list) or not activities:
        raise ValueError("profile file needs a non-empty 'activities' list")
    out: Dict[int, ActivityProfile] = {}
    for i, entry in enumerate(activities):
        channels = tuple(
            ChannelSpec(offset=float(c.get("offset", 0.0)),
                        amplitude=float(c.get("amplitude", 0.0)),
                        freq_hz=float(c.get("freq_hz", 0.0)),
                        phase=float(c.get("phase", 0.0)),
                        sigma=float(c.get("sigma", 0.0)))
            for c in entry["channels"])
        out[i] = ActivityProfile(label=ActivityLabel(i, str(entry["name"])),
                                 channels=channels)
    return out

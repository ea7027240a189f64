"""Tumbling-window assembly of raw 6-axis inertial samples.

Samples arrive one at a time (accelerometer + gyroscope, 20 Hz by
default) and are grouped into fixed-size non-overlapping windows of
W samples (default 40, i.e. 2 seconds). Each window carries the modal
activity label of its samples.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_WINDOW_SIZE = 40
DEFAULT_RATE_HZ = 20.0

ACCEL_AXES = ("ax", "ay", "az")
GYRO_AXES = ("gx", "gy", "gz")
CHANNELS = ACCEL_AXES + GYRO_AXES

CSV_HEADER = ("t_ms", "ax", "ay", "az", "gx", "gy", "gz", "label")


class NonFiniteChannel(ValueError):
    """A sample carried a NaN/Inf channel value and was rejected."""


@dataclass(frozen=True)
class ActivityLabel:
    """One user-defined activity (walking, jogging, climbing stairs, ...)."""

    id: int
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("activity name must be non-empty")


@dataclass(frozen=True)
class SensorSample:
    """One timestamped 6-axis reading; label is the operator's annotation."""

    t_ms: int
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float
    label: Optional[ActivityLabel] = None

    def channels(self) -> tuple:
        return (self.ax, self.ay, self.az, self.gx, self.gy, self.gz)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.channels())


@dataclass(frozen=True)
class SensorWindow:
    """W consecutive samples plus the modal label among them."""

    index: int
    samples: tuple
    label: Optional[ActivityLabel]
    rate_hz: float

    def __len__(self):
        return len(self.samples)


def modal_label(samples: Sequence[SensorSample]) -> Optional[ActivityLabel]:
    """Most frequent label; ties go to the tied label seen last.

    Unlabeled samples carry no vote. When the last sample's label is
    among the tied set this reduces to "label of the last sample".
    Returns None when no sample is labeled.
    """
    counts: dict = {}
    last_pos: dict = {}
    for pos, s in enumerate(samples):
        if s.label is not None:
            counts[s.label] = counts.get(s.label, 0) + 1
            last_pos[s.label] = pos
    if not counts:
        return None
    best = max(counts, key=lambda lab: (counts[lab], last_pos[lab]))
    return best


def axis_view(window: SensorWindow, sensor: str, axis: str) -> np.ndarray:
    """Ordered per-axis series of a window, e.g. axis_view(w, "accel", "x").

    Pure projection; the result is a fresh array.
    """
    if sensor not in ("accel", "gyro"):
        raise ValueError(f"unknown sensor {sensor!r}")
    if axis not in ("x", "y", "z"):
        raise ValueError(f"unknown axis {axis!r}")
    field = ("a" if sensor == "accel" else "g") + axis
    return np.array([getattr(s, field) for s in window.samples], dtype=float)


class WindowAssembler:
    """Single-writer state machine turning a sample stream into windows.

    Tumbling semantics: the buffer fills to `window_size`, a window is
    emitted, the buffer resets. Out-of-order timestamps are accepted
    with a warning (phone clocks jitter); non-finite channels are
    rejected without touching the buffer.
    """

    def __init__(self, window_size: int = DEFAULT_WINDOW_SIZE, rate_hz: float = DEFAULT_RATE_HZ):
        if window_size < 1:
            raise ValueError("window_size must be >= 1")
        self.window_size = window_size
        self.rate_hz = rate_hz
        self._buffer: list = []
        self._next_index = 0
        self._last_t_ms: Optional[int] = None
        self.timestamp_regressions = 0

    @property
    def windows_emitted(self) -> int:
        return self._next_index

    @property
    def pending(self) -> int:
        return len(self._buffer)

    def push_sample(self, sample: SensorSample) -> Optional[SensorWindow]:
        """Buffer one sample; return a completed window exactly at the Wth."""
        if not sample.is_finite():
            raise NonFiniteChannel(f"non-finite channel in sample at t_ms={sample.t_ms}")
        if self._last_t_ms is not None and sample.t_ms < self._last_t_ms:
            self.timestamp_regressions += 1
            logger.warning(
                "timestamp regression: %d after %d (sample accepted)",
                sample.t_ms, self._last_t_ms,
            )
        self._last_t_ms = sample.t_ms
        self._buffer.append(sample)
        if len(self._buffer) < self.window_size:
            return None
        window = SensorWindow(
            index=self._next_index,
            samples=tuple(self._buffer),
            label=modal_label(self._buffer),
            rate_hz=self.rate_hz,
        )
        self._buffer = []
        self._next_index += 1
        return window

    def reset(self):
        self._buffer = []
        self._next_index = 0
        self._last_t_ms = None
        self.timestamp_regressions = 0


def windows_from_samples(samples, window_size=DEFAULT_WINDOW_SIZE, rate_hz=DEFAULT_RATE_HZ):
    """Run a whole sample sequence through a fresh assembler.

    Emits exactly floor(N/W) windows; the trailing partial buffer is
    dropped.
    """
    assembler = WindowAssembler(window_size=window_size, rate_hz=rate_hz)
    out = []
    for s in samples:
        w = assembler.push_sample(s)
        if w is not None:
            out.append(w)
    return out

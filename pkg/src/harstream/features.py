"""Per-window feature extraction: 16 features per axis + SMA per sensor.

Eleven time-domain statistics and five spectral features are computed
for each of the six axes, plus one signal magnitude area per sensor,
giving the 98-value vector consumed by the online learners. All
normalizations are population (1/n) style:

    mean     mu = (1/n) sum s_i
    std      sigma = sqrt((1/n) sum (s_i - mu)^2)
    skewness (1/(n sigma^3)) sum (s_i - mu)^3
    kurtosis (1/(n sigma^4)) sum (s_i - mu)^4        (no -3 correction)
    autocorr (1/((n-k) sigma^2)) sum_{i<=n-k} (s_i - mu)(s_{i+k} - mu)
    rms      sqrt((1/n) sum s_i^2)

Degenerate inputs never raise: a zero-variance series yields 0 for
skewness/kurtosis/autocorrelation, and an all-zero spectrum yields 0
for every spectral feature.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .windowing import ActivityLabel, SensorWindow, axis_view

FEATURE_COUNT = 98

TIME_FEATURE_NAMES = (
    "max", "min", "mean", "median", "std", "range",
    "skewness", "kurtosis", "iqr", "autocorr", "rms",
)
FREQ_FEATURE_NAMES = (
    "max_freq", "med_freq", "spectral_centroid", "spectral_entropy", "spectral_energy",
)
AXIS_FEATURE_NAMES = TIME_FEATURE_NAMES + FREQ_FEATURE_NAMES


class LengthMismatch(ValueError):
    """Axis series fed to sma() had different lengths."""


@dataclass(frozen=True)
class TimeFeatures:
    max: float
    min: float
    mean: float
    median: float
    std: float
    range: float
    skewness: float
    kurtosis: float
    iqr: float
    autocorr: float
    rms: float

    def as_tuple(self):
        return (self.max, self.min, self.mean, self.median, self.std, self.range,
                self.skewness, self.kurtosis, self.iqr, self.autocorr, self.rms)


@dataclass(frozen=True)
class Spectrum:
    """Nonnegative-frequency half of the real-input DFT.

    `mean_square` carries the time-domain (1/n) sum s_i^2 through to
    freq_features, which reports it as spectral energy (the printed
    formula is time-domain).
    """

    bin_freqs: np.ndarray
    magnitudes: np.ndarray
    n_bins: int
    mean_square: float


@dataclass(frozen=True)
class FreqFeatures:
    max_freq: float
    med_freq: float
    spectral_centroid: float
    spectral_entropy: float
    spectral_energy: float

    def as_tuple(self):
        return (self.max_freq, self.med_freq, self.spectral_centroid,
                self.spectral_entropy, self.spectral_energy)


@dataclass(frozen=True)
class FeatureVector:
    """98 ordered reals plus the window's label when known.

    Layout: accel x(16), accel y(16), accel z(16), accel SMA, then the
    same for gyro. Each 16 is TIME_FEATURE_NAMES then FREQ_FEATURE_NAMES.
    """

    values: np.ndarray
    label: Optional[ActivityLabel]
    window_index: int

    def __post_init__(self):
        if len(self.values) != FEATURE_COUNT:
            raise ValueError(f"expected {FEATURE_COUNT} values, got {len(self.values)}")


def feature_names() -> list:
    """The 98 names in vector order, for manifests and report headers."""
    names = []
    for sensor in ("accel", "gyro"):
        for axis in ("x", "y", "z"):
            names.extend(f"{sensor}_{axis}_{f}" for f in AXIS_FEATURE_NAMES)
        names.append(f"{sensor}_sma")
    return names


def time_features(series: np.ndarray, autocorr_lag: int = 1) -> TimeFeatures:
    """The eleven time-domain statistics of one axis series (n >= 2)."""
    s = np.asarray(series, dtype=float)
    n = s.size
    if n < 2:
        raise ValueError("series must have at least 2 samples")
    if not (1 <= autocorr_lag < n):
        raise ValueError("autocorr lag must be in [1, n)")
    mx = float(s.max())
    mn = float(s.min())
    mean = float(s.mean())
    median = float(np.median(s))
    centered = s - mean
    var = float(np.mean(centered ** 2))
    std = float(np.sqrt(var))
    rms = float(np.sqrt(np.mean(s ** 2)))
    iqr = float(np.percentile(s, 75) - np.percentile(s, 25))
    if std == 0.0:
        skew = kurt = autocorr = 0.0
    else:
        skew = float(np.mean(centered ** 3) / std ** 3)
        kurt = float(np.mean(centered ** 4) / std ** 4)
        k = autocorr_lag
        autocorr = float(np.dot(centered[:-k], centered[k:]) / ((n - k) * var))
    return TimeFeatures(mx, mn, mean, median, std, mx - mn, skew, kurt, iqr, autocorr, rms)


def spectrum(series: np.ndarray, rate_hz: float) -> Spectrum:
    """Magnitude spectrum of the real-input DFT; bin i sits at i*rate/n Hz."""
    s = np.asarray(series, dtype=float)
    n = s.size
    if n < 2:
        raise ValueError("series must have at least 2 samples")
    mags = np.abs(np.fft.rfft(s))
    freqs = np.fft.rfftfreq(n, d=1.0 / rate_hz)
    return Spectrum(bin_freqs=freqs, magnitudes=mags, n_bins=mags.size,
                    mean_square=float(np.mean(s ** 2)))


def freq_features(spec: Spectrum) -> FreqFeatures:
    """The five spectral features of a Spectrum.

    max_freq: frequency of the largest-magnitude bin (lowest bin wins
    ties). med_freq: smallest bin frequency at which the cumulative
    squared magnitude reaches half the total. Centroid is magnitude
    weighted. Entropy uses natural log over normalized squared
    magnitudes, with 0*log(0) := 0. Energy is the time-domain mean
    square carried in the Spectrum.
    """
    mags = spec.magnitudes
    power = mags ** 2
    total_power = float(power.sum())
    total_mag = float(mags.sum())
    if total_mag == 0.0 or total_power == 0.0:
        return FreqFeatures(0.0, 0.0, 0.0, 0.0, spec.mean_square)
    max_freq = float(spec.bin_freqs[int(np.argmax(mags))])
    cum = np.cumsum(power)
    med_idx = int(np.searchsorted(cum, total_power / 2.0, side="left"))
    med_freq = float(spec.bin_freqs[med_idx])
    centroid = float(np.dot(spec.bin_freqs, mags) / total_mag)
    p = power / total_power
    entropy = float(-np.sum(np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)))
    return FreqFeatures(max_freq, med_freq, centroid, entropy, spec.mean_square)


def sma(x: np.ndarray, y: np.ndarray, z: np.ndarray, literal: bool = False) -> float:
    """Signal magnitude area of three axes.

    Default applies absolute values, (1/n) sum (|x|+|y|+|z|); the
    signless printed variant (which cancels on oscillatory signals) is
    available with literal=True.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if not (x.size == y.size == z.size):
        raise LengthMismatch(f"axis lengths differ: {x.size}, {y.size}, {z.size}")
    if x.size < 1:
        raise ValueError("axes must be non-empty")
    if literal:
        return float(np.mean(x + y + z))
    return float(np.mean(np.abs(x) + np.abs(y) + np.abs(z)))


def axis_features(series: np.ndarray, rate_hz: float, autocorr_lag: int = 1) -> np.ndarray:
    """The 16 per-axis values: time features then frequency features."""
    t = time_features(series, autocorr_lag=autocorr_lag)
    f = freq_features(spectrum(series, rate_hz))
    return np.array(t.as_tuple() + f.as_tuple(), dtype=float)


def extract(window: SensorWindow, autocorr_lag: int = 1, sma_literal: bool = False) -> FeatureVector:
    """Assemble the 98-value feature vector of a complete window.

    Pure: the label is copied through and never influences the values.
    """
    parts = []
    for sensor in ("accel", "gyro"):
        axes = [axis_view(window, sensor, a) for a in ("x", "y", "z")]
        for series in axes:
            parts.append(axis_features(series, window.rate_hz, autocorr_lag=autocorr_lag))
        parts.append(np.array([sma(*axes, literal=sma_literal)]))
    values = np.concatenate(parts)
    return FeatureVector(values=values, label=window.label, window_index=window.index)


class OnlineNormalizer:
    """Streaming per-dimension z-scores via Welford accumulators.

    Each observe() first folds the vector into the running mean/M2 and
    then transforms it with the updated statistics (update-then-
    transform), so the first vector ever seen maps to all zeros. A
    dimension with zero variance so far maps to 0.
    """

    def __init__(self, dims: int = FEATURE_COUNT):
        self.dims = dims
        self.count = 0
        self.mean = np.zeros(dims)
        self.m2 = np.zeros(dims)

    def observe(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        if v.size != self.dims:
            raise ValueError(f"expected {self.dims} dims, got {v.size}")
        self.count += 1
        delta = v - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (v - self.mean)
        std = np.sqrt(self.m2 / self.count)
        out = np.zeros(self.dims)
        nonzero = std > 0
        out[nonzero] = (v[nonzero] - self.mean[nonzero]) / std[nonzero]
        return out

    def variance(self) -> np.ndarray:
        if self.count == 0:
            return np.zeros(self.dims)
        return self.m2 / self.count


def normalize(vector: FeatureVector, normalizer: OnlineNormalizer) -> FeatureVector:
    """Update the normalizer with the vector, return its z-scored copy."""
    return replace(vector, values=normalizer.observe(vector.values))

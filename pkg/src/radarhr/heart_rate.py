"""R-peak detection on the reconstructed cardiac signal, and BPM from peaks.

A sample is accepted as an R-peak when it is a strict local maximum that
exceeds a sliding-window dynamic threshold (window mean + k * window std,
centered, truncated at the edges) and respects a refractory period after
the previously accepted peak. When two candidates collide inside the
refractory window the taller one wins.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class PeakConfig:
    window_s: float = 2.0
    threshold_k: float = 0.8
    refractory_s: float = 0.5

    def __post_init__(self):
        if self.window_s <= 0:
            raise InvalidArgumentError("window_s must be positive")
        if self.refractory_s <= 0:
            raise InvalidArgumentError("refractory_s must be positive")


@dataclass
class BpmEstimate:
    """A BPM value plus the evidence that produced it."""

    bpm: float
    peak_indices: np.ndarray
    method_tag: str
    ibi_median_bpm: Optional[float] = None  # inter-beat-interval diagnostic
    low_confidence: bool = False
    empty_band: bool = False

    def __post_init__(self):
        self.peak_indices = np.asarray(self.peak_indices, dtype=np.int64)
        if self.bpm < 0:
            raise InvalidArgumentError("bpm cannot be negative")


def _sliding_threshold(x: np.ndarray, rate_hz: float, cfg: PeakConfig) -> np.ndarray:
    half = int(round(cfg.window_s * rate_hz / 2.0))
    n = x.size
    c1 = np.concatenate([[0.0], np.cumsum(x)])
    c2 = np.concatenate([[0.0], np.cumsum(x * x)])
    idx = np.arange(n)
    lo = np.clip(idx - half, 0, n)
    hi = np.clip(idx + half + 1, 0, n)
    count = hi - lo
    mean = (c1[hi] - c1[lo]) / count
    var = (c2[hi] - c2[lo]) / count - mean * mean
    std = np.sqrt(np.clip(var, 0.0, None))
    return mean + cfg.threshold_k * std


def detect_r_peaks(cms, rate_hz: float, cfg: PeakConfig = PeakConfig()) -> np.ndarray:
    """Indices of accepted R-peaks, strictly increasing, refractory-spaced."""
    x = np.asarray(cms, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError("series must be 1-D")
    if rate_hz <= 0:
        raise InvalidArgumentError("rate must be positive")
    window_n = int(round(cfg.window_s * rate_hz))
    if x.size < window_n:
        raise InvalidArgumentError("series shorter than one threshold window")

    threshold = _sliding_threshold(x, rate_hz, cfg)
    interior = np.arange(1, x.size - 1)
    is_peak = (x[interior] > x[interior - 1]) & (x[interior] > x[interior + 1])
    candidates = interior[is_peak & (x[interior] > threshold[interior])]

    refr_n = int(np.ceil(cfg.refractory_s * rate_hz - 1e-9))
    accepted: list = []
    for c in candidates:
        while accepted and c - accepted[-1] < refr_n:
            if x[c] > x[accepted[-1]]:
                accepted.pop()  # taller later candidate displaces the earlier peak
            else:
                break
        else:
            accepted.append(int(c))
    return np.asarray(accepted, dtype=np.int64)


def bpm_from_peaks(peaks, rate_hz: float, duration_s: float,
                   method_tag: str = "peaks") -> BpmEstimate:
    """Count-based BPM: peaks per minute over the analysis duration."""
    if duration_s <= 0:
        raise InvalidArgumentError("duration must be positive")
    peaks = np.asarray(peaks, dtype=np.int64)
    bpm = peaks.size * 60.0 / duration_s
    ibi = None
    if peaks.size >= 2:
        ibi = float(60.0 * rate_hz / np.median(np.diff(peaks)))
    return BpmEstimate(bpm=bpm, peak_indices=peaks, method_tag=method_tag,
                       ibi_median_bpm=ibi)

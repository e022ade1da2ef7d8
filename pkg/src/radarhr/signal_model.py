"""FMCW radar signal chain: chirp synthesis, dechirped IQ, range FFT, phase.

Models the transmit/receive/mixing chain of a linear-FMCW radar well enough
to synthesize IQ data from a chest-displacement trace and to recover the
slow-time phase that carries the cardiac micro-displacement. The dechirped
per-chirp signal is a complex tone at the beat frequency 2*B*(R+dR)/(c*T)
whose slow-time phase is 4*pi*(R+dR)/lambda; displacement therefore maps to
phase as 4*pi*dR/lambda.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np
from scipy.signal import resample_poly

from .errors import CapacityError, InvalidArgumentError

C_LIGHT = 299_792_458.0

# Guard for synthesize_iq: traces beyond this chirp count are refused.
MAX_CHIRPS = 2 ** 22

# Unwrapped phase may touch pi jumps exactly; allow that boundary.
_PHASE_JUMP_TOL = 1e-9


@dataclass(frozen=True)
class RadarConfig:
    """FMCW waveform parameters.

    Attributes
    ----------
    carrier_freq_hz : float
        Carrier frequency f_c.
    bandwidth_hz : float
        Swept bandwidth B of one chirp.
    chirp_duration_s : float
        Sweep time T of one chirp.
    fast_time_samples : int
        ADC samples recorded per chirp.
    slow_time_rate_hz : float
        Chirp (frame) repetition rate.
    adc_rate_hz : float
        Fast-time sampling rate.
    """

    carrier_freq_hz: float
    bandwidth_hz: float
    chirp_duration_s: float
    fast_time_samples: int
    slow_time_rate_hz: float
    adc_rate_hz: float

    def __post_init__(self):
        if not (self.carrier_freq_hz > 0 and self.bandwidth_hz > 0
                and self.chirp_duration_s > 0):
            raise InvalidArgumentError("carrier, bandwidth and chirp duration must be positive")
        if self.fast_time_samples < 1 or self.adc_rate_hz <= 0 or self.slow_time_rate_hz <= 0:
            raise InvalidArgumentError("sample counts and rates must be positive")
        if self.fast_time_samples / self.adc_rate_hz > self.chirp_duration_s * (1 + 1e-12):
            raise InvalidArgumentError("fast-time window exceeds the chirp duration")

    @property
    def wavelength_m(self) -> float:
        """Derived carrier wavelength c / f_c."""
        return C_LIGHT / self.carrier_freq_hz

    @property
    def range_bin_spacing_m(self) -> float:
        """Range per FFT bin; equals c/(2B) when the chirp is fully sampled."""
        beat_bin_hz = self.adc_rate_hz / self.fast_time_samples
        return beat_bin_hz * C_LIGHT * self.chirp_duration_s / (2.0 * self.bandwidth_hz)


@dataclass
class DisplacementTrace:
    """Chest micro-displacement over slow time, in meters."""

    samples: np.ndarray
    rate_hz: float
    base_range_m: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.rate_hz <= 0:
            raise InvalidArgumentError("trace rate must be positive")
        if self.base_range_m <= 0:
            raise InvalidArgumentError("base range must be positive")
        if self.samples.size and not np.isfinite(self.samples).all():
            raise InvalidArgumentError("displacement samples must be finite")
        if self.samples.size and np.max(np.abs(self.samples)) >= self.base_range_m:
            raise InvalidArgumentError("displacement exceeds the nominal target range")

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.rate_hz


@dataclass
class IQCube:
    """Dechirped IF samples, chirps x fast time."""

    samples: np.ndarray
    config: RadarConfig

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 2:
            raise InvalidArgumentError("IQ cube must be 2-D (chirps x fast time)")
        if self.samples.shape[1] != self.config.fast_time_samples:
            raise InvalidArgumentError("cube fast-time size disagrees with the config")
        if self.samples.size and not np.isfinite(self.samples).all():
            raise InvalidArgumentError("IQ samples must be finite")

    @property
    def n_chirps(self) -> int:
        return self.samples.shape[0]


@dataclass
class PhaseSeries:
    """Unwrapped slow-time phase at one range bin, in radians."""

    phase: np.ndarray
    rate_hz: float
    origin_bin: int = -1

    def __post_init__(self):
        self.phase = np.asarray(self.phase, dtype=np.float64)
        if self.rate_hz <= 0:
            raise InvalidArgumentError("phase rate must be positive")
        if self.phase.size and not np.isfinite(self.phase).all():
            raise InvalidArgumentError("phase samples must be finite")
        if self.phase.size > 1:
            jumps = np.abs(np.diff(self.phase))
            if jumps.max() > np.pi + _PHASE_JUMP_TOL:
                raise InvalidArgumentError("phase series is not unwrapped (jump > pi)")

    @property
    def duration_s(self) -> float:
        return self.phase.size / self.rate_hz


class BinSelection(NamedTuple):
    """Chosen range bin plus a peak-prominence confidence flag."""

    index: int
    low_confidence: bool


def displacement_to_phase(delta_r, wavelength_m):
    """Phase shift produced by a radial displacement: 4*pi*delta_r/lambda.

    Accepts scalars or arrays; linear in delta_r.
    """
    if wavelength_m <= 0 or not np.isfinite(wavelength_m):
        raise InvalidArgumentError("wavelength must be positive and finite")
    delta = np.asarray(delta_r, dtype=np.float64)
    if not np.isfinite(delta).all():
        raise InvalidArgumentError("displacement must be finite")
    out = 4.0 * np.pi * delta / wavelength_m
    return float(out) if np.isscalar(delta_r) else out


def synthesize_iq(trace: DisplacementTrace, config: RadarConfig,
                  noise_snr_db: Optional[float] = None, seed: int = 0) -> IQCube:
    """Synthesize a dechirped IQ cube from a displacement trace.

    Each chirp is a unit complex tone at the beat frequency
    2*B*(R+dR)/(c*T) with slow-time phase 4*pi*(R+dR)/lambda. Optional
    additive circular complex Gaussian noise at `noise_snr_db` relative to
    the unit tone power. Deterministic for a fixed seed.
    """
    if abs(trace.rate_hz - config.slow_time_rate_hz) > 1e-9 * config.slow_time_rate_hz:
        raise InvalidArgumentError("trace rate must equal the configured slow-time rate")
    n_chirps = trace.samples.size
    if n_chirps > MAX_CHIRPS:
        raise CapacityError(f"trace of {n_chirps} chirps exceeds the {MAX_CHIRPS} cap")
    n_fast = config.fast_time_samples
    if n_chirps == 0:
        return IQCube(np.zeros((0, n_fast), dtype=np.complex128), config)

    t_fast = np.arange(n_fast) / config.adc_rate_hz
    ranges = trace.base_range_m + trace.samples
    beat_hz = 2.0 * config.bandwidth_hz * ranges / (C_LIGHT * config.chirp_duration_s)
    slow_phase = 4.0 * np.pi * ranges / config.wavelength_m
    cube = np.exp(1j * (2.0 * np.pi * np.outer(beat_hz, t_fast) + slow_phase[:, None]))

    if noise_snr_db is not None:
        sigma2 = 10.0 ** (-noise_snr_db / 10.0)
        rng = np.random.default_rng(seed)
        scale = np.sqrt(sigma2 / 2.0)
        cube = cube + scale * (rng.standard_normal(cube.shape)
                               + 1j * rng.standard_normal(cube.shape))
    return IQCube(cube, config)


def range_profile(cube: IQCube) -> np.ndarray:
    """Per-chirp DFT over fast time (chirps x range bins)."""
    if cube.n_chirps == 0:
        raise InvalidArgumentError("cannot form a range profile from an empty cube")
    return np.fft.fft(cube.samples, axis=1)


def select_range_bin(profile: np.ndarray) -> BinSelection:
    """Pick the bin with the largest mean slow-time magnitude.

    Ties break toward the lower bin index. The selection is flagged
    low-confidence when the peak-to-mean ratio of the averaged magnitude
    profile is below 3 dB.
    """
    profile = np.asarray(profile)
    if profile.ndim != 2 or profile.size == 0:
        raise InvalidArgumentError("profile must be a non-empty 2-D matrix")
    mags = np.abs(profile).mean(axis=0)
    index = int(np.argmax(mags))
    mean_mag = float(mags.mean())
    ratio_db = 20.0 * np.log10(mags[index] / mean_mag) if mean_mag > 0 else 0.0
    return BinSelection(index, bool(ratio_db < 3.0))


def extract_unwrapped_phase(profile: np.ndarray, bin_index: int,
                            rate_hz: float) -> PhaseSeries:
    """Arctangent phase at one bin, unwrapped over slow time."""
    profile = np.asarray(profile)
    if not 0 <= bin_index < profile.shape[1]:
        raise InvalidArgumentError(f"bin {bin_index} outside profile width {profile.shape[1]}")
    wrapped = np.angle(profile[:, bin_index])
    return PhaseSeries(np.unwrap(wrapped), rate_hz, origin_bin=bin_index)


def decimate_phase(series: PhaseSeries, target_rate_hz: float) -> PhaseSeries:
    """Resample a phase series down to target_rate_hz (anti-aliased)."""
    if target_rate_hz <= 0:
        raise InvalidArgumentError("target rate must be positive")
    if target_rate_hz > series.rate_hz * (1 + 1e-12):
        raise InvalidArgumentError("decimation cannot raise the rate")
    if abs(target_rate_hz - series.rate_hz) <= 1e-12 * series.rate_hz:
        return PhaseSeries(series.phase.copy(), series.rate_hz, series.origin_bin)
    frac = Fraction(target_rate_hz / series.rate_hz).limit_denominator(10_000)
    # line padding follows the edge slope, avoiding filter transients against
    # the large constant phase offset
    resampled = resample_poly(series.phase, frac.numerator, frac.denominator,
                              padtype="line")
    return PhaseSeries(resampled, target_rate_hz, series.origin_bin)

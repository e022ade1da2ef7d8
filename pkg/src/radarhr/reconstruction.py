"""Cardiac-band mode selection and summation.

The heart's mechanical signal lives between 0.5 and 2 Hz (30 to 120 BPM);
modes whose center frequencies fall inside that band are summed into the
reconstructed cardiac signal.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .vmd import ImfSet


@dataclass(frozen=True)
class BandSpec:
    """Cardiac frequency band, endpoints inclusive."""

    low_hz: float = 0.5
    high_hz: float = 2.0

    def __post_init__(self):
        if not 0 < self.low_hz < self.high_hz:
            raise InvalidArgumentError("band must satisfy 0 < low < high")


@dataclass
class Reconstruction:
    """Summed in-band modes; empty_band marks a selection that hit nothing."""

    samples: np.ndarray
    empty_band: bool


def select_cardiac_modes(imfs: ImfSet, band: BandSpec = BandSpec()) -> list:
    """Indices of modes with center frequency inside the band, ascending."""
    cf = imfs.center_freqs_hz
    picked = [int(i) for i in range(cf.size) if band.low_hz <= cf[i] <= band.high_hz]
    picked.sort(key=lambda i: cf[i])
    return picked


def reconstruct(imfs: ImfSet, indices) -> Reconstruction:
    """Elementwise sum of the selected modes.

    An empty selection yields a zero series of matching length with the
    empty_band flag set, so callers can penalize rather than fail.
    """
    n = imfs.modes.shape[1]
    idx = list(indices)
    for i in idx:
        if not 0 <= i < imfs.k_modes:
            raise InvalidArgumentError(f"mode index {i} out of range 0..{imfs.k_modes - 1}")
    if not idx:
        return Reconstruction(np.zeros(n), empty_band=True)
    return Reconstruction(imfs.modes[idx].sum(axis=0), empty_band=False)

"""Shared search-space plumbing for the (K, alpha) optimizers.

K and alpha differ by orders of magnitude, so both optimizers work on the
unit square and map positions back to physical values; K stays continuous
inside the search and is rounded to the nearest integer only when a
candidate is evaluated.
"""
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import InvalidArgumentError
from .objective import SampEnConfig, sample_entropy
from .reconstruction import BandSpec, reconstruct, select_cardiac_modes
from .vmd import VmdParams, decompose

# Fitness assigned to candidates whose reconstruction hits no in-band mode;
# far above any attainable SampEn (ceiling ~ ln(N^2) ~ 17 for N = 6000).
EMPTY_BAND_PENALTY = 1e3

# Fitness-path decompositions cap the solver iterations; the final best
# candidate is re-decomposed at the full default cap.
FIT_MAX_ITERATIONS = 150


@dataclass(frozen=True)
class Bounds:
    """Search intervals for K (integer, inclusive) and alpha."""

    k_range: Tuple[int, int] = (3, 10)
    alpha_range: Tuple[float, float] = (500.0, 8000.0)

    def __post_init__(self):
        k_lo, k_hi = self.k_range
        a_lo, a_hi = self.alpha_range
        if k_lo < 1:
            raise InvalidArgumentError("k_min must be >= 1")
        if a_lo <= 0:
            raise InvalidArgumentError("alpha_min must be positive")
        if k_hi < k_lo or a_hi < a_lo:
            raise InvalidArgumentError("bounds intervals must be non-empty")


@dataclass
class Candidate:
    """One (K, alpha) point with its fitness (lower is better)."""

    k_modes: int
    alpha: float
    fitness: float = np.inf


def to_candidate(pos: np.ndarray, bounds: Bounds) -> Candidate:
    """Map a unit-square position to an evaluable candidate (K rounded)."""
    k_lo, k_hi = bounds.k_range
    a_lo, a_hi = bounds.alpha_range
    k = int(round(k_lo + float(pos[0]) * (k_hi - k_lo)))
    alpha = a_lo + float(pos[1]) * (a_hi - a_lo)
    return Candidate(k_modes=min(max(k, k_lo), k_hi), alpha=alpha)


def make_cms_fitness(phase_samples: np.ndarray, rate_hz: float,
                     band: BandSpec, sampen: SampEnConfig,
                     fit_max_iterations: int = FIT_MAX_ITERATIONS) -> Callable:
    """Fitness = SampEn of the cardiac-band reconstruction for (K, alpha).

    Decomposition is a pure function of (K, alpha), so repeat evaluations
    (typical after boundary clamping) hit a cache.
    """
    cache: dict = {}

    def fitness(cand: Candidate) -> float:
        key = (cand.k_modes, cand.alpha)
        if key in cache:
            return cache[key]
        params = VmdParams(k_modes=cand.k_modes, alpha=cand.alpha,
                           max_iterations=fit_max_iterations)
        imfs = decompose(phase_samples, rate_hz, params)
        picked = select_cardiac_modes(imfs, band)
        rec = reconstruct(imfs, picked)
        if rec.empty_band or rec.samples.std() == 0.0:
            value = EMPTY_BAND_PENALTY
        else:
            value = sample_entropy(rec.samples, sampen)
        cache[key] = value
        return value

    return fitness

"""The three comparison methods: BPF+FFT, fixed-parameter VMD, GA-VMD.

All three consume the same decimated phase series the proposed method
sees and emit BpmEstimate values tagged with their method name, so the
evaluation harness can compare them row for row.
"""
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, sosfiltfilt

from ._search import (Bounds, Candidate, FIT_MAX_ITERATIONS, make_cms_fitness,
                      to_candidate)
from .errors import InvalidArgumentError
from .heart_rate import BpmEstimate, PeakConfig, bpm_from_peaks, detect_r_peaks
from .nrbo import FitResult, OptResult
from .objective import SampEnConfig
from .reconstruction import BandSpec, reconstruct, select_cardiac_modes
from .signal_model import PhaseSeries
from .vmd import VmdParams, decompose

# "standard VMD" row: fixed mid-range parameters, declared for reproducibility
FIXED_VMD_PARAMS = VmdParams(k_modes=5, alpha=2000.0)

_MIN_BPF_DURATION_S = 10.0
_TARGET_RESOLUTION_HZ = 0.01


@dataclass(frozen=True)
class GaConfig:
    population_n: int = 20
    generations: int = 100
    crossover_rate: float = 0.8
    mutation_rate: float = 0.1
    tournament_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.population_n < 2:
            raise InvalidArgumentError("population must be >= 2")
        if not (0 <= self.crossover_rate <= 1 and 0 <= self.mutation_rate <= 1):
            raise InvalidArgumentError("rates must lie in [0, 1]")
        if self.generations < 0:
            raise InvalidArgumentError("generations must be >= 0")
        if self.tournament_size < 1:
            raise InvalidArgumentError("tournament size must be >= 1")


def bpf_fft_estimate(phase: PhaseSeries, band: BandSpec = BandSpec()) -> BpmEstimate:
    """Band-pass the phase, take the zero-padded magnitude spectrum, and
    report 60x the in-band peak frequency as BPM.

    Flagged low-confidence when the in-band maximum is a leakage skirt
    (argmax at a band edge) or not prominent (< 3x the in-band median).
    """
    x = phase.phase
    rate = phase.rate_hz
    if phase.duration_s < _MIN_BPF_DURATION_S:
        raise InvalidArgumentError("need at least 10 s of phase for 0.01 Hz resolution")

    nyq = rate / 2.0
    sos = butter(4, [band.low_hz / nyq, band.high_hz / nyq],
                 btype="band", output="sos")
    filtered = sosfiltfilt(sos, x - x.mean())

    n_fft = 1
    while n_fft < max(x.size, int(np.ceil(rate / _TARGET_RESOLUTION_HZ))):
        n_fft *= 2
    spectrum = np.abs(np.fft.rfft(filtered, n=n_fft))
    freqs = np.fft.rfftfreq(n_fft, d=1.0 / rate)
    in_band = np.nonzero((freqs >= band.low_hz) & (freqs <= band.high_hz))[0]
    peak_pos = int(np.argmax(spectrum[in_band]))
    peak_bin = in_band[peak_pos]

    at_edge = peak_pos == 0 or peak_pos == in_band.size - 1
    median = float(np.median(spectrum[in_band]))
    prominent = spectrum[peak_bin] >= 3.0 * median if median > 0 else False
    return BpmEstimate(bpm=60.0 * freqs[peak_bin],
                       peak_indices=np.array([], dtype=np.int64),
                       method_tag="bpf",
                       low_confidence=bool(at_edge or not prominent))


def fixed_vmd_fit(phase: PhaseSeries, params: VmdParams = FIXED_VMD_PARAMS,
                  band: BandSpec = BandSpec()) -> FitResult:
    """Decompose with fixed parameters and reconstruct the cardiac band."""
    imfs = decompose(phase.phase, phase.rate_hz, params)
    rec = reconstruct(imfs, select_cardiac_modes(imfs, band))
    return FitResult(best=Candidate(k_modes=params.k_modes, alpha=params.alpha),
                     imfs=imfs, cms=rec.samples)


def fixed_vmd_estimate(phase: PhaseSeries, params: VmdParams = FIXED_VMD_PARAMS,
                       band: BandSpec = BandSpec(),
                       peak_cfg: PeakConfig = PeakConfig()) -> BpmEstimate:
    """Decompose with fixed parameters, reconstruct the band, count R-peaks."""
    fit = fixed_vmd_fit(phase, params, band)
    if fit.cms.std() == 0.0:
        return BpmEstimate(bpm=0.0, peak_indices=np.array([], dtype=np.int64),
                           method_tag="vmd", low_confidence=True,
                           empty_band=True)
    peaks = detect_r_peaks(fit.cms, phase.rate_hz, peak_cfg)
    return bpm_from_peaks(peaks, phase.rate_hz, phase.duration_s, method_tag="vmd")


def ga_vmd_fit(phase: PhaseSeries, bounds: Bounds = Bounds(),
               ga: GaConfig = GaConfig(),
               sampen: SampEnConfig = SampEnConfig(),
               band: BandSpec = BandSpec(),
               fit_max_iterations: int = FIT_MAX_ITERATIONS) -> FitResult:
    """Generational GA over the same space and fitness as the NRBO search.

    Tournament selection, uniform crossover, Gaussian mutation with sigma
    at 10% of each range, elitism of one; deterministic under seed.
    """
    if phase.phase.size < 16:
        raise InvalidArgumentError("phase series too short for decomposition")
    fitness = make_cms_fitness(phase.phase, phase.rate_hz, band, sampen,
                               fit_max_iterations)
    result = optimize_ga(fitness, bounds, ga)
    params = VmdParams(k_modes=result.best.k_modes, alpha=result.best.alpha)
    imfs = decompose(phase.phase, phase.rate_hz, params)
    rec = reconstruct(imfs, select_cardiac_modes(imfs, band))
    return FitResult(best=result.best, imfs=imfs, cms=rec.samples, opt=result)


def optimize_ga(fitness, bounds: Bounds, cfg: GaConfig) -> OptResult:
    """GA core, same calling convention as nrbo.optimize."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.population_n
    pos = rng.uniform(0.0, 1.0, size=(n, 2))
    evals = 0

    def evaluate(p):
        nonlocal evals
        evals += 1
        return float(fitness(to_candidate(p, bounds)))

    def trace_entry(p, f):
        cand = to_candidate(p, bounds)
        return (cand.k_modes, cand.alpha, float(f))

    fit = np.array([evaluate(pos[i]) for i in range(n)])
    best_idx = int(np.argmin(fit))
    history = [float(fit[best_idx])]
    trace = [trace_entry(pos[best_idx], fit[best_idx])]

    def tournament():
        picks = rng.choice(n, size=min(cfg.tournament_size, n), replace=False)
        return pos[picks[np.argmin(fit[picks])]].copy()

    for _ in range(cfg.generations):
        elite_pos = pos[best_idx].copy()
        elite_fit = float(fit[best_idx])
        children = [elite_pos]
        while len(children) < n:
            p1, p2 = tournament(), tournament()
            if rng.uniform() < cfg.crossover_rate:
                mask = rng.uniform(size=2) < 0.5
                c1 = np.where(mask, p1, p2)
                c2 = np.where(mask, p2, p1)
            else:
                c1, c2 = p1, p2
            for child in (c1, c2):
                if len(children) >= n:
                    break
                mutate = rng.uniform(size=2) < cfg.mutation_rate
                noise = rng.normal(0.0, 0.1, size=2)
                children.append(np.clip(child + mutate * noise, 0.0, 1.0))
        pos = np.asarray(children)
        fit = np.empty(n)
        fit[0] = elite_fit  # elite carried over without re-evaluation
        for i in range(1, n):
            fit[i] = evaluate(pos[i])
        best_idx = int(np.argmin(fit))
        history.append(float(fit[best_idx]))
        trace.append(trace_entry(pos[best_idx], fit[best_idx]))

    best = to_candidate(pos[best_idx], bounds)
    best.fitness = float(fit[best_idx])
    return OptResult(best=best, history=np.asarray(history), evaluations=evals,
                     trace=trace)

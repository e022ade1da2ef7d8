"""Cohort evaluation: run every method per subject, tabulate Table-1 metrics.

The accuracy percentage has no standard definition in this setting; the
one used here is declared in ACCURACY_FORMULA and embedded in every report
so the number cannot be quoted without its meaning.
"""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ._search import Bounds, Candidate, FIT_MAX_ITERATIONS
from .baselines import (GaConfig, bpf_fft_estimate, fixed_vmd_fit,
                        ga_vmd_fit, FIXED_VMD_PARAMS)
from .errors import InvalidArgumentError
from .heart_rate import BpmEstimate, PeakConfig, bpm_from_peaks, detect_r_peaks
from .nrbo import FitResult, NrboConfig, nrbo_vmd_fit
from .objective import SampEnConfig
from .reconstruction import BandSpec
from .signal_model import (DisplacementTrace, PhaseSeries, RadarConfig,
                           decimate_phase, extract_unwrapped_phase,
                           range_profile, select_range_bin, synthesize_iq)
from .vmd import VmdParams

ACCURACY_FORMULA = "accuracy_pct = 100 * mean_i(max(0, 1 - |est_i - ref_i| / ref_i))"

METHODS = ("nrbo-vmd", "ga-vmd", "vmd", "bpf")


def default_radar_config() -> RadarConfig:
    """Waveform used for synthetic work: 60 GHz carrier, fully sampled chirps."""
    return RadarConfig(carrier_freq_hz=60e9, bandwidth_hz=1.6e9,
                       chirp_duration_s=50e-6, fast_time_samples=100,
                       slow_time_rate_hz=200.0, adc_rate_hz=2e6)


@dataclass(frozen=True)
class PipelineConfig:
    """Everything estimate_subject needs, with cohort-scale defaults.

    The optimizer budgets are deliberately smaller than the module-level
    NrboConfig/GaConfig defaults: a cohort runs two searches per subject.

    processing_rate_hz = 50 rather than 100: at 100 Hz the normalized
    bandwidth of every mode is wide enough that a band-edge mode swallows a
    broad slice of the respiration leakage skirt, and the resulting slow
    wobble inflates the reconstruction std, loosening SampEn's std-relative
    tolerance; SampEn then anti-correlates with BPM quality (measured r of
    -0.9 across a (K, alpha) grid). At 50 Hz the correlation flips to +0.9
    and the optimizer picks clean reconstructions.
    """

    processing_rate_hz: float = 50.0
    band: BandSpec = field(default_factory=BandSpec)
    peaks: PeakConfig = field(default_factory=PeakConfig)
    sampen: SampEnConfig = field(default_factory=SampEnConfig)
    bounds: Bounds = field(default_factory=Bounds)
    nrbo: NrboConfig = field(default_factory=lambda: NrboConfig(
        population_n=10, max_iterations=14, stall_limit=8))
    ga: GaConfig = field(default_factory=lambda: GaConfig(
        population_n=10, generations=12))
    fixed_vmd: VmdParams = FIXED_VMD_PARAMS
    fit_max_iterations: int = FIT_MAX_ITERATIONS


@dataclass
class SubjectRecord:
    """One cohort member: a phase observation plus its ECG-derived truth."""

    subject_id: str
    reference_bpm: float
    duration_s: float
    phase: Optional[PhaseSeries] = None
    iq_bin: Optional[str] = None
    iq_sidecar: Optional[str] = None

    def __post_init__(self):
        if not 0 < self.reference_bpm < 300:
            raise InvalidArgumentError("reference BPM must lie in (0, 300)")
        if self.duration_s <= 0:
            raise InvalidArgumentError("duration must be positive")
        if self.phase is None and self.iq_bin is None:
            raise InvalidArgumentError("record needs a phase series or an IQ path")


@dataclass
class EvalRow:
    subject_id: str
    method: str
    ref_bpm: float
    est_bpm: Optional[float] = None
    abs_error: Optional[float] = None
    low_confidence: bool = False
    error: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.error is None and self.est_bpm is not None


@dataclass
class MethodAggregate:
    rmse_bpm: float
    accuracy_pct: float
    n_complete: int


@dataclass
class EvalReport:
    rows: list
    aggregates: dict
    accuracy_formula: str = ACCURACY_FORMULA


def rmse(est, ref) -> float:
    """Root mean square difference between paired BPM lists."""
    est = np.asarray(est, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if est.shape != ref.shape or est.size == 0:
        raise InvalidArgumentError("need equal, non-zero-length lists")
    return float(np.sqrt(np.mean((est - ref) ** 2)))


def accuracy_percent(est, ref) -> float:
    """Mean relative agreement, per-subject floored at zero; in [0, 100]."""
    est = np.asarray(est, dtype=np.float64)
    ref = np.asarray(ref, dtype=np.float64)
    if est.shape != ref.shape or est.size == 0:
        raise InvalidArgumentError("need equal, non-zero-length lists")
    if np.any(ref <= 0):
        raise InvalidArgumentError("reference BPM must be positive")
    per_subject = np.maximum(0.0, 1.0 - np.abs(est - ref) / ref)
    return float(100.0 * per_subject.mean())


def prepare_phase(phase: PhaseSeries, cfg: PipelineConfig) -> PhaseSeries:
    """Decimate to the processing rate and drop the constant phase offset."""
    out = decimate_phase(phase, min(cfg.processing_rate_hz, phase.rate_hz))
    return PhaseSeries(out.phase - out.phase.mean(), out.rate_hz, out.origin_bin)


@dataclass
class SubjectEstimate:
    """One method's run on one subject, with exportable internals."""

    estimate: BpmEstimate
    prepared: PhaseSeries
    imfs: Optional[object] = None       # ImfSet for the VMD-family methods
    candidate: Optional[Candidate] = None
    trace: Optional[list] = None        # optimizer (k, alpha, fitness) per iter


def estimate_subject_detailed(phase: PhaseSeries, method: str, seed: int = 0,
                              cfg: PipelineConfig = PipelineConfig()) -> SubjectEstimate:
    """Run one method's full pipeline, keeping the intermediate products."""
    if method not in METHODS:
        raise InvalidArgumentError(f"unknown method {method!r}; pick from {METHODS}")
    prepared = prepare_phase(phase, cfg)
    if method == "bpf":
        return SubjectEstimate(bpf_fft_estimate(prepared, cfg.band), prepared)
    if method == "vmd":
        fit = fixed_vmd_fit(prepared, cfg.fixed_vmd, cfg.band)
    elif method == "nrbo-vmd":
        fit = nrbo_vmd_fit(prepared, cfg.bounds, replace(cfg.nrbo, seed=seed),
                           cfg.sampen, cfg.band, cfg.fit_max_iterations)
    else:
        fit = ga_vmd_fit(prepared, cfg.bounds, replace(cfg.ga, seed=seed),
                         cfg.sampen, cfg.band, cfg.fit_max_iterations)
    est = _estimate_from_fit(fit, prepared, method, cfg)
    return SubjectEstimate(est, prepared, imfs=fit.imfs, candidate=fit.best,
                           trace=fit.opt.trace if fit.opt is not None else None)


def estimate_subject(phase: PhaseSeries, method: str, seed: int = 0,
                     cfg: PipelineConfig = PipelineConfig()) -> BpmEstimate:
    """Run one method's full pipeline on one subject's phase series."""
    return estimate_subject_detailed(phase, method, seed, cfg).estimate


def _estimate_from_fit(fit: FitResult, prepared: PhaseSeries, method: str,
                       cfg: PipelineConfig) -> BpmEstimate:
    if fit.cms.std() == 0.0:
        return BpmEstimate(bpm=0.0, peak_indices=np.array([], dtype=np.int64),
                           method_tag=method, low_confidence=True, empty_band=True)
    peaks = detect_r_peaks(fit.cms, prepared.rate_hz, cfg.peaks)
    est = bpm_from_peaks(peaks, prepared.rate_hz, prepared.duration_s,
                         method_tag=method)
    return est


def _subject_seed(base_seed: int, subject_index: int, method_index: int) -> int:
    seq = np.random.SeedSequence((base_seed, subject_index, method_index))
    return int(seq.generate_state(1)[0])


def _resolve_phase(record: SubjectRecord) -> PhaseSeries:
    if record.phase is not None:
        return record.phase
    from .formats import read_iq_bin  # deferred: formats imports this module's types
    cube = read_iq_bin(record.iq_bin, record.iq_sidecar)
    profile = range_profile(cube)
    selection = select_range_bin(profile)
    return extract_unwrapped_phase(profile, selection.index,
                                   cube.config.slow_time_rate_hz)


def run_cohort(records, methods=METHODS, seed: int = 0,
               cfg: PipelineConfig = PipelineConfig()) -> EvalReport:
    """Evaluate every requested method on every subject.

    Per-subject failures become incomplete rows (error string attached)
    rather than aborting the cohort; aggregates use complete rows only.
    """
    if not records:
        raise InvalidArgumentError("cohort is empty")
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise InvalidArgumentError(f"unknown method {m!r}")

    rows = []
    for si, record in enumerate(records):
        try:
            phase = _resolve_phase(record)
        except Exception as exc:  # noqa: BLE001 - failures become flagged rows
            for method in methods:
                rows.append(EvalRow(subject_id=record.subject_id, method=method,
                                    ref_bpm=record.reference_bpm,
                                    error=f"load failed: {exc}"))
            continue
        for mi, method in enumerate(methods):
            try:
                est = estimate_subject(phase, method,
                                       seed=_subject_seed(seed, si, mi), cfg=cfg)
                rows.append(EvalRow(
                    subject_id=record.subject_id, method=method,
                    ref_bpm=record.reference_bpm, est_bpm=est.bpm,
                    abs_error=abs(est.bpm - record.reference_bpm),
                    low_confidence=est.low_confidence or est.empty_band))
            except Exception as exc:  # noqa: BLE001
                rows.append(EvalRow(subject_id=record.subject_id, method=method,
                                    ref_bpm=record.reference_bpm,
                                    error=str(exc)))

    aggregates = {}
    for method in methods:
        done = [r for r in rows if r.method == method and r.complete]
        if done:
            est = [r.est_bpm for r in done]
            ref = [r.ref_bpm for r in done]
            aggregates[method] = MethodAggregate(
                rmse_bpm=rmse(est, ref),
                accuracy_pct=accuracy_percent(est, ref),
                n_complete=len(done))
        else:
            aggregates[method] = MethodAggregate(rmse_bpm=float("nan"),
                                                 accuracy_pct=float("nan"),
                                                 n_complete=0)
    return EvalReport(rows=rows, aggregates=aggregates)


def synth_cohort(n_subjects: int, seed: int = 1, *,
                 cardiac_rate_range=(0.8, 1.8),
                 cardiac_amp_range_mm=(0.2, 0.5),
                 respiration_rate_range=(0.15, 0.4),
                 respiration_amp_range_mm=(1.0, 12.0),
                 snr_db_range=(5.0, 20.0),
                 duration_s: float = 60.0,
                 radar_config: Optional[RadarConfig] = None) -> list:
    """Deterministic synthetic cohort pushed through the radar chain.

    Each subject is a respiration + cardiac two-tone displacement trace
    synthesized into IQ, range-processed, and phase-extracted; the drawn
    cardiac frequency provides the reference BPM.
    """
    if n_subjects < 1:
        raise InvalidArgumentError("need at least one subject")
    config = radar_config or default_radar_config()
    records = []
    for i in range(n_subjects):
        rng = np.random.default_rng(np.random.SeedSequence((seed, i)))
        f_card = rng.uniform(*cardiac_rate_range)
        a_card = rng.uniform(*cardiac_amp_range_mm) * 1e-3
        f_resp = rng.uniform(*respiration_rate_range)
        a_resp = rng.uniform(*respiration_amp_range_mm) * 1e-3
        snr_db = rng.uniform(*snr_db_range)
        ph_card, ph_resp = rng.uniform(0.0, 2.0 * np.pi, size=2)

        t = np.arange(int(round(duration_s * config.slow_time_rate_hz)))
        t = t / config.slow_time_rate_hz
        disp = (a_resp * np.sin(2 * np.pi * f_resp * t + ph_resp)
                + a_card * np.sin(2 * np.pi * f_card * t + ph_card))
        trace = DisplacementTrace(disp, config.slow_time_rate_hz, base_range_m=0.2)
        cube = synthesize_iq(trace, config, noise_snr_db=snr_db,
                             seed=int(rng.integers(2 ** 31)))
        profile = range_profile(cube)
        selection = select_range_bin(profile)
        phase = extract_unwrapped_phase(profile, selection.index,
                                        config.slow_time_rate_hz)
        records.append(SubjectRecord(subject_id=f"s{i + 1:02d}",
                                     reference_bpm=60.0 * f_card,
                                     duration_s=duration_s, phase=phase))
    return records

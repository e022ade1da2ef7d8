"""Non-contact heartbeat estimation from FMCW radar phase.

Pipeline: synthesize or ingest IQ -> range FFT -> bin selection -> phase
extraction -> NRBO-optimized VMD -> cardiac-band reconstruction -> R-peak
BPM, with BPF+FFT, fixed-parameter VMD and GA-VMD baselines and a cohort
evaluation harness.
"""
from ._search import Bounds, Candidate
from .baselines import (GaConfig, bpf_fft_estimate, fixed_vmd_estimate,
                        fixed_vmd_fit, ga_vmd_fit, optimize_ga)
from .errors import (CapacityError, DataFormatError, DegenerateInputError,
                     InvalidArgumentError, NumericalError,
                     OverDecompositionError, RadarHrError)
from .evaluation import (EvalReport, EvalRow, MethodAggregate, PipelineConfig,
                         SubjectRecord, accuracy_percent, default_radar_config,
                         estimate_subject, estimate_subject_detailed,
                         prepare_phase, rmse, run_cohort, synth_cohort)
from .heart_rate import BpmEstimate, PeakConfig, bpm_from_peaks, detect_r_peaks
from .nrbo import FitResult, NrboConfig, OptResult, nrbo_vmd_fit, optimize
from .objective import SampEnConfig, sample_entropy
from .reconstruction import BandSpec, Reconstruction, reconstruct, select_cardiac_modes
from .signal_model import (BinSelection, DisplacementTrace, IQCube, PhaseSeries,
                           RadarConfig, decimate_phase, displacement_to_phase,
                           extract_unwrapped_phase, range_profile,
                           select_range_bin, synthesize_iq)
from .vmd import ImfSet, VmdParams, decompose

__version__ = "0.1.0"

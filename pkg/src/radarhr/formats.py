"""File formats: series CSV, IQ binary + sidecar, manifest, report, traces.

CSV series carry a `t_s,value` header, one sample per row. IQ captures are
little-endian interleaved int16 I/Q, chirp-major, described by a JSON
sidecar holding exactly the RadarConfig fields.
"""
import csv
import json
import os
from dataclasses import asdict, fields

import numpy as np

from .errors import DataFormatError
from .evaluation import EvalReport, SubjectRecord
from .signal_model import IQCube, PhaseSeries, RadarConfig
from .vmd import ImfSet, VmdParams

_IQ_FULL_SCALE = 32000.0

_RADAR_KEYS = tuple(f.name for f in fields(RadarConfig))


def write_series_csv(path, values, rate_hz):
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "value"])
        for i, v in enumerate(values):
            writer.writerow([f"{i / rate_hz:.9f}", repr(float(v))])


def read_series_csv(path):
    """Returns (values, rate_hz); the rate is inferred from the t_s column."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t_s", "value"]:
            raise DataFormatError(f"{path}: expected header 't_s,value'")
        t = []
        v = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataFormatError(f"{path}:{lineno}: expected two columns")
            try:
                t.append(float(row[0]))
                v.append(float(row[1]))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
    if len(v) < 2:
        raise DataFormatError(f"{path}: need at least two samples")
    steps = np.diff(t)
    if steps.min() <= 0 or steps.ptp() > 1e-6 * steps.mean():
        raise DataFormatError(f"{path}: t_s must increase uniformly")
    return np.asarray(v), float(1.0 / steps.mean())


def write_phase_csv(path, series: PhaseSeries):
    write_series_csv(path, series.phase, series.rate_hz)


def read_phase_csv(path) -> PhaseSeries:
    values, rate = read_series_csv(path)
    try:
        return PhaseSeries(values, rate)
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_radar_sidecar(path, config: RadarConfig):
    with open(path, "w") as fh:
        json.dump(asdict(config), fh, indent=2)
        fh.write("\n")


def read_radar_sidecar(path) -> RadarConfig:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise DataFormatError(f"{path}: sidecar must be a JSON object")
    unknown = set(payload) - set(_RADAR_KEYS)
    missing = set(_RADAR_KEYS) - set(payload)
    if unknown or missing:
        raise DataFormatError(
            f"{path}: sidecar keys must be exactly {list(_RADAR_KEYS)}")
    try:
        return RadarConfig(**{k: (int(payload[k]) if k == "fast_time_samples"
                                  else float(payload[k])) for k in _RADAR_KEYS})
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def write_iq_bin(path, cube: IQCube, sidecar_path):
    """Quantize to interleaved int16 I/Q, chirp-major, plus the sidecar."""
    flat = cube.samples.ravel()
    peak = max(np.abs(flat.real).max(), np.abs(flat.imag).max()) if flat.size else 1.0
    scale = _IQ_FULL_SCALE / peak if peak > 0 else 1.0
    out = np.empty(flat.size * 2, dtype="<i2")
    out[0::2] = np.round(flat.real * scale).astype("<i2")
    out[1::2] = np.round(flat.imag * scale).astype("<i2")
    out.tofile(path)
    write_radar_sidecar(sidecar_path, cube.config)


def read_iq_bin(path, sidecar_path) -> IQCube:
    config = read_radar_sidecar(sidecar_path)
    raw = np.fromfile(path, dtype="<i2")
    per_chirp = 2 * config.fast_time_samples
    if raw.size == 0 or raw.size % per_chirp:
        raise DataFormatError(
            f"{path}: size {raw.size} not a multiple of {per_chirp} int16 per chirp")
    data = raw.astype(np.float64) / _IQ_FULL_SCALE
    iq = (data[0::2] + 1j * data[1::2]).reshape(-1, config.fast_time_samples)
    return IQCube(iq, config)


def write_imf_csv(csv_path, json_path, imfs: ImfSet, params: VmdParams):
    """Modes as t_s, mode_1..mode_K columns plus a JSON header sidecar."""
    k, n = imfs.modes.shape
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s"] + [f"mode_{i + 1}" for i in range(k)])
        for row in range(n):
            writer.writerow([f"{row / imfs.rate_hz:.9f}"]
                            + [repr(float(imfs.modes[i, row])) for i in range(k)])
    header = {
        "center_freqs_hz": [float(f) for f in imfs.center_freqs_hz],
        "params": asdict(params),
        "iterations_used": imfs.iterations_used,
        "converged": imfs.converged,
        "rate_hz": imfs.rate_hz,
    }
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=2)
        fh.write("\n")


def write_peaks_csv(path, peak_indices, series, rate_hz):
    series = np.asarray(series)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "t_s", "amplitude"])
        for idx in np.asarray(peak_indices, dtype=np.int64):
            writer.writerow([int(idx), f"{idx / rate_hz:.9f}",
                             repr(float(series[idx]))])


def write_opt_trace_jsonl(path, trace):
    with open(path, "w") as fh:
        for it, (k, alpha, fitness) in enumerate(trace):
            fh.write(json.dumps({"iter": it, "best_k": int(k),
                                 "best_alpha": float(alpha),
                                 "best_fitness": float(fitness)}) + "\n")


def write_manifest(path, entries):
    """entries: list of {id, ref_bpm, phase_csv | iq_bin + iq_sidecar}."""
    with open(path, "w") as fh:
        json.dump({"subjects": entries}, fh, indent=2)
        fh.write("\n")


def read_manifest(path):
    """Load a cohort manifest into SubjectRecords (phase loaded eagerly,
    IQ kept as paths so load failures surface per subject, not here)."""
    base = os.path.dirname(os.path.abspath(path))
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: {exc}") from exc
    subjects = payload.get("subjects") if isinstance(payload, dict) else None
    if not isinstance(subjects, list) or not subjects:
        raise DataFormatError(f"{path}: manifest needs a non-empty 'subjects' list")

    records = []
    for i, entry in enumerate(subjects):
        allowed = {"id", "ref_bpm", "phase_csv", "iq_bin", "iq_sidecar"}
        unknown = set(entry) - allowed
        if unknown:
            raise DataFormatError(f"{path}: subject {i}: unknown keys {sorted(unknown)}")
        if "id" not in entry or "ref_bpm" not in entry:
            raise DataFormatError(f"{path}: subject {i}: needs 'id' and 'ref_bpm'")
        sid = str(entry["id"])
        ref = float(entry["ref_bpm"])
        if "phase_csv" in entry:
            phase = read_phase_csv(os.path.join(base, entry["phase_csv"]))
            records.append(SubjectRecord(subject_id=sid, reference_bpm=ref,
                                         duration_s=phase.duration_s, phase=phase))
        elif "iq_bin" in entry and "iq_sidecar" in entry:
            sidecar = os.path.join(base, entry["iq_sidecar"])
            config = read_radar_sidecar(sidecar)
            size = os.path.getsize(os.path.join(base, entry["iq_bin"]))
            n_chirps = size // (4 * config.fast_time_samples)
            records.append(SubjectRecord(
                subject_id=sid, reference_bpm=ref,
                duration_s=max(n_chirps / config.slow_time_rate_hz, 1e-9),
                iq_bin=os.path.join(base, entry["iq_bin"]),
                iq_sidecar=sidecar))
        else:
            raise DataFormatError(
                f"{path}: subject {i}: needs phase_csv or iq_bin + iq_sidecar")
    return records


def report_to_dict(report: EvalReport) -> dict:
    return {
        "accuracy_formula": report.accuracy_formula,
        "aggregates": {
            method: {"rmse_bpm": agg.rmse_bpm, "accuracy_pct": agg.accuracy_pct,
                     "n_complete": agg.n_complete}
            for method, agg in report.aggregates.items()},
        "rows": [
            {"subject_id": r.subject_id, "method": r.method, "ref_bpm": r.ref_bpm,
             "est_bpm": r.est_bpm, "abs_error": r.abs_error,
             "low_confidence": r.low_confidence, "error": r.error}
            for r in report.rows],
    }


def write_report_json(path, report: EvalReport):
    with open(path, "w") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
        fh.write("\n")


def format_report_table(report: EvalReport) -> str:
    """Human-readable aggregate table with the accuracy formula declared."""
    lines = [f"{'method':<10} {'RMSE (bpm)':>12} {'Accuracy (%)':>14} {'subjects':>9}"]
    lines.append("-" * len(lines[0]))
    for method, agg in report.aggregates.items():
        lines.append(f"{method:<10} {agg.rmse_bpm:>12.3f} "
                     f"{agg.accuracy_pct:>14.3f} {agg.n_complete:>9d}")
    lines.append("")
    lines.append(f"accuracy formula: {report.accuracy_formula}")
    return "\n".join(lines)

"""Command-line interface.

Subcommands: synth (emit a synthetic cohort), extract (IQ capture to phase
CSV), estimate (one subject, one method), eval (manifest to report),
plotdata (per-figure CSVs).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
import argparse
import json
import os
import sys

import numpy as np

from .config import load_pipeline_config
from .errors import (DataFormatError, InvalidArgumentError, NumericalError,
                     RadarHrError)
from .evaluation import (METHODS, PipelineConfig, estimate_subject_detailed,
                         prepare_phase, run_cohort, synth_cohort)
from .formats import (format_report_table, read_iq_bin, read_manifest,
                      read_phase_csv, write_imf_csv, write_iq_bin,
                      write_manifest, write_opt_trace_jsonl, write_peaks_csv,
                      write_phase_csv, write_report_json)
from .signal_model import extract_unwrapped_phase, range_profile, select_range_bin

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="radarhr",
                     description="Radar heartbeat estimation via optimized VMD")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="emit a synthetic cohort", add_help=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--subjects", type=int, default=18)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--snr-min", type=float, default=5.0)
    p.add_argument("--snr-max", type=float, default=20.0)
    p.add_argument("--duration", type=float, default=60.0)
    p.add_argument("--emit-iq", action="store_true",
                   help="store raw IQ captures instead of phase CSVs")

    p = sub.add_parser("extract", help="IQ capture to phase CSV")
    p.add_argument("--iq", required=True)
    p.add_argument("--sidecar", required=True)
    p.add_argument("--out", required=True, help="phase CSV path")
    p.add_argument("--bin", type=int, default=None,
                   help="force a range bin (default: strongest)")

    p = sub.add_parser("estimate", help="one subject, one method")
    p.add_argument("--phase", help="phase CSV input")
    p.add_argument("--iq", help="IQ capture input (with --sidecar)")
    p.add_argument("--sidecar")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--imfs-csv", help="write the decomposition modes here")
    p.add_argument("--imfs-json", help="decomposition header sidecar")
    p.add_argument("--peaks-csv", help="write detected peaks here")
    p.add_argument("--trace-jsonl", help="write the optimizer trace here")

    p = sub.add_parser("eval", help="manifest to report")
    p.add_argument("--manifest", required=True)
    p.add_argument("--methods", default="all",
                   help="comma-separated subset of " + ",".join(METHODS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--report-json", help="write the machine report here")
    p.add_argument("--errors-csv", help="write per-subject absolute errors here")

    p = sub.add_parser("plotdata", help="emit per-figure CSVs")
    psub = p.add_subparsers(dest="plot_kind", required=True)
    ps = psub.add_parser("spectra", help="reconstructed-signal spectra per method")
    ps.add_argument("--phase", required=True)
    ps.add_argument("--methods", default="nrbo-vmd,vmd")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--config")
    ps.add_argument("--out-dir", required=True)
    pe = psub.add_parser("errors", help="per-subject absolute error per method")
    pe.add_argument("--report", required=True)
    pe.add_argument("--out", required=True)
    return parser


def _load_config(path) -> PipelineConfig:
    return load_pipeline_config(path) if path else PipelineConfig()


def _load_phase(args):
    if args.phase:
        return read_phase_csv(args.phase)
    if args.iq and args.sidecar:
        cube = read_iq_bin(args.iq, args.sidecar)
        profile = range_profile(cube)
        selection = select_range_bin(profile)
        return extract_unwrapped_phase(profile, selection.index,
                                       cube.config.slow_time_rate_hz)
    raise UsageError("provide --phase or --iq with --sidecar")


def _parse_methods(spec: str):
    if spec.strip() == "all":
        return METHODS
    methods = tuple(m.strip() for m in spec.split(",") if m.strip())
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; pick from {','.join(METHODS)}")
    if not methods:
        raise UsageError("no methods requested")
    return methods


def _cmd_synth(args) -> int:
    if args.subjects < 1:
        raise UsageError("--subjects must be >= 1")
    if args.snr_max < args.snr_min:
        raise UsageError("--snr-max must be >= --snr-min")
    os.makedirs(args.out, exist_ok=True)
    records = synth_cohort(args.subjects, seed=args.seed,
                           snr_db_range=(args.snr_min, args.snr_max),
                           duration_s=args.duration)
    entries = []
    if args.emit_iq:
        # regenerate the cubes so the manifest carries raw captures
        from .evaluation import default_radar_config
        from .signal_model import DisplacementTrace, synthesize_iq
        config = default_radar_config()
        for i, record in enumerate(records):
            rng = np.random.default_rng(np.random.SeedSequence((args.seed, i)))
            f_card = rng.uniform(0.8, 1.8)
            a_card = rng.uniform(0.2, 0.5) * 1e-3
            f_resp = rng.uniform(0.15, 0.4)
            a_resp = rng.uniform(1.0, 12.0) * 1e-3
            snr_db = rng.uniform(args.snr_min, args.snr_max)
            ph_card, ph_resp = rng.uniform(0.0, 2.0 * np.pi, size=2)
            t = np.arange(int(round(args.duration * config.slow_time_rate_hz)))
            t = t / config.slow_time_rate_hz
            disp = (a_resp * np.sin(2 * np.pi * f_resp * t + ph_resp)
                    + a_card * np.sin(2 * np.pi * f_card * t + ph_card))
            trace = DisplacementTrace(disp, config.slow_time_rate_hz, 0.2)
            cube = synthesize_iq(trace, config, noise_snr_db=snr_db,
                                 seed=int(rng.integers(2 ** 31)))
            bin_name = f"{record.subject_id}_iq.bin"
            sc_name = f"{record.subject_id}_iq.json"
            write_iq_bin(os.path.join(args.out, bin_name), cube,
                         os.path.join(args.out, sc_name))
            entries.append({"id": record.subject_id,
                            "ref_bpm": record.reference_bpm,
                            "iq_bin": bin_name, "iq_sidecar": sc_name})
    else:
        for record in records:
            name = f"{record.subject_id}_phase.csv"
            write_phase_csv(os.path.join(args.out, name), record.phase)
            entries.append({"id": record.subject_id,
                            "ref_bpm": record.reference_bpm,
                            "phase_csv": name})
    manifest = os.path.join(args.out, "manifest.json")
    write_manifest(manifest, entries)
    print(json.dumps({"manifest": manifest, "subjects": len(entries)}))
    return EXIT_OK


def _cmd_extract(args) -> int:
    cube = read_iq_bin(args.iq, args.sidecar)
    profile = range_profile(cube)
    if args.bin is not None:
        bin_index, low_conf = args.bin, False
    else:
        bin_index, low_conf = select_range_bin(profile)
    phase = extract_unwrapped_phase(profile, bin_index,
                                    cube.config.slow_time_rate_hz)
    write_phase_csv(args.out, phase)
    print(json.dumps({"bin": int(bin_index), "low_confidence": bool(low_conf),
                      "samples": int(phase.phase.size),
                      "rate_hz": phase.rate_hz}))
    return EXIT_OK


def _cmd_estimate(args) -> int:
    cfg = _load_config(args.config)
    phase = _load_phase(args)
    detail = estimate_subject_detailed(phase, args.method, seed=args.seed, cfg=cfg)
    est = detail.estimate
    if args.imfs_csv and detail.imfs is not None:
        header = args.imfs_json or args.imfs_csv + ".json"
        from .vmd import VmdParams
        params = (cfg.fixed_vmd if args.method == "vmd" else
                  VmdParams(k_modes=detail.candidate.k_modes,
                            alpha=detail.candidate.alpha))
        write_imf_csv(args.imfs_csv, header, detail.imfs, params)
    if args.peaks_csv:
        amplitude_source = (detail.imfs.modes.sum(axis=0)
                            if detail.imfs is not None else detail.prepared.phase)
        write_peaks_csv(args.peaks_csv, est.peak_indices, amplitude_source,
                        detail.prepared.rate_hz)
    if args.trace_jsonl and detail.trace is not None:
        write_opt_trace_jsonl(args.trace_jsonl, detail.trace)
    payload = {"method": est.method_tag, "bpm": est.bpm,
               "n_peaks": int(est.peak_indices.size),
               "low_confidence": est.low_confidence,
               "empty_band": est.empty_band}
    if detail.candidate is not None:
        payload["k_modes"] = detail.candidate.k_modes
        payload["alpha"] = detail.candidate.alpha
        if np.isfinite(detail.candidate.fitness):
            payload["fitness"] = detail.candidate.fitness
    print(json.dumps(payload))
    return EXIT_OK


def _write_errors_csv(path, report):
    import csv
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject_id", "method", "ref_bpm", "est_bpm", "abs_error"])
        for row in report.rows:
            writer.writerow([row.subject_id, row.method, row.ref_bpm,
                             "" if row.est_bpm is None else row.est_bpm,
                             "" if row.abs_error is None else row.abs_error])


def _cmd_eval(args) -> int:
    cfg = _load_config(args.config)
    methods = _parse_methods(args.methods)
    records = read_manifest(args.manifest)
    report = run_cohort(records, methods=methods, seed=args.seed, cfg=cfg)
    if args.report_json:
        write_report_json(args.report_json, report)
    if args.errors_csv:
        _write_errors_csv(args.errors_csv, report)
    print(format_report_table(report))
    failed = [r for r in report.rows if not r.complete]
    if failed:
        print(f"\nincomplete rows: {len(failed)}", file=sys.stderr)
    return EXIT_OK


def _cmd_plotdata(args) -> int:
    import csv
    if args.plot_kind == "errors":
        with open(args.report) as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{args.report}: {exc}") from exc
        rows = payload.get("rows")
        if not isinstance(rows, list):
            raise DataFormatError(f"{args.report}: not a radarhr report")
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["subject_id", "method", "abs_error"])
            for row in rows:
                writer.writerow([row.get("subject_id"), row.get("method"),
                                 row.get("abs_error")])
        print(json.dumps({"rows": len(rows), "out": args.out}))
        return EXIT_OK

    cfg = _load_config(args.config)
    methods = _parse_methods(args.methods)
    phase = read_phase_csv(args.phase)
    os.makedirs(args.out_dir, exist_ok=True)
    written = []
    for method in methods:
        if method == "bpf":
            continue  # no reconstruction to show
        detail = estimate_subject_detailed(phase, method, seed=args.seed, cfg=cfg)
        prepared = detail.prepared
        from .reconstruction import reconstruct, select_cardiac_modes
        rec = reconstruct(detail.imfs, select_cardiac_modes(detail.imfs, cfg.band))
        spectrum = np.abs(np.fft.rfft(rec.samples))
        freqs = np.fft.rfftfreq(rec.samples.size, d=1.0 / prepared.rate_hz)
        out = os.path.join(args.out_dir, f"spectrum_{method}.csv")
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["freq_hz", "magnitude"])
            for f, m in zip(freqs, spectrum):
                if f > 5.0:
                    break
                writer.writerow([f"{f:.6f}", repr(float(m))])
        written.append(out)
    print(json.dumps({"written": written}))
    return EXIT_OK


_COMMANDS = {
    "synth": _cmd_synth,
    "extract": _cmd_extract,
    "estimate": _cmd_estimate,
    "eval": _cmd_eval,
    "plotdata": _cmd_plotdata,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidArgumentError, RadarHrError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

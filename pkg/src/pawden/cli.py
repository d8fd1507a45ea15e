"""Command line front-end.

Commands: synth, denoise, compare, map, metrics. Exit codes: 0 success,
1 I/O failure, 2 invalid parameters, 3 numerical or degenerate input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import FilterDesignError
from .batch import (
    METHODS,
    LoadError,
    compare,
    file_digest,
    format_report_table,
    load_signal,
    report_to_json,
    run_denoise,
    save_signal,
)
from .grids import ScanGrid, map_project
from .metrics import psnr, ssim
from .synth import DegenerateInputError, add_noise, add_noise_grid, make_scene_grid, make_two_layer_scene
from .wavelets import Signal

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARAMS = 2
EXIT_NUMERIC = 3


def _add_io_flags(p):
    p.add_argument("--format", choices=("csv", "raw"), default=None, help="output file format (default: by extension)")
    p.add_argument("--fs-hz", type=float, default=None, help="sample rate for csv inputs")


def _add_method_flags(p):
    p.add_argument("--wavelet", default="db8", help="daubechies filter, e.g. db8")
    p.add_argument("--levels", type=int, default=6, help="decomposition depth")
    p.add_argument("--shrinkage", choices=("hard", "soft"), default="soft", help="shrinkage for classic rules")
    p.add_argument("--cutoff-hz", type=float, default=None, help="butterworth cutoff (default 15e6)")
    p.add_argument("--zero-phase", action="store_true", help="forward-backward butterworth")


def _load(path, fs_hz):
    return load_signal(path, fs_hz=fs_hz)


def _cmd_synth(args):
    if args.grid_ny or args.grid_nx:
        ny = args.grid_ny or 1
        nx = args.grid_nx or 1
        obj = make_scene_grid(
            ny,
            nx,
            fs_hz=args.fs_hz or 80e6,
            surface_freq_hz=args.surface_freq_hz,
            deep_freq_hz=args.deep_freq_hz,
            separation_s=args.separation_s,
            surface_amp=args.surface_amp,
            deep_amp=args.deep_amp,
            coupled_amp=args.coupled_amp,
            duration_s=args.duration_s,
        )
        if args.noise_snr_db is not None:
            obj = add_noise_grid(obj, args.noise_snr_db, args.seed)
    else:
        scene = make_two_layer_scene(
            fs_hz=args.fs_hz or 80e6,
            surface_freq_hz=args.surface_freq_hz,
            deep_freq_hz=args.deep_freq_hz,
            separation_s=args.separation_s,
            surface_amp=args.surface_amp,
            deep_amp=args.deep_amp,
            coupled_amp=args.coupled_amp,
            duration_s=args.duration_s,
        )
        obj = scene.clean
        if args.noise_snr_db is not None:
            obj = add_noise(obj, args.noise_snr_db, args.seed)
    save_signal(obj, args.out, format=args.format)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_denoise(args):
    obj = _load(args.input, args.fs_hz)
    out, trace = run_denoise(
        obj,
        args.method,
        wavelet=args.wavelet,
        levels=args.levels,
        shrinkage=args.shrinkage,
        cutoff_hz=args.cutoff_hz,
        zero_phase=args.zero_phase,
    )
    save_signal(out, args.output, format=args.format)
    print(f"wrote {args.output}")
    if args.trace_out and args.method == "gawd":
        traces = trace if isinstance(trace, list) else [trace]
        payload = [
            {
                "threshold": t.threshold,
                "degenerate": t.degenerate,
                "largest_gap_index": t.largest_gap_index,
                "second_largest_gap_index": t.second_largest_gap_index,
            }
            for t in traces
        ]
        Path(args.trace_out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {args.trace_out}")
    return EXIT_OK


def _write_xy(path, x, y):
    with open(path, "w") as fh:
        for xv, yv in zip(x, y):
            fh.write(f"{xv!r} {yv!r}\n")


def _representative_a_line(obj):
    if isinstance(obj, Signal):
        return obj
    flat = np.sum(obj.data**2, axis=2)
    iy, ix = np.unravel_index(int(np.argmax(flat)), flat.shape)
    return obj.a_line(int(iy), int(ix))


def _cmd_compare(args):
    noisy = _load(args.input, args.fs_hz)
    digests = {"input": file_digest(args.input)}
    if args.reference:
        reference = _load(args.reference, args.fs_hz)
        digests["reference"] = file_digest(args.reference)
    else:
        reference = None
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    report = compare(
        noisy,
        reference,
        methods,
        seed=args.seed,
        noise_snr_db=args.noise_snr_db,
        wavelet=args.wavelet,
        levels=args.levels,
        shrinkage=args.shrinkage,
        cutoff_hz=args.cutoff_hz,
        zero_phase=args.zero_phase,
        input_digests=digests,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = format_report_table(report)
    (out_dir / "report.txt").write_text(table)
    (out_dir / "report.json").write_text(report_to_json(report))
    ext = "csv" if args.format == "csv" else "raw"
    for method, out in report.outputs.items():
        save_signal(out, out_dir / f"denoised_{method}.{ext}", format=args.format or "raw")
        a_line = _representative_a_line(out)
        t = np.arange(len(a_line)) / a_line.sample_rate_hz
        _write_xy(out_dir / f"{method}_aline.xy", t, a_line.samples)
    ref_line = _representative_a_line(reference if reference is not None else noisy)
    t = np.arange(len(ref_line)) / ref_line.sample_rate_hz
    _write_xy(out_dir / "reference_aline.xy", t, ref_line.samples)
    print(table, end="")
    failed = [r.method for r in report.rows if r.error]
    if failed:
        print(f"methods with errors: {', '.join(failed)}", file=sys.stderr)
    return EXIT_OK


def _cmd_map(args):
    obj = _load(args.input, args.fs_hz)
    if not isinstance(obj, ScanGrid):
        raise ValueError("map projection needs a scan grid input")
    image = map_project(obj)
    with open(args.output, "w") as fh:
        for row in image:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    print(f"wrote {args.output} ({image.shape[0]}x{image.shape[1]})")
    return EXIT_OK


def _cmd_metrics(args):
    measured = _load(args.input, args.fs_hz)
    reference = _load(args.reference, args.fs_hz)
    if type(measured) is not type(reference):
        raise ValueError("input and reference must both be signals or both grids")
    from .batch import _reference_snrs

    power_db, peak_db = _reference_snrs(measured, reference)
    result = {"snr_power_db": power_db, "snr_peak_db": peak_db}
    if isinstance(measured, ScanGrid):
        ref_map = map_project(reference)
        out_map = map_project(measured)
        peak = float(np.max(ref_map))
        result["map_psnr_db"] = psnr(ref_map, out_map, max_f=peak)
        result["map_ssim"] = ssim(ref_map, out_map, dynamic_range=peak)
    for key, value in result.items():
        shown = "inf" if isinstance(value, float) and math.isinf(value) else f"{value:.6f}"
        print(f"{key} = {shown}")
    if args.json:
        Path(args.json).write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pawden", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pawden {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic two-layer phantom")
    p.add_argument("--out", required=True)
    p.add_argument("--grid-ny", type=int, default=0, help="grid rows (0 = single signal)")
    p.add_argument("--grid-nx", type=int, default=0, help="grid columns")
    p.add_argument("--duration-s", type=float, default=51.2e-6)
    p.add_argument("--surface-freq-hz", type=float, default=15e6)
    p.add_argument("--deep-freq-hz", type=float, default=3e6)
    p.add_argument("--separation-s", type=float, default=8.4e-6)
    p.add_argument("--surface-amp", type=float, default=1.0)
    p.add_argument("--deep-amp", type=float, default=0.5)
    p.add_argument("--coupled-amp", type=float, default=3.0)
    p.add_argument("--noise-snr-db", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("denoise", help="denoise one file with one method")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--trace-out", default=None, help="write gawd threshold trace JSON here")
    _add_method_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_denoise)

    p = sub.add_parser("compare", help="run several methods and report metrics")
    p.add_argument("--input", required=True)
    p.add_argument("--reference", default=None, help="clean reference (defaults to input when injecting noise)")
    p.add_argument("--methods", required=True, help="comma separated subset of " + ",".join(METHODS))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-snr-db", type=float, default=None, help="inject noise at this SNR before denoising")
    _add_method_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("map", help="maximum amplitude projection of a grid")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="csv image path")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("metrics", help="SNR (and MAP PSNR/SSIM for grids) of input vs reference")
    p.add_argument("--input", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--json", default=None, help="also write metrics to this JSON file")
    _add_io_flags(p)
    p.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LoadError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (DegenerateInputError, FloatingPointError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FilterDesignError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())

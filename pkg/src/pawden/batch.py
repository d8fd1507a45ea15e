"""Batch front-end: file I/O, method dispatch, and comparison reports.

File formats:
  csv  - single signal: one sample per row, no header (sample rate comes
         from the caller). Grid: header row of ``y{iy}x{ix}`` column labels,
         one A-line per column.
  raw  - little-endian float64 samples plus a mandatory JSON sidecar at
         ``<path>.meta.json`` holding dtype, byte order, sample rate, and
         either ``length`` (signal) or ``shape`` [ny, nx, nt] (grid).

Both formats round-trip values bit-exactly through save/load.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import DEFAULT_CUTOFF_HZ, butterworth_lowpass, iir_filter
from .gawd import GawdConfig, gawd_denoise
from .grids import ScanGrid, map_project
from .metrics import psnr, ssim
from .synth import add_noise, add_noise_grid
from .thresholds import ThresholdRule, denoise_classic
from .wavelets import Signal, filter_from_name

__all__ = [
    "LoadError",
    "METHODS",
    "RunReport",
    "MethodRow",
    "load_signal",
    "save_signal",
    "run_denoise",
    "compare",
    "format_report_table",
    "report_to_json",
]

METHODS = ("gawd", "sqtwolog", "rigrsure", "minimaxi", "heursure", "butterworth")

_CLASSIC = ("sqtwolog", "rigrsure", "minimaxi", "heursure")


class LoadError(ValueError):
    """A file failed to load (parse error, missing sidecar, bad shape)."""


# ---------------------------------------------------------------------------
# file I/O


def _format_value(v: float) -> str:
    return repr(float(v))


def _sidecar_path(path) -> Path:
    return Path(str(path) + ".meta.json")


def _load_csv(path: Path, fs_hz):
    with open(path, "r") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise LoadError(f"{path}: file is empty")
    if fs_hz is None or not fs_hz > 0:
        raise LoadError(f"{path}: csv carries no sample rate; pass a positive fs_hz")
    first = lines[0].split(",")
    try:
        float(first[0])
        has_header = False
    except ValueError:
        has_header = True

    if not has_header:
        if any("," in ln for ln in lines):
            raise LoadError(f"{path}: multi-column csv needs a header row of yNxM labels")
        try:
            samples = np.array([float(ln) for ln in lines])
        except ValueError as e:
            raise LoadError(f"{path}: {e}") from None
        return Signal(samples, fs_hz)

    labels = [c.strip() for c in first]
    try:
        coords = []
        for lab in labels:
            if not lab.startswith("y") or "x" not in lab:
                raise ValueError(lab)
            iy, ix = lab[1:].split("x")
            coords.append((int(iy), int(ix)))
    except ValueError:
        raise LoadError(f"{path}: header labels must look like y0x0, got {labels[:4]}") from None
    ny = max(c[0] for c in coords) + 1
    nx = max(c[1] for c in coords) + 1
    if len(coords) != ny * nx or len(set(coords)) != len(coords):
        raise LoadError(f"{path}: header does not cover a full {ny}x{nx} raster")
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != len(labels):
            raise LoadError(
                f"{path}:{lineno}: expected {len(labels)} columns, found {len(cells)}"
            )
        try:
            rows.append([float(c) for c in cells])
        except ValueError as e:
            raise LoadError(f"{path}:{lineno}: {e}") from None
    if not rows:
        raise LoadError(f"{path}: header but no sample rows")
    table = np.asarray(rows)  # (nt, n_alines)
    data = np.empty((ny, nx, table.shape[0]))
    for col, (iy, ix) in enumerate(coords):
        data[iy, ix] = table[:, col]
    return ScanGrid(data=data, sample_rate_hz=fs_hz)


def _load_raw(path: Path):
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        raise LoadError(f"{path}: missing sidecar {sidecar.name}")
    try:
        meta = json.loads(sidecar.read_text())
    except json.JSONDecodeError as e:
        raise LoadError(f"{sidecar}: invalid JSON ({e})") from None
    dtype = meta.get("dtype", "float64")
    byte_order = meta.get("byte_order", "little")
    if dtype != "float64" or byte_order != "little":
        raise LoadError(f"{sidecar}: only little-endian float64 is supported, got {dtype}/{byte_order}")
    fs = meta.get("sample_rate_hz")
    if fs is None or not fs > 0:
        raise LoadError(f"{sidecar}: sample_rate_hz missing or not positive")
    values = np.fromfile(path, dtype="<f8")
    if "shape" in meta:
        shape = tuple(int(v) for v in meta["shape"])
        if len(shape) != 3:
            raise LoadError(f"{sidecar}: shape must be [ny, nx, nt], got {meta['shape']}")
        expected = int(np.prod(shape))
        if values.size != expected:
            raise LoadError(
                f"{path}: sidecar declares {expected} values "
                f"(shape {shape}) but file holds {values.size}"
            )
        return ScanGrid(data=values.reshape(shape), sample_rate_hz=fs)
    length = meta.get("length")
    if length is None:
        raise LoadError(f"{sidecar}: needs either length or shape")
    if values.size != int(length):
        raise LoadError(
            f"{path}: sidecar declares length {int(length)} but file holds {values.size} values"
        )
    return Signal(values, fs)


def load_signal(path, format: str | None = None, fs_hz: float | None = None):
    """Load a Signal or ScanGrid from ``path``.

    ``format`` is "csv" or "raw"; when omitted it is inferred from the
    extension (.csv means csv, anything else raw). CSV needs ``fs_hz``.
    """
    p = Path(path)
    if not p.exists():
        raise LoadError(f"{p}: no such file")
    fmt = format or ("csv" if p.suffix.lower() == ".csv" else "raw")
    if fmt == "csv":
        return _load_csv(p, fs_hz)
    if fmt == "raw":
        return _load_raw(p)
    raise LoadError(f"unknown format {format!r} (expected csv or raw)")


def save_signal(obj, path, format: str | None = None) -> None:
    """Write a Signal or ScanGrid; the inverse of :func:`load_signal`."""
    p = Path(path)
    fmt = format or ("csv" if p.suffix.lower() == ".csv" else "raw")
    if fmt == "csv":
        with open(p, "w") as fh:
            if isinstance(obj, Signal):
                for v in obj.samples:
                    fh.write(_format_value(v) + "\n")
            else:
                ny, nx, nt = obj.shape
                labels = [f"y{iy}x{ix}" for iy in range(ny) for ix in range(nx)]
                fh.write(",".join(labels) + "\n")
                flat = obj.data.reshape(ny * nx, nt)
                for t in range(nt):
                    fh.write(",".join(_format_value(v) for v in flat[:, t]) + "\n")
        return
    if fmt != "raw":
        raise ValueError(f"unknown format {format!r} (expected csv or raw)")
    meta = {"dtype": "float64", "byte_order": "little", "sample_rate_hz": obj.sample_rate_hz}
    if isinstance(obj, Signal):
        meta["length"] = len(obj)
        values = obj.samples
    else:
        meta["shape"] = list(obj.shape)
        values = obj.data
    values.astype("<f8").tofile(p)
    _sidecar_path(p).write_text(json.dumps(meta, sort_keys=True) + "\n")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# method dispatch


def _denoise_one(signal: Signal, method: str, params: dict):
    """Run one method on one A-line. Returns (signal, trace-or-None)."""
    if method == "gawd":
        config = GawdConfig(wavelet=params["wavelet"], levels=params["levels"])
        return gawd_denoise(signal, config)
    if method in _CLASSIC:
        rule = ThresholdRule(kind=method, shrinkage=params["shrinkage"])
        filt = filter_from_name(params["wavelet"])
        return denoise_classic(signal, rule, filt, params["levels"]), None
    if method == "butterworth":
        cutoff = params["cutoff_hz"] or DEFAULT_CUTOFF_HZ
        coeffs = butterworth_lowpass(4, cutoff, signal.sample_rate_hz)
        return iir_filter(signal, coeffs, zero_phase=params["zero_phase"]), None
    raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def run_denoise(
    obj,
    method: str,
    wavelet: str = "db8",
    levels: int = 6,
    shrinkage: str = "soft",
    cutoff_hz: float | None = None,
    zero_phase: bool = False,
):
    """Denoise a Signal or ScanGrid with the named method.

    Grids are processed one A-line at a time in raster order; failures are
    annotated with the A-line index. Returns ``(output, trace)`` where the
    trace is the gawd threshold trace (or a raster-ordered list of traces
    for grids) and None for other methods.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    params = {
        "wavelet": wavelet,
        "levels": int(levels),
        "shrinkage": shrinkage,
        "cutoff_hz": cutoff_hz,
        "zero_phase": zero_phase,
    }
    if isinstance(obj, Signal):
        return _denoise_one(obj, method, params)
    out = np.empty_like(obj.data)
    traces = [] if method == "gawd" else None
    for (iy, ix), a_line in obj.signals():
        try:
            result, trace = _denoise_one(a_line, method, params)
        except Exception as e:
            e.args = (f"A-line ({iy},{ix}): {e}",)
            raise
        out[iy, ix] = result.samples
        if traces is not None:
            traces.append(trace)
    return ScanGrid(data=out, sample_rate_hz=obj.sample_rate_hz, spacing=obj.spacing), traces


# ---------------------------------------------------------------------------
# comparison reports


@dataclass
class MethodRow:
    """One method's results against the common reference."""

    method: str
    params: dict
    snr_power_db: float | None = None
    snr_peak_db: float | None = None
    psnr_db: float | None = None
    ssim: float | None = None
    wall_time_s: float | None = None
    error: str | None = None


@dataclass
class RunReport:
    """Comparison run: one row per method plus reproducibility provenance."""

    rows: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)  # method -> denoised object


def _flat(obj) -> np.ndarray:
    return obj.samples if isinstance(obj, Signal) else obj.data.ravel()


def _reference_snrs(out, reference):
    ref = _flat(reference)
    err = _flat(out) - ref
    p_err = float(np.sum(err * err))
    if p_err == 0.0:
        return math.inf, math.inf
    power = 10.0 * np.log10(float(np.sum(ref * ref)) / p_err)
    peak = 20.0 * np.log10(float(np.max(np.abs(ref))) / float(np.std(err)))
    return float(power), float(peak)


def compare(
    noisy_input,
    reference,
    methods,
    seed: int = 0,
    noise_snr_db: float | None = None,
    wavelet: str = "db8",
    levels: int = 6,
    shrinkage: str = "soft",
    cutoff_hz: float | None = None,
    zero_phase: bool = False,
    input_digests: dict | None = None,
) -> RunReport:
    """Run every method on one common input and report metrics per method.

    When ``noise_snr_db`` is given, ``noisy_input`` is treated as clean and
    seeded noise is injected first (the reference defaults to that clean
    input). Reference-based SNR is reported in both conventions
    (10*log10 of the power ratio, and 20*log10 of reference peak over error
    spread). For grids, PSNR and SSIM of the maximum amplitude projections
    against the reference projection are added. A method failure is
    recorded in its row without aborting the others.
    """
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}, expected one of {METHODS}")
    if reference is None:
        if noise_snr_db is None:
            raise ValueError("a reference is required unless noise is injected from clean input")
        reference = noisy_input
    if noise_snr_db is not None:
        if isinstance(noisy_input, Signal):
            noisy_input = add_noise(noisy_input, noise_snr_db, seed)
        else:
            noisy_input = add_noise_grid(noisy_input, noise_snr_db, seed)

    is_grid = isinstance(noisy_input, ScanGrid)
    ref_map = map_project(reference) if is_grid else None

    params_common = {
        "wavelet": wavelet,
        "levels": int(levels),
        "shrinkage": shrinkage,
        "cutoff_hz": cutoff_hz,
        "zero_phase": zero_phase,
    }
    report = RunReport(
        provenance={
            "tool": f"pawden {__version__}",
            "seed": seed,
            "noise_snr_db": noise_snr_db,
            "params": params_common,
            "inputs": input_digests or {},
        }
    )
    report.provenance["noisy_input_snr_power_db"] = _reference_snrs(noisy_input, reference)[0]
    for method in methods:
        row = MethodRow(method=method, params=_relevant_params(method, params_common))
        t0 = time.perf_counter()
        try:
            out, _trace = run_denoise(noisy_input, method, **params_common)
        except Exception as e:
            row.error = f"{type(e).__name__}: {e}"
            row.wall_time_s = time.perf_counter() - t0
            report.rows.append(row)
            continue
        row.wall_time_s = time.perf_counter() - t0
        row.snr_power_db, row.snr_peak_db = _reference_snrs(out, reference)
        if is_grid:
            out_map = map_project(out)
            peak = float(np.max(ref_map))
            row.psnr_db = psnr(ref_map, out_map, max_f=peak)
            row.ssim = ssim(ref_map, out_map, dynamic_range=peak)
        report.outputs[method] = out
        report.rows.append(row)
    return report


def _relevant_params(method: str, params: dict) -> dict:
    if method == "gawd":
        return {"wavelet": params["wavelet"], "levels": params["levels"]}
    if method in _CLASSIC:
        return {
            "wavelet": params["wavelet"],
            "levels": params["levels"],
            "shrinkage": params["shrinkage"],
        }
    return {
        "cutoff_hz": params["cutoff_hz"] or DEFAULT_CUTOFF_HZ,
        "order": 4,
        "zero_phase": params["zero_phase"],
    }


def _fmt_db(v) -> str:
    if v is None:
        return "-"
    if math.isinf(v):
        return "inf"
    return f"{v:.3f}"


def format_report_table(report: RunReport) -> str:
    """Human-readable aligned table of a comparison run."""
    header = ["method", "snr_power_db", "snr_peak_db", "psnr_db", "ssim", "wall_s", "params"]
    rows = []
    for r in report.rows:
        if r.error:
            rows.append([r.method, "error", "-", "-", "-", f"{r.wall_time_s:.3f}", r.error])
            continue
        rows.append(
            [
                r.method,
                _fmt_db(r.snr_power_db),
                _fmt_db(r.snr_peak_db),
                _fmt_db(r.psnr_db),
                "-" if r.ssim is None else f"{r.ssim:.4f}",
                f"{r.wall_time_s:.3f}",
                json.dumps(r.params, sort_keys=True),
            ]
        )
    widths = [max(len(header[i]), *(len(row[i]) for row in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    prov = report.provenance
    lines.append("")
    lines.append(
        f"seed={prov.get('seed')} noise_snr_db={prov.get('noise_snr_db')} "
        f"noisy_input_snr_power_db={_fmt_db(prov.get('noisy_input_snr_power_db'))} {prov.get('tool')}"
    )
    return "\n".join(lines) + "\n"


def report_to_json(report: RunReport, include_wall_time: bool = True) -> str:
    """Machine-readable report. Deterministic except for wall-time fields."""
    payload = {
        "provenance": report.provenance,
        "rows": [
            {
                "method": r.method,
                "params": r.params,
                "snr_power_db": r.snr_power_db,
                "snr_peak_db": r.snr_peak_db,
                "psnr_db": r.psnr_db,
                "ssim": r.ssim,
                "wall_time_s": r.wall_time_s if include_wall_time else None,
                "error": r.error,
            }
            for r in report.rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

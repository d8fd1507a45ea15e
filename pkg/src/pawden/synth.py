"""Synthetic photoacoustic fixtures.

Bipolar pressure pulses (Gaussian-derivative model), a two-layer scene with
an optional transducer-coupling burst at the record start, scan-grid scenes
for imaging benchmarks, and calibrated white-noise injection at a target
SNR. Everything is a pure function of its parameters plus, for the noise,
a seed driving NumPy's PCG64 generator (``np.random.default_rng``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grids import ScanGrid
from .wavelets import Signal

__all__ = [
    "PhantomScene",
    "DegenerateInputError",
    "make_pa_pulse",
    "make_two_layer_scene",
    "make_scene_grid",
    "add_noise",
    "add_noise_grid",
]

# pulse tails beyond 5 gaussian widths are below 4e-6 of the peak
PULSE_HALF_SUPPORT_WIDTHS = 5.0

DEFAULT_FS_HZ = 80e6
DEFAULT_SURFACE_FREQ_HZ = 15e6
DEFAULT_DEEP_FREQ_HZ = 3e6
# 1.3 cm of soft tissue at 1540 m/s
DEFAULT_SEPARATION_S = 8.4e-6
DEFAULT_DURATION_S = 51.2e-6
DEFAULT_SURFACE_ONSET_S = 1.5e-6
COUPLED_FREQ_HZ_FRACTION = 0.28  # of the sample rate
COUPLED_ENVELOPE_S = 5e-8


class DegenerateInputError(ValueError):
    """Input has no usable content for the requested operation."""


@dataclass(frozen=True)
class PhantomScene:
    """A clean synthetic A-line plus the inventory of what was rendered.

    ``components`` holds ``(label, onset_s, center_freq_hz, amplitude)``
    tuples for every nonzero-amplitude component; ``windows`` maps labels to
    half-open sample index ranges generous enough to hold each component's
    energy after mild smearing.
    """

    clean: Signal
    components: tuple
    windows: dict
    description: str


def _pulse_width_s(center_freq_hz: float) -> float:
    # gaussian-derivative spectrum peaks at 1/(2 pi tau)
    return 1.0 / (2.0 * math.pi * center_freq_hz)


def pulse_support_s(center_freq_hz: float) -> float:
    """Time support of a rendered pulse at the given spectral peak."""
    return 2.0 * PULSE_HALF_SUPPORT_WIDTHS * _pulse_width_s(center_freq_hz)


def make_pa_pulse(
    center_freq_hz: float,
    fs_hz: float,
    duration_s: float,
    onset_s: float,
    amplitude: float,
) -> Signal:
    """Render a bipolar (N-shaped) pressure pulse.

    The waveform is the first derivative of a Gaussian whose width puts the
    spectral peak at ``center_freq_hz``, normalized so the largest sample
    magnitude equals ``|amplitude|``, and placed with its support starting
    at ``onset_s``. The sampled pulse is exactly antisymmetric about its
    center, so it has (numerically) zero mean.
    """
    if not 0 < center_freq_hz < fs_hz / 2:
        raise ValueError(
            f"center frequency {center_freq_hz:g} Hz must lie below Nyquist "
            f"({fs_hz / 2:g} Hz)"
        )
    n = int(round(duration_s * fs_hz))
    if n < 1:
        raise ValueError("duration too short for even one sample")
    support = pulse_support_s(center_freq_hz)
    if onset_s < 0 or onset_s + support > duration_s:
        raise ValueError(
            f"pulse support [{onset_s:g}, {onset_s + support:g}] s does not "
            f"fit in the {duration_s:g} s record"
        )
    out = np.zeros(n)
    if amplitude != 0.0:
        tau_samples = _pulse_width_s(center_freq_hz) * fs_hz
        center = int(round((onset_s + support / 2.0) * fs_hz))
        half = int(round(PULSE_HALF_SUPPORT_WIDTHS * tau_samples))
        half = min(half, center, n - 1 - center)
        j = np.arange(-half, half + 1, dtype=np.float64)
        wave = -j * np.exp(-(j * j) / (2.0 * tau_samples * tau_samples))
        peak = np.max(np.abs(wave))
        if peak > 0.0:
            out[center - half : center + half + 1] = wave * (amplitude / peak)
    return Signal(out, fs_hz)


def _coupled_burst(fs_hz: float, duration_s: float, amplitude: float) -> Signal:
    """Short broadband high-frequency burst at the record start.

    Models the large coupling transient at the transducer surface; its
    energy lands in the finest detail bands of a 6-level decomposition.
    """
    n = int(round(duration_s * fs_hz))
    out = np.zeros(n)
    if amplitude != 0.0:
        freq = COUPLED_FREQ_HZ_FRACTION * fs_hz
        sigma = COUPLED_ENVELOPE_S
        t_center = 4.0 * sigma
        t = np.arange(n) / fs_hz
        mask = t <= 2.0 * t_center
        tt = t[mask] - t_center
        wave = np.cos(2.0 * math.pi * freq * tt) * np.exp(-(tt * tt) / (2.0 * sigma * sigma))
        out[mask] = wave * (amplitude / np.max(np.abs(wave)))
    return Signal(out, fs_hz)


def _window(onset_s: float, length_s: float, pad_s: float, fs_hz: float, n: int) -> tuple:
    start = max(0, int((onset_s - pad_s) * fs_hz))
    stop = min(n, int(math.ceil((onset_s + length_s + pad_s) * fs_hz)))
    return (start, stop)


def make_two_layer_scene(
    fs_hz: float = DEFAULT_FS_HZ,
    surface_freq_hz: float = DEFAULT_SURFACE_FREQ_HZ,
    deep_freq_hz: float = DEFAULT_DEEP_FREQ_HZ,
    separation_s: float = DEFAULT_SEPARATION_S,
    surface_amp: float = 1.0,
    deep_amp: float = 0.5,
    coupled_amp: float = 3.0,
    duration_s: float = DEFAULT_DURATION_S,
    surface_onset_s: float = DEFAULT_SURFACE_ONSET_S,
) -> PhantomScene:
    """Two-layer tissue phantom: an early coupling burst, a high-frequency
    surface pulse, and a low-frequency deep pulse ``separation_s`` later.

    The clean waveform is the exact sum of the rendered components. Any
    component can be switched off by passing amplitude 0.
    """
    if separation_s <= 0:
        raise ValueError("separation must be positive")
    n = int(round(duration_s * fs_hz))
    deep_onset_s = surface_onset_s + separation_s

    burst = _coupled_burst(fs_hz, duration_s, coupled_amp)
    surface = make_pa_pulse(surface_freq_hz, fs_hz, duration_s, surface_onset_s, surface_amp)
    deep = make_pa_pulse(deep_freq_hz, fs_hz, duration_s, deep_onset_s, deep_amp)

    clean = burst.samples + surface.samples + deep.samples
    pad = 0.5e-6
    components = []
    windows = {}
    burst_len = 8.0 * COUPLED_ENVELOPE_S
    if coupled_amp != 0.0:
        components.append(("coupled", 0.0, COUPLED_FREQ_HZ_FRACTION * fs_hz, coupled_amp))
    windows["coupled"] = _window(0.0, burst_len, pad, fs_hz, n)
    if surface_amp != 0.0:
        components.append(("surface", surface_onset_s, surface_freq_hz, surface_amp))
    windows["surface"] = _window(surface_onset_s, pulse_support_s(surface_freq_hz), pad, fs_hz, n)
    if deep_amp != 0.0:
        components.append(("deep", deep_onset_s, deep_freq_hz, deep_amp))
    windows["deep"] = _window(deep_onset_s, pulse_support_s(deep_freq_hz), pad, fs_hz, n)

    return PhantomScene(
        clean=Signal(clean, fs_hz),
        components=tuple(components),
        windows=windows,
        description=(
            f"two-layer phantom: surface {surface_freq_hz / 1e6:g} MHz at "
            f"{surface_onset_s * 1e6:g} us, deep {deep_freq_hz / 1e6:g} MHz "
            f"{separation_s * 1e6:g} us later, coupling burst x{coupled_amp:g}"
        ),
    )


def make_scene_grid(
    ny: int,
    nx: int,
    fs_hz: float = DEFAULT_FS_HZ,
    surface_freq_hz: float = DEFAULT_SURFACE_FREQ_HZ,
    deep_freq_hz: float = DEFAULT_DEEP_FREQ_HZ,
    separation_s: float = DEFAULT_SEPARATION_S,
    surface_amp: float = 1.0,
    deep_amp: float = 0.5,
    coupled_amp: float = 3.0,
    duration_s: float = DEFAULT_DURATION_S,
    surface_onset_s: float = DEFAULT_SURFACE_ONSET_S,
) -> ScanGrid:
    """Raster of two-layer A-lines with a blob-shaped deep layer.

    The deep pulse amplitude is modulated across the raster by a Gaussian
    blob (peak at the grid center, floor of 20% at the edges) so the
    maximum-amplitude projection shows a feature against a uniform surface.
    """
    if ny < 1 or nx < 1:
        raise ValueError("grid must have at least one A-line")
    yy = (np.arange(ny) - (ny - 1) / 2.0) / max(ny / 2.0, 1.0)
    xx = (np.arange(nx) - (nx - 1) / 2.0) / max(nx / 2.0, 1.0)
    blob = 0.2 + 0.8 * np.exp(-2.0 * (yy[:, None] ** 2 + xx[None, :] ** 2))
    n = int(round(duration_s * fs_hz))
    data = np.empty((ny, nx, n))
    for iy in range(ny):
        for ix in range(nx):
            scene = make_two_layer_scene(
                fs_hz=fs_hz,
                surface_freq_hz=surface_freq_hz,
                deep_freq_hz=deep_freq_hz,
                separation_s=separation_s,
                surface_amp=surface_amp,
                deep_amp=deep_amp * float(blob[iy, ix]),
                coupled_amp=coupled_amp,
                duration_s=duration_s,
                surface_onset_s=surface_onset_s,
            )
            data[iy, ix] = scene.clean.samples
    return ScanGrid(data=data, sample_rate_hz=fs_hz)


def _noise_sigma(power: float, target_snr_db: float) -> float:
    return math.sqrt(power * 10.0 ** (-target_snr_db / 10.0))


def add_noise(signal: Signal, target_snr_db: float, seed) -> Signal:
    """Add zero-mean white Gaussian noise at a target SNR (power ratio).

    ``seed`` feeds ``np.random.default_rng``; identical seeds give
    bit-identical outputs. A target of +inf returns the input unchanged.

    Raises:
        DegenerateInputError: zero-power signal with a finite target.
    """
    if math.isinf(target_snr_db) and target_snr_db > 0:
        return signal.with_samples(signal.samples)
    power = float(np.mean(signal.samples**2))
    if power == 0.0:
        raise DegenerateInputError("cannot scale noise against a zero-power signal")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(signal)) * _noise_sigma(power, target_snr_db)
    return signal.with_samples(signal.samples + noise)


def add_noise_grid(grid: ScanGrid, target_snr_db: float, seed) -> ScanGrid:
    """Noise injection across a whole raster.

    One generator seeds the entire grid (A-lines drawn in raster order) and
    the noise level is set against the grid-wide mean power, mirroring a
    detector noise floor that does not follow per-pixel signal strength.
    """
    if math.isinf(target_snr_db) and target_snr_db > 0:
        return ScanGrid(data=grid.data.copy(), sample_rate_hz=grid.sample_rate_hz, spacing=grid.spacing)
    power = float(np.mean(grid.data**2))
    if power == 0.0:
        raise DegenerateInputError("cannot scale noise against a zero-power grid")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(grid.data.shape) * _noise_sigma(power, target_snr_db)
    return ScanGrid(data=grid.data + noise, sample_rate_hz=grid.sample_rate_hz, spacing=grid.spacing)

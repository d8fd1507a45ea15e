"""Quality metrics: MSE, PSNR, SSIM for images; SNR for waveforms.

SNR comes in two flavors because real acquisitions rarely have a clean
reference: ``reference`` mode is the power ratio against a known clean
signal, ``region`` mode compares a signal window's peak against a noise
window's spread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .wavelets import Signal

__all__ = ["SnrSpec", "mse", "psnr", "ssim", "snr_db"]

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5


def _as_image(f) -> np.ndarray:
    a = np.asarray(f, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("image must be a non-empty 2-D array")
    if not np.all(np.isfinite(a)):
        raise ValueError("image contains NaN or Inf")
    return a


def _check_same_shape(f: np.ndarray, g: np.ndarray):
    if f.shape != g.shape:
        raise ValueError(f"image dimensions differ: {f.shape} vs {g.shape}")


def mse(f, g) -> float:
    """Mean squared difference between two same-shaped images."""
    fa, ga = _as_image(f), _as_image(g)
    _check_same_shape(fa, ga)
    sq = np.square(fa - ga).ravel()
    # strict left-to-right accumulation (matches a scalar double loop)
    return float(np.cumsum(sq)[-1]) / sq.size


def psnr(f, g, max_f: float | None = None) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images.

    ``max_f`` defaults to the maximum of the reference image ``f``.
    """
    fa, ga = _as_image(f), _as_image(g)
    _check_same_shape(fa, ga)
    if max_f is None:
        max_f = float(np.max(fa))
    if not max_f > 0:
        raise ValueError(f"max_f must be positive, got {max_f}")
    err = mse(fa, ga)
    if err == 0.0:
        return math.inf
    return float(10.0 * np.log10(max_f * max_f / err))


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    half = (size - 1) / 2.0
    x = np.arange(size) - half
    w = np.exp(-(x * x) / (2.0 * sigma * sigma))
    w2 = np.outer(w, w)
    return w2 / w2.sum()


def _ssim_terms(mu_f, mu_g, var_f, var_g, cov_fg, c1, c2, c3):
    sd_f = np.sqrt(np.maximum(var_f, 0.0))
    sd_g = np.sqrt(np.maximum(var_g, 0.0))
    luminance = (2.0 * mu_f * mu_g + c1) / (mu_f * mu_f + mu_g * mu_g + c1)
    contrast = (2.0 * sd_f * sd_g + c2) / (var_f + var_g + c2)
    structure = (cov_fg + c3) / (sd_f * sd_g + c3)
    return luminance * contrast * structure


def ssim(f, g, dynamic_range: float, mode: str = "auto") -> float:
    """Structural similarity index: mean luminance*contrast*structure.

    Sliding 11x11 Gaussian-weighted windows (sigma 1.5) with the usual
    stabilizers C1=(0.01 R)^2, C2=(0.03 R)^2, C3=C2/2 for dynamic range R.
    ``mode`` is ``"windowed"``, ``"global"`` (whole-image statistics, for
    images smaller than the window), or ``"auto"``.
    """
    fa, ga = _as_image(f), _as_image(g)
    _check_same_shape(fa, ga)
    if not dynamic_range > 0:
        raise ValueError(f"dynamic_range must be positive, got {dynamic_range}")
    if mode not in ("auto", "windowed", "global"):
        raise ValueError(f"unknown ssim mode {mode!r}")
    if mode == "auto":
        mode = "windowed" if min(fa.shape) >= SSIM_WINDOW else "global"
    c1 = (0.01 * dynamic_range) ** 2
    c2 = (0.03 * dynamic_range) ** 2
    c3 = c2 / 2.0

    if mode == "global":
        mu_f, mu_g = fa.mean(), ga.mean()
        var_f = np.mean(fa * fa) - mu_f * mu_f
        var_g = np.mean(ga * ga) - mu_g * mu_g
        cov = np.mean(fa * ga) - mu_f * mu_g
        return float(_ssim_terms(mu_f, mu_g, var_f, var_g, cov, c1, c2, c3))

    if min(fa.shape) < SSIM_WINDOW:
        raise ValueError(
            f"image {fa.shape} is smaller than the {SSIM_WINDOW}x{SSIM_WINDOW} "
            f"window; use mode='global'"
        )
    w = _gaussian_window(SSIM_WINDOW, SSIM_SIGMA)
    mu_f = convolve2d(fa, w, mode="valid")
    mu_g = convolve2d(ga, w, mode="valid")
    var_f = convolve2d(fa * fa, w, mode="valid") - mu_f * mu_f
    var_g = convolve2d(ga * ga, w, mode="valid") - mu_g * mu_g
    cov = convolve2d(fa * ga, w, mode="valid") - mu_f * mu_g
    return float(np.mean(_ssim_terms(mu_f, mu_g, var_f, var_g, cov, c1, c2, c3)))


@dataclass(frozen=True)
class SnrSpec:
    """How to measure SNR: against a clean reference, or between windows.

    Windows are half-open ``(start, stop)`` sample index ranges.
    """

    mode: str
    clean: Signal | None = None
    signal_window: tuple | None = None
    noise_window: tuple | None = None

    def __post_init__(self):
        if self.mode == "reference":
            if self.clean is None:
                raise ValueError("reference mode needs a clean signal")
        elif self.mode == "region":
            for name, win in (("signal_window", self.signal_window), ("noise_window", self.noise_window)):
                if win is None or len(win) != 2 or not win[0] < win[1] or win[0] < 0:
                    raise ValueError(f"{name} must be a non-empty (start, stop) range, got {win!r}")
            a0, a1 = self.signal_window
            b0, b1 = self.noise_window
            if a0 < b1 and b0 < a1:
                raise ValueError("signal and noise windows must be disjoint")
        else:
            raise ValueError(f"unknown SNR mode {self.mode!r}")

    @classmethod
    def reference(cls, clean: Signal) -> "SnrSpec":
        return cls(mode="reference", clean=clean)

    @classmethod
    def region(cls, signal_window, noise_window) -> "SnrSpec":
        return cls(
            mode="region",
            signal_window=(int(signal_window[0]), int(signal_window[1])),
            noise_window=(int(noise_window[0]), int(noise_window[1])),
        )


def snr_db(signal: Signal, spec: SnrSpec) -> float:
    """Signal-to-noise ratio in dB per the given spec.

    Reference mode: ``10 log10(sum(clean^2) / sum((signal-clean)^2))``;
    +inf (saturating sentinel) when the signal equals the reference.
    Region mode: ``20 log10(peak|signal window| / std(noise window))``.
    """
    x = signal.samples
    if spec.mode == "reference":
        clean = spec.clean.samples
        if clean.size != x.size:
            raise ValueError(f"reference length {clean.size} != signal length {x.size}")
        err = x - clean
        p_err = float(np.sum(err * err))
        if p_err == 0.0:
            return math.inf
        p_clean = float(np.sum(clean * clean))
        return float(10.0 * np.log10(p_clean / p_err))

    for name, (start, stop) in (("signal", spec.signal_window), ("noise", spec.noise_window)):
        if stop > x.size:
            raise ValueError(f"{name} window [{start}, {stop}) exceeds signal length {x.size}")
    s0, s1 = spec.signal_window
    n0, n1 = spec.noise_window
    peak = float(np.max(np.abs(x[s0:s1])))
    spread = float(np.std(x[n0:n1]))
    if spread == 0.0:
        return math.inf
    return float(20.0 * np.log10(peak / spread))

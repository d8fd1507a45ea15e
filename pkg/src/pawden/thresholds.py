"""Noise estimation, threshold selection rules, and shrinkage operators.

The four classical per-level rules (universal/sqtwolog, SURE/rigrsure,
minimax, heuristic SURE) plus the hard/soft shrinkage operators and the
classic per-level denoising pipeline built on top of the wavelet engine.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import Signal, WaveletFilter, dwt, idwt, make_daubechies_filter

__all__ = [
    "THRESHOLD_KINDS",
    "SHRINKAGE_MODES",
    "ThresholdRule",
    "LevelThreshold",
    "mad_sigma",
    "sqtwolog_threshold",
    "minimax_threshold",
    "sure_threshold",
    "heursure_threshold",
    "hard_threshold",
    "soft_threshold",
    "denoise_classic",
]

THRESHOLD_KINDS = ("sqtwolog", "rigrsure", "minimaxi", "heursure")
SHRINKAGE_MODES = ("hard", "soft")

# MAD of a standard normal sample: Phi^-1(3/4), the conventional 0.6745
MAD_SCALE = 0.6745


@dataclass(frozen=True)
class ThresholdRule:
    """A classical threshold selection rule plus shrinkage mode."""

    kind: str
    shrinkage: str = "soft"

    def __post_init__(self):
        if self.kind not in THRESHOLD_KINDS:
            raise ValueError(f"unknown threshold kind {self.kind!r}, expected one of {THRESHOLD_KINDS}")
        if self.shrinkage not in SHRINKAGE_MODES:
            raise ValueError(f"unknown shrinkage {self.shrinkage!r}, expected one of {SHRINKAGE_MODES}")


@dataclass(frozen=True)
class LevelThreshold:
    """Noise scale and threshold actually applied at one detail level."""

    level: int
    sigma: float
    lam: float

    def __post_init__(self):
        if self.sigma < 0 or self.lam < 0:
            raise ValueError("sigma and lambda must be nonnegative")


def _as_coeffs(coeffs) -> np.ndarray:
    a = np.asarray(coeffs, dtype=np.float64).ravel()
    if a.size == 0:
        raise ValueError("coefficient sequence is empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficient sequence contains NaN or Inf")
    return a


def mad_sigma(coeffs) -> float:
    """Robust noise scale: median(|coeffs|) / 0.6745.

    Even-length medians average the two middle order statistics.
    """
    a = _as_coeffs(coeffs)
    return float(np.median(np.abs(a)) / MAD_SCALE)


def sqtwolog_threshold(sigma: float, n: int) -> float:
    """Universal threshold sigma * sqrt(2 ln n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    return float(sigma * np.sqrt(2.0 * np.log(n)))


def minimax_threshold(sigma: float, n: int) -> float:
    """Fixed-form minimax threshold; zero for short records (n <= 32)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if n <= 32:
        return 0.0
    return float(sigma * (0.3936 + 0.1829 * (np.log(n) / np.log(2))))


def _sure_threshold_normalized(w: np.ndarray) -> float:
    """SURE-minimizing threshold for unit-variance coefficients.

    Candidate thresholds are the sorted squared magnitudes; the risk of
    keeping everything above candidate b is
    ``(n - 2b + cumsum(W)[b] + (n - b) * W[b]) / n``. Ties go to the
    smallest candidate (the least destructive threshold).
    """
    n = w.size
    sq = np.sort(w * w)
    cum = np.cumsum(sq)
    b = np.arange(1, n + 1)
    risks = (n - 2.0 * b + (cum + (n - b) * sq)) / n
    best = int(np.argmin(risks))
    return float(np.sqrt(sq[best]))


def sure_threshold(coeffs, sigma: float) -> float:
    """Threshold minimizing Stein's unbiased risk estimate (rigrsure)."""
    a = _as_coeffs(coeffs)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return sigma * _sure_threshold_normalized(a / sigma)


def heursure_threshold(coeffs, sigma: float) -> float:
    """Heuristic switch between the universal and SURE thresholds.

    Falls back to the universal threshold when the normalized excess energy
    ``(sum(w^2) - n) / n`` is below ``log2(n)^1.5 / sqrt(n)`` (too sparse for
    SURE to be reliable), otherwise takes the smaller of the two rules.
    """
    a = _as_coeffs(coeffs)
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    w = a / sigma
    n = w.size
    universal = sqtwolog_threshold(sigma, n)
    eta = (float(np.sum(w * w)) - n) / n
    crit = np.log2(n) ** 1.5 / np.sqrt(n) if n > 1 else 0.0
    if eta < crit:
        return universal
    return min(universal, sure_threshold(a, sigma))


def hard_threshold(coeffs, t: float) -> np.ndarray:
    """Keep coefficients with |w| > t, zero the rest."""
    if t < 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    a = np.asarray(coeffs, dtype=np.float64)
    return np.where(np.abs(a) > t, a, 0.0)


def soft_threshold(coeffs, t: float) -> np.ndarray:
    """Shrink magnitudes toward zero by t, clipping at zero."""
    if t < 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    a = np.asarray(coeffs, dtype=np.float64)
    return np.sign(a) * np.maximum(np.abs(a) - t, 0.0)


def _select_threshold(rule: ThresholdRule, band: np.ndarray, sigma: float) -> float:
    if sigma == 0.0:
        # a noise-free band: nothing to remove
        return 0.0
    if rule.kind == "sqtwolog":
        return sqtwolog_threshold(sigma, band.size)
    if rule.kind == "minimaxi":
        return minimax_threshold(sigma, band.size)
    if rule.kind == "rigrsure":
        return sure_threshold(band, sigma)
    return heursure_threshold(band, sigma)


def denoise_classic(
    signal: Signal,
    rule: ThresholdRule,
    wavelet: WaveletFilter | None = None,
    levels: int = 6,
    return_thresholds: bool = False,
):
    """Classic per-level wavelet threshold denoising.

    Every detail band gets its own MAD noise estimate and rule-selected
    threshold; the approximation band passes through untouched.

    Returns the denoised signal, plus the per-level thresholds when
    ``return_thresholds`` is set.
    """
    if wavelet is None:
        wavelet = make_daubechies_filter(8)
    decomp = dwt(signal, wavelet, levels)
    shrink = hard_threshold if rule.shrinkage == "hard" else soft_threshold
    new_details = []
    applied = []
    for j, band in enumerate(decomp.details, start=1):
        sigma = mad_sigma(band)
        lam = _select_threshold(rule, band, sigma)
        applied.append(LevelThreshold(level=j, sigma=sigma, lam=lam))
        new_details.append(shrink(band, lam))
    out = idwt(decomp.with_bands(details=new_details), wavelet)
    if return_thresholds:
        return out, applied
    return out

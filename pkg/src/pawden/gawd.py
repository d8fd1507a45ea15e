"""Gradient-adaptive wavelet denoising (gaWD).

The threshold is read off the coarsest analyzed detail band: sort that
band's coefficient magnitudes ascending, take first differences ("gradient
drops"), locate the second largest drop, and use the magnitude on the upper
side of that drop as the threshold T. The finest bands (D1-D3 by default)
are zeroed outright; T is applied as a keep/zero rule to the coarser detail
bands (D4-D6 by default); the approximation band is never touched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import Signal, dwt, filter_from_name, idwt

__all__ = ["GawdConfig", "GawdThresholdTrace", "gawd_threshold", "gawd_denoise"]


@dataclass(frozen=True)
class GawdConfig:
    """Band layout for the gradient-adaptive denoiser.

    ``noise_levels`` are zeroed outright, ``threshold_levels`` receive the
    adaptive threshold extracted from ``source_level``. Level indices count
    detail bands from the finest (1).
    """

    wavelet: str = "db8"
    levels: int = 6
    noise_levels: frozenset = frozenset({1, 2, 3})
    threshold_levels: frozenset = frozenset({4, 5, 6})
    source_level: int = 6

    def __post_init__(self):
        object.__setattr__(self, "noise_levels", frozenset(int(j) for j in self.noise_levels))
        object.__setattr__(self, "threshold_levels", frozenset(int(j) for j in self.threshold_levels))
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        all_indices = self.noise_levels | self.threshold_levels | {self.source_level}
        if any(j < 1 or j > self.levels for j in all_indices):
            raise ValueError(f"band indices {sorted(all_indices)} must lie in [1, {self.levels}]")
        if self.source_level not in self.threshold_levels:
            raise ValueError("source_level must be one of the threshold_levels")
        if self.noise_levels & self.threshold_levels:
            raise ValueError("noise_levels and threshold_levels must be disjoint")


@dataclass(frozen=True)
class GawdThresholdTrace:
    """Every intermediate of the threshold extraction, for auditability.

    On the degenerate path (fewer than 4 coefficients, or all gaps zero) the
    gap indices are None and the threshold is 0.
    """

    sorted_magnitudes: np.ndarray
    gaps: np.ndarray
    largest_gap_index: int | None
    second_largest_gap_index: int | None
    threshold: float
    degenerate: bool

    def __post_init__(self):
        mags = np.asarray(self.sorted_magnitudes, dtype=np.float64)
        mags.setflags(write=False)
        gaps = np.asarray(self.gaps, dtype=np.float64)
        gaps.setflags(write=False)
        object.__setattr__(self, "sorted_magnitudes", mags)
        object.__setattr__(self, "gaps", gaps)


def _argmax_last(values: np.ndarray) -> int:
    # ties resolve to the larger index (higher threshold)
    return int(values.size - 1 - np.argmax(values[::-1]))


def gawd_threshold(coeffs) -> tuple[float, GawdThresholdTrace]:
    """Extract the adaptive threshold from one coefficient band.

    Returns ``(T, trace)``. Degenerate bands (too few coefficients, or all
    magnitudes equal) yield T = 0 so that thresholding passes everything
    through; the trace flags this path.
    """
    a = np.asarray(coeffs, dtype=np.float64).ravel()
    if a.size == 0:
        raise ValueError("coefficient sequence is empty")
    if not np.all(np.isfinite(a)):
        raise ValueError("coefficient sequence contains NaN or Inf")
    mags = np.sort(np.abs(a))
    gaps = np.diff(mags)
    if a.size < 4 or not np.any(gaps > 0):
        trace = GawdThresholdTrace(
            sorted_magnitudes=mags,
            gaps=gaps,
            largest_gap_index=None,
            second_largest_gap_index=None,
            threshold=0.0,
            degenerate=True,
        )
        return 0.0, trace
    largest = _argmax_last(gaps)
    remaining = gaps.copy()
    remaining[largest] = -np.inf
    second = _argmax_last(remaining)
    threshold = float(mags[second + 1])
    trace = GawdThresholdTrace(
        sorted_magnitudes=mags,
        gaps=gaps,
        largest_gap_index=largest,
        second_largest_gap_index=second,
        threshold=threshold,
        degenerate=False,
    )
    return threshold, trace


def gawd_denoise(signal: Signal, config: GawdConfig = GawdConfig()) -> tuple[Signal, GawdThresholdTrace]:
    """Denoise one signal with the gradient-adaptive band strategy.

    Decomposes ``config.levels`` deep, zeroes every band in
    ``config.noise_levels``, extracts T from the ``config.source_level``
    band, and keeps only coefficients with ``|w| >= T`` in every band of
    ``config.threshold_levels``. The approximation band is untouched.
    """
    filt = filter_from_name(config.wavelet)
    decomp = dwt(signal, filt, config.levels)
    details = list(decomp.details)
    threshold, trace = gawd_threshold(details[config.source_level - 1])
    for j in config.noise_levels:
        details[j - 1] = np.zeros_like(details[j - 1])
    for j in config.threshold_levels:
        band = details[j - 1]
        details[j - 1] = np.where(np.abs(band) >= threshold, band, 0.0)
    out = idwt(decomp.with_bands(details=details), filt)
    return out, trace

"""Comparison baseline: Butterworth low-pass IIR filtering.

Design goes through the analog prototype and the bilinear transform with
frequency pre-warping (scipy), internally paired as second-order sections
and flattened to the published b/a form. Filtering is single-pass causal by
default; a zero-phase (forward-backward) option exists for experimentation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .wavelets import Signal

__all__ = ["IirCoefficients", "FilterDesignError", "butterworth_lowpass", "iir_filter"]

# passes a 10 MHz transducer band with margin at the 80 MHz default rate
DEFAULT_CUTOFF_HZ = 15e6


class FilterDesignError(ValueError):
    """Invalid filter design parameters (e.g. cutoff at or above Nyquist)."""


@dataclass(frozen=True)
class IirCoefficients:
    """Difference-equation coefficients with feedback normalized to a[0]=1."""

    feedforward: np.ndarray
    feedback: np.ndarray
    order: int
    cutoff_hz: float
    sample_rate_hz: float

    def __post_init__(self):
        b = np.asarray(self.feedforward, dtype=np.float64)
        a = np.asarray(self.feedback, dtype=np.float64)
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(a))):
            raise ValueError("filter coefficients must be finite")
        if a[0] != 1.0:
            raise ValueError("feedback coefficients must be normalized to a[0] = 1")
        if not 0 < self.cutoff_hz < self.sample_rate_hz / 2:
            raise ValueError("cutoff must lie strictly below Nyquist")
        b.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "feedforward", b)
        object.__setattr__(self, "feedback", a)


def butterworth_lowpass(order: int, cutoff_hz: float, sample_rate_hz: float) -> IirCoefficients:
    """Design a digital Butterworth low-pass filter.

    DC gain is 1 and the magnitude response is 1/sqrt(2) at the cutoff.

    Raises:
        FilterDesignError: non-positive cutoff, or cutoff at/above Nyquist.
    """
    if order < 1:
        raise FilterDesignError(f"order must be >= 1, got {order}")
    nyquist = sample_rate_hz / 2.0
    if not 0 < cutoff_hz < nyquist:
        raise FilterDesignError(
            f"cutoff {cutoff_hz:g} Hz must lie in (0, {nyquist:g}) Hz at "
            f"sample rate {sample_rate_hz:g} Hz"
        )
    sos = sps.butter(order, cutoff_hz, btype="low", output="sos", fs=sample_rate_hz)
    b, a = sps.sos2tf(sos)
    a = a / a[0]
    b = b / a[0] if a[0] != 1.0 else b
    # exact a[0] = 1 regardless of rounding in the flattening
    a[0] = 1.0
    return IirCoefficients(
        feedforward=b,
        feedback=a,
        order=int(order),
        cutoff_hz=float(cutoff_hz),
        sample_rate_hz=float(sample_rate_hz),
    )


def iir_filter(signal: Signal, coeffs: IirCoefficients, zero_phase: bool = False) -> Signal:
    """Apply the difference equation with zero initial conditions.

    ``zero_phase`` runs the filter forward and backward (no phase lag, at
    the cost of doubling the effective order).
    """
    if zero_phase:
        out = sps.filtfilt(coeffs.feedforward, coeffs.feedback, signal.samples)
    else:
        out = sps.lfilter(coeffs.feedforward, coeffs.feedback, signal.samples)
    return signal.with_samples(out)

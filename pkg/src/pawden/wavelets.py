"""Orthogonal 1-D discrete wavelet transform with Daubechies filters.

Implements the Mallat cascade with periodic (circular) boundary handling,
which gives exact perfect reconstruction and exact energy conservation for
orthogonal filter banks. Non power-of-two record lengths are zero padded up
to the next multiple of ``2**levels``; the inverse strips the padding so the
caller always gets back the original length.

Daubechies lowpass taps are generated by spectral factorization of the
binomial product filter, carried out in extended precision (mpmath) and
rounded once to float64, then checked against the orthonormality conditions.
Nothing is copied from a runtime wavelet dependency.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import mpmath
import numpy as np

__all__ = [
    "Signal",
    "WaveletFilter",
    "Decomposition",
    "UnsupportedOrderError",
    "DepthTooDeepError",
    "StructureError",
    "make_daubechies_filter",
    "filter_from_name",
    "max_dwt_levels",
    "dwt",
    "idwt",
]

MAX_DAUBECHIES_ORDER = 20


class UnsupportedOrderError(ValueError):
    """Requested Daubechies order outside the supported range."""


class DepthTooDeepError(ValueError):
    """Signal too short for the requested decomposition depth."""

    def __init__(self, message: str, max_levels: int):
        super().__init__(message)
        self.max_levels = max_levels


class StructureError(ValueError):
    """Decomposition bands or filter do not fit together."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Signal:
    """A sampled real-valued waveform, the unit of all denoising.

    Attributes:
        samples: 1-D float64 array, non-empty, all values finite.
        sample_rate_hz: positive sampling rate.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        samples = np.atleast_1d(np.asarray(self.samples, dtype=np.float64))
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("signal must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal contains NaN or Inf samples")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", _readonly(samples))
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def with_samples(self, samples: np.ndarray) -> "Signal":
        """New signal with the same sample rate."""
        return Signal(samples, self.sample_rate_hz)


@dataclass(frozen=True)
class WaveletFilter:
    """Orthogonal analysis/synthesis filter pair (quadrature mirror).

    ``highpass[k] = (-1)**k * lowpass[L-1-k]``, derived bit-for-bit from the
    lowpass taps.
    """

    name: str
    lowpass: np.ndarray
    highpass: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lowpass", _readonly(self.lowpass))
        object.__setattr__(self, "highpass", _readonly(self.highpass))
        if self.lowpass.size != self.highpass.size or self.lowpass.size % 2:
            raise ValueError("filter taps must come in matched even-length pairs")

    def __len__(self) -> int:
        return self.lowpass.size


@dataclass(frozen=True)
class Decomposition:
    """Multilevel DWT output: one approximation band plus L detail bands.

    ``details[0]`` is the finest band (D1) and ``details[-1]`` the coarsest
    (D``levels``). Band lengths follow the periodized convention:
    ``len(details[j-1]) == padded_length / 2**j``.
    """

    approx: np.ndarray
    details: tuple
    levels: int
    original_length: int
    filter_name: str
    sample_rate_hz: float

    def __post_init__(self):
        object.__setattr__(self, "approx", _readonly(self.approx))
        object.__setattr__(self, "details", tuple(_readonly(d) for d in self.details))
        if len(self.details) != self.levels:
            raise StructureError(
                f"expected {self.levels} detail bands, got {len(self.details)}"
            )
        expected = self.approx.size
        for band in reversed(self.details):
            if band.size != expected:
                raise StructureError(
                    f"detail band of length {band.size} does not match the "
                    f"dyadic ladder (expected {expected})"
                )
            expected *= 2

    @property
    def padded_length(self) -> int:
        return self.approx.size * 2**self.levels

    def energy(self) -> float:
        total = float(np.sum(self.approx**2))
        for band in self.details:
            total += float(np.sum(band**2))
        return total

    def with_bands(self, approx=None, details=None) -> "Decomposition":
        """Copy with replaced coefficient bands (shapes must be preserved)."""
        return Decomposition(
            approx=self.approx if approx is None else approx,
            details=self.details if details is None else tuple(details),
            levels=self.levels,
            original_length=self.original_length,
            filter_name=self.filter_name,
            sample_rate_hz=self.sample_rate_hz,
        )


def _daubechies_lowpass_taps(order: int) -> np.ndarray:
    """Spectral factorization of the Daubechies binomial product filter.

    Returns the extremal-phase (minimum phase) lowpass taps in the standard
    published orientation, normalized so the taps sum to sqrt(2).
    """
    if order == 1:
        r = np.sqrt(2.0) / 2.0
        return np.array([r, r])
    with mpmath.workdps(80):
        zero = mpmath.mpf(0)

        def pmul(a, b):
            out = [zero] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
            return out

        # q(z) = z**(order-1) * P(y(z)) with y = (2 - z - 1/z)/4: the
        # autocorrelation half whose roots pair up as (r, 1/r).
        t = [mpmath.mpf(-1) / 4, mpmath.mpf(1) / 2, mpmath.mpf(-1) / 4]
        q = [zero] * (2 * order - 1)
        tk = [mpmath.mpf(1)]
        for k in range(order):
            c = mpmath.binomial(order - 1 + k, k)
            for i, co in enumerate(tk):
                q[i + order - 1 - k] += c * co
            if k < order - 1:
                tk = pmul(tk, t)
        roots = mpmath.polyroots(list(reversed(q)), maxsteps=200, extraprec=200)
        inside = [r for r in roots if abs(r) < 1]
        if len(inside) != order - 1:
            raise RuntimeError(f"spectral factorization failed for order {order}")
        poly = [mpmath.mpf(1)]
        for r in inside:
            poly = pmul(poly, [-r, mpmath.mpf(1)])
        for _ in range(order):
            poly = pmul(poly, [mpmath.mpf(1), mpmath.mpf(1)])
        scale = mpmath.sqrt(2) / sum(poly)
        taps = [float(mpmath.re(c * scale)) for c in poly]
    # ascending-power order is time reversed relative to the usual tables
    return np.array(taps[::-1])


@functools.lru_cache(maxsize=None)
def make_daubechies_filter(vanishing_moments: int) -> WaveletFilter:
    """Construct the Daubechies filter with the given number of vanishing
    moments (db1 = Haar, dbV has 2V taps).

    Raises:
        UnsupportedOrderError: order outside [1, 20].
    """
    order = vanishing_moments
    if not isinstance(order, (int, np.integer)) or not 1 <= order <= MAX_DAUBECHIES_ORDER:
        raise UnsupportedOrderError(
            f"daubechies order must be an integer in [1, {MAX_DAUBECHIES_ORDER}], got {order!r}"
        )
    lowpass = _daubechies_lowpass_taps(int(order))
    highpass = lowpass[::-1].copy()
    highpass[1::2] = -highpass[1::2]
    return WaveletFilter(name=f"db{int(order)}", lowpass=lowpass, highpass=highpass)


def filter_from_name(name: str) -> WaveletFilter:
    """Resolve an identifier like ``"db8"`` to its filter bank."""
    ident = name.strip().lower()
    if not ident.startswith("db"):
        raise UnsupportedOrderError(f"unknown wavelet family in {name!r} (expected dbN)")
    try:
        order = int(ident[2:])
    except ValueError:
        raise UnsupportedOrderError(f"cannot parse daubechies order from {name!r}") from None
    return make_daubechies_filter(order)


def max_dwt_levels(n_samples: int, filt: WaveletFilter) -> int:
    """Deepest decomposition for which every band keeps at least one full
    filter length of coefficients (after padding)."""
    depth = 0
    while -(-n_samples // 2 ** (depth + 1)) >= len(filt):
        depth += 1
    return depth


def _analyze_level(x: np.ndarray, filt: WaveletFilter):
    """One cascade step: periodic correlation with both filters, then
    downsample by two."""
    wrap = np.concatenate([x, x[: len(filt) - 1]])
    approx = np.correlate(wrap, filt.lowpass, mode="valid")[::2]
    detail = np.correlate(wrap, filt.highpass, mode="valid")[::2]
    return approx, detail


def _synthesize_level(approx: np.ndarray, detail: np.ndarray, filt: WaveletFilter) -> np.ndarray:
    """Adjoint of :func:`_analyze_level`: upsample, filter, wrap the tail."""
    n = 2 * approx.size
    up_a = np.zeros(n)
    up_a[::2] = approx
    up_d = np.zeros(n)
    up_d[::2] = detail
    full = np.convolve(up_a, filt.lowpass) + np.convolve(up_d, filt.highpass)
    out = full[:n].copy()
    out[: full.size - n] += full[n:]
    return out


def dwt(signal: Signal, filt: WaveletFilter, levels: int) -> Decomposition:
    """Multilevel periodized DWT of ``signal``.

    The input is zero padded to the next multiple of ``2**levels``; the
    original length is recorded so :func:`idwt` can strip the padding.

    Raises:
        DepthTooDeepError: requested depth leaves some band shorter than the
            filter; the message states the maximum feasible depth.
    """
    if not isinstance(levels, (int, np.integer)) or levels < 1:
        raise ValueError(f"levels must be a positive integer, got {levels!r}")
    n = len(signal)
    feasible = max_dwt_levels(n, filt)
    if levels > feasible:
        raise DepthTooDeepError(
            f"signal of length {n} supports at most {feasible} level(s) with "
            f"{filt.name} ({len(filt)} taps); requested {levels}",
            max_levels=feasible,
        )
    block = 2**levels
    padded = -(-n // block) * block
    x = signal.samples
    if padded != n:
        x = np.concatenate([x, np.zeros(padded - n)])
    details = []
    approx = x
    for _ in range(levels):
        approx, detail = _analyze_level(approx, filt)
        details.append(detail)
    return Decomposition(
        approx=approx,
        details=tuple(details),
        levels=int(levels),
        original_length=n,
        filter_name=filt.name,
        sample_rate_hz=signal.sample_rate_hz,
    )


def idwt(decomp: Decomposition, filt: WaveletFilter) -> Signal:
    """Exact inverse of :func:`dwt` (padding stripped).

    Raises:
        StructureError: filter does not match the decomposition.
    """
    if filt.name != decomp.filter_name:
        raise StructureError(
            f"decomposition was built with {decomp.filter_name}, got {filt.name}"
        )
    approx = decomp.approx
    for detail in reversed(decomp.details):
        approx = _synthesize_level(approx, detail, filt)
    return Signal(approx[: decomp.original_length], decomp.sample_rate_hz)

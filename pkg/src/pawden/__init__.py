"""Wavelet denoising for photoacoustic A-line signals.

Core pieces: an orthogonal DWT engine with Daubechies filters, the four
classical threshold selection rules, a gradient-adaptive band denoiser, a
Butterworth low-pass baseline, quality metrics, synthetic phantoms, and a
batch comparison front-end (``pawden`` on the command line).
"""

__version__ = "0.1.0"

from .baselines import FilterDesignError, IirCoefficients, butterworth_lowpass, iir_filter
from .gawd import GawdConfig, GawdThresholdTrace, gawd_denoise, gawd_threshold
from .grids import ScanGrid, map_project
from .metrics import SnrSpec, mse, psnr, snr_db, ssim
from .synth import (
    DegenerateInputError,
    PhantomScene,
    add_noise,
    add_noise_grid,
    make_pa_pulse,
    make_scene_grid,
    make_two_layer_scene,
)
from .thresholds import (
    LevelThreshold,
    ThresholdRule,
    denoise_classic,
    hard_threshold,
    heursure_threshold,
    mad_sigma,
    minimax_threshold,
    soft_threshold,
    sqtwolog_threshold,
    sure_threshold,
)
from .wavelets import (
    Decomposition,
    DepthTooDeepError,
    Signal,
    StructureError,
    UnsupportedOrderError,
    WaveletFilter,
    dwt,
    filter_from_name,
    idwt,
    make_daubechies_filter,
    max_dwt_levels,
)

__all__ = [
    "__version__",
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
    "GawdConfig",
    "GawdThresholdTrace",
    "gawd_threshold",
    "gawd_denoise",
    "IirCoefficients",
    "FilterDesignError",
    "butterworth_lowpass",
    "iir_filter",
    "SnrSpec",
    "mse",
    "psnr",
    "ssim",
    "snr_db",
    "PhantomScene",
    "DegenerateInputError",
    "make_pa_pulse",
    "make_two_layer_scene",
    "make_scene_grid",
    "add_noise",
    "add_noise_grid",
    "ScanGrid",
    "map_project",
]

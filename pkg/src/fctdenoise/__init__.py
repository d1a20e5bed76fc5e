"""Denoising FCT-bandlimited grayscale images from full-precision, multi-bit
and dithered single-bit pixels."""

from .acquisition import (
    AcquisitionConfig,
    FullPrecision,
    SampleSet,
    SingleBit,
    StrideError,
    Uniform,
    acquire,
    acquire_full_precision,
    acquire_single_bit,
    acquire_uniform,
    sample_positions,
)
from .imagemodel import BandlimitedImage, bandlimit_image, make_cosine_image, out_of_band_distortion
from .kernel import KernelParams, phi1d, phi2d, trapezoid_response, truncation_radius
from .metrics import SweepReport, fit_loglog_slope, mse, run_sweep
from .reconstruct import (
    CdfModel,
    ReconstructionResult,
    estimate,
    estimate_full_precision,
    estimate_single_bit,
    gaussian_cdf,
    interpolate,
    secant_slope,
)
from .transform import GridSpec, SpectrumGrid, cutoff_index_for, fct_forward, fct_inverse, lowpass_fct

__version__ = "0.1.0"

__all__ = [
    "AcquisitionConfig",
    "BandlimitedImage",
    "CdfModel",
    "FullPrecision",
    "GridSpec",
    "KernelParams",
    "ReconstructionResult",
    "SampleSet",
    "SingleBit",
    "SpectrumGrid",
    "StrideError",
    "SweepReport",
    "Uniform",
    "acquire",
    "acquire_full_precision",
    "acquire_single_bit",
    "acquire_uniform",
    "bandlimit_image",
    "cutoff_index_for",
    "estimate",
    "estimate_full_precision",
    "estimate_single_bit",
    "fct_forward",
    "fct_inverse",
    "fit_loglog_slope",
    "gaussian_cdf",
    "interpolate",
    "lowpass_fct",
    "make_cosine_image",
    "mse",
    "out_of_band_distortion",
    "phi1d",
    "phi2d",
    "run_sweep",
    "sample_positions",
    "secant_slope",
    "trapezoid_response",
    "truncation_radius",
]

"""Kernel interpolation and the full-precision and single-bit estimators."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .acquisition import FullPrecision, SampleSet, SingleBit, Uniform
from .kernel import KernelParams, phi1d, truncation_radius
from .transform import GridSpec, lowpass_fct

__all__ = [
    "CdfModel",
    "ReconstructionResult",
    "gaussian_cdf",
    "secant_slope",
    "tangent_slope",
    "interpolation_matrix",
    "interpolate",
    "estimate_full_precision",
    "estimate_single_bit",
    "estimate",
]


def gaussian_cdf(t, variance: float):
    """``P(X <= t)`` for ``X ~ N(0, variance)``."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return ndtr(np.asarray(t, dtype=float) / math.sqrt(variance))


def secant_slope(variance: float) -> float:
    """Slope of the chord of the Gaussian CDF between -1 and 1."""
    return float(gaussian_cdf(1.0, variance) - gaussian_cdf(-1.0, variance)) / 2.0


def tangent_slope(variance: float) -> float:
    """Density at zero; the tangent alternative to :func:`secant_slope`."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return 1.0 / math.sqrt(2.0 * math.pi * variance)


@dataclass(frozen=True)
class CdfModel:
    """Linearization ``C(t) ~ alpha t + beta`` over ``[-1, 1]``."""

    total_variance: float
    tangent: bool = False

    def __post_init__(self):
        if not self.total_variance > 0:
            raise ValueError(f"total_variance must be positive, got {self.total_variance}")

    @classmethod
    def from_noise(cls, sigma2: float, sigma_d2: float) -> "CdfModel":
        return cls(sigma2 + sigma_d2)

    @property
    def alpha(self) -> float:
        if self.tangent:
            return tangent_slope(self.total_variance)
        return secant_slope(self.total_variance)

    @property
    def beta(self) -> float:
        return 0.5

    def expected_estimate(self, c):
        """Noise-free limit of the single-bit estimate for a constant level ``c``."""
        return (2.0 * gaussian_cdf(c, self.total_variance) - 1.0) / (2.0 * self.alpha)


@dataclass
class ReconstructionResult:
    estimate: np.ndarray
    config: dict = field(default_factory=dict)
    wall_time: float = 0.0
    mse: float | None = None


def interpolation_matrix(n: int, stride: int, origin: int, count: int, params: KernelParams) -> np.ndarray:
    """``A[i, j] = phi((i - (origin + j) stride) / stride)``, zero beyond the truncation radius."""
    i = np.arange(n, dtype=float)[:, None]
    lat = (origin + np.arange(count, dtype=float))[None, :] * stride
    t = (i - lat) / stride
    a = phi1d(t, params)
    a[np.abs(t) > truncation_radius(params)] = 0.0
    return a


def interpolate(values, stride: int, grid: GridSpec, params: KernelParams, origin: int = 0) -> np.ndarray:
    """Evaluate ``sum_m sum_n s[m, n] phi((x - m Ts) / Ts, (y - n Ts) / Ts)`` on the grid.

    ``values[p, q]`` sits at grid indices ``((origin + p) stride, (origin + q) stride)``.
    The separable sum is one column pass and one row pass, ``A S A^T``.
    """
    s = np.asarray(values, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"sample array must be square, got shape {s.shape}")
    if int(stride) != stride or stride < 1:
        raise ValueError(f"stride must be a positive integer, got {stride}")
    a = interpolation_matrix(grid.n, int(stride), origin, s.shape[0], params)
    return a @ s @ a.T


def _check_lattice(samples: SampleSet, grid: GridSpec):
    expected = (grid.n - 1) // samples.stride + 1
    if samples.m_s != expected:
        raise ValueError(f"sample set has {samples.m_s} in-grid sites per axis, grid needs {expected}")
    size = samples.m_s + 2 * samples.guard
    if samples.values.shape != (size, size):
        raise ValueError(f"sample array shape {samples.values.shape} inconsistent with guard {samples.guard}")


def _echo(samples: SampleSet, params: KernelParams, k_c: int, **extra) -> dict:
    return dict(
        N=samples.N,
        quantizer=samples.quantizer.tag,
        sigma2=samples.sigma2,
        sigma_d2=samples.sigma_d2,
        seed=samples.seed,
        stride=samples.stride,
        lam=params.lam,
        k_c=k_c,
        **extra,
    )


def estimate_full_precision(
    samples: SampleSet,
    grid: GridSpec,
    params: KernelParams,
    k_c: int,
    taper_start: int | None = None,
) -> ReconstructionResult:
    """Interpolate real-valued samples, then project onto the band."""
    if not isinstance(samples.quantizer, (FullPrecision, Uniform)):
        raise ValueError("estimate_full_precision needs full-precision or uniform samples")
    _check_lattice(samples, grid)
    t0 = time.perf_counter()
    h = interpolate(samples.values, samples.stride, grid, params, samples.origin)
    g_hat = lowpass_fct(h, grid, k_c, taper_start)
    return ReconstructionResult(g_hat, _echo(samples, params, k_c), time.perf_counter() - t0)


def estimate_single_bit(
    bits: SampleSet,
    grid: GridSpec,
    params: KernelParams,
    k_c: int,
    cdf: CdfModel,
    taper_start: int | None = None,
) -> ReconstructionResult:
    """Non-recursive single-bit estimate.

    Interpolates ``2 b - 1``, projects onto the band and divides by
    ``2 alpha``.  The CDF intercept 1/2 cancels in ``2 b - 1``.
    """
    if not isinstance(bits.quantizer, SingleBit):
        raise ValueError("estimate_single_bit needs single-bit samples")
    if not np.all((bits.values == 0) | (bits.values == 1)):
        raise ValueError("single-bit samples must be 0 or 1")
    if not math.isclose(cdf.total_variance, bits.sigma2 + bits.sigma_d2, rel_tol=1e-12):
        raise ValueError(
            f"CDF variance {cdf.total_variance} does not match acquisition "
            f"sigma2 + sigma_d2 = {bits.sigma2 + bits.sigma_d2}"
        )
    _check_lattice(bits, grid)
    t0 = time.perf_counter()
    signed = 2.0 * bits.values.astype(float) - 1.0
    h = lowpass_fct(interpolate(signed, bits.stride, grid, params, bits.origin), grid, k_c, taper_start)
    g_hat = h / (2.0 * cdf.alpha)
    echo = _echo(bits, params, k_c, alpha=cdf.alpha)
    return ReconstructionResult(g_hat, echo, time.perf_counter() - t0)


def estimate(samples: SampleSet, grid: GridSpec, params: KernelParams, k_c: int, taper_start: int | None = None) -> ReconstructionResult:
    """Dispatch on the sample set's quantizer."""
    if isinstance(samples.quantizer, SingleBit):
        cdf = CdfModel.from_noise(samples.sigma2, samples.sigma_d2)
        return estimate_single_bit(samples, grid, params, k_c, cdf, taper_start)
    return estimate_full_precision(samples, grid, params, k_c, taper_start)

"""Sampling chains: lattice sampling, Gaussian noise, dither and quantization.

Sample sites sit on the fine grid at stride ``k = Ts / dx`` with
``Ts = 1 / (2 f_m N)``.  Every random draw comes from a Philox stream keyed
on ``(seed, stream id)`` whose counter is set from the absolute lattice row,
so the value at a site never depends on generation order or thread count.

Stream ids: 1 = observation noise ``W``, 2 = dither ``W_d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .imagemodel import BandlimitedImage
from .kernel import KernelParams, truncation_radius
from .transform import GridSpec

__all__ = [
    "FullPrecision",
    "SingleBit",
    "Uniform",
    "QuantizerSpec",
    "AcquisitionConfig",
    "SampleSet",
    "StrideError",
    "sample_positions",
    "admissible_factors",
    "guard_count",
    "gaussian_field",
    "acquire",
    "acquire_full_precision",
    "acquire_single_bit",
    "acquire_uniform",
    "STREAM_NOISE",
    "STREAM_DITHER",
]

STREAM_NOISE = 1
STREAM_DITHER = 2

_U64 = 1 << 64
_ROW_BIAS = 1 << 63


@dataclass(frozen=True)
class FullPrecision:
    tag = "full"


@dataclass(frozen=True)
class SingleBit:
    """Comparator at zero; outputs 1 when the noisy dithered value is >= 0."""

    tag = "1bit"


@dataclass(frozen=True)
class Uniform:
    """Midrise quantizer with ``2**bits`` levels over ``[-amplitude, amplitude]``.

    ``amplitude=None`` resolves to ``1 + 4 sqrt(sigma2 + sigma_d2)`` once the
    noise levels are known (see :meth:`resolved`).
    """

    bits: int
    amplitude: float | None = None

    def __post_init__(self):
        if int(self.bits) != self.bits or not 2 <= self.bits <= 16:
            raise ValueError(f"bits must be an integer in 2..16, got {self.bits}")
        if self.amplitude is not None and not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")

    @property
    def tag(self) -> str:
        return f"uniform{self.bits}"

    def resolved(self, sigma2: float, sigma_d2: float) -> "Uniform":
        if self.amplitude is not None:
            return self
        return Uniform(self.bits, 1.0 + 4.0 * math.sqrt(sigma2 + sigma_d2))

    @property
    def step(self) -> float:
        return 2.0 * self.amplitude / (1 << self.bits)

    def levels(self) -> np.ndarray:
        return -self.amplitude + self.step * (np.arange(1 << self.bits) + 0.5)

    def __call__(self, x):
        if self.amplitude is None:
            raise ValueError("quantizer range unresolved; call resolved() first")
        nlev = 1 << self.bits
        i = np.clip(np.floor((np.asarray(x, dtype=float) + self.amplitude) / self.step), 0, nlev - 1)
        return -self.amplitude + self.step * (i + 0.5)


QuantizerSpec = Union[FullPrecision, SingleBit, Uniform]


@dataclass(frozen=True)
class AcquisitionConfig:
    """Acquisition settings.

    ``edge="symmetric"`` (default) also samples a guard band of lattice
    sites beyond the image, taking values from the even extension that the
    cosine model implies; ``edge="available"`` samples inside the grid only.
    """

    N: int
    sigma2: float
    sigma_d2: float = 0.0
    quantizer: QuantizerSpec = field(default_factory=FullPrecision)
    seed: int = 0
    edge: str = "symmetric"

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if self.sigma2 < 0 or self.sigma_d2 < 0:
            raise ValueError("noise variances must be non-negative")
        if isinstance(self.quantizer, SingleBit) and not self.sigma_d2 > 0:
            raise ValueError("single-bit acquisition requires dither (sigma_d2 > 0)")
        if not 0 <= int(self.seed) < _U64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.edge not in ("symmetric", "available"):
            raise ValueError(f"edge must be 'symmetric' or 'available', got {self.edge!r}")
        if isinstance(self.quantizer, Uniform):
            object.__setattr__(self, "quantizer", self.quantizer.resolved(self.sigma2, self.sigma_d2))

    @property
    def total_variance(self) -> float:
        return self.sigma2 + self.sigma_d2


@dataclass
class SampleSet:
    """Samples on the lattice ``(origin + j) * stride`` (grid indices), ``j >= 0``.

    ``m_s`` counts the lattice sites that fall inside the grid; ``values``
    may extend ``-origin`` sites further on each side (guard band).
    """

    values: np.ndarray
    stride: int
    origin: int
    m_s: int
    quantizer: QuantizerSpec
    N: int
    sigma2: float
    sigma_d2: float
    seed: int

    @property
    def guard(self) -> int:
        return -self.origin

    def real_values(self) -> np.ndarray:
        if isinstance(self.quantizer, SingleBit):
            return self.values.astype(float)
        return self.values


class StrideError(ValueError):
    """The requested oversampling factor puts samples between grid points."""

    def __init__(self, message: str, stride: float, nearest_strides: tuple[int, ...], nearest_N: tuple[int, ...]):
        super().__init__(message)
        self.stride = stride
        self.nearest_strides = nearest_strides
        self.nearest_N = nearest_N


def _is_integral(x: float) -> bool:
    return abs(x - round(x)) <= 1e-9 * max(1.0, abs(x))


def admissible_factors(grid: GridSpec, f_m: float, limit: int = 1024) -> list[int]:
    """All ``N <= limit`` whose sample step is a whole number of grid points."""
    q = 1.0 / (2.0 * f_m * grid.dx)
    return [N for N in range(1, limit + 1) if q / N >= 1 - 1e-9 and _is_integral(q / N)]


def sample_positions(grid: GridSpec, f_m: float, N: int) -> tuple[int, np.ndarray]:
    """Grid stride ``k`` and the in-grid lattice indices ``0, k, 2k, ...``."""
    if not f_m > 0:
        raise ValueError(f"f_m must be positive, got {f_m}")
    ts = 1.0 / (2.0 * f_m * N)
    k = ts / grid.dx
    if k < 1 - 1e-9 or not _is_integral(k):
        lo, hi = max(1, math.floor(k)), max(1, math.ceil(k))
        strides = tuple(sorted({lo, hi}))
        ok = admissible_factors(grid, f_m)
        below = [m for m in ok if m < N]
        above = [m for m in ok if m > N]
        nearest = tuple(x for x in (below[-1] if below else None, above[0] if above else None) if x is not None)
        raise StrideError(
            f"N={N} gives Ts/dx = {k:.6g}, not a whole number of grid points; "
            f"nearest strides {list(strides)}, nearest admissible N {list(nearest)}",
            k,
            strides,
            nearest,
        )
    k = int(round(k))
    return k, np.arange(0, grid.n, k)


def guard_count(params: KernelParams) -> int:
    """Lattice sites needed beyond each edge so no kernel tap inside the grid is lost."""
    return int(math.ceil(truncation_radius(params)))


def gaussian_field(seed: int, stream: int, rows: np.ndarray, ncols: int, col0: int = 0) -> np.ndarray:
    """Standard normal draws for lattice rows ``rows`` and columns ``col0 .. col0+ncols-1``.

    Each row uses its own Philox counter block, so rows can be produced in
    any order.  Values along a row depend on ``col0``.
    """
    key = (int(stream) << 64) | (int(seed) % _U64)
    out = np.empty((len(rows), ncols))
    for i, r in enumerate(rows):
        counter = ((int(r) + _ROW_BIAS) % _U64) << 128 | ((int(col0) + _ROW_BIAS) % _U64) << 64
        gen = np.random.Generator(np.random.Philox(key=key, counter=counter))
        out[i] = gen.standard_normal(ncols)
    return out


def _lattice(g: BandlimitedImage, cfg: AcquisitionConfig, params: KernelParams):
    k, pos = sample_positions(g.grid, g.f_m, cfg.N)
    m_s = len(pos)
    guard = guard_count(params) if cfg.edge == "symmetric" else 0
    j = np.arange(-guard, m_s + guard)
    clean = g.at_indices(j * k, j * k)
    return k, m_s, guard, j, clean


def _noisy(cfg: AcquisitionConfig, j: np.ndarray, clean: np.ndarray, dither: bool) -> np.ndarray:
    x = clean
    if cfg.sigma2 > 0:
        x = x + math.sqrt(cfg.sigma2) * gaussian_field(cfg.seed, STREAM_NOISE, j, len(j), int(j[0]))
    if dither and cfg.sigma_d2 > 0:
        x = x + math.sqrt(cfg.sigma_d2) * gaussian_field(cfg.seed, STREAM_DITHER, j, len(j), int(j[0]))
    return x


def acquire_full_precision(g: BandlimitedImage, cfg: AcquisitionConfig, params: KernelParams = KernelParams()) -> SampleSet:
    """``i[m, n] = g(m Ts, n Ts) + W``; no dither."""
    if not isinstance(cfg.quantizer, FullPrecision):
        raise ValueError("acquire_full_precision needs a FullPrecision quantizer")
    k, m_s, guard, j, clean = _lattice(g, cfg, params)
    vals = _noisy(cfg, j, clean, dither=False)
    return SampleSet(vals, k, -guard, m_s, cfg.quantizer, cfg.N, cfg.sigma2, cfg.sigma_d2, cfg.seed)


def acquire_single_bit(g: BandlimitedImage, cfg: AcquisitionConfig, params: KernelParams = KernelParams()) -> SampleSet:
    """``b[m, n] = 1`` if ``g + W + W_d >= 0`` else 0."""
    if not isinstance(cfg.quantizer, SingleBit):
        raise ValueError("acquire_single_bit needs a SingleBit quantizer")
    if not cfg.sigma_d2 > 0:
        raise ValueError("single-bit acquisition requires dither (sigma_d2 > 0)")
    k, m_s, guard, j, clean = _lattice(g, cfg, params)
    bits = (_noisy(cfg, j, clean, dither=True) >= 0.0).astype(np.uint8)
    return SampleSet(bits, k, -guard, m_s, cfg.quantizer, cfg.N, cfg.sigma2, cfg.sigma_d2, cfg.seed)


def acquire_uniform(g: BandlimitedImage, cfg: AcquisitionConfig, params: KernelParams = KernelParams()) -> SampleSet:
    """Dithered midrise quantization of ``g + W + W_d``."""
    q = cfg.quantizer
    if not isinstance(q, Uniform):
        raise ValueError("acquire_uniform needs a Uniform quantizer")
    k, m_s, guard, j, clean = _lattice(g, cfg, params)
    vals = q(_noisy(cfg, j, clean, dither=True))
    return SampleSet(vals, k, -guard, m_s, q, cfg.N, cfg.sigma2, cfg.sigma_d2, cfg.seed)


def acquire(g: BandlimitedImage, cfg: AcquisitionConfig, params: KernelParams = KernelParams()) -> SampleSet:
    if isinstance(cfg.quantizer, SingleBit):
        return acquire_single_bit(g, cfg, params)
    if isinstance(cfg.quantizer, Uniform):
        return acquire_uniform(g, cfg, params)
    return acquire_full_precision(g, cfg, params)

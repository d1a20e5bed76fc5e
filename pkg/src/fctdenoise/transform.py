"""Separable cosine transforms on a uniform grid and FCT-domain low-pass masks.

The continuous Fourier cosine transform is represented on the grid by the
orthonormal type-II DCT, which implies even (half-sample symmetric)
extension of the image across every edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft

__all__ = [
    "GridSpec",
    "SpectrumGrid",
    "fct_forward",
    "fct_inverse",
    "lowpass_fct",
    "band_mask",
    "cutoff_index_for",
    "minimal_cutoff_index",
    "DEFAULT_MARGIN_PER_LAMBDA",
]

# cutoff_index_for(4, GridSpec.reference(), lam=2) == 72 with margin 0.86 * lam = 1.72
DEFAULT_MARGIN_PER_LAMBDA = 0.86


@dataclass(frozen=True)
class GridSpec:
    """Square evaluation grid: ``n`` points per axis starting at ``x0``, step ``dx``."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def frequency_resolution(self) -> float:
        """Cycles per unit between neighbouring cosine basis indices."""
        return 1.0 / (2.0 * self.length)

    def coords(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def index_of(self, x: float) -> int:
        """Index of the grid point nearest to ``x``."""
        return int(np.clip(round((x - self.x0) / self.dx), 0, self.n - 1))

    @classmethod
    def reference(cls) -> "GridSpec":
        """The 2048-point grid running from -2.5575 to 2.56 in steps of 0.0025."""
        return cls(x0=-2.5575, dx=0.0025, n=2048)


@dataclass(frozen=True)
class SpectrumGrid:
    coefficients: np.ndarray
    grid: GridSpec


def _check_square(arr: np.ndarray, n: int, what: str):
    if arr.ndim != 2 or arr.shape != (n, n):
        raise ValueError(f"{what} has shape {arr.shape}, expected ({n}, {n})")


def fct_forward(image, grid: GridSpec) -> SpectrumGrid:
    img = np.asarray(image, dtype=float)
    _check_square(img, grid.n, "image")
    return SpectrumGrid(fft.dctn(img, type=2, norm="ortho"), grid)


def fct_inverse(spectrum: SpectrumGrid) -> np.ndarray:
    coeffs = np.asarray(spectrum.coefficients, dtype=float)
    _check_square(coeffs, spectrum.grid.n, "spectrum")
    return fft.idctn(coeffs, type=2, norm="ortho")


def band_mask(n: int, cutoff_index: int, taper_start: int | None = None) -> np.ndarray:
    """Per-axis gain over cosine indices ``0..n-1``.

    Sharp (default): 1 below ``cutoff_index``, 0 from it on.  With
    ``taper_start`` the gain is 1 up to ``taper_start`` and then descends
    linearly, reaching 0 at ``cutoff_index``.
    """
    if not 1 <= cutoff_index <= n:
        raise ValueError(f"cutoff_index must be in [1, {n}], got {cutoff_index}")
    k = np.arange(n, dtype=float)
    if taper_start is None:
        return (k < cutoff_index).astype(float)
    if not 0 <= taper_start < cutoff_index:
        raise ValueError("taper_start must lie in [0, cutoff_index)")
    width = cutoff_index - taper_start
    return np.clip((cutoff_index - k) / width, 0.0, 1.0)


def lowpass_fct(image, grid: GridSpec, cutoff_index: int, taper_start: int | None = None):
    """Zero every cosine coefficient whose row or column index is ``>= cutoff_index``.

    The sharp mask is an orthogonal projection (idempotent and self-adjoint).
    Passing ``taper_start`` applies a separable linear taper instead, which is
    neither.
    """
    img = np.asarray(image, dtype=float)
    _check_square(img, grid.n, "image")
    w = band_mask(grid.n, cutoff_index, taper_start)
    coeffs = fft.dctn(img, type=2, norm="ortho")
    if taper_start is None:
        coeffs[cutoff_index:, :] = 0.0
        coeffs[:, cutoff_index:] = 0.0
    else:
        coeffs *= np.outer(w, w)
    return fft.idctn(coeffs, type=2, norm="ortho")


def minimal_cutoff_index(f_m: float, grid: GridSpec) -> int:
    """Cutoff with no allowance for the kernel taper."""
    return cutoff_index_for(f_m, grid, margin=1.0)


def cutoff_index_for(f_m: float, grid: GridSpec, lam: float = 2.0, margin: float | None = None) -> int:
    """Number of retained cosine indices per axis for content up to ``f_m``.

    ``k_c = ceil(2 L f_m margin) + 1``.  The default margin,
    ``DEFAULT_MARGIN_PER_LAMBDA * lam``, is a calibrated constant: it gives
    72 coefficients for ``f_m = 4`` on the 5.12-unit grid at ``lam = 2``.
    """
    if not f_m > 0:
        raise ValueError(f"f_m must be positive, got {f_m}")
    if margin is None:
        margin = DEFAULT_MARGIN_PER_LAMBDA * lam
    x = 2.0 * grid.length * f_m * margin
    k_c = math.ceil(x - 1e-9 * max(1.0, x)) + 1
    if k_c > grid.n:
        raise ValueError(
            f"f_m={f_m} needs {k_c} cosine indices but the grid only has {grid.n}"
        )
    return k_c

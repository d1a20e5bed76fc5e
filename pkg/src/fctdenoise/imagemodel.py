"""Bounded, FCT-bandlimited ground-truth images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .transform import GridSpec, cutoff_index_for, lowpass_fct

__all__ = [
    "BandlimitedImage",
    "make_cosine_image",
    "bandlimit_image",
    "scale_gray",
    "out_of_band_distortion",
    "reflect_index",
]

ZAKAI_TOL = 1e-9


@dataclass(frozen=True)
class BandlimitedImage:
    """In-band image on ``grid``.

    ``pixels`` is bounded by 1 in magnitude and is left unchanged by
    ``lowpass_fct`` at ``k_c``.
    """

    pixels: np.ndarray
    grid: GridSpec
    f_m: float
    k_c: int

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=float)
        if px.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"pixels shape {px.shape} does not match grid n={self.grid.n}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def omega_m(self) -> float:
        return 2.0 * math.pi * self.f_m

    def check(self, tol: float = ZAKAI_TOL) -> None:
        """Raise if boundedness or in-band invariance is violated."""
        peak = np.max(np.abs(self.pixels))
        if peak > 1.0 + 1e-12:
            raise ValueError(f"image exceeds unit magnitude (max |g| = {peak})")
        resid = np.max(np.abs(lowpass_fct(self.pixels, self.grid, self.k_c) - self.pixels))
        if resid > tol:
            raise ValueError(f"image is not in band at k_c={self.k_c} (residual {resid:.3g})")

    def at_indices(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Pixel values at integer grid indices, any of which may lie off the grid.

        Off-grid indices are folded back through the half-sample even
        extension the cosine transform assumes (period ``2 n``).
        """
        n = self.grid.n
        return self.pixels[np.ix_(reflect_index(rows, n), reflect_index(cols, n))]


def reflect_index(idx, n: int) -> np.ndarray:
    """Map arbitrary integer indices onto ``0..n-1`` by half-sample even reflection."""
    i = np.mod(np.asarray(idx, dtype=np.int64), 2 * n)
    return np.where(i >= n, 2 * n - 1 - i, i)


def _bandlimit(v: np.ndarray, grid: GridSpec, k_c: int) -> np.ndarray:
    out = lowpass_fct(v, grid, k_c)
    peak = np.max(np.abs(out))
    if peak > 1.0:
        # rescale rather than clip: clipping would put energy back out of band
        out = out / peak
    return out


def make_cosine_image(f_m: float, grid: GridSpec, lam: float = 2.0, k_c: int | None = None) -> BandlimitedImage:
    """Separable cosine ``cos(2 pi f_m x) cos(2 pi f_m y)`` restricted to the band.

    When ``2 L f_m`` is an even integer and the grid sits symmetrically
    about zero with a half-step offset the cosine is itself a cosine-basis
    function and comes back untouched.  Otherwise its even extension has
    slope kinks at the edges; those leak out of band, so the in-band
    projection is returned (rescaled if the projection overshoots 1).
    """
    if k_c is None:
        k_c = cutoff_index_for(f_m, grid, lam)
    c = np.cos(2.0 * math.pi * f_m * grid.coords())
    raw = np.outer(c, c)
    return BandlimitedImage(_bandlimit(raw, grid, k_c), grid, f_m, k_c)


def scale_gray(raw) -> np.ndarray:
    """Map 8-bit gray levels ``[0, 255]`` affinely onto ``[-1, 1]``."""
    return np.asarray(raw, dtype=float) / 127.5 - 1.0


def bandlimit_image(raw, grid: GridSpec, f_m: float, lam: float = 2.0, k_c: int | None = None) -> BandlimitedImage:
    """Band-limit a grayscale image given in ``[0, 255]``.

    The image is mapped to ``[-1, 1]``, projected onto the band and divided
    by its peak magnitude if the projection overshoots 1.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (grid.n, grid.n):
        raise ValueError(f"image shape {raw.shape} does not match grid n={grid.n}")
    if k_c is None:
        k_c = cutoff_index_for(f_m, grid, lam)
    v = scale_gray(raw)
    return BandlimitedImage(_bandlimit(v, grid, k_c), grid, f_m, k_c)


def out_of_band_distortion(raw_scaled, banded: BandlimitedImage) -> float:
    """Mean squared difference between a scaled image and its band-limited version."""
    raw_scaled = np.asarray(raw_scaled, dtype=float)
    if raw_scaled.shape != banded.pixels.shape:
        raise ValueError(f"shape mismatch {raw_scaled.shape} vs {banded.pixels.shape}")
    return float(np.mean((raw_scaled - banded.pixels) ** 2))

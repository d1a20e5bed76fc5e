# # A grayscale image through the single-bit chain
#
# Pass a 512x512 8-bit PGM as the first argument, or the script draws its
# own test pattern.

# ## Imports

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fctdenoise import (
    AcquisitionConfig,
    CdfModel,
    GridSpec,
    KernelParams,
    SingleBit,
    acquire,
    bandlimit_image,
    estimate_single_bit,
    mse,
    out_of_band_distortion,
)
from fctdenoise.fileio import read_pgm
from fctdenoise.imagemodel import scale_gray

# ## Load or draw the image

grid = GridSpec(-255 * 0.005, 0.005, 512)
if len(sys.argv) > 1:
    raw = read_pgm(sys.argv[1])
else:
    x = grid.coords()
    r = np.hypot(x[:, None] + 0.3, x[None, :] - 0.2)
    raw = np.where(r < 0.6, 220, 40) + 20 * np.sin(6 * x)[None, :]
    raw = np.clip(raw, 0, 255).astype(np.uint8)

# ## Band-limit it
#
# What the low-pass removes is lost before any sampling happens.

image = bandlimit_image(raw, grid, f_m=2.0)
d_out = out_of_band_distortion(scale_gray(raw), image)
print(f"cutoff index {image.k_c}, out-of-band distortion {d_out:.4f}")

# ## One bit per sample at increasing oversampling

p = KernelParams(2.0, 1e-4)
cdf = CdfModel.from_noise(0.1, 2.9)
fig, axes = plt.subplots(1, 4, figsize=(14, 3.8))
axes[0].imshow(image.pixels, cmap="gray", vmin=-1, vmax=1)
axes[0].set_title("band-limited")
for ax, N in zip(axes[1:], (2, 10, 25)):
    bits = acquire(image, AcquisitionConfig(N, 0.1, 2.9, SingleBit(), seed=1), p)
    est = estimate_single_bit(bits, grid, p, image.k_c, cdf).estimate
    ax.imshow(est, cmap="gray", vmin=-1, vmax=1)
    ax.set_title(f"N={N}, MSE {mse(est, image):.4f}")
for ax in axes:
    ax.axis("off")
fig.tight_layout()
fig.savefig("grayscale.png", dpi=110)

# # Distortion against oversampling
#
# Every quantizer, from one bit to full precision, loses distortion at the
# same rate as N grows; only the constant in front differs.

# ## Imports

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fctdenoise import FullPrecision, GridSpec, KernelParams, SingleBit, Uniform, make_cosine_image, run_sweep

# ## The test image
#
# A separable cosine at 2 cycles per unit on a 512-point grid.

grid = GridSpec(-255 * 0.005, 0.005, 512)
image = make_cosine_image(2.0, grid)
print("cutoff index", image.k_c)

# ## Sweep
#
# Five seeds per cell.  A looser truncation keeps this quick.

quantizers = [SingleBit(), Uniform(2), Uniform(4), FullPrecision()]
report = run_sweep(
    image, [2, 5, 10, 25], quantizers, sigma2=0.1, sigma_d2=2.9, seeds=5,
    params=KernelParams(2.0, 1e-4), image_id="cosine", threads=4,
)
print(report.to_csv())

# ## Log-log plot

fig, ax = plt.subplots(figsize=(5, 4))
for tag, (slope, _, _) in sorted(report.slopes.items()):
    n, d = np.array(report.series(tag)).T
    ax.loglog(n, d, "o-", label=f"{tag} (slope {slope:.2f})")
ax.set_xlabel("oversampling factor N")
ax.set_ylabel("MSE")
ax.legend()
fig.tight_layout()
fig.savefig("sweep.png", dpi=120)

# ## The single-bit penalty is a constant factor

for n, g in report.gap.items():
    print(f"N={n}: D_1bit / D_full = {10**g:.1f}")

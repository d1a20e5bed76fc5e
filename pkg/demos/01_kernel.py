# # The interpolation kernel
#
# The kernel is a product of two sines over t^2.  Its cosine transform is a
# trapezoid: flat up to pi, then a linear ramp of width lambda - 1.

# ## Imports

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fctdenoise import KernelParams, phi1d, trapezoid_response, truncation_radius

# ## The kernel for a few steepness factors

t = np.linspace(-8, 8, 2001)
w = np.linspace(0, 2 * np.pi, 1000)
fig, (ax_t, ax_w) = plt.subplots(1, 2, figsize=(10, 3.5))
for lam in (1.5, 2.0, 3.0):
    p = KernelParams(lam)
    ax_t.plot(t, phi1d(t, p), label=f"lambda={lam}")
    ax_w.plot(w, trapezoid_response(w, p), label=f"lambda={lam}")
ax_t.set_xlabel("t (sample periods)")
ax_w.set_xlabel("omega (rad per sample)")
ax_t.legend()
fig.tight_layout()
fig.savefig("kernel.png", dpi=120)

# ## Interpolation weights sum to one
#
# Shifted copies of the kernel on the integers add up to 1 at any offset.

p = KernelParams(2.0)
m = np.arange(-5000, 5001)
for x in (0.0, 0.25, 0.5):
    print(f"x={x}: sum of weights = {phi1d(x - m, p).sum():.9f}")

# ## Where the tail is cut
#
# The envelope 1/(pi a t^2) drops below epsilon at the truncation radius.

for eps in (1e-4, 1e-6):
    print(f"epsilon={eps:g}: radius {truncation_radius(KernelParams(2.0, eps)):.1f} samples")

"""Tapered sinc kernel and its trapezoidal frequency response.

The kernel is the inverse cosine transform of a low-pass response that is
flat on ``|w| <= pi`` and falls linearly to zero at ``|w| = pi + 2a`` with
``a = (lam - 1) / 2``.  In closed form::

    phi(t) = sin((pi + a) t) sin(a t) / (pi a t**2),    phi(0) = 1 + a / pi

It decays as ``1 / t**2`` and is therefore absolutely summable, unlike the
plain sinc.  Integer shifts of it sum to one (partition of unity) as long as
the stopband edge ``pi + 2a`` stays below ``2 pi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KernelParams",
    "phi1d",
    "phi2d",
    "trapezoid_response",
    "truncation_radius",
]

DEFAULT_TRUNCATION_EPSILON = 1e-6

# |t| below this uses the Taylor expansion around the origin
_TAYLOR_CUTOFF = 1e-8


@dataclass(frozen=True)
class KernelParams:
    """Kernel shape.

    Parameters
    ----------
    lam : float
        Steepness factor, ``1 < lam < 1 + pi``.
    truncation_epsilon : float
        Tail bound used when the kernel is evaluated on a finite support,
        in ``(0, 1e-3]``.
    """

    lam: float = 2.0
    truncation_epsilon: float = DEFAULT_TRUNCATION_EPSILON
    a: float = field(init=False, repr=False)

    def __post_init__(self):
        lam = float(self.lam)
        eps = float(self.truncation_epsilon)
        if not (1.0 < lam < 1.0 + math.pi):
            raise ValueError(f"lam must satisfy 1 < lam < 1 + pi, got {lam}")
        if not (0.0 < eps <= 1e-3):
            raise ValueError(f"truncation_epsilon must be in (0, 1e-3], got {eps}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "truncation_epsilon", eps)
        object.__setattr__(self, "a", (lam - 1.0) / 2.0)


def phi1d(t, params: KernelParams):
    """Evaluate the 1-D kernel at normalized offsets ``t`` (scalar or array)."""
    a = params.a
    t_arr = np.asarray(t, dtype=float)
    out = np.empty_like(t_arr)
    small = np.abs(t_arr) < _TAYLOR_CUTOFF
    big = ~small

    tb = t_arr[big]
    out[big] = np.sin((math.pi + a) * tb) * np.sin(a * tb) / (math.pi * a * tb * tb)

    # phi(t) = (cos(pi t) - cos((pi + 2a) t)) / (2 pi a t^2), expanded to t^2
    c0 = 1.0 + a / math.pi
    c2 = (math.pi**4 - (math.pi + 2.0 * a) ** 4) / (48.0 * math.pi * a)
    ts = t_arr[small]
    out[small] = c0 + c2 * ts * ts

    if np.ndim(t) == 0:
        return float(out)
    return out


def phi2d(x, y, params: KernelParams):
    """Separable 2-D kernel ``phi1d(x) * phi1d(y)``."""
    return phi1d(x, params) * phi1d(y, params)


def trapezoid_response(omega, params: KernelParams):
    """Frequency response of :func:`phi1d` at normalized angular frequency."""
    a = params.a
    w = np.abs(np.asarray(omega, dtype=float))
    gain = np.clip((math.pi + 2.0 * a - w) / (2.0 * a), 0.0, 1.0)
    if np.ndim(omega) == 0:
        return float(gain)
    return gain


def truncation_radius(params: KernelParams) -> float:
    """Smallest ``T`` with ``1 / (pi a t**2) <= eps`` for every ``|t| >= T``."""
    return math.sqrt(1.0 / (math.pi * params.a * params.truncation_epsilon))

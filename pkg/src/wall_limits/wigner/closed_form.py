"""Closed-form Wigner function of a Robin state on the half-line.

For psi = sin(kx + phi) on x > 0,

    rho(x, p) = sin(2(p/hbar - k)x) / (p/hbar - k) + sin(2(p/hbar + k)x) / (p/hbar + k)
                + 2 cos(2kx - delta) sin(2xp/hbar) / (p/hbar),   delta = pi - 2 phi,

which is 2 hbar times the Wigner transform computed by
:func:`wall_limits.wigner.quadrature.wigner_transform`.
"""
import math

import numpy as np

from ..constants import DEFAULT_CONSTANTS

__all__ = ["halfline_normalization", "sinc2", "rho_halfline_robin", "robin_delta"]

SERIES_SWITCH = 1e-4


def halfline_normalization(consts=DEFAULT_CONSTANTS):
    """Factor mapping the Wigner transform of sin(kx + phi) onto the closed form."""
    return 2.0 * consts.hbar


def sinc2(a, x):
    """sin(2 a x) / a, continued to 2x at a = 0 (series below |a| < 1e-4)."""
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    small = np.abs(a) < SERIES_SWITCH
    safe = np.where(small, 1.0, a)
    t = 2.0 * x
    ser = t * (1.0 - (t * a) ** 2 / 6.0 + (t * a) ** 4 / 120.0)
    out = np.where(small, ser, np.sin(2.0 * safe * x) / safe)
    return out if out.ndim else float(out)


def robin_delta(phi):
    return math.pi - 2.0 * phi


def rho_halfline_robin(k, phi, pt, consts=DEFAULT_CONSTANTS):
    """Closed-form half-line Wigner function; ``pt.x``, ``pt.p`` may be arrays."""
    x = np.asarray(pt.x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("the half-line form needs x > 0")
    P = np.asarray(pt.p, dtype=float) / consts.hbar
    delta = robin_delta(phi)
    out = sinc2(P - k, x) + sinc2(P + k, x) + 2.0 * np.cos(2.0 * k * x - delta) * sinc2(P, x)
    return out if np.ndim(out) else float(out)

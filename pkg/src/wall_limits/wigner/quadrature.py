"""Adaptive Gauss-Kronrod quadrature and the Wigner transform.

The integrator is vectorized across panels: each refinement pass
evaluates the integrand once on the nodes of every unconverged panel,
which keeps special-function calls batched.
"""
import math

import numpy as np

from ..constants import DEFAULT_CONSTANTS

__all__ = ["QuadratureError", "gk15", "wigner_transform", "wigner_grid"]

# Kronrod 15-point nodes/weights with the embedded 7-point Gauss rule.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate((-_XK[:-1], _XK[::-1]))
_WK15 = np.concatenate((_WK[:-1], _WK[::-1]))
_WG7 = np.zeros(15)
_WG7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate((_WG[:-1], _WG[::-1]))


class QuadratureError(ArithmeticError):
    pass


def gk15(f, edges, abs_tol=1e-10, rel_tol=0.0, max_panels=200000):
    """Integrate ``f`` over the panels delimited by ``edges``.

    ``f`` maps an array of abscissae to an array of the same leading shape
    (extra trailing axes are integrated independently).  Panels whose
    Kronrod-minus-Gauss estimate is above their share of the tolerance are
    bisected; ``max_panels`` caps the total number of panels evaluated.  Returns ``(value, error_estimate)``.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    total_len = float(edges[-1] - edges[0])
    if total_len <= 0:
        z = f(np.array([edges[0]]))
        return np.zeros(np.shape(z)[1:], dtype=np.result_type(z, float)), 0.0
    done = None
    err_done = 0.0
    used = a.size
    while a.size:
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
        y = np.asarray(f(x))
        tail = y.shape[1:]
        y = y.reshape((a.size, 15) + tail)
        wshape = (1, 15) + (1,) * len(tail)
        hs = half.reshape((-1,) + (1,) * len(tail))
        k = hs * np.sum(y * _WK15.reshape(wshape), axis=1)
        g = hs * np.sum(y * _WG7.reshape(wshape), axis=1)
        err = np.abs(k - g)
        if err.ndim > 1:
            err = err.reshape(a.size, -1).max(axis=1)
        if done is None:
            done = np.zeros(tail, dtype=k.dtype)
        budget = max(abs_tol, rel_tol * float(np.max(np.abs(done)) if np.size(done) else 0.0))
        ok = err <= budget * (b - a) / total_len
        done = done + np.sum(k[ok], axis=0)
        err_done += float(np.sum(err[ok]))
        bad = ~ok
        if not bad.any():
            break
        used += 2 * int(bad.sum())
        if used > max_panels:
            raise QuadratureError("adaptive quadrature exceeded its panel budget")
        a, b, m = a[bad], b[bad], mid[bad]
        a, b = np.concatenate((a, m)), np.concatenate((m, b))
    return done, err_done


def _panels(lo, hi, max_len):
    n = max(1, int(math.ceil((hi - lo) / max_len)))
    return np.linspace(lo, hi, n + 1)


def wigner_transform(psi_L, psi_R, pt, consts=DEFAULT_CONSTANTS, support=(0.0, math.inf),
                     k_scale=1.0, abs_tol=1e-10):
    """Integral over y of exp(i y p) psi_L(x + hbar y/2) conj(psi_R(x - hbar y/2)).

    ``support = (s0, s1)`` bounds where both wave functions are non-zero
    (or negligible outside), so the y-range is finite:
    |y| <= 2 min(x - s0, s1 - x) / hbar.  ``k_scale`` is the largest
    wavenumber present; panels are kept shorter than pi / (4|p|/hbar + 4k).
    ``pt.p`` may be an array of momenta sharing the same x.
    """
    hbar = consts.hbar
    x = pt.x
    s0, s1 = support
    reach = min(x - s0, s1 - x)
    if not math.isfinite(reach):
        raise ValueError("the support must be bounded on at least one side of x")
    p = np.atleast_1d(np.asarray(pt.p, dtype=float))
    if reach <= 0:
        out = np.zeros(p.shape, complex)
        return complex(out[0]) if np.ndim(pt.p) == 0 else out
    ymax = 2.0 * reach / hbar
    pm = float(np.max(np.abs(p)))
    edges = _panels(-ymax, ymax, math.pi / (4.0 * pm / hbar + 4.0 * k_scale))

    def integrand(y):
        left = np.asarray(psi_L(x + 0.5 * hbar * y))
        right = np.conj(np.asarray(psi_R(x - 0.5 * hbar * y)))
        return (left * right)[:, None] * np.exp(1j * np.outer(y, p))

    val, _ = gk15(integrand, edges, abs_tol=abs_tol)
    return complex(val[0]) if np.ndim(pt.p) == 0 else val


def wigner_grid(psi_L, psi_R, xs, ps, consts=DEFAULT_CONSTANTS, support=(0.0, math.inf),
                k_scale=1.0, abs_tol=1e-10):
    """Wigner transform on the lattice ``xs`` by ``ps`` as a PhaseSpaceField."""
    from .types import PhaseSpaceField

    xs = np.asarray(xs, float)
    ps = np.asarray(ps, float)
    vals = np.empty((xs.size, ps.size), complex)
    for i, x in enumerate(xs):
        vals[i] = wigner_transform(psi_L, psi_R, _ArrayPoint(x, ps), consts, support, k_scale, abs_tol)
    return PhaseSpaceField(xs, ps, vals, "quadrature")


class _ArrayPoint:
    # a PhaseSpacePoint whose p is a whole row of momenta
    __slots__ = ("x", "p")

    def __init__(self, x, p):
        self.x, self.p = x, p

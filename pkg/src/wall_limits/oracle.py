"""Brute-force Schroedinger solutions with the Numerov method.

No special functions are used here, so these results serve as an
independent check on the closed forms in :mod:`seba` and :mod:`morse`.
The equation is psi'' = f psi with f = (2m / hbar^2) (V - E).
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .constants import DEFAULT_CONSTANTS
from .kernels import numerov_march

__all__ = [
    "PotentialSampler",
    "ShootingResult",
    "WindowTooShortError",
    "NoSignChangeError",
    "MultipleRootsWarning",
    "integrate_numerov",
    "extract_phase",
    "shoot_bound_state",
    "matching_determinant",
    "morse_sampler",
    "seba_sampler",
    "free_sampler",
]


class WindowTooShortError(ValueError):
    pass


class NoSignChangeError(ValueError):
    pass


class MultipleRootsWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class PotentialSampler:
    """A potential on [x_min, x_max].

    ``breakpoints`` mark jumps of V.  When given, ``pieces`` holds one
    smooth callable per segment; each may be evaluated slightly beyond its
    segment (one step), which the junction treatment needs.
    """

    func: Callable
    x_min: float
    x_max: float
    recommended_step: float
    breakpoints: Sequence[float] = ()
    pieces: Optional[Sequence[Callable]] = None

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError("need x_max > x_min")
        if not self.recommended_step > 0:
            raise ValueError("recommended_step must be positive")
        bps = list(self.breakpoints)
        if bps != sorted(bps) or any(not (self.x_min < b < self.x_max) for b in bps):
            raise ValueError("breakpoints must be increasing and inside the domain")
        if self.pieces is not None and len(self.pieces) != len(bps) + 1:
            raise ValueError("need one piece per segment")

    def segments(self):
        edges = [self.x_min, *self.breakpoints, self.x_max]
        pieces = self.pieces if self.pieces is not None else [self.func] * (len(edges) - 1)
        return list(zip(edges[:-1], edges[1:], pieces))

    def __call__(self, x):
        return self.func(x)


@dataclass
class ShootingResult:
    grid: np.ndarray
    psi: np.ndarray
    energy: float
    diagnostics: dict = field(default_factory=dict)
    potential: Optional[np.ndarray] = None

    def derivative(self):
        """psi' on the grid (second order; fourth order at segment junctions)."""
        d = np.gradient(self.psi, self.grid, edge_order=2)
        for i, v in self.diagnostics.get("junction_slopes", {}).items():
            d[int(i)] = v
        return d


def _f(piece, x, E, consts):
    return 2.0 * consts.mass / consts.hbar ** 2 * (np.asarray(piece(x), dtype=float) - E)


def _slope(psi_m, psi_0, psi_p, f_m, f_p, h):
    # fourth-order derivative at the centre node from Numerov neighbours
    d = h * h / 6.0
    return ((1.0 - d * f_p) * psi_p - (1.0 - d * f_m) * psi_m) / (2.0 * h)


def _restart(psi0, dpsi0, f_m, f_0, f_p, h):
    # second node of a new segment from (psi, psi') at its first node:
    # the Numerov step and the slope formula, solved for both neighbours
    c, d = h * h / 12.0, h * h / 6.0
    # unknowns: p = psi(h), q = psi(-h) under the new segment's potential
    a11, a12, r1 = 1.0 - c * f_p, 1.0 - c * f_m, 2.0 * (1.0 + 5.0 * c * f_0) * psi0
    a21, a22, r2 = 1.0 - d * f_p, -(1.0 - d * f_m), 2.0 * h * dpsi0
    det = a11 * a22 - a12 * a21
    return (r1 * a22 - a12 * r2) / det


def _wkb_ratio(f0, f1, h):
    # psi1 / psi0 for the solution growing to the right in a forbidden region
    if f0 <= 0 or f1 <= 0:
        raise ValueError("WKB seed needs a classically forbidden start")
    return math.exp(0.5 * h * (math.sqrt(f0) + math.sqrt(f1))) * (f0 / f1) ** 0.25


def integrate_numerov(V, E, consts=DEFAULT_CONSTANTS, step=None, seed="wkb", big=1e150):
    """March from x_min to x_max.

    ``seed="wkb"`` starts on the solution decaying into the forbidden region
    at x_min; ``seed="dirichlet"`` starts from psi(x_min) = 0 with unit slope.
    Jumps listed in ``V.breakpoints`` are crossed by matching psi and psi'
    (a fourth-order slope on each side), so accuracy does not drop to
    second order there.
    """
    h0 = V.recommended_step if step is None else step
    if not h0 > 0:
        raise ValueError("step must be positive")
    segs = V.segments()
    psi_all, x_all, v_all = [], [], []
    renorm = 0
    junction_slopes = {}
    offset = 0
    prev = None
    for si, (a, b, piece) in enumerate(segs):
        n = max(2, int(math.ceil((b - a) / h0)))
        h = (b - a) / n
        x = np.linspace(a, b, n + 1)
        f = _f(piece, x, E, consts)
        if si == 0:
            if seed == "wkb":
                p0, p1 = 1e-200, 1e-200 * _wkb_ratio(f[0], f[1], h)
            elif seed == "dirichlet":
                p0, p1 = 0.0, h
            else:
                raise ValueError("seed must be 'wkb' or 'dirichlet'")
        else:
            psi_b, dpsi_b = prev
            f_ghost = float(_f(piece, a - h, E, consts))
            p0 = psi_b
            p1 = _restart(psi_b, dpsi_b, f_ghost, f[0], f[1], h)
            junction_slopes[offset - 1] = dpsi_b
        psi, r = numerov_march(f, h, p0, p1, big)
        renorm += r
        if r and psi_all:
            psi_all = [p / big ** r for p in psi_all]
            junction_slopes = {i: v / big ** r for i, v in junction_slopes.items()}
        if si < len(segs) - 1:
            # ghost node past the junction with this segment's own potential
            fg = float(_f(piece, b + h, E, consts))
            c = h * h / 12.0
            ghost = (2.0 * (1.0 + 5.0 * c * f[-1]) * psi[-1] - (1.0 - c * f[-2]) * psi[-2]) / (1.0 - c * fg)
            prev = (psi[-1], _slope(psi[-2], psi[-1], ghost, f[-2], fg, h))
        if si:
            psi, x = psi[1:], x[1:]
        psi_all.append(psi)
        x_all.append(x)
        v_all.append(np.broadcast_to(np.asarray(piece(x), dtype=float), x.shape))
        offset += len(x)
    grid = np.concatenate(x_all)
    psi = np.concatenate(psi_all)
    scale = np.max(np.abs(psi))
    if not np.isfinite(scale) or scale == 0:
        raise FloatingPointError("Numerov march produced no finite solution")
    psi = psi / scale
    junction_slopes = {i: v / scale for i, v in junction_slopes.items()}
    return ShootingResult(
        grid=grid,
        psi=psi,
        energy=E,
        potential=np.concatenate(v_all),
        diagnostics={
            "step": h0,
            "renormalizations": renorm,
            "seed": seed,
            "junction_slopes": junction_slopes,
            "residual_norm": float("nan"),
            "matcher_info": None,
        },
    )


def extract_phase(result, k, window=None, min_periods=5.0):
    """Least-squares fit psi ~ A sin(k x + phi) on ``window``.

    The default window is the last ten periods of the grid, clipped to the
    stretch where |V| < 1e-8 E when the potential is known.  Returns a dict
    with ``A``, ``phi`` in (-pi, pi] and the RMS ``residual`` relative to A.
    """
    period = 2.0 * math.pi / k
    x = result.grid
    if window is None:
        lo = max(x[0], x[-1] - 10.0 * period)
        if result.potential is not None:
            loud = np.nonzero(np.abs(result.potential) >= 1e-8 * abs(result.energy))[0]
            if loud.size:
                lo = max(lo, x[min(loud[-1] + 1, len(x) - 1)])
        window = (lo, x[-1])
    lo, hi = window
    if hi - lo < min_periods * period * (1 - 1e-12):
        raise WindowTooShortError(f"fit window holds {(hi - lo) / period:.2f} < {min_periods} periods")
    sel = (x >= lo) & (x <= hi)
    xs, ys = x[sel], result.psi[sel]
    M = np.column_stack((np.sin(k * xs), np.cos(k * xs)))
    coef, *_ = np.linalg.lstsq(M, ys, rcond=None)
    a, c = coef
    A = math.hypot(a, c)
    phi = math.atan2(c, a)
    if phi == -math.pi:
        phi = math.pi
    resid = float(np.sqrt(np.mean((M @ coef - ys) ** 2)) / A) if A else float("inf")
    result.diagnostics["residual_norm"] = resid
    result.diagnostics["matcher_info"] = {"window": (float(lo), float(hi)), "points": int(sel.sum())}
    return {"A": A, "phi": phi, "residual": resid}


def _march_pair(V, E, consts, x_match, step):
    left = PotentialSampler(V.func, V.x_min, x_match, V.recommended_step)
    # the right march runs on the mirrored potential
    right = PotentialSampler(lambda s: V.func(-np.asarray(s)), -V.x_max, -x_match, V.recommended_step)
    rl = integrate_numerov(left, E, consts, step)
    rr = integrate_numerov(right, E, consts, step)
    return rl, rr


def _end_slope(res, V, E, consts, sign):
    h = res.grid[-1] - res.grid[-2]
    x = res.grid
    f = _f(V, np.array([x[-2], x[-1], x[-1] + h]), E, consts)
    c = h * h / 12.0
    ghost = (2.0 * (1.0 + 5.0 * c * f[1]) * res.psi[-1] - (1.0 - c * f[0]) * res.psi[-2]) / (1.0 - c * f[2])
    return res.psi[-1], sign * _slope(res.psi[-2], res.psi[-1], ghost, f[0], f[2], h)


def matching_determinant(V, E, consts=DEFAULT_CONSTANTS, x_match=None, step=None):
    """Normalized Wronskian of the left- and right-decaying solutions at x_match.

    It is continuous in E and vanishes at the bound-state energies.  Also
    returns the log-derivative mismatch.
    """
    if x_match is None:
        xs = np.linspace(V.x_min, V.x_max, 4001)
        x_match = float(xs[np.argmin(V.func(xs))])
    if not V.x_min < x_match < V.x_max:
        raise ValueError("matching point must lie inside the domain")
    rl, rr = _march_pair(V, E, consts, x_match, step)
    pl, dl = _end_slope(rl, V.func, E, consts, 1.0)
    pr, dr = _end_slope(rr, lambda s: V.func(-np.asarray(s)), E, consts, -1.0)
    kscale = math.sqrt(abs(2.0 * consts.mass * E)) / consts.hbar or 1.0
    nl = math.hypot(pl, dl / kscale)
    nr = math.hypot(pr, dr / kscale)
    det = (dl * pr - pl * dr) / (kscale * nl * nr)
    logmis = dl / pl - dr / pr if pl and pr else math.inf
    return det, logmis


def shoot_bound_state(V, E_bracket, consts=DEFAULT_CONSTANTS, x_match=None, step=None, n_scan=8):
    """Bound-state energy in ``E_bracket`` from the matching determinant.

    Brent's method polishes the root; the returned ``psi`` is the left
    march joined to the mirrored right march at the matching point.
    """
    lo, hi = map(float, E_bracket)
    if not lo < hi:
        raise ValueError("bracket must be increasing")
    if hi > 0:
        raise NoSignChangeError("bound states need E < 0; the bracket reaches positive energies")
    if x_match is None:
        xs = np.linspace(V.x_min, V.x_max, 4001)
        x_match = float(xs[np.argmin(V.func(xs))])
    D = lambda E: matching_determinant(V, E, consts, x_match, step)[0]
    es = np.linspace(lo, hi, n_scan + 1)
    ds = [D(e) for e in es]
    changes = [i for i in range(n_scan) if ds[i] * ds[i + 1] < 0 or ds[i] == 0]
    if not changes:
        raise NoSignChangeError(f"matching determinant keeps its sign on [{lo:g}, {hi:g}]")
    if len(changes) > 1:
        warnings.warn(f"{len(changes)} sign changes in bracket; returning the lowest", MultipleRootsWarning)
    i = changes[0]
    E = es[i] if ds[i] == 0 else brentq(D, es[i], es[i + 1], xtol=1e-14, rtol=1e-15, maxiter=200)
    det, logmis = matching_determinant(V, E, consts, x_match, step)
    rl, rr = _march_pair(V, E, consts, x_match, step)
    scale = rl.psi[-1] / rr.psi[-1] if rr.psi[-1] else 1.0
    grid = np.concatenate((rl.grid, -rr.grid[::-1][1:]))
    psi = np.concatenate((rl.psi, scale * rr.psi[::-1][1:]))
    psi = psi / np.max(np.abs(psi))
    res = ShootingResult(
        grid=grid,
        psi=psi,
        energy=E,
        diagnostics={
            "step": rl.diagnostics["step"],
            "renormalizations": rl.diagnostics["renormalizations"] + rr.diagnostics["renormalizations"],
            "residual_norm": abs(logmis),
            "matcher_info": {"x_match": x_match, "determinant": det, "log_derivative_mismatch": logmis},
        },
    )
    return {"E": E, "psi": res}


def _forbidden_start(sqrt_f, x_turn, action, h_probe):
    # walk left from the turning point until the WKB action reaches ``action``
    x, s = x_turn, 0.0
    while s < action:
        s += h_probe * sqrt_f(x - 0.5 * h_probe)
        x -= h_probe
    return x


def morse_sampler(params, consts=DEFAULT_CONSTANTS, x_max=None, E_max=None, action=18.0, points_per_unit=None):
    """Morse potential on a domain whose left end is deep in the wall.

    The left end is placed where the WKB action measured from V = E_max
    reaches ``action``, so the growing-solution contamination is about
    exp(-2 action).  The step resolves both the wall and the oscillations.
    """
    from .morse import potential

    V = lambda x: potential(params, x, consts)
    tmp = 2.0 * consts.mass / consts.hbar ** 2
    e_ref = 0.0 if E_max is None else max(E_max, 0.0)
    # V = e_ref on the wall side: e^{-alpha x} = root of u^2 - b u - e_ref/scale
    scale = consts.hbar ** 2 * params.kappa ** 2 / (2.0 * consts.mass)
    u = 0.5 * (params.b + math.sqrt(params.b ** 2 + 4.0 * e_ref / scale))
    x_turn = -math.log(u) / params.alpha if u > 0 else 0.0
    sqrt_f = lambda x: math.sqrt(max(tmp * (potential(params, x, consts) - e_ref), 0.0))
    x_min = _forbidden_start(sqrt_f, x_turn, action, 0.1 / max(params.alpha, 1.0) / 4.0)
    f_edge = tmp * (potential(params, x_min, consts) - min(e_ref, 0.0))
    k_ref = math.sqrt(tmp * max(e_ref, 1e-12))
    step = min(0.03 / math.sqrt(abs(f_edge) + 1e-300), 0.03 / max(k_ref, 1e-3), 0.02 / params.alpha)
    if x_max is None:
        # wall region plus twelve free periods at k_ref (or 40 without one)
        quiet = (math.log(max(params.b, 1.0) * scale / 1e-10 + 1.0)) / params.alpha
        x_max = quiet + (12.0 * 2.0 * math.pi / k_ref if e_ref > 0 else 40.0)
    return PotentialSampler(V, x_min, x_max, step)


def seba_sampler(params, consts=DEFAULT_CONSTANTS, x_max=80.0, E_max=1.0):
    """Seba well on [0, x_max] with the jump at 1/alpha; start with psi(0) = 0."""
    depth = consts.hbar ** 2 * params.well_strength / (2.0 * consts.mass)
    inner = lambda x: np.full(np.shape(x), -depth) if np.ndim(x) else -depth
    outer = lambda x: np.zeros(np.shape(x)) if np.ndim(x) else 0.0
    func = lambda x: params.potential(x, consts)
    j = math.sqrt(2.0 * consts.mass * (depth + max(E_max, 0.0))) / consts.hbar
    step = 0.03 / j
    return PotentialSampler(func, 0.0, x_max, step, breakpoints=(params.edge,), pieces=(inner, outer))


def free_sampler(x_max, step):
    zero = lambda x: np.zeros(np.shape(x)) if np.ndim(x) else 0.0
    return PotentialSampler(zero, 0.0, x_max, step)

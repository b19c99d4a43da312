"""Exact solutions of the piece-wise flat (Seba) wall and their sharp limit.

The potential is an infinite wall at x < 0, a well of depth
hbar^2 kappa^2 alpha ell (alpha ell + 1) / 2m on [0, 1/alpha] and zero beyond.
The wall at x = 0 is imposed as psi(0) = 0 exactly.

Robin lengths follow psi(0) + L psi'(0) = 0, so sin(kx + phi) has
k L = -tan(phi).
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import DEFAULT_CONSTANTS, PhysicalConstants

__all__ = [
    "PhysicalConstants",
    "SebaParams",
    "ScatteringState",
    "BoundStateSeba",
    "RobinLimit",
    "NoRootError",
    "interior_wavenumber",
    "solve_scattering",
    "limit_robin_data",
    "find_resonances",
    "solve_bound_state",
    "bound_state_residual",
    "wigner_time_delay",
    "time_delay_from_phase",
]


class NoRootError(ValueError):
    pass


@dataclass(frozen=True)
class SebaParams:
    alpha: float
    ell: float
    kappa: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.ell > 0 and self.kappa >= 0):
            raise ValueError("need alpha > 0, ell > 0, kappa >= 0")
        if not all(map(math.isfinite, (self.alpha, self.ell, self.kappa))):
            raise ValueError("parameters must be finite")

    @property
    def well_strength(self):
        """kappa^2 alpha ell (alpha ell + 1): depth in units of hbar^2/2m."""
        al = self.alpha * self.ell
        return self.kappa ** 2 * al * (al + 1.0)

    @property
    def edge(self):
        return 1.0 / self.alpha

    def potential(self, x, consts=DEFAULT_CONSTANTS):
        """Finite part of the potential (the x < 0 wall is left to the caller)."""
        x = np.asarray(x, dtype=float)
        depth = consts.hbar ** 2 * self.well_strength / (2.0 * consts.mass)
        return np.where((x >= 0) & (x <= self.edge), -depth, 0.0)


@dataclass(frozen=True)
class ScatteringState:
    """Exterior solution A sin(kx + phi) matched to sin(jx) inside.

    ``phase`` is reduced to (-pi/2, pi/2]; the overall sign this may flip is
    irrelevant for a real stationary state, so ``amplitude`` is kept >= 1.
    """

    k: float
    energy: float
    amplitude: float
    phase: float
    robin_length: float
    interior_k: float
    raw_phase: float

    def psi(self, x):
        """Wave function with unit interior amplitude, using the unreduced phase."""
        x = np.asarray(x, dtype=float)
        edge = self._edge
        inside = np.sin(self.interior_k * x)
        outside = self.amplitude * np.sin(self.k * x + self.raw_phase)
        return np.where(x < 0, 0.0, np.where(x <= edge, inside, outside))

    def dpsi(self, x):
        x = np.asarray(x, dtype=float)
        inside = self.interior_k * np.cos(self.interior_k * x)
        outside = self.amplitude * self.k * np.cos(self.k * x + self.raw_phase)
        return np.where(x < 0, 0.0, np.where(x <= self._edge, inside, outside))

    _edge: float = 0.0


@dataclass(frozen=True)
class BoundStateSeba:
    energy: float
    decay_constant: float
    interior_k: float
    _edge: float = 0.0

    def psi(self, x):
        """Unnormalized bound state, sin(jx) inside and a decaying tail outside."""
        x = np.asarray(x, dtype=float)
        edge = self._edge
        tail = np.sin(self.interior_k * edge) * np.exp(-self.decay_constant * (x - edge))
        return np.where(x < 0, 0.0, np.where(x <= edge, np.sin(self.interior_k * x), tail))


@dataclass(frozen=True)
class RobinLimit:
    kappa_n: float
    tan_phi_n: float
    A_n: float
    L_n: float


def _reduce_half_pi(phi):
    # into (-pi/2, pi/2]
    red = phi - math.pi * math.floor(phi / math.pi + 0.5)
    if red <= -math.pi / 2:
        red += math.pi
    return red


def interior_wavenumber(params, k, consts=DEFAULT_CONSTANTS):
    """j = sqrt(k^2 + kappa^2 alpha ell (alpha ell + 1)).

    ``consts`` is accepted for a uniform signature; j does not depend on it.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    return math.sqrt(k * k + params.well_strength)


def solve_scattering(params, k, consts=DEFAULT_CONSTANTS):
    """Match sin(jx) to A sin(kx + phi) in value and slope at x = 1/alpha."""
    j = interior_wavenumber(params, k, consts)
    x0 = params.edge
    value = math.sin(j * x0)
    slope_over_k = j * math.cos(j * x0) / k
    if value == 0 and slope_over_k == 0:
        raise ArithmeticError("degenerate matching: value and slope vanish together")
    theta = math.atan2(value, slope_over_k)
    amplitude = math.hypot(value, slope_over_k)
    raw = theta - k * x0
    phase = _reduce_half_pi(raw)
    if math.cos(phase) == 0:
        robin = math.inf
    else:
        robin = -math.tan(phase) / k
    return ScatteringState(
        k=k,
        energy=consts.energy(k),
        amplitude=amplitude,
        phase=phase,
        robin_length=robin,
        interior_k=j,
        raw_phase=raw,
        _edge=x0,
    )


def limit_robin_data(n, ell, k):
    """Sharp-limit fine tuning kappa_n and the Robin data it produces."""
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    if not (ell > 0 and k > 0):
        raise ValueError("need ell > 0 and k > 0")
    h = n + 0.5
    return RobinLimit(
        kappa_n=math.pi * h / ell,
        tan_phi_n=-2.0 * k * ell / (math.pi ** 2 * h ** 2),
        A_n=math.sqrt(1.0 + math.pi ** 4 * h ** 4 / (4.0 * k ** 2 * ell ** 2)),
        L_n=2.0 * ell / (math.pi ** 2 * h ** 2),
    )


def find_resonances(params, k, n_max):
    """kappa values putting j/alpha exactly on (n + 1/2) pi, n = 0..n_max.

    There the interior slope vanishes at x = 1/alpha (a Neumann point).
    ``params.kappa`` is ignored; alpha and ell are held fixed.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    al = params.alpha * params.ell
    out = []
    for n in range(n_max + 1):
        target = (n + 0.5) * math.pi * params.alpha

        def mismatch(kappa):
            return math.sqrt(k * k + kappa * kappa * al * (al + 1.0)) - target

        hi = target / math.sqrt(al * (al + 1.0)) * 1.001 + 1.0
        lo = 0.0
        if mismatch(lo) > 0:
            raise NoRootError(f"no resonance for n = {n}: k/alpha already beyond (n+1/2) pi")
        kappa = brentq(mismatch, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
        out.append({"n": n, "kappa_at_resonance": kappa})
    return out


def _bound_mismatch(q, params):
    # j_b cot(j_b / alpha) + q: zero at a bound state with decay constant q;
    # multiplied by sin(j_b/alpha) to remove the poles of cot.
    jb = math.sqrt(max(params.well_strength - q * q, 0.0))
    t = jb / params.alpha
    return jb * math.cos(t) + q * math.sin(t)


def bound_state_residual(energy, params, consts=DEFAULT_CONSTANTS):
    """Residual of the matching equation j cot(j/alpha) = -q at ``energy``."""
    q = math.sqrt(-2.0 * consts.mass * energy) / consts.hbar
    jb = math.sqrt(params.well_strength - q * q)
    return jb / math.tan(jb / params.alpha) + q


def solve_bound_state(params, consts=DEFAULT_CONSTANTS, n_scan=400):
    """Least bound state of the well, or ``None`` if there is none.

    Bracketing scans decay constants on a log grid; the root is polished
    with Brent's method.
    """
    qmax = math.sqrt(params.well_strength)
    if qmax == 0:
        return None
    f = lambda q: _bound_mismatch(q, params)
    grid = np.concatenate(([0.0], np.geomspace(qmax * 1e-12, qmax, n_scan)))
    vals = [f(q) for q in grid]
    root = None
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0 and a > 0:
            root = a
            break
        if fa * fb < 0:
            root = brentq(f, a, b, xtol=1e-15 * max(b, 1.0), rtol=1e-15, maxiter=200)
            break
    if root is None or root <= 0:
        return None
    energy = -(consts.hbar * root) ** 2 / (2.0 * consts.mass)
    return BoundStateSeba(
        energy=energy,
        decay_constant=root,
        interior_k=math.sqrt(max(params.well_strength - root * root, 0.0)),
        _edge=params.edge,
    )


def wigner_time_delay(L, k, consts=DEFAULT_CONSTANTS):
    """delta t = -2 m L / (hbar k (1 + k^2 L^2)); zero for a Dirichlet wall."""
    if not k > 0:
        raise ValueError("k must be positive")
    return -2.0 * consts.mass * L / (consts.hbar * k * (1.0 + k * k * L * L))


def time_delay_from_phase(params, k, consts=DEFAULT_CONSTANTS, dk=1e-5):
    """2 hbar dphi/dE from central differences of the matched phase."""
    lo = solve_scattering(params, k - dk, consts).raw_phase
    hi = solve_scattering(params, k + dk, consts).raw_phase
    dphi = (hi - lo + math.pi) % (2 * math.pi) - math.pi
    dphi_dk = dphi / (2 * dk)
    return 2.0 * consts.hbar * dphi_dk * consts.mass / (consts.hbar ** 2 * k)

"""Scattering and bound states of the Morse wall

    V(x) = (hbar^2 kappa^2 / 2m) (exp(-2 alpha x) - b exp(-alpha x)).

With y = (2 kappa / alpha) exp(-alpha x), l = b kappa / 2 alpha and
m = i k / alpha the scattering state decaying as x -> -inf is

    psi_k(x) = exp(alpha x / 2) W_{l,m}(y)
             = sqrt(c0) [A y**m exp(-y/2) M(1/2 - l + m, 1 + 2m, y) + c.c.],

with c0 = 2 kappa / alpha and A = Gamma(-2m) / Gamma(1/2 - l - m).  For
large x this is 2 sqrt(c0) |A| cos(k x - arg A - (k/alpha) ln c0).

Conventions.  Half-line Robin lengths follow psi(0) + L psi'(0) = 0, so
sin(kx + phi) has k L = -tan(phi).  The fine-tuning parameter ``L`` of
:class:`FineTuning` is the length for which cot(arg A) / k -> L; the
boundary condition it produces in the limit is psi(0) - L psi'(0) = 0,
i.e. half-line Robin length -L.  A bound state e^{-x/|L|} therefore
appears for L < 0.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .constants import DEFAULT_CONSTANTS

__all__ = [
    "MorseParams",
    "FineTuning",
    "MorseBoundState",
    "RouteDiscrepancyWarning",
    "NEUMANN",
    "potential",
    "psi_unbound",
    "arg_A",
    "arg_A_both",
    "amplitude_A",
    "asymptotic_form",
    "scattering_phase",
    "b_fine_tuned",
    "extract_robin_length",
    "bound_energy",
    "bound_states",
    "limit_bound_state",
]

NEUMANN = math.inf


class RouteDiscrepancyWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class MorseParams:
    alpha: float
    kappa: float
    b: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.alpha, self.kappa, self.b))):
            raise ValueError("parameters must be finite")
        if not (self.alpha > 0 and self.kappa >= 0 and self.b >= 0):
            raise ValueError("need alpha > 0, kappa >= 0, b >= 0")

    @property
    def l(self):
        return self.b * self.kappa / (2.0 * self.alpha)

    @property
    def c0(self):
        return 2.0 * self.kappa / self.alpha

    def log_y(self, x):
        return math.log(self.c0) - self.alpha * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class FineTuning:
    n: int
    L: float

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("n must be a non-negative integer")
        if self.L == 0 or math.isnan(self.L):
            raise ValueError("L must be non-zero (use NEUMANN for L = inf)")


@dataclass(frozen=True)
class MorseBoundState:
    """Bound state nu with exponent s = b kappa / 2 alpha - 1/2 - nu > 0.

    ``wavefunction`` is unnormalized: y**s exp(-y/2) L_nu^{2s}(y).
    """

    nu: int
    energy: float
    exponent: float
    wavefunction: Callable


def potential(params, x, consts=DEFAULT_CONSTANTS):
    """Morse potential; raises OverflowError where exp(-2 alpha x) overflows."""
    x = np.asarray(x, dtype=float)
    ax = params.alpha * x
    if np.any(-2.0 * ax > 709.0):
        raise OverflowError("exp(-2 alpha x) overflows; x is too far into the wall")
    scale = consts.hbar ** 2 * params.kappa ** 2 / (2.0 * consts.mass)
    e1 = np.exp(-ax)
    out = scale * (e1 * e1 - params.b * e1)
    return out if out.ndim else float(out)


def _log_amplitude_A(params, k):
    m = 1j * k / params.alpha
    return complex(specfun.loggamma(-2.0 * m)) - complex(specfun.loggamma(0.5 - params.l - m))


def amplitude_A(params, k):
    """A = Gamma(-2ik/alpha) / Gamma(1/2 - l - ik/alpha)."""
    return complex(np.exp(_log_amplitude_A(params, k)))


def _reduce(phi):
    # into (-pi, pi]
    r = math.remainder(phi, 2.0 * math.pi)
    return math.pi if r == -math.pi else r


def arg_A_both(params, k, ctl=None):
    """arg A from the Gamma ratio and from the arctangent series.

    Returns ``(gamma_route, series_route)``; ``series_route`` is None when a
    series denominator vanishes.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    g = _reduce(_log_amplitude_A(params, k).imag)
    try:
        s = _reduce(specfun.arg_A_series(params.b, params.kappa, params.alpha, k, ctl))
    except specfun.ResonantDenominatorError:
        s = None
    return g, s


def arg_A(params, k, ctl=None, route="series", tol=1e-9):
    """arg A in (-pi, pi].

    The series route is the default; it falls back to the Gamma ratio (with
    a warning) at a resonant denominator.  A route discrepancy above ``tol``
    also warns.
    """
    g, s = arg_A_both(params, k, ctl)
    if route == "gamma":
        return g
    if route != "series":
        raise ValueError("route must be 'series' or 'gamma'")
    if s is None:
        warnings.warn("resonant series denominator; using the Gamma ratio", RouteDiscrepancyWarning)
        return g
    if abs(_reduce(s - g)) > tol:
        warnings.warn(f"arg A routes differ by {abs(_reduce(s - g)):.3g}", RouteDiscrepancyWarning)
    return s


def asymptotic_form(params, k):
    """(amplitude, delta) with psi_k(x) ~ amplitude cos(k x - delta) as x -> inf."""
    logA = _log_amplitude_A(params, k)
    amp = 2.0 * math.sqrt(params.c0) * math.exp(logA.real)
    delta = _reduce(logA.imag + k / params.alpha * math.log(params.c0))
    return amp, delta


def scattering_phase(params, k):
    """phi in (-pi, pi] with psi_k ~ const * sin(k x + phi) at large x."""
    return _reduce(0.5 * math.pi - asymptotic_form(params, k)[1])


def psi_unbound(params, k, x, consts=DEFAULT_CONSTANTS, route="auto", ctl=None):
    """Real scattering state e^{alpha x/2} W_{l, ik/alpha}(y), with C = 1.

    Routes: ``"kummer"`` sums the two conjugate Kummer terms; ``"whittaker"``
    evaluates W through Tricomi U; ``"auto"`` uses the Kummer sum for
    y <= specfun.U_SERIES_MAX and W beyond.  ``consts`` enters only through
    k, which is already a wavenumber.
    """
    if not k > 0:
        raise ValueError("k must be positive")
    if params.kappa == 0:
        raise ValueError("kappa = 0 is the free particle without a wall")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    logy = params.log_y(x)
    y = np.exp(logy)
    out = np.empty(x.shape)
    if route == "kummer":
        near = np.ones(x.shape, bool)
    elif route == "whittaker":
        near = np.zeros(x.shape, bool)
    elif route == "auto":
        near = y <= specfun.U_SERIES_MAX
    else:
        raise ValueError("route must be 'auto', 'kummer' or 'whittaker'")
    m = 1j * k / params.alpha
    mu = 0.5 - params.l + m
    nu = 1.0 + 2.0 * m
    if near.any():
        A = amplitude_A(params, k)
        yn, ln_ = y[near], logy[near]
        term = A * np.exp(m * ln_ - 0.5 * yn) * specfun.kummer_m(mu, nu, yn, ctl)
        out[near] = 2.0 * math.sqrt(params.c0) * term.real
    far = ~near
    if far.any():
        yf, lf = y[far], logy[far]
        if np.any(yf == 0):
            raise ValueError("whittaker route needs y > 0; use route='kummer' at large x")
        # e^{alpha x/2} y^{m+1/2} e^{-y/2} = c0^{1/2} y^m e^{-y/2}
        pref = math.sqrt(params.c0) * np.exp(m * lf - 0.5 * yf)
        val = pref * specfun.tricomi_u(mu, nu, yf, ctl)
        scale = np.maximum(np.abs(val), 1e-300)
        if np.any(np.abs(val.imag) > 1e-9 * scale + 1e-300):
            warnings.warn("Whittaker route left an imaginary residue", RouteDiscrepancyWarning)
        out[far] = val.real
    return float(out[0]) if scalar else out


def b_fine_tuned(ft, alpha):
    """b = (2n + 1) - 2 / (L alpha)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    corr = 0.0 if math.isinf(ft.L) else 2.0 / (ft.L * alpha)
    b = 2 * ft.n + 1 - corr
    if b < 0:
        raise ValueError(f"fine tuning gives negative b = {b:g}")
    return b


def extract_robin_length(params, k, ctl=None):
    """L_eff = cot(arg A) / k.

    Tends to the fine-tuning L, and to 0 (Dirichlet) for generic b.  The
    half-line Robin length of the limit state is -L_eff.  Returns +-inf
    where tan(arg A) = 0.
    """
    a = arg_A(params, k, ctl)
    t = math.tan(a)
    if t == 0:
        return math.copysign(math.inf, math.cos(a))
    return 1.0 / (t * k)


def bound_energy(params, nu, consts=DEFAULT_CONSTANTS):
    """-(hbar^2 alpha^2 / 2m) (nu - b kappa / 2 alpha + 1/2)^2, no admissibility check."""
    s = nu - params.l + 0.5
    return -(consts.hbar * params.alpha) ** 2 / (2.0 * consts.mass) * s * s


def _bound_wavefunction(params, nu, s):
    lam = 2.0 * s
    logc0 = math.log(params.c0)
    alpha = params.alpha

    def psi(x):
        x = np.asarray(x, dtype=float)
        logy = logc0 - alpha * x
        y = np.exp(np.minimum(logy, 700.0))
        val = np.exp(s * logy - 0.5 * y) * specfun.laguerre_assoc(nu, lam, y)
        return val if np.ndim(val) else float(val)

    return psi


def bound_states(params, consts=DEFAULT_CONSTANTS):
    """All normalizable bound states, deepest first.

    A level nu needs s = b kappa / 2 alpha - 1/2 - nu > 0 strictly: the tail
    is exp(-alpha s x).
    """
    if params.kappa == 0:
        return []
    out = []
    nu = 0
    while params.l - 0.5 - nu > 0:
        s = params.l - 0.5 - nu
        out.append(
            MorseBoundState(
                nu=nu,
                energy=bound_energy(params, nu, consts),
                exponent=s,
                wavefunction=_bound_wavefunction(params, nu, s),
            )
        )
        nu += 1
    return out


def limit_bound_state(ft, alpha, consts=DEFAULT_CONSTANTS):
    """The nu = n state of the fine-tuned Morse wall (kappa = alpha).

    It exists for L < 0, where its tail is exp(-x/|L|) and its energy is
    -hbar^2 / (2 m L^2) at every alpha.
    """
    if not ft.L < 0:
        raise ValueError("a limit bound state needs L < 0 in this parameterization")
    params = MorseParams(alpha=alpha, kappa=alpha, b=b_fine_tuned(ft, alpha))
    for st in bound_states(params, consts):
        if st.nu == ft.n:
            target = -(consts.hbar ** 2) / (2.0 * consts.mass * ft.L ** 2)
            if not math.isclose(st.energy, target, rel_tol=1e-9, abs_tol=0.0):
                raise ArithmeticError("limit bound-state energy lost precision")
            return st
    raise ArithmeticError("state nu = n missing; L alpha too small")

"""Complex special functions used by the Morse and Wigner modules.

Everything here is double precision and accepts scalars or numpy arrays.
Complex powers use the principal branch ``z**w = exp(w log z)`` with
``arg z`` in (-pi, pi]; all arguments met in this package have Re z > 0.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import kernels
from .constants import EULER_GAMMA

__all__ = [
    "SeriesControl",
    "SeriesConvergenceError",
    "PoleError",
    "DegenerateParameterError",
    "ResonantDenominatorError",
    "BranchCutWarning",
    "loggamma",
    "gamma_complex",
    "rgamma",
    "gamma_euler_product",
    "kummer_m",
    "tricomi_u",
    "tricomi_u_asymptotic",
    "whittaker_m",
    "whittaker_w",
    "laguerre_assoc",
    "gauss_2f1_terminating",
    "hyp2f1_regularized",
    "arg_A_series",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by all series in this module."""

    rel_tol: float = 1e-13
    max_terms: int = 10000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


DEFAULT_CONTROL = SeriesControl()


class SeriesConvergenceError(ArithmeticError):
    """A series hit ``max_terms``; carries the partial sum and term count."""

    def __init__(self, message, partial, terms):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class PoleError(ValueError):
    pass


class DegenerateParameterError(ValueError):
    pass


class ResonantDenominatorError(ZeroDivisionError):
    pass


class BranchCutWarning(RuntimeWarning):
    pass


# Lanczos coefficients, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_MAX = 709.78


def _ctl(ctl):
    return DEFAULT_CONTROL if ctl is None else ctl


def _out(value, scalar):
    return complex(value.reshape(-1)[0]) if scalar else value


def _is_nonpositive_integer(z):
    z = np.asarray(z, dtype=complex)
    re = z.real
    return (z.imag == 0) & (re <= 0) & (re == np.round(re))


def _lanczos_loggamma(z):
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z):
    # log(sin(pi z)) without overflow for large |Im z|; branch is not principal.
    w = np.pi * z
    out = np.empty_like(w)
    up = w.imag > 0
    wu = w[up]
    out[up] = -1j * wu + np.log((np.exp(2j * wu) - 1.0) / 2j)
    wd = w[~up]
    out[~up] = 1j * wd + np.log((1.0 - np.exp(-2j * wd)) / 2j)
    return out


def loggamma(z):
    """A logarithm of Gamma(z) (exp and arg are what matter, not the branch).

    Raises :class:`PoleError` at non-positive integers.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if _is_nonpositive_integer(z).any():
        raise PoleError("Gamma has a pole at a non-positive integer")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_loggamma(z[right])
    zl = z[~right]
    if zl.size:
        out[~right] = math.log(math.pi) - _log_sin_pi(zl) - _lanczos_loggamma(1.0 - zl)
    return _out(out, scalar)


def gamma_complex(z):
    """Gamma(z) for complex z; real input with Re z > 0 gives a real result."""
    scalar = np.ndim(z) == 0
    zarr = np.atleast_1d(np.asarray(z))
    lg = np.atleast_1d(loggamma(zarr))
    if (lg.real > _LOG_MAX).any():
        raise OverflowError("Gamma(z) overflows double precision; use loggamma")
    val = np.exp(lg)
    if not np.iscomplexobj(zarr) and (zarr > 0).all():
        val = val.real
        return float(val[0]) if scalar else val
    return _out(val, scalar)


def rgamma(z):
    """1/Gamma(z), entire: exactly zero at the poles of Gamma."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.zeros_like(z)
    ok = ~_is_nonpositive_integer(z)
    if ok.any():
        out[ok] = np.exp(-np.atleast_1d(loggamma(z[ok])))
    return _out(out, scalar)


def gamma_euler_product(z, n_factors=100000):
    """Gamma(z) from the truncated Euler product for 1/Gamma.

    Slow and only first-order accurate; meant as a cross-check.  Returns
    ``(value, tail_bound)`` where ``tail_bound`` estimates the relative
    truncation error, about |z|**2 / (2 N).
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError("Gamma has a pole at a non-positive integer")
    n = np.arange(1, n_factors + 1, dtype=float)
    log_inv = np.log(z) + EULER_GAMMA * z + np.sum(np.log1p(z / n) - z / n)
    return complex(np.exp(-log_inv)), abs(z) ** 2 / (2.0 * n_factors)


def kummer_m(mu, nu, z, ctl=None):
    """Kummer's confluent hypergeometric series M(mu, nu; z).

    The series stops once a term drops below ``ctl.rel_tol`` times the
    partial sum (and n >= |z|, past the hump of the terms).
    """
    ctl = _ctl(ctl)
    if _is_nonpositive_integer(nu):
        raise PoleError(f"M(mu, nu; z) undefined for nu = {nu}")
    scalar = np.ndim(z) == 0
    zarr = np.asarray(z, dtype=complex)
    vals, nterms = kernels.kummer_series(complex(mu), complex(nu), zarr.ravel(), ctl.rel_tol, ctl.max_terms)
    if (nterms < 0).any():
        raise SeriesConvergenceError(
            f"Kummer series did not converge in {ctl.max_terms} terms", vals.reshape(zarr.shape), ctl.max_terms
        )
    if not np.isfinite(vals).all():
        raise OverflowError("Kummer series overflowed")
    return _out(vals.reshape(zarr.shape) if not scalar else vals, scalar)


def _tricomi_decomposition(mu, nu, z, ctl):
    w1 = gamma_complex(nu - 1.0) * rgamma(mu)
    w2 = gamma_complex(1.0 - nu) * rgamma(mu - nu + 1.0)
    m1 = kummer_m(1.0 + mu - nu, 2.0 - nu, z, ctl)
    m2 = kummer_m(mu, nu, z, ctl)
    return w1 * np.exp((1.0 - nu) * np.log(z)) * m1 + w2 * m2


def tricomi_u_asymptotic(mu, nu, z, rel_tol=1e-13, max_terms=400):
    """Large-|z| Poincare expansion of U, truncated at its smallest term.

    Terms may grow at first when |mu|, |mu - nu + 1| exceed sqrt|z|, so the
    cut is placed at the smallest term overall, not the first one that
    grows.  Returns ``(value, rel_err)``: ``rel_err`` is the size of the
    first omitted term relative to the sum.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    b = mu - nu + 1.0
    term = np.ones_like(z)
    total = np.ones_like(z)
    best_total = total.copy()
    best_term = np.full(z.shape, np.inf)
    for n in range(max_terms):
        with np.errstate(over="ignore", invalid="ignore"):
            nxt = term * (mu + n) * (b + n) / ((n + 1) * (-z))
            mag = np.abs(nxt)
        better = mag < best_term
        best_term = np.where(better, mag, best_term)
        best_total = np.where(better, total, best_total)
        if np.all(best_term <= rel_tol * np.abs(best_total)):
            break
        total = total + nxt
        term = nxt
        if not np.all(np.isfinite(term)):
            break
    err = best_term / np.maximum(np.abs(best_total), 1e-300)
    return np.exp(-mu * np.log(z)) * best_total, err


U_SERIES_MAX = 4.0
U_ASYMPTOTIC_MIN = 32.0


def _tricomi_bridge(mu, nu, z):
    # Kummer's ODE z U'' + (nu - z) U' - mu U = 0 integrated inward from an
    # asymptotic seed; U dominates the M-type solution in that direction.
    from scipy.integrate import solve_ivp

    z0 = max(U_ASYMPTOTIC_MIN, float(np.max(z.real)))
    while True:
        u0, e0 = tricomi_u_asymptotic(mu, nu, z0)
        du0, e1 = tricomi_u_asymptotic(mu + 1.0, nu + 1.0, z0)
        if max(e0[0], e1[0]) < 1e-14 or z0 > 1e4:
            break
        z0 *= 1.5
    y0 = np.array([u0[0], -mu * du0[0]], dtype=complex)
    order = np.argsort(-z.real)
    zs = z.real[order]

    def rhs(t, y):
        return [y[1], (mu * y[0] - (nu - t) * y[1]) / t]

    sol = solve_ivp(rhs, (z0, zs[-1]), y0, method="DOP853", t_eval=zs, rtol=1e-13, atol=1e-300)
    out = np.empty(z.shape, dtype=complex)
    out[order] = sol.y[0]
    return out


def tricomi_u(mu, nu, z, ctl=None, method="auto"):
    """Tricomi's U(mu, nu; z) for non-integer nu.

    ``method="series"`` always uses the two-Kummer decomposition.  With
    ``"auto"``, positive real z beyond ``U_SERIES_MAX`` (where the
    decomposition cancels catastrophically) is handled by the asymptotic
    expansion when it is accurate, else by integrating Kummer's equation
    inward from ``U_ASYMPTOTIC_MIN``.
    """
    ctl = _ctl(ctl)
    nu_c = complex(nu)
    if nu_c.imag == 0 and nu_c.real == round(nu_c.real):
        raise DegenerateParameterError("the two-Gamma decomposition of U needs non-integer nu")
    scalar = np.ndim(z) == 0
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    if ((zarr.imag == 0) & (zarr.real < 0)).any():
        warnings.warn("z on the negative real axis: principal branch of z**(1-nu) used", BranchCutWarning)
    mu = complex(mu)
    out = np.empty_like(zarr)
    if method == "auto":
        far = (zarr.imag == 0) & (zarr.real > U_SERIES_MAX)
    else:
        far = np.zeros(zarr.shape, dtype=bool)
    if far.any():
        idx = np.nonzero(far)[0]
        val, err = tricomi_u_asymptotic(mu, nu_c, zarr[idx], ctl.rel_tol)
        good = err <= 10 * ctl.rel_tol
        out[idx[good]] = val[good]
        rest = idx[~good]
        if rest.size:
            out[rest] = _tricomi_bridge(mu, nu_c, zarr[rest])
    near = ~far
    if near.any():
        out[near] = _tricomi_decomposition(mu, nu_c, zarr[near], ctl)
    return _out(out, scalar)


def _whittaker_prefactor(m, z):
    z = np.asarray(z, dtype=complex)
    return np.exp((m + 0.5) * np.log(z) - 0.5 * z)


def whittaker_m(l, m, z, ctl=None):
    """M_{l,m}(z) = z**(m+1/2) exp(-z/2) M(1/2+m-l, 1+2m; z)."""
    return _whittaker_prefactor(m, z) * kummer_m(0.5 + m - l, 1.0 + 2.0 * m, z, ctl)


def whittaker_w(l, m, z, ctl=None, method="auto"):
    """W_{l,m}(z) = z**(m+1/2) exp(-z/2) U(1/2+m-l, 1+2m; z)."""
    return _whittaker_prefactor(m, z) * tricomi_u(0.5 + m - l, 1.0 + 2.0 * m, z, ctl, method)


def laguerre_assoc(n, lam, x):
    """Associated Laguerre polynomial L_n^lam(x) from its finite sum."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    a = n + lam
    for m in range(n + 1):
        j = n - m
        binom = 1.0
        for i in range(1, j + 1):
            binom *= (a - j + i) / i
        total = total + (-1) ** m * binom * x ** m / math.factorial(m)
    return total if total.ndim else float(total)


def gauss_2f1_terminating(a, n, c, z):
    """2F1(a, -n; c; z): the series stops after the z**n term.

    Valid for any z, including |z| > 1.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    c = complex(c)
    if n > 0 and c.imag == 0 and c.real <= 0 and c.real == round(c.real) and -c.real < n:
        raise PoleError(f"Pochhammer (c)_m vanishes for c = {c.real:g} before the series ends")
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    for m in range(n):
        term = term * (a + m) * (m - n) / ((c + m) * (m + 1)) * z
        total += term
    return total


def hyp2f1_regularized(a, b, c, z, ctl=None):
    """2F1(a, b; c; z) / Gamma(c) by its power series, for |z| < 1.

    Finite for every c, including non-positive integers.
    """
    ctl = _ctl(ctl)
    if abs(z) >= 1:
        raise ValueError("the power series needs |z| < 1")
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    j = 0
    if _is_nonpositive_integer(c):
        # leading terms vanish identically; start at j = 1 - c where c + j = 1
        j = int(round(1 - c.real))
        term = 1.0 + 0.0j
        for i in range(j):
            term *= (a + i) * (b + i) * z / (i + 1)
        if term == 0:
            return 0.0j
    else:
        term = complex(rgamma(c))
    total = term
    quiet = 0
    while True:
        ratio = (a + j) * (b + j) * z / ((c + j) * (j + 1))
        term = term * ratio
        total += term
        j += 1
        if abs(term) <= ctl.rel_tol * abs(total) and abs(ratio) < 1:
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
        if term == 0 and ratio == 0:
            return total
        if j >= ctl.max_terms:
            raise SeriesConvergenceError("2F1 series did not converge", total, j)


def arg_A_series(b, kappa, alpha, k, ctl=None):
    """arg of Gamma(-2ik/alpha) / Gamma(1/2 - b kappa/2alpha - ik/alpha) from
    Euler's product, as a sum of arctangents.

    Each arctangent is taken with ``atan2`` so the result is correct modulo
    2 pi even when (2n+1) alpha < b kappa.  The O(1/n^2) tail is summed
    in closed form (digamma plus Hurwitz zeta terms).
    """
    ctl = _ctl(ctl)
    if not (alpha > 0 and k > 0):
        raise ValueError("need alpha > 0 and k > 0")
    r = 0.5 - b * kappa / (2.0 * alpha)
    kp = k / alpha
    n_res = round(-r)
    if n_res >= 0 and (2 * n_res + 1) * alpha - b * kappa == 0:
        raise ResonantDenominatorError(f"(2n+1) alpha = b kappa at n = {n_res}")
    n0 = int(max(16, math.ceil(8 * kp), math.ceil(1.0 - r + 8 * kp)))
    n = np.arange(n0, dtype=float)
    head = np.sum(np.arctan(2 * kp / (n + 1)) - kp / (n + 1) + np.arctan2(-kp, n + r))
    # tail n >= n0: kp [psi(n0+r) - psi(n0+1)] + sum_j (-1)^j/(2j+1) [...]
    tail = kp * (_sp.digamma(n0 + r) - _sp.digamma(n0 + 1.0))
    for j in range(1, 200):
        s = 2 * j + 1
        t = (-1) ** j / s * ((2 * kp) ** s * _sp.zeta(s, n0 + 1.0) - kp ** s * _sp.zeta(s, n0 + r))
        tail += t
        if abs(t) < ctl.rel_tol:
            break
    return math.pi / 2 + EULER_GAMMA * kp + float(head + tail)

"""Moyal star products on a closed class of phase-space symbols.

A symbol is a finite sum of terms

    c * x**i * p**j * exp(a x) * exp(beta p)

with complex c, a, beta.  The class is closed under the star product,
which is evaluated exactly: the exponential parts compose with a phase
exp(theta (a1 beta2 - beta1 a2)), theta = i hbar / 2, and the polynomial
parts produce a terminating double sum.
"""
import math
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from ..constants import DEFAULT_CONSTANTS

__all__ = [
    "SymbolTerm",
    "SymbolClassError",
    "canonical",
    "term",
    "moyal_star",
    "moyal_star_truncated",
    "star_commutator",
    "derivative",
    "evaluate",
    "conjugate",
    "add",
    "scale",
    "morse_hamiltonian",
    "hamiltonian_star_left",
    "hamiltonian_star_right",
    "star_eigen_residual",
]


class SymbolClassError(TypeError):
    pass


@dataclass(frozen=True)
class SymbolTerm:
    coefficient: complex
    exp_x_rate: complex = 0.0
    poly_x_degree: int = 0
    poly_p_degree: int = 0
    exp_p_phase_rate: complex = 0.0

    def __post_init__(self):
        for d in (self.poly_x_degree, self.poly_p_degree):
            if int(d) != d or d < 0:
                raise SymbolClassError("polynomial degrees must be non-negative integers")
        for v in (self.coefficient, self.exp_x_rate, self.exp_p_phase_rate):
            if not np.isfinite(complex(v)):
                raise SymbolClassError("symbol data must be finite")

    @property
    def signature(self):
        return (complex(self.exp_x_rate), complex(self.exp_p_phase_rate), self.poly_x_degree, self.poly_p_degree)


def term(coefficient=1.0, i=0, j=0, a=0.0, beta=0.0):
    """Shorthand for ``SymbolTerm(coefficient, a, i, j, beta)``."""
    return SymbolTerm(complex(coefficient), complex(a), int(i), int(j), complex(beta))


def _sort_key(sig):
    a, b, i, j = sig
    return (a.real, a.imag, b.real, b.imag, i, j)


def canonical(terms):
    """Merge equal signatures, drop zero coefficients, sort."""
    acc = {}
    for t in terms:
        if not isinstance(t, SymbolTerm):
            raise SymbolClassError(f"not a SymbolTerm: {t!r}")
        acc[t.signature] = acc.get(t.signature, 0.0) + complex(t.coefficient)
    out = []
    for sig in sorted(acc, key=_sort_key):
        c = acc[sig]
        if c != 0:
            a, b, i, j = sig
            out.append(SymbolTerm(c, a, i, j, b))
    return out


def add(*symbols):
    return canonical([t for s in symbols for t in s])


def scale(symbol, c):
    return canonical([SymbolTerm(t.coefficient * c, t.exp_x_rate, t.poly_x_degree,
                                 t.poly_p_degree, t.exp_p_phase_rate) for t in symbol])


def _shifted_power(n, shift):
    # coefficients of (v + shift)**n in ascending powers of v
    return [comb(n, r) * shift ** (n - r) for r in range(n + 1)]


def _convolve(u, v):
    out = [0.0j] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a == 0:
            continue
        for j, b in enumerate(v):
            out[i + j] += a * b
    return out


def _star_terms(f, g, theta):
    i1, j1, a1, b1 = f.poly_x_degree, f.poly_p_degree, complex(f.exp_x_rate), complex(f.exp_p_phase_rate)
    i2, j2, a2, b2 = g.poly_x_degree, g.poly_p_degree, complex(g.exp_x_rate), complex(g.exp_p_phase_rate)
    pref = complex(f.coefficient) * complex(g.coefficient) * np.exp(theta * (a1 * b2 - b1 * a2))
    a, b = a1 + a2, b1 + b2
    out = []
    for r in range(min(i1, j2) + 1):
        cr = comb(i1, r) * comb(j2, r) * factorial(r) * theta ** r
        for s in range(min(j1, i2) + 1):
            cs = comb(j1, s) * comb(i2, s) * factorial(s) * (-theta) ** s
            px = _convolve(_shifted_power(i1 - r, theta * b2), _shifted_power(i2 - s, -theta * b1))
            pp = _convolve(_shifted_power(j1 - s, -theta * a2), _shifted_power(j2 - r, theta * a1))
            c = pref * cr * cs
            for ix, cx in enumerate(px):
                if cx == 0:
                    continue
                for jp, cp in enumerate(pp):
                    if cp != 0:
                        out.append(SymbolTerm(c * cx * cp, a, ix, jp, b))
    return out


def moyal_star(f, g, consts=DEFAULT_CONSTANTS):
    """Exact f * g for symbols in the exponential-polynomial class."""
    theta = 0.5j * consts.hbar
    f, g = canonical(f), canonical(g)
    return canonical([t for tf in f for tg in g for t in _star_terms(tf, tg, theta)])


def derivative(symbol, dx=0, dp=0):
    """Partial derivatives d^dx/dx^dx d^dp/dp^dp of a symbol."""
    terms = canonical(symbol)
    for _ in range(dx):
        nxt = []
        for t in terms:
            a = complex(t.exp_x_rate)
            if a != 0:
                nxt.append(SymbolTerm(t.coefficient * a, a, t.poly_x_degree, t.poly_p_degree, t.exp_p_phase_rate))
            if t.poly_x_degree:
                nxt.append(SymbolTerm(t.coefficient * t.poly_x_degree, a, t.poly_x_degree - 1,
                                      t.poly_p_degree, t.exp_p_phase_rate))
        terms = canonical(nxt)
    for _ in range(dp):
        nxt = []
        for t in terms:
            b = complex(t.exp_p_phase_rate)
            if b != 0:
                nxt.append(SymbolTerm(t.coefficient * b, t.exp_x_rate, t.poly_x_degree, t.poly_p_degree, b))
            if t.poly_p_degree:
                nxt.append(SymbolTerm(t.coefficient * t.poly_p_degree, t.exp_x_rate, t.poly_x_degree,
                                      t.poly_p_degree - 1, b))
        terms = canonical(nxt)
    return terms


def _product(f, g):
    out = []
    for s in f:
        for t in g:
            out.append(SymbolTerm(complex(s.coefficient) * complex(t.coefficient),
                                  complex(s.exp_x_rate) + complex(t.exp_x_rate),
                                  s.poly_x_degree + t.poly_x_degree,
                                  s.poly_p_degree + t.poly_p_degree,
                                  complex(s.exp_p_phase_rate) + complex(t.exp_p_phase_rate)))
    return canonical(out)


def moyal_star_truncated(f, g, order, consts=DEFAULT_CONSTANTS):
    """The bidifferential series of f * g summed through ``order`` (inclusive).

    Independent of :func:`moyal_star`; exact once ``order`` exceeds the
    polynomial degrees and no exponential rates are present.
    """
    theta = 0.5j * consts.hbar
    out = []
    for N in range(order + 1):
        pref = theta ** N / factorial(N)
        for kx in range(N + 1):
            left = derivative(f, dx=kx, dp=N - kx)
            right = derivative(g, dx=N - kx, dp=kx)
            c = pref * comb(N, kx) * (-1) ** (N - kx)
            out.extend(scale(_product(left, right), c))
    return canonical(out)


def star_commutator(f, g, consts=DEFAULT_CONSTANTS):
    return add(moyal_star(f, g, consts), scale(moyal_star(g, f, consts), -1.0))


def conjugate(symbol):
    """Complex conjugate symbol (x, p real)."""
    return canonical([SymbolTerm(np.conj(complex(t.coefficient)), np.conj(complex(t.exp_x_rate)),
                                 t.poly_x_degree, t.poly_p_degree, np.conj(complex(t.exp_p_phase_rate)))
                      for t in symbol])


def evaluate(symbol, x, p):
    """Value of a symbol at arrays x, p (p may be complex)."""
    x = np.asarray(x, dtype=complex)
    p = np.asarray(p, dtype=complex)
    x, p = np.broadcast_arrays(x, p)
    out = np.zeros(x.shape, complex)
    for t in symbol:
        out = out + complex(t.coefficient) * x ** t.poly_x_degree * p ** t.poly_p_degree * np.exp(
            complex(t.exp_x_rate) * x + complex(t.exp_p_phase_rate) * p)
    return out


def morse_hamiltonian(params, consts=DEFAULT_CONSTANTS):
    """H = p^2 / 2m + (hbar^2 kappa^2 / 2m)(exp(-2 alpha x) - b exp(-alpha x))."""
    v = consts.hbar ** 2 * params.kappa ** 2 / (2.0 * consts.mass)
    return canonical([
        term(1.0 / (2.0 * consts.mass), j=2),
        term(v, a=-2.0 * params.alpha),
        term(-v * params.b, a=-params.alpha),
    ])


def _as_function(rho):
    # uniform access: rho(x, p, dx) for symbols or field-like objects
    if hasattr(rho, "evaluate"):
        return rho.evaluate
    sym = canonical(rho)
    cache = {}

    def f(x, p, dx=0):
        if dx not in cache:
            cache[dx] = derivative(sym, dx=dx)
        return evaluate(cache[dx], x, p)

    return f


def hamiltonian_star_left(rho, params, consts=DEFAULT_CONSTANTS):
    """H * rho through Bopp shifts; works for any rho analytic in p.

    H * rho = (1/2m)[p^2 rho - i hbar p rho_x - (hbar^2/4) rho_xx]
              + V0 [exp(-2 alpha x) rho(x, p - i hbar alpha) - b exp(-alpha x) rho(x, p - i hbar alpha/2)].
    """
    f = _as_function(rho)
    hb, m, al = consts.hbar, consts.mass, params.alpha
    v0 = hb ** 2 * params.kappa ** 2 / (2.0 * m)

    def g(x, p):
        x = np.asarray(x, float)
        p = np.asarray(p, complex)
        kin = p * p * f(x, p) - 1j * hb * p * f(x, p, 1) - 0.25 * hb * hb * f(x, p, 2)
        pot = np.exp(-2 * al * x) * f(x, p - 1j * hb * al) - params.b * np.exp(-al * x) * f(x, p - 0.5j * hb * al)
        return kin / (2.0 * m) + v0 * pot

    return g


def hamiltonian_star_right(rho, params, consts=DEFAULT_CONSTANTS):
    """rho * H, the mirror of :func:`hamiltonian_star_left` (opposite shifts)."""
    f = _as_function(rho)
    hb, m, al = consts.hbar, consts.mass, params.alpha
    v0 = hb ** 2 * params.kappa ** 2 / (2.0 * m)

    def g(x, p):
        x = np.asarray(x, float)
        p = np.asarray(p, complex)
        kin = p * p * f(x, p) + 1j * hb * p * f(x, p, 1) - 0.25 * hb * hb * f(x, p, 2)
        pot = np.exp(-2 * al * x) * f(x, p + 1j * hb * al) - params.b * np.exp(-al * x) * f(x, p + 0.5j * hb * al)
        return kin / (2.0 * m) + v0 * pot

    return g


def star_eigen_residual(rho, params, pair, consts=DEFAULT_CONSTANTS, xs=None, ps=None):
    """Sup-norm residuals of H * rho = E_L rho and rho * H = E_R rho.

    ``rho`` is a symbol (list of :class:`SymbolTerm`) or any object with an
    ``evaluate(x, p, dx)`` method analytic in p.  The default grid is
    8 x 8 on x in [0.5, 2.5], p in [-3, 3].  Returns ``res_L``, ``res_R``
    and the sup-norm ``rho_norm`` of rho on the grid.
    """
    xs = np.linspace(0.5, 2.5, 8) if xs is None else np.asarray(xs, float)
    ps = np.linspace(-3.0, 3.0, 8) if ps is None else np.asarray(ps, float)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    f = _as_function(rho)
    r0 = f(X, P)
    left = hamiltonian_star_left(rho, params, consts)(X, P) - pair.E_L * r0
    right = hamiltonian_star_right(rho, params, consts)(X, P) - pair.E_R * r0
    return {
        "res_L": float(np.max(np.abs(left))),
        "res_R": float(np.max(np.abs(right))),
        "rho_norm": float(np.max(np.abs(r0))),
    }

"""Wigner functions of Morse scattering states as Mellin-Barnes residue sums.

With psi_k(x) = exp(alpha x/2) W_{l, ik/alpha}(c0 exp(-alpha x)) (the
normalization of :func:`wall_limits.morse.psi_unbound`), the star
eigenfunction with H * rho = E_L rho and rho * H = E_R rho is

    rho(x, p) = int dy exp(i y p) psi_R(x + hbar y/2) psi_L(x - hbar y/2)
              = (4 c0 / alpha hbar) (1 / 2 pi i) int_{Re s = c} Z**(-s) F_L(s) F_R(s) ds,

where Z = c0**-4 exp(4 alpha x), q = p / (2 alpha hbar) and

    F_L(s) = MW_L(-2(s - iq) - 1/2),   F_R(s) = MW_R(-2(s + iq) - 1/2),
    MW(nu) = int_0^inf y**(nu-1) W_{l,m}(y) dy
           = Gamma(nu+m+1/2) Gamma(nu-m+1/2) 2F1~(nu+m+1/2, nu-m+1/2; nu-l+1; 1/2).

(2F1~ is the regularized function.)  The line Re s = c = -0.1 lies left
of every pole.  For x > (ln c0)/alpha the integrand decays to the right,
and rho is minus the sum of residues at

    s = (n +- ik_L/alpha)/2 + iq,    s = (n +- ik_R/alpha)/2 - iq,    n >= 0.

At each pole the 2F1 belonging to the pole terminates.  Poles closer than
``cluster_tol`` (k_L = k_R at p = 0, or p = +-hbar (k_L + k_R)/2, ...)
are summed together by a trapezoidal rule on a circle around the
cluster.  Every residue is a coefficient times Z**(-s), so x-derivatives
and complex p (the analytic continuation used by Bopp shifts) are exact.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .. import specfun
from ..constants import DEFAULT_CONSTANTS
from .quadrature import gk15

__all__ = [
    "TailTooLargeError",
    "PoleCollisionError",
    "mellin_whittaker",
    "ResidueSeries",
    "eval_star_solution_residues",
    "contour_quadrature",
    "CONTOUR_C",
]

CONTOUR_C = -0.1
CIRCLE_NODES = 64


class TailTooLargeError(ArithmeticError):
    pass


class PoleCollisionError(ArithmeticError):
    pass


def _rgamma(z):
    return complex(specfun.rgamma(complex(z)))


def _gamma(z):
    return complex(np.exp(specfun.loggamma(complex(z))))


def _hyp2f1_reg_terminating(n, b, c, z=0.5):
    # 2F1(-n, b; c; z) / Gamma(c), safe for any c
    total = 0.0j
    term = 1.0 + 0.0j  # (-n)_j (b)_j z^j / j!
    for j in range(n + 1):
        total += term * _rgamma(c + j)
        term *= (j - n) * (b + j) * z / (j + 1)
    return total


def mellin_whittaker(nu, l, m, ctl=None):
    """MW(nu) = int_0^inf y**(nu-1) W_{l,m}(y) dy, continued in nu."""
    a, b, c = nu + m + 0.5, nu - m + 0.5, nu - l + 1.0
    return _gamma(a) * _gamma(b) * specfun.hyp2f1_regularized(a, b, c, 0.5, ctl)


@dataclass
class _Pole:
    s: complex
    family: str
    n: int


@dataclass
class _Expansion:
    # rho(x) = -pref * sum_k coef_k * Z(x)**(-s_k)
    s: np.ndarray
    coef: np.ndarray
    family: list
    index: np.ndarray
    clusters: list = field(default_factory=list)


class ResidueSeries:
    """Residue-sum Wigner function of two Morse scattering states.

    Parameters
    ----------
    params : MorseParams
    pair : StarPair
        Left and right wavenumbers (both states share ``params``).
    n_max : int
        Highest pole index kept in each of the four families.
    cluster_tol : float
        Poles closer than this are treated as one cluster.
    """

    def __init__(self, params, pair, n_max=12, consts=DEFAULT_CONSTANTS, cluster_tol=1e-3, ctl=None):
        if params.kappa <= 0:
            raise ValueError("kappa must be positive")
        self.params = params
        self.pair = pair
        self.n_max = int(n_max)
        self.consts = consts
        self.cluster_tol = cluster_tol
        self.ctl = ctl
        self.l = params.l
        self.mL = 1j * pair.k_L / params.alpha
        self.mR = 1j * pair.k_R / params.alpha
        self.log_c0 = math.log(params.c0)
        self.pref = 4.0 * params.c0 / (params.alpha * consts.hbar)
        self._cache = {}

    # integrand pieces
    def _q(self, p):
        # internal variable: the code below is written for -q of the docstring
        return -p / (2.0 * self.params.alpha * self.consts.hbar)

    def F_L(self, s, q):
        return mellin_whittaker(-2.0 * (s + 1j * q) - 0.5, self.l, self.mL, self.ctl)

    def F_R(self, s, q):
        return mellin_whittaker(-2.0 * (s - 1j * q) - 0.5, self.l, self.mR, self.ctl)

    def log_Z(self, x):
        return -4.0 * self.log_c0 + 4.0 * self.params.alpha * np.asarray(x, dtype=float)

    def poles(self, p):
        q = self._q(p)
        out = []
        for n in range(self.n_max + 1):
            out.append(_Pole(0.5 * (n + self.mL) - 1j * q, "L+", n))
            out.append(_Pole(0.5 * (n - self.mL) - 1j * q, "L-", n))
            out.append(_Pole(0.5 * (n + self.mR) + 1j * q, "R+", n))
            out.append(_Pole(0.5 * (n - self.mR) + 1j * q, "R-", n))
        return out

    def _simple_residue(self, pole, q):
        # residue of F_L F_R at the pole (without Z^-s)
        n = pole.n
        g = -0.5 * (-1) ** n / math.factorial(n)
        fam = pole.family
        if fam[0] == "L":
            nu = -2.0 * (pole.s + 1j * q) - 0.5
            m, other = self.mL, self.F_R(pole.s, q)
        else:
            nu = -2.0 * (pole.s - 1j * q) - 0.5
            m, other = self.mR, self.F_L(pole.s, q)
        c = nu - self.l + 1.0
        free = nu - m + 0.5 if fam[1] == "+" else nu + m + 0.5
        own = g * _gamma(free) * _hyp2f1_reg_terminating(n, free, c)
        return own * other

    def _clusters(self, poles):
        s = np.array([pl.s for pl in poles])
        parent = list(range(len(poles)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        d = np.abs(s[:, None] - s[None, :])
        ii, jj = np.nonzero(np.triu(d < self.cluster_tol, 1))
        for i, j in zip(ii, jj):
            parent[find(i)] = find(j)
        groups = {}
        for i in range(len(poles)):
            groups.setdefault(find(i), []).append(i)
        return list(groups.values()), s

    def expansion(self, p):
        """Coefficients and exponents of the residue sum at momentum ``p``."""
        key = complex(p)
        if key in self._cache:
            return self._cache[key]
        q = self._q(complex(p))
        poles = self.poles(complex(p))
        groups, s_all = self._clusters(poles)
        S, C, fam, idx, clusters = [], [], [], [], []
        for g in groups:
            if len(g) == 1:
                pl = poles[g[0]]
                S.append(pl.s)
                C.append(self._simple_residue(pl, q))
                fam.append(pl.family)
                idx.append(pl.n)
                continue
            centre = complex(np.mean(s_all[g]))
            spread = float(np.max(np.abs(s_all[g] - centre)))
            others = np.delete(s_all, g)
            d_near = float(np.min(np.abs(others - centre))) if others.size else 1.0
            r = min(0.5 * d_near, 0.25)
            if r < 8.0 * spread:
                raise PoleCollisionError("pole cluster too wide for its neighbourhood")
            theta = 2.0 * math.pi * (np.arange(CIRCLE_NODES) + 0.5) / CIRCLE_NODES
            nodes = centre + r * np.exp(1j * theta)
            w = r * np.exp(1j * theta) / CIRCLE_NODES
            nmax_in = max(poles[i].n for i in g)
            for sk, wk in zip(nodes, w):
                S.append(sk)
                C.append(wk * self.F_L(sk, q) * self.F_R(sk, q))
                fam.append("cluster")
                idx.append(nmax_in)
            clusters.append({"centre": centre, "radius": r, "members": [(poles[i].family, poles[i].n) for i in g]})
        exp = _Expansion(np.array(S), np.array(C), fam, np.array(idx), clusters)
        self._cache[key] = exp
        return exp

    def _sum(self, exp, logz, dx):
        w = exp.coef * np.exp(-np.multiply.outer(logz, exp.s))
        if dx:
            w = w * (-4.0 * self.params.alpha * exp.s) ** dx
        return -self.pref * w.sum(axis=-1)

    def evaluate(self, x, p, dx=0):
        """rho (or its dx-th x-derivative) at arrays x, p; p may be complex."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=complex)
        x, p = np.broadcast_arrays(x, p)
        out = np.empty(x.shape, complex)
        flat_x, flat_p, flat_o = x.ravel(), p.ravel(), out.reshape(-1)
        for pv in np.unique(flat_p):
            sel = flat_p == pv
            exp = self.expansion(pv)
            flat_o[sel] = self._sum(exp, self.log_Z(flat_x[sel]), dx)
        return out if out.ndim else complex(out)

    def tail_estimate(self, x, p):
        """Geometric tail bound from the last two simple poles of each family."""
        exp = self.expansion(complex(p))
        logz = float(self.log_Z(x))
        total = 0.0
        for fam in ("L+", "L-", "R+", "R-"):
            sel = [i for i, f in enumerate(exp.family) if f == fam]
            if len(sel) < 2:
                continue
            sel = sorted(sel, key=lambda i: exp.index[i])[-2:]
            mags = [abs(self.pref * exp.coef[i] * np.exp(-logz * exp.s[i])) for i in sel]
            if mags[0] == 0:
                continue
            ratio = mags[1] / mags[0]
            if ratio >= 1:
                return math.inf
            total += mags[1] * ratio / (1.0 - ratio)
        return total


def eval_star_solution_residues(params, pair, pt, n_max=12, consts=DEFAULT_CONSTANTS, max_rel_tail=1e-6,
                                series=None):
    """Residue-sum rho at ``pt``; returns ``(value, tail_estimate)``.

    Raises :class:`TailTooLargeError` when the tail estimate exceeds
    ``max_rel_tail`` times |value| (pass ``None`` to skip the check).
    """
    if not pt.x > math.log(params.c0) / params.alpha:
        raise ValueError("the right-closed contour needs x > ln(2 kappa/alpha)/alpha")
    rs = series if series is not None else ResidueSeries(params, pair, n_max, consts)
    val = complex(rs.evaluate(pt.x, pt.p))
    tail = rs.tail_estimate(pt.x, pt.p)
    if max_rel_tail is not None and tail > max_rel_tail * max(abs(val), 1e-300):
        raise TailTooLargeError(f"tail estimate {tail:.3g} exceeds {max_rel_tail:g} of |rho| = {abs(val):.3g}")
    return val, tail


def contour_quadrature(params, pair, pt, consts=DEFAULT_CONSTANTS, c=CONTOUR_C, T=60.0, abs_tol=1e-12):
    """rho from the line integral along Re s = c, |Im s| <= T (independent of residues)."""
    rs = ResidueSeries(params, pair, 0, consts)
    q = rs._q(pt.p)
    logz = float(rs.log_Z(pt.x))

    def f(tau):
        out = np.empty(tau.shape, complex)
        for i, t in enumerate(tau):
            s = c + 1j * t
            out[i] = np.exp(-s * logz) * rs.F_L(s, q) * rs.F_R(s, q)
        return out

    edges = np.linspace(-T, T, 241)
    val, _ = gk15(f, edges, abs_tol=abs_tol)
    return complex(rs.pref * val / (2.0 * math.pi))

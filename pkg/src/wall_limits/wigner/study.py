"""Convergence of Morse Wigner functions to the half-line Robin form."""
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .. import morse
from ..constants import DEFAULT_CONSTANTS
from .closed_form import rho_halfline_robin
from .quadrature import wigner_transform
from .types import PhaseSpaceField

__all__ = ["SCHEMA_VERSION", "morse_wigner_grid", "align", "limit_phase", "convergence_study", "thread_count"]

SCHEMA_VERSION = 1
# psi is negligible (below ~1e-15 of its peak) once y = c0 exp(-alpha x) > 70
Y_CUTOFF = 70.0


def thread_count(default=1):
    """Worker count from WALL_LIMITS_THREADS (at least 1)."""
    raw = os.environ.get("WALL_LIMITS_THREADS", "")
    try:
        return max(1, int(raw)) if raw else default
    except ValueError:
        return default


class _Row:
    __slots__ = ("x", "p")

    def __init__(self, x, p):
        self.x, self.p = x, p


def morse_wigner_grid(params, k_L, k_R, xs, ps, consts=DEFAULT_CONSTANTS, abs_tol=1e-10, workers=None):
    """Quadrature Wigner transform of Morse states psi_{k_L}, psi_{k_R}.

    Rows are computed independently (optionally on threads) and stored in
    grid order, so results do not depend on scheduling.
    """
    x_cut = (math.log(params.c0) - math.log(Y_CUTOFF)) / params.alpha
    psi_L = lambda x: morse.psi_unbound(params, k_L, x, consts)
    psi_R = psi_L if k_R == k_L else (lambda x: morse.psi_unbound(params, k_R, x, consts))
    xs = np.asarray(xs, float)
    ps = np.asarray(ps, float)

    def row(x):
        return wigner_transform(psi_L, psi_R, _Row(x, ps), consts, support=(x_cut, math.inf),
                                k_scale=max(k_L, k_R), abs_tol=abs_tol)

    n = thread_count() if workers is None else workers
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(row, xs))
    else:
        rows = [row(x) for x in xs]
    return PhaseSpaceField(xs, ps, np.array(rows), "quadrature",
                           meta={"alpha": params.alpha, "kappa": params.kappa, "b": params.b})


def align(values, target):
    """Least-squares complex scalar c minimizing |c values - target|; returns (c, aligned)."""
    v = np.asarray(values).ravel()
    t = np.asarray(target).ravel()
    den = np.vdot(v, v)
    if den == 0:
        raise ZeroDivisionError("cannot align a vanishing field")
    c = np.vdot(v, t) / den
    return complex(c), c * np.asarray(values)


def limit_phase(ft, k, b=None):
    """Phase phi of the limiting sin(kx + phi).

    Fine tuning with length L gives tan(phi) = k L (phi = pi/2 for the
    Neumann flag); a generic b gives Dirichlet, phi = 0.
    """
    if b is not None:
        return 0.0
    if math.isinf(ft.L):
        return 0.5 * math.pi
    return math.atan(k * ft.L)


def convergence_study(ft, k, alphas, xs, ps, consts=DEFAULT_CONSTANTS, b=None, target_phi=None,
                      abs_tol=1e-10, workers=None):
    """Distances of aligned Morse Wigner functions to the half-line Robin form.

    With ``b=None`` each alpha uses kappa = alpha and the fine-tuned b; a
    numeric ``b`` runs the same study without fine tuning.  Returns a
    JSON-serializable report; ``monotone`` says whether the sup-norm
    distances decrease strictly.
    """
    xs = np.asarray(xs, float)
    ps = np.asarray(ps, float)
    if np.any(xs <= 0):
        raise ValueError("grid x-values must be positive")
    phi = limit_phase(ft, k, b) if target_phi is None else float(target_phi)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    target = rho_halfline_robin(k, phi, _Row(X, P), consts)
    t_sup = float(np.max(np.abs(target)))
    t_l2 = float(np.sqrt(np.sum(np.abs(target) ** 2)))
    rows = []
    for alpha in alphas:
        bb = morse.b_fine_tuned(ft, alpha) if b is None else float(b)
        params = morse.MorseParams(alpha=float(alpha), kappa=float(alpha), b=bb)
        field = morse_wigner_grid(params, k, k, xs, ps, consts, abs_tol, workers)
        c, aligned = align(field.values, target)
        diff = aligned - target
        rows.append({
            "alpha": float(alpha),
            "b": bb,
            "phase": morse.scattering_phase(params, k),
            "fit_constant": [c.real, c.imag],
            "sup_distance": float(np.max(np.abs(diff))) / t_sup,
            "l2_distance": float(np.sqrt(np.sum(np.abs(diff) ** 2))) / t_l2,
            "imag_residue": float(np.max(np.abs(field.values.imag)) / max(field.sup_norm(), 1e-300)),
        })
    sups = [r["sup_distance"] for r in rows]
    return {
        "schema_version": SCHEMA_VERSION,
        "fine_tuning": {"n": ft.n, "L": ft.L if math.isfinite(ft.L) else "inf"} if b is None else None,
        "b": b,
        "k": k,
        "target_phi": phi,
        "grid": {"x": xs.tolist(), "p": ps.tolist()},
        "target_sup_norm": t_sup,
        "per_alpha": rows,
        "monotone": all(b2 < a2 for a2, b2 in zip(sups, sups[1:])),
        "final_sup_distance": sups[-1] if sups else None,
    }


def dump_report(report, path):
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

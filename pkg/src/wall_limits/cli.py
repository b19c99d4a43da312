"""Command-line driver: ``wall-limits <study> [options]``.

Each study reads its parameters from defaults, then an optional JSON
config file (``--config``), then explicit flags; later sources win.  A
JSON summary with the resolved config is printed and written to the
output directory, next to any CSV data.  Exit codes: 0 success,
2 a physics threshold failed, 1 an error (validation, I/O, numerics).
"""
import argparse
import json
import math
import os
import sys

import numpy as np
import scipy

from . import __version__, morse, oracle, seba
from .constants import PhysicalConstants
from .kernels import BACKEND
from .wigner import closed_form, moyal, residues, study
from .wigner.types import PhaseSpaceField, StarPair

__all__ = ["main", "run", "emit_plotdata", "ConfigError", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_THRESHOLD = 0, 1, 2


class ConfigError(ValueError):
    pass


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(",") if v.strip()]


def _grid(text):
    """'lo:hi:n' (or a [lo, hi, n] list) to a linspace."""
    parts = text if isinstance(text, (list, tuple)) else str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid spec needs lo:hi:n, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 0 or (n > 1 and not hi > lo):
        raise ConfigError(f"bad grid spec {text!r}")
    return np.linspace(lo, hi, n)


def _boolean(text):
    if isinstance(text, bool):
        return text
    v = str(text).lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _opt_float(text):
    return None if text is None or str(text).lower() in ("none", "") else float(text)


_SCALARS = (int, float, str, _opt_float, _boolean)

# study -> {option: (parser, default, help)}
STUDIES = {
    "seba-limit": {
        "n": (int, 0, "fine-tuning index"),
        "ell": (float, 1.0, "well parameter ell"),
        "k": (float, 1.0, "wavenumber"),
        "alphas": (_floats, "1e2,1e3,1e4", "comma-separated alpha values"),
        "tol": (float, 1e-3, "allowed |tan phi - tan phi_n| at the largest alpha"),
    },
    "seba-resonance": {
        "alpha": (float, 1e3, "inverse well width"),
        "ell": (float, 1.0, "well parameter ell"),
        "k": (float, 1.0, "wavenumber"),
        "n_max": (int, 3, "highest resonance index"),
    },
    "seba-bound": {
        "alpha": (float, 1e4, "inverse well width"),
        "ell": (float, 1.0, "well parameter ell"),
        "n": (int, 0, "fine-tuning index used when kappa is not given"),
        "kappa": (_opt_float, None, "well strength (default: fine-tuned kappa_n)"),
        "tol": (float, 1e-2, "relative tolerance on E against -hbar^2/(2 m L_n^2)"),
    },
    "morse-phase": {
        "alpha": (float, 10.0, "inverse range"),
        "kappa": (float, 10.0, "strength"),
        "b": (float, 2.0, "attraction parameter"),
        "k": (float, 1.0, "wavenumber"),
        "tol": (float, 1e-9, "allowed discrepancy between the two arg A routes"),
    },
    "morse-robin": {
        "n": (int, 0, "fine-tuning index"),
        "L": (float, 1.0, "fine-tuning length"),
        "k": (float, 1.0, "wavenumber"),
        "alpha": (float, 1e3, "inverse range (kappa = alpha)"),
        "tol": (float, 2e-2, "allowed |L_eff - L| / |L|"),
    },
    "morse-bound": {
        "alpha": (float, 5.0, "inverse range"),
        "kappa": (float, 5.0, "strength"),
        "b": (float, 1.5, "attraction parameter"),
        "oracle": (_boolean, True, "cross-check energies by Numerov shooting"),
        "tol": (float, 1e-8, "allowed |E_shoot - E_exact|"),
    },
    "wigner-grid": {
        "source": (str, "closed_form", "closed_form | quadrature | residue_series"),
        "k": (float, 1.0, "wavenumber (closed form; k_L for Morse)"),
        "k_R": (_opt_float, None, "right wavenumber for Morse sources (default k)"),
        "phi": (float, 0.0, "phase of sin(kx + phi) for the closed form"),
        "alpha": (float, 20.0, "Morse inverse range"),
        "kappa": (_opt_float, None, "Morse strength (default alpha)"),
        "b": (_opt_float, None, "Morse b (default: fine-tuned from n, L)"),
        "n": (int, 0, "fine-tuning index"),
        "L": (float, 1.0, "fine-tuning length"),
        "n_max": (int, 12, "residue pole index cutoff"),
        "x": (_grid, "0.5:2.5:8", "x grid lo:hi:n"),
        "p": (_grid, "-3:3:8", "p grid lo:hi:n"),
    },
    "wigner-converge": {
        "n": (int, 0, "fine-tuning index"),
        "L": (float, 1.0, "fine-tuning length"),
        "k": (float, 1.0, "wavenumber"),
        "b": (_opt_float, None, "fixed b instead of fine tuning (Dirichlet study)"),
        "alphas": (_floats, "20,40,80", "comma-separated alpha values"),
        "x": (_grid, "0.5:2.5:8", "x grid lo:hi:n"),
        "p": (_grid, "-3:3:8", "p grid lo:hi:n"),
        "tol": (float, 0.05, "allowed final relative sup distance"),
    },
    "star-residue-check": {
        "alpha": (float, 2.0, "inverse range"),
        "kappa": (float, 2.0, "strength"),
        "b": (float, 1.5, "attraction parameter"),
        "k_L": (float, 1.0, "left wavenumber"),
        "k_R": (float, 1.3, "right wavenumber"),
        "n_max": (int, 24, "residue pole index cutoff"),
        "x": (_grid, "0.6:2:4", "x grid lo:hi:n"),
        "p": (_grid, "-2:2:4", "p grid lo:hi:n"),
        "tol": (float, 1e-8, "allowed residual relative to sup |rho|"),
    },
}
COMMON = {
    "hbar": (float, 1.0, "reduced Planck constant"),
    "mass": (float, 1.0, "particle mass"),
    "out": (str, ".", "output directory"),
}


def _spec(kind):
    return {**STUDIES[kind], **COMMON}


def resolve_config(kind, file_values=None, flag_values=None):
    """Merge defaults, config file and flags; reject unknown keys.

    Returns ``(echo, parsed)``: ``echo`` holds typed scalars and the
    compact text of grid and list specs, for the JSON summary.
    """
    if kind not in STUDIES:
        raise ConfigError(f"unknown study {kind!r}")
    spec = _spec(kind)
    raw = {key: default for key, (_, default, _) in spec.items()}
    for source in (file_values or {}), (flag_values or {}):
        unknown = set(source) - set(spec)
        if unknown:
            raise ConfigError(f"unknown field(s) for {kind}: {', '.join(sorted(unknown))}")
        for key, val in source.items():
            if val is not None:
                raw[key] = val
    parsed, echo = {}, {}
    for key, (conv, _, _) in spec.items():
        val = raw[key]
        try:
            parsed[key] = conv(val) if val is not None else None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {val!r} ({exc})") from exc
        echo[key] = parsed[key] if conv in _SCALARS else val
    return echo, parsed


def _threshold(name, value, limit, passed=None):
    ok = bool(value <= limit) if passed is None else bool(passed)
    return {"name": name, "value": value, "limit": limit, "passed": ok}


def emit_plotdata(field, path):
    """Write ``field`` as CSV (x, p, re, im, provenance); returns the path."""
    if not isinstance(field, PhaseSpaceField):
        raise TypeError("emit_plotdata needs a PhaseSpaceField")
    field.to_csv(path)
    return path


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(v if isinstance(v, str) else "%.17g" % v for v in r) + "\n")


def _study_seba_limit(c, consts, out):
    lim = seba.limit_robin_data(c["n"], c["ell"], c["k"])
    rows, errs = [], []
    for a in c["alphas"]:
        st = seba.solve_scattering(seba.SebaParams(a, c["ell"], lim.kappa_n), c["k"], consts)
        t = math.tan(st.phase)
        rows.append((a, t, t - lim.tan_phi_n))
        errs.append(abs(t - lim.tan_phi_n))
    path = os.path.join(out, "seba_limit.csv")
    _write_csv(path, ["alpha", "tan_phi", "error"], rows)
    scaled = [e * a for e, a in zip(errs, c["alphas"])]
    C = math.exp(np.mean(np.log(scaled)))
    th = [_threshold("final_error", errs[-1], c["tol"]),
          _threshold("first_order_rate", max(s / C for s in scaled), 10.0,
                     all(0.1 * C <= s <= 10 * C for s in scaled))]
    return {"tan_phi_limit": lim.tan_phi_n, "L_n": lim.L_n, "kappa_n": lim.kappa_n,
            "rate_constant": C, "csv": path}, th


def _study_seba_resonance(c, consts, out):
    params = seba.SebaParams(c["alpha"], c["ell"], 0.0)
    res = seba.find_resonances(params, c["k"], c["n_max"])
    worst = 0.0
    for r in res:
        j = seba.interior_wavenumber(seba.SebaParams(c["alpha"], c["ell"], r["kappa_at_resonance"]), c["k"])
        r["cos_j_over_alpha"] = math.cos(j / c["alpha"])
        r["kappa_n"] = math.pi * (r["n"] + 0.5) / c["ell"]
        worst = max(worst, abs(r["cos_j_over_alpha"]))
    return {"resonances": res}, [_threshold("neumann_point", worst, 1e-12)]


def _study_seba_bound(c, consts, out):
    lim = seba.limit_robin_data(c["n"], c["ell"], 1.0)
    kappa = lim.kappa_n if c["kappa"] is None else c["kappa"]
    st = seba.solve_bound_state(seba.SebaParams(c["alpha"], c["ell"], kappa), consts)
    if st is None:
        return {"bound_state": None}, [_threshold("bound_state_exists", 1.0, 0.0, False)]
    target = -(consts.hbar ** 2) / (2.0 * consts.mass * lim.L_n ** 2)
    rel = abs(st.energy - target) / abs(target)
    th = []
    if c["kappa"] is None:
        th.append(_threshold("energy_vs_limit", rel, c["tol"]))
    return {"energy": st.energy, "decay_constant": st.decay_constant, "limit_energy": target,
            "limit_decay_constant": 1.0 / lim.L_n, "kappa": kappa}, th


def _study_morse_phase(c, consts, out):
    params = morse.MorseParams(c["alpha"], c["kappa"], c["b"])
    g, s = morse.arg_A_both(params, c["k"])
    amp, delta = morse.asymptotic_form(params, c["k"])
    res = {"arg_A_gamma": g, "arg_A_series": s, "asymptotic_amplitude": amp, "asymptotic_delta": delta,
           "scattering_phase": morse.scattering_phase(params, c["k"])}
    if s is None:
        return res, [_threshold("series_route_available", 1.0, 0.0, False)]
    diff = abs(math.remainder(s - g, 2 * math.pi))
    return res, [_threshold("route_agreement", diff, c["tol"])]


def _study_morse_robin(c, consts, out):
    ft = morse.FineTuning(c["n"], c["L"])
    b = morse.b_fine_tuned(ft, c["alpha"])
    params = morse.MorseParams(c["alpha"], c["alpha"], b)
    L_eff = morse.extract_robin_length(params, c["k"])
    err = abs(L_eff - c["L"])
    return ({"b": b, "arg_A": morse.arg_A(params, c["k"]), "L_eff": L_eff, "abs_error": err,
             "halfline_robin_length": -L_eff},
            [_threshold("robin_length", err / abs(c["L"]), c["tol"])])


def _study_morse_bound(c, consts, out):
    params = morse.MorseParams(c["alpha"], c["kappa"], c["b"])
    states = morse.bound_states(params, consts)
    rows = [{"nu": s.nu, "energy": s.energy, "exponent": s.exponent} for s in states]
    th = []
    if c["oracle"] and states:
        V = oracle.morse_sampler(params, consts, x_max=30.0)
        worst = 0.0
        for r in rows:
            E = r["energy"]
            gap = min([abs(E - o["energy"]) for o in rows if o is not r] + [abs(E)])
            lo, hi = E - 0.3 * gap, min(E + 0.3 * gap, -1e-12)
            r["shooting_energy"] = oracle.shoot_bound_state(V, (lo, hi), consts)["E"]
            worst = max(worst, abs(r["shooting_energy"] - E))
        th.append(_threshold("oracle_energy", worst, c["tol"]))
    return {"states": rows}, th


def _morse_for_grid(c):
    alpha = c["alpha"]
    kappa = alpha if c["kappa"] is None else c["kappa"]
    b = morse.b_fine_tuned(morse.FineTuning(c["n"], c["L"]), alpha) if c["b"] is None else c["b"]
    return morse.MorseParams(alpha, kappa, b)


class _Pt:
    __slots__ = ("x", "p")

    def __init__(self, x, p):
        self.x, self.p = x, p


def _study_wigner_grid(c, consts, out):
    xs, ps = c["x"], c["p"]
    src = c["source"]
    k_R = c["k"] if c["k_R"] is None else c["k_R"]
    info = {}
    if src == "closed_form":
        X, P = np.meshgrid(xs, ps, indexing="ij")
        vals = closed_form.rho_halfline_robin(c["k"], c["phi"], _Pt(X, P), consts) if xs.size and ps.size \
            else np.zeros((xs.size, ps.size))
        field = PhaseSpaceField(xs, ps, vals, "closed_form")
    elif src == "quadrature":
        params = _morse_for_grid(c)
        field = study.morse_wigner_grid(params, c["k"], k_R, xs, ps, consts)
        info["morse"] = {"alpha": params.alpha, "kappa": params.kappa, "b": params.b}
    elif src == "residue_series":
        params = _morse_for_grid(c)
        rs = residues.ResidueSeries(params, StarPair.from_wavenumbers(c["k"], k_R, consts), c["n_max"], consts)
        X, P = np.meshgrid(xs, ps, indexing="ij")
        vals = rs.evaluate(X, P) if xs.size and ps.size else np.zeros((xs.size, ps.size))
        field = PhaseSpaceField(xs, ps, vals, "residue_series")
        tails = [rs.tail_estimate(x, p) for x in xs for p in ps]
        info["morse"] = {"alpha": params.alpha, "kappa": params.kappa, "b": params.b}
        info["max_tail_estimate"] = max(tails) if tails else 0.0
    else:
        raise ConfigError(f"unknown source {src!r}")
    path = os.path.join(out, f"wigner_{src}.csv")
    emit_plotdata(field, path)
    info.update({"csv": path, "points": int(xs.size * ps.size),
                 "sup_norm": field.sup_norm() if field.values.size else 0.0})
    return info, []


def _study_wigner_converge(c, consts, out):
    ft = morse.FineTuning(c["n"], c["L"])
    rep = study.convergence_study(ft, c["k"], c["alphas"], c["x"], c["p"], consts, b=c["b"])
    path = os.path.join(out, "wigner_converge_report.json")
    study.dump_report(rep, path)
    th = [_threshold("monotone_decrease", 0.0 if rep["monotone"] else 1.0, 0.0, rep["monotone"]),
          _threshold("final_sup_distance", rep["final_sup_distance"], c["tol"])]
    return {"report": path, "per_alpha": rep["per_alpha"], "target_phi": rep["target_phi"]}, th


def _study_star_residue(c, consts, out):
    params = morse.MorseParams(c["alpha"], c["kappa"], c["b"])
    pair = StarPair.from_wavenumbers(c["k_L"], c["k_R"], consts)
    rs = residues.ResidueSeries(params, pair, c["n_max"], consts)
    r = moyal.star_eigen_residual(rs, params, pair, consts, xs=c["x"], ps=c["p"])
    rel = max(r["res_L"], r["res_R"]) / max(r["rho_norm"], 1e-300)
    return r, [_threshold("star_residual", rel, c["tol"])]


_RUNNERS = {
    "seba-limit": _study_seba_limit,
    "seba-resonance": _study_seba_resonance,
    "seba-bound": _study_seba_bound,
    "morse-phase": _study_morse_phase,
    "morse-robin": _study_morse_robin,
    "morse-bound": _study_morse_bound,
    "wigner-grid": _study_wigner_grid,
    "wigner-converge": _study_wigner_converge,
    "star-residue-check": _study_star_residue,
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def run(kind, file_values=None, flag_values=None):
    """Run one study; returns ``(exit_code, summary_dict)``."""
    summary = {"schema_version": SCHEMA_VERSION, "study": kind,
               "versions": {"wall_limits": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                            "backend": BACKEND}}
    try:
        raw, cfg = resolve_config(kind, file_values, flag_values)
        summary["config"] = raw
        consts = PhysicalConstants(cfg["hbar"], cfg["mass"])
        os.makedirs(cfg["out"], exist_ok=True)
        results, thresholds = _RUNNERS[kind](cfg, consts, cfg["out"])
    except (seba.NoRootError, oracle.NoSignChangeError, residues.TailTooLargeError) as exc:
        return _finish(summary, "error", EXIT_ERROR, error=("numerical", exc))
    except (ConfigError, ValueError, TypeError) as exc:
        return _finish(summary, "error", EXIT_ERROR, error=("validation", exc))
    except OSError as exc:
        return _finish(summary, "error", EXIT_ERROR, error=("io", exc))
    except (ArithmeticError, FloatingPointError, RuntimeError) as exc:
        return _finish(summary, "error", EXIT_ERROR, error=("numerical", exc))
    summary["results"] = results
    summary["thresholds"] = thresholds
    failed = [t for t in thresholds if not t["passed"]]
    if failed:
        return _finish(summary, "threshold_failed", EXIT_THRESHOLD)
    return _finish(summary, "ok", EXIT_OK)


def _finish(summary, status, code, error=None):
    summary["status"] = status
    summary["exit_code"] = code
    if error is not None:
        kind_, exc = error
        summary["error"] = {"code": kind_, "type": type(exc).__name__, "message": str(exc)}
    return code, _jsonable(summary)


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors: exit 1, keeping 2 for thresholds
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _build_parser():
    ap = _Parser(prog="wall-limits", description=__doc__.splitlines()[0],
                 epilog="Grid specs starting with '-' need the '=' form, e.g. --p=-3:3:8.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="study", required=True)
    for kind in STUDIES:
        sp = sub.add_parser(kind, help=f"run the {kind} study", epilog=ap.epilog)
        sp.add_argument("--config", help="JSON file with study fields")
        for key, (_, default, helptext) in _spec(kind).items():
            flag = "--" + key.replace("_", "-")
            sp.add_argument(flag, dest=key, default=None, help=f"{helptext} (default: {default})")
    return ap


def main(argv=None):
    ap = _build_parser()
    args = ap.parse_args(argv)
    kind = args.study
    flags = {k: v for k, v in vars(args).items() if k not in ("study", "config") and v is not None}
    file_values = None
    if args.config:
        try:
            with open(args.config) as fh:
                file_values = json.load(fh)
            if not isinstance(file_values, dict):
                raise ConfigError("config file must hold a JSON object")
        except (OSError, ValueError) as exc:
            code, summary = _finish({"schema_version": SCHEMA_VERSION, "study": kind}, "error", EXIT_ERROR,
                                    error=("io" if isinstance(exc, OSError) else "validation", exc))
            print(json.dumps(summary, indent=2, sort_keys=True))
            return code
    code, summary = run(kind, file_values, flags)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    out = summary.get("config", {}).get("out")
    if out and os.path.isdir(out):
        with open(os.path.join(out, kind.replace("-", "_") + "_summary.json"), "w", newline="\n") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

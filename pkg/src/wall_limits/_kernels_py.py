"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def kummer_series(mu, nu, z, rel_tol, max_terms):
    """Sum the Kummer series M(mu, nu, z) for every entry of ``z``.

    Returns ``(values, nterms)``; ``nterms`` is -1 where ``max_terms`` was hit.
    """
    z = np.ascontiguousarray(z, dtype=complex).ravel()
    az = np.abs(z)
    term = np.ones_like(z)
    total = np.ones_like(z)
    nterms = np.full(z.shape, -1, dtype=np.int64)
    active = np.ones(z.shape, dtype=bool)
    n = 0
    while active.any():
        idx = np.nonzero(active)[0]
        t = term[idx] * (mu + n) / (nu + n) * z[idx] / (n + 1)
        s = total[idx] + t
        term[idx] = t
        total[idx] = s
        n += 1
        done = (np.abs(t) <= rel_tol * np.abs(s)) & (n >= az[idx])
        nterms[idx[done]] = n
        active[idx[done]] = False
        if n >= max_terms:
            break
    return total, nterms


def numerov_march(f, h, psi0, psi1, big=1e150):
    """March psi'' = f psi with the Numerov recursion from two seed values.

    Uses the summed form u = (1 - h^2 f / 12) psi, u[i+1] - u[i] = du with
    du += h^2 f psi, so roundoff does not grow with the number of steps.
    Returns ``(psi, renorm)``; when |psi| exceeds ``big`` the whole history is
    divided by ``big`` and ``renorm`` counts how often that happened.
    """
    f = np.asarray(f, dtype=float).tolist()
    n = len(f)
    c = h * h / 12.0
    hh = h * h
    psi = [0.0] * n
    psi[0] = float(psi0)
    if n > 1:
        psi[1] = float(psi1)
    renorm = 0
    if n < 3:
        return np.array(psi), renorm
    u = (1.0 - c * f[1]) * psi[1]
    du = u - (1.0 - c * f[0]) * psi[0]
    for i in range(1, n - 1):
        du += hh * f[i] * psi[i]
        u += du
        psi[i + 1] = u / (1.0 - c * f[i + 1])
        if abs(psi[i + 1]) > big:
            psi[: i + 2] = [v / big for v in psi[: i + 2]]
            u /= big
            du /= big
            renorm += 1
    return np.array(psi), renorm

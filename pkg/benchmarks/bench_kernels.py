"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints the best-of-N wall time per kernel and backend, the speed-up and
the largest difference between the two backends' outputs.
"""
import argparse
import timeit

import numpy as np

from wall_limits import _kernels_py as pure

try:
    from wall_limits import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def cases():
    z = np.linspace(0.0, 4.0, 2000).astype(complex)
    mu, nu = 0.25 + 0.1j, 1.0 + 0.2j
    x = np.linspace(-1.0, 40.0, 200001)
    f = 2.0 * (2.0 * np.exp(-4.0 * x) - 3.0 * np.exp(-2.0 * x)) - 1.0
    h = x[1] - x[0]
    z1 = np.array([2.5 + 0.0j])

    def scalar_calls(m):
        for _ in range(1000):
            out = m.kummer_series(mu, nu, z1, 1e-13, 10000)
        return out

    return {
        "kummer_series (1 point x 1000)": (scalar_calls, lambda r: r[0]),
        "kummer_series (2000 points)": (lambda m: m.kummer_series(mu, nu, z, 1e-13, 10000), lambda r: r[0]),
        "numerov_march (200001 steps)": (lambda m: m.numerov_march(f, h, 1e-10, 1.0001e-10), lambda r: r[0]),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':32s} {'python [s]':>12s} {'compiled [s]':>13s} {'speed-up':>9s} {'max diff':>10s}")
    for name, (call, pick) in cases().items():
        t_py = min(timeit.repeat(lambda: call(pure), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:32s} {t_py:12.4g} {'n/a':>13s}")
            continue
        t_c = min(timeit.repeat(lambda: call(compiled), number=1, repeat=args.repeat))
        a, b = pick(call(pure)), pick(call(compiled))
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        print(f"{name:32s} {t_py:12.4g} {t_c:13.4g} {t_py / t_c:9.1f} {diff:10.2g}")


if __name__ == "__main__":
    main()

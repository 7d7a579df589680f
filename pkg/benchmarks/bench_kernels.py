"""Compare the compiled and numpy |f| kernels on the sampling hot path.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
import argparse
import time

import numpy as np

from archzeta import parse_polynomial
from archzeta._core import _kernels_py

try:
    from archzeta._core import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

CASES = {
    "x^2+y^3": "x^2 + y^3",
    "whitney": "x^2 - y^2*z",
    "example_4var": "z2^2*z3^3*z4 + z1^2*z3*z4^3 + z1^2*z2^2*z3*z4",
}


def _dense(deg=6):
    base = parse_polynomial("x + y + z + 1")
    out = base
    for _ in range(deg - 1):
        out = out * base
    return out


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=1 << 20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    if _kernels_c is None:
        print("compiled kernel not built; only the numpy fallback is timed")
    print(f"{'case':<14}{'terms':>6}{'numpy s':>10}{'cython s':>10}{'speedup':>9}{'max diff/scale':>16}")
    polys = [(name, parse_polynomial(text)) for name, text in CASES.items()] + [("dense_deg6", _dense())]
    for name, f in polys:
        exps, cre, cim = f.packed()
        re = rng.normal(0, 0.7, (args.points, f.nvars))
        im = rng.normal(0, 0.7, (args.points, f.nvars))
        tp = best_of(lambda: _kernels_py.abs_poly(re, im, exps, cre, cim), args.repeat)
        if _kernels_c is None:
            print(f"{name:<14}{len(exps):>6}{tp:>10.3f}{'-':>10}{'-':>9}{'-':>16}")
            continue
        tc = best_of(lambda: _kernels_c.abs_poly(re, im, exps, cre, cim), args.repeat)
        a = _kernels_py.abs_poly(re, im, exps, cre, cim)
        b = _kernels_c.abs_poly(re, im, exps, cre, cim)
        # relative to the block scale: pointwise ratios blow up at cancellations near zeros of f
        rel = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
        print(f"{name:<14}{len(exps):>6}{tp:>10.3f}{tc:>10.3f}{tp / tc:>8.1f}x{rel:>16.2e}")


if __name__ == "__main__":
    main()

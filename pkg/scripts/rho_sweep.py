"""Fit the time exponent of the second-moment bound and compare with rho.

    python scripts/rho_sweep.py --beta 1 --alpha 0.5 --hurst 0.75 --d 1
"""

import argparse

import numpy as np

from fracheat import moments as Mo
from fracheat.model import ModelParams, exponents


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--hurst", type=float, default=0.75)
    ap.add_argument("--tmin", type=float, default=1e2)
    ap.add_argument("--tmax", type=float, default=1e6)
    ap.add_argument("--points", type=int, default=17)
    args = ap.parse_args()

    p = ModelParams(args.d, args.alpha, args.beta, args.hurst)
    rho = exponents(p).rho
    C = Mo.calibrate_c_growth(p)
    ts = np.geomspace(args.tmin, args.tmax, args.points)
    print(f"# C_growth = {C:.6g}, rho = {rho:.6g}")
    print("t\tlog_bound\tlog_bound(10C)")
    rows = [(t, Mo.upper_bound_series(p, t, C).log_sum, Mo.upper_bound_series(p, t, 10 * C).log_sum) for t in ts]
    for t, a, b in rows:
        print(f"{t:.6g}\t{a:.10g}\t{b:.10g}")
    s1 = Mo.exponent_fit(ts, [r[1] for r in rows]).slope
    s10 = Mo.exponent_fit(ts, [r[2] for r in rows]).slope
    print(f"# slope = {s1:.6f} (10C: {s10:.6f}), rel. error vs rho = {abs(s1 / rho - 1):.2e}")


if __name__ == "__main__":
    main()

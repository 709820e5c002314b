"""Series verdict of the second-moment bound across alpha for fixed beta.

    python scripts/existence_dichotomy.py --beta 1 --d 3
"""

import argparse

import numpy as np

from fracheat import moments as Mo
from fracheat.model import ModelParams, existence_condition


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--hurst", type=float, default=0.75)
    ap.add_argument("--t", type=float, default=10.0)
    ap.add_argument("--c-growth", type=float, default=1.0)
    ap.add_argument("--step", type=float, default=0.3)
    args = ap.parse_args()

    print("alpha\tmethod\tcertified\talpha<beta")
    mismatch = 0
    for a in np.arange(args.step, args.d - 1e-9, args.step):
        p = ModelParams(args.d, round(float(a), 10), args.beta, args.hurst)
        sb = Mo.upper_bound_series(p, args.t, args.c_growth)
        exists = existence_condition(p)
        mismatch += sb.certified_tail != exists
        print(f"{p.alpha:g}\t{sb.method}\t{sb.certified_tail}\t{exists}")
    print(f"# mismatches: {mismatch}")


if __name__ == "__main__":
    main()

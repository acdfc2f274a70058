"""Sweep the amplitude of the near-extremal family and print Hardy ratios.

Large amplitudes settle to a finite limit inside the two-sided bounds;
small amplitudes blow up, which is why the family is taken as A -> infinity.
"""

import argparse

import numpy as np

from revhardy.exponents import constant_bounds, make_exponents
from revhardy.hardy import (PiecewisePowerFunction, d1_profile, extremal_family,
                            hardy_ratio, power_weights)
from revhardy.spaces import make_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--space", default="euclidean:1")
    ap.add_argument("--p", type=float, default=-1.0)
    ap.add_argument("--q", type=float, default=-1.0)
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--beta", type=float, default=-1.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--f1-exponent", type=float, default=1.0,
                    help="power of f1 on the amplitude region")
    ap.add_argument("--decades", default="-3:6:19", help="log10 A grid start:stop:num")
    args = ap.parse_args()

    space = make_space(args.space)
    w, e = power_weights(args.alpha, args.beta), make_exponents(args.p, args.q)
    D = d1_profile(space, w, e).infimum
    lo, hi = constant_bounds(e, D)
    f1 = PiecewisePowerFunction(args.f1_exponent, args.f1_exponent)
    a, b, n = args.decades.split(":")
    print(f"# D = {D:.10g}, bounds ({lo:.10g}, {hi:.10g})")
    print(f"{'A':>12} {'ratio':>18}")
    for A in np.logspace(float(a), float(b), int(n)):
        g = extremal_family(space, w.v, args.t, A, f1, e)
        print(f"{A:12.4g} {hardy_ratio(space, g, w, e):18.12g}")


if __name__ == "__main__":
    main()

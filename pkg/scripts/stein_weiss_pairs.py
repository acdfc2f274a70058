"""Estimate the weighted bilinear form on seeded pairs and compare with the
constructive lower constant.

On the real line each pair is also evaluated by deterministic quadrature,
so the Monte Carlo error can be read off directly.
"""

import argparse
import math

from revhardy.bilinear import (DivergentFlag, counter_norm, generate_pairs, line_sw_form,
                               lower_constants, sw_form, sw_param_check)
from revhardy.spaces import make_space


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--space", default="euclidean:1")
    ap.add_argument("--p", type=float, default=-1.0)
    ap.add_argument("--q", type=float, default=-1.0)
    ap.add_argument("--alpha", type=float, default=1.2)
    ap.add_argument("--beta", type=float, default=-1.8)
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    space = make_space(args.space)
    P = sw_param_check(space, args.p, args.q, args.alpha, args.beta)
    lowers = lower_constants(P)
    lower = max(lowers.values())
    line = space.group is not None and space.group.dim == 1
    print(f"# lambda = {P.lam:.6g}, tail exponent = {P.tail_exponent:.6g}, lower = {lowers}")
    for i, (f, h) in enumerate(generate_pairs(P, args.pairs, args.seed)):
        norm = counter_norm(f, P.exps.q_conj, space) * counter_norm(h, P.exps.p, space)
        est = sw_form(space, f, h, P, args.samples, args.seed, stream=i)
        if isinstance(est, DivergentFlag):
            print(f"pair {i}: left side infinite ({est.reason})")
            continue
        quad = line_sw_form(f, h, P) if line else math.nan
        print(f"pair {i}: mc {est.mean:.6g} +- {est.std_error:.2g}  quad {quad:.8g}  "
              f"ratio {est.mean / norm:.6g}  ratio/lower {est.mean / norm / lower:.4g}")


if __name__ == "__main__":
    main()

"""Sup error of random and greedy atom selection as a function of d.

Random sampling should decay like d^(-1/2); the a priori certificate
``4 R e sqrt(q - 1) / sqrt(d)`` is printed alongside.

    python scripts/sampling_rate.py --n 8 --N 40 --p 1 --draws 200
"""
import argparse

import numpy as np

from lpreduce import change_of_measure, decompose, greedy_sample, random_ball, random_sample


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--N", type=int, default=40)
    ap.add_argument("--p", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=20240)
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--d", type=lambda s: [int(x) for x in s.split(",")],
                    default=[25, 50, 100, 200, 400, 800, 1600])
    args = ap.parse_args()

    _, ps = change_of_measure(random_ball(args.n, args.N, args.p, args.seed))
    dec = decompose(ps)
    print(f"{'d':>6} {'random mean':>12} {'random sd':>10} {'greedy':>10} {'certificate':>12}")
    for d in args.d:
        errs = [random_sample(dec, ps, d, seed=s).achieved_sup_error for s in range(args.draws)]
        g = greedy_sample(dec, ps, d)
        print(f"{d:>6} {np.mean(errs):>12.5f} {np.std(errs):>10.5f} "
              f"{g.achieved_sup_error:>10.5f} {g.certificate_error:>12.4f}")


if __name__ == "__main__":
    main()

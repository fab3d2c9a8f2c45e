"""Greedy reduction at the worst-case dimension on random ball instances.

Writes one CSV row per instance: sizes, K, d, achieved error and runtime.
Instances with d * m * n^2 above --max-ops are listed as skipped.

    python scripts/worst_case_sweep.py --count 50 --out sweep.csv
"""
import argparse
import csv
import sys
import time

from lpreduce import SamplerConfig, incompressibility, random_ball, reduce, required_dimension


def instance(i):
    n = (8, 12, 16)[i % 3]
    p = (1.0, 2.0, 3.0)[(i // 3) % 3]
    eps = (0.25, 0.5)[(i // 9) % 2]
    return n, p, eps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-ops", type=float, default=1e10)
    ap.add_argument("--mode", default="greedy", choices=["greedy", "random", "adaptive"])
    ap.add_argument("--out")
    args = ap.parse_args()

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(out)
    w.writerow(["seed", "n", "N", "p", "eps", "K", "d", "achieved_eps", "runtime", "status"])
    for i in range(args.count):
        n, p, eps = instance(i)
        ps = random_ball(n, n * n, p, seed=i)
        K = incompressibility(ps)
        d = required_dimension(p, K, n, eps)
        if d * ps.m * n * n > args.max_ops:
            w.writerow([i, n, ps.m, p, eps, K, d, "", "", "skipped"])
            continue
        t0 = time.perf_counter()
        emb = reduce(ps, SamplerConfig(mode=args.mode, epsilon=eps, d_cap=d))
        w.writerow([i, n, ps.m, p, eps, K, emb.d, emb.achieved_epsilon,
                    round(time.perf_counter() - t0, 3),
                    "ok" if emb.achieved_epsilon <= eps else "missed"])
        out.flush()
    if args.out:
        out.close()


if __name__ == "__main__":
    main()

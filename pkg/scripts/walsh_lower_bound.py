"""Compare the dimension used on the Walsh set with the linear lower bound.

For each (m, p) the Walsh set is reduced in adaptive mode, the resulting
linear map is audited, and d is printed next to the bound for that eps.

    python scripts/walsh_lower_bound.py --m 2,3,4 --p 1,1.5,3 --eps 0.1
"""
import argparse

from lpreduce import (
    SamplerConfig,
    audit_linear_map,
    eps_isometric_moduli,
    linear_lower_bound,
    reduce,
    walsh_set,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=lambda s: [int(x) for x in s.split(",")], default=[2, 3, 4])
    ap.add_argument("--p", type=lambda s: [float(x) for x in s.split(",")],
                    default=[1.0, 1.5, 3.0])
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--d-cap", type=int, default=1 << 14)
    args = ap.parse_args()

    print(f"{'m':>2} {'p':>4} {'n':>4} {'d':>6} {'lower':>8} {'achieved':>10} "
          f"{'fallback':>8} {'audit':>6}")
    for m in args.m:
        for p in args.p:
            ps = walsh_set(m, p)
            mod = eps_isometric_moduli(p, args.eps)
            lower = linear_lower_bound(p, ps.n, mod)
            emb = reduce(ps, SamplerConfig(mode="adaptive", epsilon=args.eps, d_cap=args.d_cap))
            T = emb.operator.as_matrix(ps.m) * ps.m ** (1 / p)
            rep = audit_linear_map(p, m, T, mod)
            print(f"{m:>2} {p:>4g} {ps.n:>4} {emb.d:>6} {lower:>8.3f} "
                  f"{emb.achieved_epsilon:>10.2e} {str(emb.fallback):>8} "
                  f"{'ok' if rep.bound_holds else 'FAIL':>6}")


if __name__ == "__main__":
    main()

"""Command-line interface: ``lpreduce {reduce,verify,gen,bound,bench}``.

Exit codes: 0 success, 1 bad input, 2 guarantee failure (random retries
exhausted, greedy bound missed, or verification found violating pairs).
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time

import numpy as np

from . import bound, fileio, gen
from .core import incompressibility
from .embed import reduce, verify
from .errors import GuaranteeViolated, LpReduceError, RetriesExhausted
from .sampler import SamplerConfig, required_dimension

log = logging.getLogger("lpreduce")

EXIT_OK, EXIT_INPUT, EXIT_GUARANTEE = 0, 1, 2


def _report_lines(ps, emb) -> list[str]:
    lines = [
        f"n               {ps.n}",
        f"m               {ps.m}",
        f"p               {ps.p!r}",
        f"K               {incompressibility(ps)!r}",
        f"theoretical d   {emb.theoretical_d}",
        f"actual d        {emb.d}",
        f"target eps      {emb.epsilon!r}",
        f"achieved eps    {emb.achieved_epsilon!r}",
        f"mode            {emb.mode}",
    ]
    if emb.fallback:
        lines.append("note            no d <= cap reached eps; exact embedding used")
    if emb.eps_outside_unit:
        lines.append("note            eps >= 1 is outside the range of the dimension bound")
    return lines


def cmd_reduce(args) -> int:
    ps = fileio.read_point_set(args.input, p=args.p, uniform_weights=args.uniform_weights)
    cfg = SamplerConfig(
        mode=args.mode, epsilon=args.eps, d_override=args.d, q_exponent=args.q,
        seed=args.seed, max_retries=args.max_retries, d_cap=args.d_cap,
    )
    status = EXIT_OK
    t0 = time.perf_counter()
    try:
        emb = reduce(ps, cfg)
    except (RetriesExhausted, GuaranteeViolated) as exc:
        log.error("%s", exc)
        emb, status = exc.embedding, EXIT_GUARANTEE
    elapsed = time.perf_counter() - t0
    fileio.write_embedding(emb, args.out)
    lines = _report_lines(ps, emb)
    if args.report:
        # no timing in the file, so repeated runs are byte-identical
        with open(args.report, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    print("\n".join(lines + [f"wall time       {elapsed:.3f} s"]))
    return status


def cmd_verify(args) -> int:
    ps = fileio.read_point_set(args.points, p=args.p, uniform_weights=args.uniform_weights)
    emb = fileio.read_embedding(args.embedding)
    rep = verify(ps, emb, eps=args.eps)
    print(f"max additive error  {rep.max_over_eps!r}")
    print(f"eps                 {rep.eps!r}")
    print(f"pairs violating     {rep.pairs_violating} / {rep.pairs.shape[0]}")
    if args.table:
        with open(args.table, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(rep.pairs.dtype.names)
            for row in rep.pairs.tolist():
                w.writerow([repr(x) for x in row])
    return EXIT_OK if rep.ok else EXIT_GUARANTEE


def _generate(args):
    if args.kind == "ball":
        return gen.random_ball(args.n, args.N or args.n**2, args.p, args.seed)
    if args.kind == "walsh":
        return gen.walsh_set(args.m, args.p)
    if args.kind == "sphere":
        ps = gen.spike_sphere(args.n, args.N, identical=args.identical)
        return gen.haar_rotate(ps, args.seed) if args.rotate else ps
    return gen.random_simple(args.seed, args.n or 20, args.N or 20)


def cmd_gen(args) -> int:
    ps = _generate(args)
    fileio.write_point_set(ps, args.out)
    print(f"wrote {args.kind} set: n={ps.n} m={ps.m} p={ps.p!r} "
          f"K={incompressibility(ps)!r} -> {args.out}")
    return EXIT_OK


def cmd_bound(args) -> int:
    K = args.K
    if args.points:
        K = incompressibility(fileio.read_point_set(args.points))
    if args.omega is not None:
        moduli = bound.ModuliPair(args.omega, args.Omega if args.Omega else args.omega)
    else:
        moduli = bound.eps_isometric_moduli(args.p, args.eps)
    out = {"p": args.p, "n": args.n, "eps": args.eps,
           "omega1": moduli.omega1, "Omega1": moduli.Omega1}
    try:
        out["linear_lower_bound"] = bound.linear_lower_bound(args.p, args.n, moduli)
    except (bound.ExponentTwo, bound.BadN) as exc:
        out["linear_lower_bound"] = None
        out["lower_bound_note"] = str(exc)
    if K is not None and args.eps is not None:
        out["K"] = K
        out["upper_dimension"] = required_dimension(args.p, K, args.n, args.eps)
    if args.audit:
        T = np.asarray(json.loads(open(args.audit).read()), dtype=np.float64)
        m = int(round(np.log2(T.shape[1])))
        rep = bound.audit_linear_map(args.p, m, T, moduli)
        out["audit"] = {k: getattr(rep, k) for k in rep.__dataclass_fields__}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _bench_instance(n, p, seed, rotate):
    if rotate:
        return gen.haar_rotate(gen.spike_sphere(n), seed)
    return gen.random_ball(n, n * n, p, seed)


def cmd_bench(args) -> int:
    ps_list = [2.0] if args.rotate else args.p
    fields = ["n", "p", "eps", "mode", "seed", "K", "d", "achieved_eps", "runtime", "status"]
    rows = []
    for n in args.n:
        for p in ps_list:
            ps = _bench_instance(n, p, args.seed, args.rotate)
            K = incompressibility(ps)
            for eps in args.eps:
                for mode in args.mode:
                    d = args.d or required_dimension(p, K, n, eps)
                    row = dict(n=n, p=p, eps=eps, mode=mode, seed=args.seed, K=K, d=d,
                               achieved_eps="", runtime="", status="ok")
                    if mode != "adaptive" and d * ps.m * n * n > args.max_ops:
                        row["status"] = "skipped: over op cap"
                        rows.append(row)
                        continue
                    cfg = SamplerConfig(mode=mode, epsilon=eps, d_override=args.d,
                                        seed=args.seed, d_cap=args.d_cap)
                    t0 = time.perf_counter()
                    try:
                        emb = reduce(ps, cfg)
                    except (RetriesExhausted, GuaranteeViolated) as exc:
                        emb, row["status"] = exc.embedding, "guarantee failed"
                    row.update(d=emb.d, achieved_eps=emb.achieved_epsilon,
                               runtime=round(time.perf_counter() - t0, 4))
                    if emb.fallback:
                        row["status"] = "exact fallback"
                    rows.append(row)
                    print(", ".join(f"{k}={row[k]}" for k in fields), flush=True)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _floats(s):
    return [float(x) for x in s.split(",")]


def _ints(s):
    return [int(x) for x in s.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpreduce", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def input_opts(sp):
        sp.add_argument("--p", type=float, help="exponent (required for CSV input)")
        sp.add_argument("--uniform-weights", action="store_true",
                        help="treat CSV input as values on equally weighted atoms")

    r = sub.add_parser("reduce", help="embed a point set into l_p^d")
    r.add_argument("--input", required=True)
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--mode", choices=["greedy", "random", "adaptive"], default="greedy")
    r.add_argument("--d", type=int, help="output dimension (default: worst-case bound)")
    r.add_argument("--d-cap", type=int, help="largest d tried in adaptive mode")
    r.add_argument("--q", type=float, help="greedy norm exponent (default ln C(n,2))")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-retries", type=int, default=16)
    r.add_argument("--out", required=True)
    r.add_argument("--report", help="also write the report (without timing) here")
    input_opts(r)
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check an embedding against its point set")
    v.add_argument("--points", required=True)
    v.add_argument("--embedding", required=True)
    v.add_argument("--eps", type=float, help="default: eps recorded in the embedding")
    v.add_argument("--table", help="write the per-pair table as CSV")
    input_opts(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("--kind", choices=["ball", "walsh", "sphere", "simple"], required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--m", type=int, help="Walsh order (2^m coordinates)")
    g.add_argument("--p", type=float, default=2.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rotate", action="store_true", help="sphere: apply a Haar rotation")
    g.add_argument("--identical", action="store_true", help="sphere: all points equal")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bound", help="dimension bounds")
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--eps", type=float)
    b.add_argument("--omega", type=float, help="omega(1); overrides --eps moduli")
    b.add_argument("--Omega", type=float, help="Omega(1)")
    b.add_argument("--K", type=float, help="incompressibility for the upper dimension")
    b.add_argument("--points", help="point set file to measure K from")
    b.add_argument("--audit", help="JSON d x 2^m matrix to audit")
    b.set_defaults(func=cmd_bound)

    s = sub.add_parser("bench", help="sweep reductions and write CSV")
    s.add_argument("--n", type=_ints, default=[8])
    s.add_argument("--p", type=_floats, default=[1.0])
    s.add_argument("--eps", type=_floats, default=[0.5])
    s.add_argument("--mode", type=lambda x: x.split(","), default=["greedy"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--d", type=int)
    s.add_argument("--d-cap", type=int)
    s.add_argument("--max-ops", type=float, default=1e10,
                   help="skip runs with d * m * n^2 above this")
    s.add_argument("--rotate", action="store_true",
                   help="rotated spike sets at p = 2 instead of random balls")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "bound" and args.omega is None and args.eps is None:
        parser.error("bound needs --eps or --omega")
    if args.command == "gen":
        need = {"ball": ["n"], "walsh": ["m"], "sphere": ["n"], "simple": []}[args.kind]
        for name in need:
            if getattr(args, name) is None:
                parser.error(f"gen --kind {args.kind} needs --{name}")
    try:
        return args.func(args)
    except (LpReduceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

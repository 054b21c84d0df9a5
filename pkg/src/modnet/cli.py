"""Command-line orchestration: JSON reports over all module suites.

Subcommands mirror the library layout: algebra {build,check},
euler {verify,grade}, parabolic verify, jordan {kkt,wallach},
stdspace {fd,tensor}, rep check, dist {pair,covariance},
net {locality,kms,covariance}, verify all.  Reports are deterministic for a
fixed seed (timing is carried in 'seconds' fields, excluded from identity).
MODNET_THREADS caps internal parallelism.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import distvec as dv
from . import grading as gr
from . import grids as gd
from . import jordan as jd
from . import liealg as la
from . import parabolic as pb
from . import qlinalg as ql
from . import rep
from . import spindler as sp
from . import suites


def _emit(payload: dict, output: str | None) -> int:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if payload.get("pass", True) else 1


def _grid_from_args(args, default: gd.GridSpec) -> gd.GridSpec:
    return gd.GridSpec(
        n=default.n,
        lam_min=args.lam_min if args.lam_min is not None else default.lam_min,
        lam_max=args.lam_max if args.lam_max is not None else default.lam_max,
        n_lam=args.n_lam if args.n_lam is not None else default.n_lam,
        x_extent=args.x_extent if args.x_extent is not None else default.x_extent,
        n_x=args.n_x if args.n_x is not None else default.n_x,
    )


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lam-min", dest="lam_min", type=float, default=None)
    p.add_argument("--lam-max", dest="lam_max", type=float, default=None)
    p.add_argument("--n-lam", dest="n_lam", type=int, default=None)
    p.add_argument("--x-extent", dest="x_extent", type=float, default=None)
    p.add_argument("--n-x", dest="n_x", type=int, default=None)


def cmd_algebra(args) -> int:
    if args.action == "build":
        try:
            with open(args.input) as fh:
                data = sp.spindler_data_from_json(fh.read())
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            return _emit({"pass": False, "error": f"malformed input: {exc}"}, args.output)
        alg = sp.spindler_build(data)
        payload = json.loads(alg.to_json())
        payload["pass"] = la.jacobi_check(alg)
        return _emit(payload, args.output)
    # check
    try:
        with open(args.input) as fh:
            alg = la.LieAlgebra.from_json(fh.read())
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        return _emit({"pass": False, "error": f"malformed input: {exc}"}, args.output)
    ok = la.jacobi_check(alg)
    return _emit({"pass": ok, "dim": alg.dim, "jacobi": ok}, args.output)


def _named_algebra(name: str, n: int):
    if name == "hcsp":
        cm = sp.build_conformal_jacobi(n)
        return cm.algebra, cm.euler_element()
    if name == "sp":
        mla = sp.sp_mla(n)
        half = Fraction(1, 2)
        m = ql.zeros(2 * n, 2 * n)
        for i in range(n):
            m[i][i] = half
            m[n + i][n + i] = -half
        return mla.algebra, mla.element_of(m)
    raise ValueError(f"unknown algebra {name!r} (use hcsp or sp)")


def cmd_euler(args) -> int:
    alg, h = _named_algebra(args.algebra, args.n)
    rep_dict = gr.grading_report(alg, h)
    rep_dict["pass"] = bool(rep_dict["euler"])
    return _emit(rep_dict, args.output)


def cmd_parabolic(args) -> int:
    tri = pb.sl2_embed_mult1(2 * args.n)
    rep_dict = pb.verify_theorem_h1(tri)
    rep_dict["pass"] = bool(
        rep_dict["euler"] and rep_dict["g1_matches_parabolic"] and rep_dict["eigenspace_formula"]
    )
    return _emit(rep_dict, args.output)


def cmd_jordan(args) -> int:
    if args.action == "kkt":
        if args.ambient != "sp":
            return _emit({"pass": False, "error": "only the sp ambient family is auto-supported"}, args.output)
        _, jalg, _ = suites.kkt_model(args.n)
        frame = jd.jordan_frame(jalg)
        table = {}
        for i in range(jalg.dim):
            for j in range(jalg.dim):
                ei = [Fraction(1) if t == i else Fraction(0) for t in range(jalg.dim)]
                ej = [Fraction(1) if t == j else Fraction(0) for t in range(jalg.dim)]
                prod = jalg.product(ei, ej)
                entries = {str(k): str(c) for k, c in enumerate(prod) if c != 0}
                if entries:
                    table[f"{i},{j}"] = entries
        payload = {
            "pass": True,
            "dim": jalg.dim,
            "rank": frame.rank,
            "rank_one_convention": frame.rank == 1,
            "frame": [[str(c) for c in idem] for idem in frame.idempotents],
            "product_table": table,
        }
        return _emit(payload, args.output)
    alphas = [Fraction(a) for a in args.alphas.split(",")] if args.alphas else [0, Fraction(1, 2), 1]
    table = jd.wallach_table(args.r, args.d, alphas)
    return _emit({"pass": True, "r": args.r, "d": args.d, "table": table}, args.output)


def cmd_stdspace(args) -> int:
    if args.action == "fd":
        checks = suites.suite_stdspace(count=args.count, kmax=args.kmax, seed=args.seed)
    else:
        checks = suites.suite_stdspace(count=max(4, args.count // 5), kmax=min(args.kmax, 3), seed=args.seed)
        checks = [c for c in checks if "tensor" in c.name or "time" in c.name]
    return _emit(suites.report(checks, vars(args) | {"output": None}), args.output)


def cmd_rep(args) -> int:
    spec = _grid_from_args(args, gd.GridSpec())
    all_checks = suites.suite_rep(spec, n_words=args.words, seed=args.seed)
    if args.suite != "all":
        keymap = {"unitarity": "rep.unitarity", "grouplaw": "rep.group_law",
                  "jnu": "rep.j_covariance", "energy": "rep.energy"}
        all_checks = [c for c in all_checks if c.name.startswith(keymap[args.suite])]
    return _emit(suites.report(all_checks, {"suite": args.suite, "seed": args.seed}), args.output)


def cmd_dist(args) -> int:
    spec = _grid_from_args(args, gd.DEFAULT_DIST_GRID)
    s_values = tuple(float(s) for s in args.s.split(","))
    if args.action == "pair":
        checks = [c for c in suites.suite_dist(spec, s_values) if "pair" in c.name]
    else:
        tmpl = suites.dist_templates()[1]
        checks = []
        import time as _t

        t0 = _t.perf_counter()
        law = args.law
        param = {"b": args.t, "gl": [[1.3]], "v1": ("v1", [0.7]), "sp1": ("sp1", [[0.2]]), "tau": None}[law]
        lawname = {"b": "dilation", "gl": "gl", "v1": "v1_sp1", "sp1": "v1_sp1", "tau": "tau"}[law]
        worst = max(dv.verify_covariance(s, lawname, tmpl, spec, param=param) for s in s_values)
        checks.append(suites._check(f"dist.covariance.{law}", worst < 1e-5, "residual",
                                    f"{worst:.3e}", tol="< 1e-5", t0=t0))
    return _emit(suites.report(checks, {"s": list(s_values)}), args.output)


def cmd_net(args) -> int:
    spec = _grid_from_args(args, gd.DEFAULT_NET_GRID)
    import time as _t

    checks = []
    if args.action == "locality":
        t0 = _t.perf_counter()
        bat = dv.locality_battery(tuple(float(v) for v in args.s.split(",")), spec,
                                  n_pairs=args.pairs, seed=args.seed)
        checks.append(suites._check("net.locality", bat["max_residual"] < 1e-3, "residual",
                                    f"{bat['max_residual']:.3e}", tol="< 1e-3", t0=t0))
        checks.append(suites._check("net.locality.negative_control", bat["min_control"] > 0.05,
                                    "residual", f"{bat['min_control']:.3f}", tol="O(1)", t0=t0))
    elif args.action == "kms":
        t0 = _t.perf_counter()
        worst = max(dv.kms_residual(dv.default_chart(+1), float(s), spec) for s in args.s.split(","))
        checks.append(suites._check("net.kms", worst < 1e-3, "residual", f"{worst:.3e}", tol="< 1e-3", t0=t0))
    else:
        checks = [c for c in suites.suite_net(spec, n_pairs=4, seed=args.seed) if "covariance" in c.name]
    return _emit(suites.report(checks, {"action": args.action}), args.output)


def cmd_verify(args) -> int:
    payload = suites.verify_all(profile=args.profile, seed=args.seed, n=args.n)
    return _emit(payload, args.output)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modnet", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="build or check structure-constant algebras")
    p.add_argument("action", choices=["build", "check"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("euler", help="Euler element / grading reports")
    p.add_argument("action", choices=["verify", "grade"])
    p.add_argument("--algebra", default="hcsp", choices=["hcsp", "sp"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("parabolic", help="parabolic embedding verification")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_parabolic)

    p = sub.add_parser("jordan", help="Jordan product / frame / Wallach reports")
    p.add_argument("action", choices=["kkt", "wallach"])
    p.add_argument("--ambient", default="sp")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--alphas", default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_jordan)

    p = sub.add_parser("stdspace", help="finite-dimensional standard subspaces")
    p.add_argument("action", choices=["fd", "tensor"])
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_stdspace)

    p = sub.add_parser("rep", help="representation letter suites")
    p.add_argument("action", choices=["check"])
    p.add_argument("--suite", default="all", choices=["all", "unitarity", "grouplaw", "jnu", "energy"])
    p.add_argument("--words", type=int, default=50)
    p.add_argument("--seed", type=int, default=5)
    p.add_argument("--output", default=None)
    _add_grid_args(p)
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("dist", help="distribution-vector checks")
    p.add_argument("action", choices=["pair", "covariance"])
    p.add_argument("--s", default="0.75,1.0,1.5,2.0")
    p.add_argument("--law", default="b", choices=["b", "gl", "v1", "sp1", "tau"])
    p.add_argument("--t", type=float, default=0.4)
    p.add_argument("--output", default=None)
    _add_grid_args(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("net", help="net locality / KMS / covariance checks")
    p.add_argument("action", choices=["locality", "kms", "covariance"])
    p.add_argument("--s", default="1.5")
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--output", default=None)
    _add_grid_args(p)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("verify", help="aggregate verification report")
    p.add_argument("action", choices=["all"])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", default="full", choices=["full", "quick"])
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

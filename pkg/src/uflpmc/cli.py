"""Command-line front end.

Exit codes: 0 success, 1 infeasible / "no" / rejected solution, 2 input
error, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .oracle import BudgetExceeded, verify_representative
from .reductions import StcInstance, clique_to_uflp, maxcover_to_uflp, stc_to_uflp
from .spmc import solve_spmc
from .uflp import ROUTES, check_solution, solve_uflp_mc, with_client_bound

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _token(x: str) -> int | str:
    x = x.strip()
    try:
        return int(x)
    except ValueError:
        return x


def _csv(text: str) -> list[int | str]:
    return [_token(x) for x in text.split(",") if x.strip()]


def _edges(text: str) -> list[tuple]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split("-")
        if len(parts) != 2:
            raise ValueError(f"edge {item!r} is not of the form a-b")
        out.append((_token(parts[0]), _token(parts[1])))
    return out


def _emit(doc: dict, out: str | None) -> None:
    text = io.dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    inst = io.instance_from_json(io.load_json(args.instance, "instance"))
    route = args.route
    if "clique" in inst.meta and route == "auto":
        print("client matroid is a non-linear oracle: using brute force", file=sys.stderr)
        route = "brute"
    trace: list | None = [] if args.trace else None
    sol = solve_uflp_mc(
        inst,
        epsilon=args.epsilon,
        eps_t=args.trunc_epsilon,
        seed=args.seed,
        route=route,
        max_clients=args.max_clients,
        trace=trace,
    )
    problems = check_solution(inst if inst.client_matroids else with_client_bound(inst, args.max_clients), sol)
    if problems:
        print("internal verification failure: " + "; ".join(problems), file=sys.stderr)
        return EXIT_INTERNAL
    if trace is not None:
        for step in trace:
            print(json.dumps(step), file=sys.stderr)
    print(f"profit {sol.profit}")
    status = EXIT_OK
    stc = inst.meta.get("stc")
    if stc is not None:
        yes = sol.profit >= stc["r"]
        weak = [stc["edges"][u - 1] for u in sol.A if u <= len(stc["edges"])]
        print("yes" if yes else "no")
        if yes:
            print("weak edges: " + ", ".join(f"{a}-{b}" for a, b in weak))
        status = EXIT_OK if yes else EXIT_NO
    _emit(io.solution_to_json(sol), args.output)
    return status


def cmd_verify(args: argparse.Namespace) -> int:
    inst = io.instance_from_json(io.load_json(args.instance, "instance"))
    sol = io.solution_from_json(io.load_json(args.solution, "solution"))
    if not inst.client_matroids and args.max_clients is not None:
        inst = with_client_bound(inst, args.max_clients)
    problems = check_solution(inst, sol)
    if problems:
        for p in problems:
            print(p)
        return EXIT_NO
    print(f"ok: profit {sol.profit}")
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind == "maxcover":
        elements = _csv(args.elements)
        sets = [_csv(s) for s in args.sets.split(";")]
        inst = maxcover_to_uflp(elements, sets, args.budget, args.client_rank)
    elif args.kind == "stc":
        if args.input:
            stc = io.stc_from_json(io.load_json(args.input, "stc"))
        else:
            if not args.edges or args.r is None:
                raise ValueError("generate stc needs --input or both --edges and --r")
            edges = _edges(args.edges)
            vertices = _csv(args.vertices) if args.vertices else list(dict.fromkeys(v for e in edges for v in e))
            communities = [_csv(c) for c in args.community or []]
            stc = StcInstance(vertices, edges, communities, args.r)
        for x in stc.communities:
            if not stc.community_connected(x):
                print(f"community {x} is not connected: the answer is no", file=sys.stderr)
                print("no")
                return EXIT_NO
        inst = stc_to_uflp(stc)
    else:
        edges = _edges(args.edges) if args.edges else []
        vertices = _csv(args.vertices) if args.vertices else list(dict.fromkeys(v for e in edges for v in e))
        inst = clique_to_uflp(vertices, edges, args.k)
    _emit(io.instance_to_json(inst), args.output)
    return EXIT_OK


def cmd_spmc(args: argparse.Namespace) -> int:
    inst = io.spmc_from_json(io.load_json(args.instance, "spmc"))
    sol = solve_spmc(inst, eps_t=args.trunc_epsilon, rng=args.seed)
    if sol is None:
        print("infeasible")
    else:
        print(f"total weight {sol.total_weight}")
    _emit(io.spmc_solution_to_json(sol), args.output)
    return EXIT_OK if sol is not None else EXIT_NO


def cmd_verify_rep(args: argparse.Namespace) -> int:
    doc = io.load_json(args.input, "rep")
    matroids = [io.matroid_from_json(m) for m in doc["matroids"]]
    family = {tuple(e["set"]): e["weight"] for e in doc["family"]}
    candidate = {tuple(e["set"]): e["weight"] for e in doc["candidate"]}
    check = verify_representative(matroids, family, candidate, doc["q"], doc.get("universe"))
    if check.ok:
        print("pass")
        return EXIT_OK
    print(f"fail: {check.reason}")
    return EXIT_NO


def cmd_selfcheck(args: argparse.Namespace) -> int:
    from .battery import run_all

    results = run_all(scale="reduced", seed=args.seed, stream=sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uflpmc", description="Facility location with matroid constraints.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    p.add_argument("--route", choices=ROUTES, default="auto")
    p.add_argument("--epsilon", type=float, default=1e-6, help="overall failure probability")
    p.add_argument("--trunc-epsilon", type=float, default=1e-9, help="per-truncation failure probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-clients", type=int, default=None, help="client bound when no client matroid is given")
    p.add_argument("--trace", action="store_true", help="print every improvement to stderr")
    p.add_argument("--jobs", type=int, default=None, help="accepted for compatibility; solving is sequential")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--max-clients", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write a reduction instance")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("maxcover")
    g.add_argument("--elements", required=True, help="comma-separated elements")
    g.add_argument("--sets", required=True, help="sets separated by ';', elements by ','")
    g.add_argument("--budget", type=int, required=True)
    g.add_argument("--client-rank", type=int, default=None)
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("stc")
    g.add_argument("--input", default=None, help="graph JSON with edges, communities and r")
    g.add_argument("--edges", default=None, help="comma-separated a-b pairs")
    g.add_argument("--vertices", default=None)
    g.add_argument("--community", action="append", help="comma-separated vertices; repeatable")
    g.add_argument("--r", type=int, default=None)
    g.add_argument("-o", "--output", default=None)
    g = gen.add_parser("clique")
    g.add_argument("--edges", default="")
    g.add_argument("--vertices", default=None)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spmc", help="set packing with matroid constraints")
    sp = p.add_subparsers(dest="action", required=True)
    s = sp.add_parser("solve")
    s.add_argument("instance")
    s.add_argument("--trunc-epsilon", type=float, default=1e-9)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_spmc)

    p = sub.add_parser("verify-rep", help="exhaustively check a representative family")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("selfcheck", help="run the invariant battery at reduced scale")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except io.InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, TypeError, KeyError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

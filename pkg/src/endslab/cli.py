"""Command line interface.

Subcommands: ball (build and export a graph ball), ends (ends profile),
leaves (leaf decomposition of an imprimitive ball), verify (named
structural checks), fixtures (list built-in rule actions).  Exit codes:
0 success, 1 check or computation failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional

from . import __version__
from .actions import PairPoint, point_label, RULE_ACTIONS
from .balls import (
    BallOverflowError,
    build_ball,
    delete_and_split,
    leaf_decomposition,
    simplify,
    to_dot,
    to_json_dict,
)
from .dsl import ElaborationError, SpecError, elaborate, parse_spec
from .ends import (
    IntModQuotient,
    coordinate_split,
    ends_profile,
    quotient_schreier_pair,
    three_segment_path,
    ThreeSegmentPath,
)
from .groups import (
    Cyclic,
    FreeAbelian,
    GroupError,
    SymmetricGroup,
    nonidentity_gens,
)
from .actions import ActionError, TrivialSubgroup, translation_action
from .wreath import WreathGroup, imprimitive_action

DEFAULT_BUDGET = 2_000_000
BUDGET_ENV = "ENDSLAB_BUDGET"


def resolve_budget(flag_value: Optional[int]) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"{BUDGET_ENV} must be an integer, got {env!r}")
    return DEFAULT_BUDGET


def parse_k_values(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def load_spec(text: str):
    return elaborate(parse_spec(text))


def cmd_ball(args) -> int:
    action, gens = load_spec(args.spec)
    ball = build_ball(action, gens, args.radius, resolve_budget(args.budget))
    if args.format == "dot":
        out = to_dot(ball)
    else:
        out = json.dumps(to_json_dict(ball), indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def cmd_ends(args) -> int:
    action, gens = load_spec(args.spec)
    profile = ends_profile(action, gens, parse_k_values(args.k), args.K,
                           resolve_budget(args.budget))
    print(profile.to_json())
    return 0


def cmd_leaves(args) -> int:
    action, gens = load_spec(args.spec)
    if isinstance(action.group, WreathGroup) and not isinstance(
            action.basepoint, PairPoint):
        # a bare wreath spec: report on its imprimitive action
        action = imprimitive_action(action.group, action.group.orbit_reps[0])
    ball = build_ball(action, gens, args.radius, resolve_budget(args.budget))
    leaves = leaf_decomposition(ball)
    report = {
        "radius": args.radius,
        "vertex_count": len(ball),
        "leaf_count": len(leaves),
        "leaves": [
            {
                "leaf": point_label(leaf),
                "size": len(vs),
                "vertices": [point_label(ball.points[v]) for v in vs],
            }
            for leaf, vs in leaves.items()
        ],
        "cross_leaf_edges": sum(
            1 for u, v, _ in ball.edges
            if u != v and ball.points[u].leaf != ball.points[v].leaf),
    }
    print(json.dumps(report, indent=2))
    return 0


def _check_quotient(args) -> list[tuple[bool, str]]:
    group = FreeAbelian(1)
    pair = quotient_schreier_pair(group, IntModQuotient(args.modulus),
                                  TrivialSubgroup(), group.standard_gens(),
                                  args.radius)
    ok = pair.isomorphic
    return [(ok,
             f"Sch(Z, {args.modulus}Z; +-1) and Cayley(C({args.modulus}); +-1) "
             f"simplified balls at radius {args.radius} "
             f"{'are' if ok else 'are NOT'} pointed-labeled isomorphic")]


def _check_leaf_disconnect(args) -> list[tuple[bool, str]]:
    action, gens = load_spec(args.spec)
    group = action.group
    if not isinstance(group, WreathGroup):
        raise ElaborationError("leaf-disconnect needs a wreath-product spec")
    if not isinstance(action.basepoint, PairPoint):
        action = imprimitive_action(group, group.orbit_reps[0])
    ball = build_ball(action, gens, args.radius, resolve_budget(args.budget))
    x0 = group.orbit_reps[0]
    leaves = leaf_decomposition(ball)
    results = []
    for leaf, vs in leaves.items():
        hub = ball.index.get(PairPoint(leaf, x0))
        if hub is None:
            results.append((True, f"leaf {point_label(leaf)}: hub outside the "
                                  f"ball, skipped"))
            continue
        cut = delete_and_split(ball, [hub])
        rest = set(vs) - {hub}
        leaked = [c for c in cut.components
                  if set(c) & rest and not set(c) <= set(vs)]
        ok = not leaked
        comp_desc = []
        for c, touch in zip(cut.components, cut.touching):
            if set(c) <= rest:
                comp_desc.append(f"size {len(c)} ({'touching' if touch else 'isolated'})")
        results.append((ok, f"leaf {point_label(leaf)}: deleting its hub leaves "
                            f"leaf components [{', '.join(comp_desc) or 'none'}] "
                            f"with {'no' if ok else 'SOME'} edges to other leaves"))
    return results


def _check_three_segment(args) -> list[tuple[bool, str]]:
    # Z x Z as a semidirect product with trivial action: N the first axis,
    # H the second.  Endpoints are sampled so that their H-lines miss the
    # cut (the path construction needs each endpoint's H-orbit graph to be
    # one-ended or disjoint from the cut) and with enough radius margin
    # for the detour to stay inside the ball.
    group = FreeAbelian(2)
    gens = group.standard_gens()
    action = translation_action(group)
    ball = build_ball(action, gens, args.radius, resolve_budget(args.budget))
    cut = [v for v in range(len(ball)) if ball.dist[v] <= args.cut_radius]
    sd = coordinate_split(group, gens, n_axes=(0,))
    rng = random.Random(args.seed)
    margin = args.radius - args.cut_radius - 2
    # the H-line through (a, b) is the column {a} x Z; it misses B(r) iff |a| > r
    survivors = [v for v in range(len(ball))
                 if ball.dist[v] <= margin
                 and abs(ball.points[v].coords[0]) > args.cut_radius]
    ok_all = True
    for _ in range(args.pairs):
        x, y = rng.sample(survivors, 2)
        res = three_segment_path(ball, x, y, cut, sd)
        good = isinstance(res, ThreeSegmentPath) and res.injective
        ok_all = ok_all and good
    return [(ok_all,
             f"{args.pairs} random vertex pairs joined by three-segment "
             f"paths around the radius-{args.cut_radius} cut, with the "
             f"candidate map injective")]


def _check_complete_graph(args) -> list[tuple[bool, str]]:
    results = []
    for group in (Cyclic(5), SymmetricGroup(3)):
        gens = nonidentity_gens(group)
        ball = build_ball(translation_action(group), gens, 1)
        n = group.order()
        simple = simplify(ball)
        pairs = {frozenset((u, v)) for u, v, _ in simple.edges}
        expected = {frozenset((u, v)) for u in range(n) for v in range(u + 1, n)}
        ok = len(ball) == n and pairs == expected
        results.append((ok, f"Cayley({group}; all non-identity elements) ball "
                            f"R=1 is K_{n}: {ok}"))
    return results


def cmd_verify(args) -> int:
    checks = {
        "quotient": _check_quotient,
        "leaf-disconnect": _check_leaf_disconnect,
        "three-segment-path": _check_three_segment,
        "complete-graph": _check_complete_graph,
    }
    results = checks[args.check](args)
    failed = False
    for ok, message in results:
        print(f"{'PASS' if ok else 'FAIL'}: {message}")
        failed = failed or not ok
    return 1 if failed else 0


def cmd_fixtures(args) -> int:
    for name in sorted(RULE_ACTIONS):
        _, description = RULE_ACTIONS[name]
        print(f"{name}: {description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endslab",
        description="orbital/Schreier graph balls and ends estimation for "
                    "finitely generated groups")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ball = sub.add_parser("ball", help="materialize a graph ball")
    p_ball.add_argument("--spec", required=True, help='e.g. "Z^2" or '
                        '"wreath(C(2), Z, translation)"')
    p_ball.add_argument("--radius", type=int, required=True)
    p_ball.add_argument("--format", choices=("json", "dot"), default="json")
    p_ball.add_argument("--output", "-o")
    p_ball.add_argument("--budget", type=int)
    p_ball.set_defaults(func=cmd_ball)

    p_ends = sub.add_parser("ends", help="compute an ends profile")
    p_ends.add_argument("--spec", required=True)
    p_ends.add_argument("--k", required=True, help='inner radii, "1..4" or "1,2,4"')
    p_ends.add_argument("--K", type=int, required=True, help="outer radius")
    p_ends.add_argument("--budget", type=int)
    p_ends.set_defaults(func=cmd_ends)

    p_leaves = sub.add_parser("leaves", help="leaf decomposition of an "
                                             "imprimitive ball")
    p_leaves.add_argument("--spec", required=True)
    p_leaves.add_argument("--radius", type=int, required=True)
    p_leaves.add_argument("--budget", type=int)
    p_leaves.set_defaults(func=cmd_leaves)

    p_verify = sub.add_parser("verify", help="run a named structural check")
    p_verify.add_argument("check", choices=("quotient", "leaf-disconnect",
                                            "three-segment-path", "complete-graph"))
    p_verify.add_argument("--spec", default="wreath(C(3), C(2), regular)")
    p_verify.add_argument("--radius", type=int, default=None)
    p_verify.add_argument("--modulus", type=int, default=4)
    p_verify.add_argument("--cut-radius", type=int, default=2)
    p_verify.add_argument("--pairs", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--budget", type=int)
    p_verify.set_defaults(func=cmd_verify)

    p_fix = sub.add_parser("fixtures", help="list built-in rule actions")
    p_fix.set_defaults(func=cmd_fixtures)
    return parser


VERIFY_DEFAULT_RADII = {
    "quotient": 4,
    "leaf-disconnect": 8,
    "three-segment-path": 12,
}


def cli_main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, "radius", None) is None and args.command == "verify":
        args.radius = VERIFY_DEFAULT_RADII.get(args.check, 8)
    try:
        return args.func(args)
    except (SpecError,) as exc:
        print(f"endslab: {exc}", file=sys.stderr)
        return 2
    except (BallOverflowError, ActionError, GroupError) as exc:
        print(f"endslab: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()

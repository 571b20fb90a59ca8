"""Command-line interface: word problems, balls, comparisons, experiments.

All output is JSON (or the line-oriented ball export); exit code 0 means
every check passed, 1 means a negative verdict, 2 a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

from .experiments import (
    exp_continuity,
    exp_epsilon,
    exp_orbit,
    exp_zmod_limit,
)
from .hnn import BudgetExceededError, g_oracle, oracle_for
from .marked import (
    MarkedGroup,
    chabauty_agree,
    condense,
    h2_point,
    marked_Z,
    marked_Zmod,
    max_agreement,
    orbit_witness,
    relation_ball,
    escape_index,
)
from .presentations import (
    builtin,
    parse_presentation,
    same_relator_set,
)
from .words import WordSyntaxError, enumerate_ball, free_reduce, parse_word, render_word


def load_group(spec: str, budget: int) -> MarkedGroup:
    """Resolve a group spec: B|ZxB|G|E, Z, Z/N, or file:PATH.

    File presentations get an oracle only when they match a decidable
    family: a built-in up to relator rotation/inversion, or a one-generator
    presentation (cyclic).
    """
    if spec in ("B", "ZxB", "G", "E"):
        return MarkedGroup(spec, oracle_for(spec, budget))
    if spec == "Z":
        return marked_Z()
    if spec.startswith("Z/"):
        return marked_Zmod(int(spec[2:]))
    if spec.startswith("file:"):
        text = Path(spec[5:]).read_text()
        pres = parse_presentation(text)
        for name in ("B", "ZxB", "G", "E"):
            if same_relator_set(pres, builtin(name)):
                return MarkedGroup(pres.name, oracle_for(name, budget))
        if pres.alphabet.arity == 1:
            order = 0
            for rel in pres.relators:
                order = math.gcd(order, sum(s for _, s in rel.letters))
            return (
                MarkedGroup(pres.name, marked_Z().oracle)
                if order == 0
                else marked_Zmod(abs(order))
            )
        raise SystemExit(
            f"error: no word-problem oracle for presentation {pres.name!r}; "
            "only the built-in families and cyclic groups are decidable here"
        )
    raise SystemExit(f"error: unknown group spec {spec!r}")


def _emit(payload: dict, json_path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    print(text)
    if json_path:
        Path(json_path).write_text(text + "\n")


def cmd_wp(args: argparse.Namespace) -> int:
    group = load_group(args.group, args.budget)
    try:
        w = parse_word(args.word, group.oracle.alphabet)
    except WordSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    trivial = group.oracle.is_trivial(free_reduce(w))
    _emit(
        {"group": group.name, "word": args.word,
         "reduced": render_word(free_reduce(w)), "trivial": trivial},
        args.json,
    )
    return 0 if trivial else 1


def cmd_ball(args: argparse.Namespace) -> int:
    group = load_group(args.group, args.budget)
    ball = relation_ball(group, args.radius, workers=args.workers)
    print(ball.export(group.name), end="")
    if args.json:
        Path(args.json).write_text(
            json.dumps(
                {
                    "group": group.name,
                    "radius": ball.radius,
                    "count": ball.count,
                    "fingerprint": ball.fingerprint,
                },
                indent=2,
            )
            + "\n"
        )
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    left = load_group(args.group, args.budget)
    right = load_group(args.other, args.budget)
    agreement = max_agreement(left, right, args.max_radius)
    _emit(
        {
            "left": left.name,
            "right": right.name,
            "max_radius": args.max_radius,
            "agreement_radius": agreement.radius,
            "saturated": agreement.saturated,
        },
        args.json,
    )
    return 0


def cmd_chabauty(args: argparse.Namespace) -> int:
    oracle = g_oracle(args.budget)
    finite_set = list(enumerate_ball(oracle.alphabet, args.rho))
    i = args.i if args.i is not None else escape_index(finite_set, oracle)
    _, k_point = orbit_witness(i, oracle)
    agree = chabauty_agree(h2_point(oracle), k_point, finite_set)
    _emit(
        {
            "rho": args.rho,
            "i": i,
            "subgroups": ["H2", k_point.label],
            "ball_size": len(finite_set),
            "agree": agree,
        },
        args.json,
    )
    return 0 if agree else 1


def cmd_condense(args: argparse.Namespace) -> int:
    oracle = g_oracle(args.budget)
    g_marked = MarkedGroup("G", oracle)
    _, k_point = orbit_witness(args.i, oracle)
    extension_h = condense(g_marked, h2_point(oracle))
    extension_k = condense(g_marked, k_point)
    ball_h = relation_ball(extension_h, args.radius, workers=args.workers)
    ball_k = relation_ball(extension_k, args.radius, workers=args.workers)
    coincide = ball_h.fingerprint == ball_k.fingerprint
    _emit(
        {
            "i": args.i,
            "radius": args.radius,
            "left": extension_h.name,
            "right": extension_k.name,
            "fingerprint_left": ball_h.fingerprint,
            "fingerprint_right": ball_k.fingerprint,
            "coincide": coincide,
        },
        args.json,
    )
    return 0 if coincide else 1


def cmd_experiment(args: argparse.Namespace) -> int:
    name = args.name
    if name == "zmod-limit":
        report = exp_zmod_limit(args.imax)
    elif name == "orbit":
        report = exp_orbit(args.rho)
    elif name == "continuity":
        report = exp_continuity(args.radius, workers=args.workers)
    elif name == "epsilon":
        i_list = [int(part) for part in args.i.split(",")] if args.i else [1]
        report = exp_epsilon(i_list, args.rho)
    else:  # unreachable through argparse choices
        raise SystemExit(f"error: unknown experiment {name!r}")
    text = report.to_json(include_timing=not args.no_timing)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markedgroups",
        description="Exact word problems, relation balls, and subgroup "
        "experiments for the built-in extension tower.",
    )
    parser.add_argument(
        "--budget", type=int, default=10_000,
        help="letter budget for reductions (default 10000)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wp", help="decide triviality of a word")
    p.add_argument("--group", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_wp)

    p = sub.add_parser("ball", help="export a relation ball")
    p.add_argument("--group", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_ball)

    p = sub.add_parser("compare", help="maximal agreement radius of two groups")
    p.add_argument("--group", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--max-radius", type=int, required=True)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser(
        "chabauty", help="compare H2 with a conjugate on a finite ball"
    )
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--i", type=int, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_chabauty)

    p = sub.add_parser(
        "condense", help="compare relation balls of two extensions"
    )
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default=None)
    p.set_defaults(fn=cmd_condense)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument(
        "name", choices=["zmod-limit", "orbit", "continuity", "epsilon"]
    )
    p.add_argument("--imax", type=int, default=10)
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--i", default=None, help="comma-separated index list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default=None)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(fn=cmd_experiment)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

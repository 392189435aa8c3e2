"""Command-line front end.

Each invocation runs one command over a vector file and writes a single
JSON document to stdout (or --out). Exit codes: 0 success, 2 parse
error, 3 precondition violation, 4 oracle cap exceeded, 5 internal
invariant failure. JTX_ORACLE_CAP overrides the default oracle cap;
the --oracle-cap flag overrides both.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import IO

from . import dot as dot_mod
from . import wire
from .errors import InputError, InternalError, JtxError
from .extremality import (
    all_isolatable_implies_l2,
    certify_extreme,
    equal_sums_report,
    is_separated,
    isolatable_nodes,
    perturbation_witness,
    vanishes_on_all_norming,
)
from .greedy import consistent_with_greedy, greedy_partition
from .norm import (
    NormSolver,
    ORACLE_NODE_CAP,
    enumerate_norming,
    jt_norm_sq,
    oracle_norm_sq,
    score,
)
from .tree import parse_node
from .vector import TreeVector, format_rational


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jtx",
        description="Exact James Tree norm toolkit: norms, norming partitions, "
        "separation, and extreme-point certificates for finite-support vectors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("vector", help="vector JSON file, or - for stdin")
        p.add_argument("--out", help="write the output document here instead of stdout")
        p.add_argument(
            "--digits",
            type=int,
            default=wire.DEFAULT_DIGITS,
            help="fractional digits for decimal norm renderings",
        )
        p.add_argument(
            "--oracle-cap",
            type=int,
            default=None,
            help="max |ran(x)| for exhaustive enumeration (default from "
            "JTX_ORACLE_CAP or %d)" % ORACLE_NODE_CAP,
        )
        return p

    p = cmd("norm", "squared JT norm with a maximizing partition")
    p.add_argument("--oracle", action="store_true", help="cross-check against the brute-force oracle")

    p = cmd("gap", "separation gap of a node pair")
    p.add_argument("--u", required=True, help="first node (bit string, root = '')")
    p.add_argument("--v", required=True, help="second node")

    p = cmd("separated", "decide the separated property")
    p.add_argument("--all-pairs", action="store_true", help="score every comparable pair, not just parent-child")

    cmd("extreme", "extremality certificate")

    p = cmd("greedy", "greedy norming partition of a positive vector")
    p.add_argument("--tie-policy", choices=("lex-min", "lex-max"), default="lex-min")

    p = cmd("consistent", "check a partition against the greedy rule")
    p.add_argument("--partition", required=True, help="partition JSON file")

    cmd("equal-sums", "equal sums report for a positive vector")
    cmd("enumerate-norming", "all norming partitions (oracle-sized vectors)")
    cmd("isolatable", "per-node isolation check and l2 comparison")

    p = cmd("witness", "perturbation witness for an inseparable parent-child pair")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)

    p = cmd("dot", "DOT graph of ran(x) with a partition overlay")
    p.add_argument("--partition", help="overlay this partition file instead of the computed witness")
    return parser


def _load_vector(path: str) -> TreeVector:
    if path == "-":
        return wire.load_vector(sys.stdin)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return wire.load_vector(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _load_partition(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return wire.load_partition(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _resolve_cap(args: argparse.Namespace) -> int:
    if args.oracle_cap is not None:
        return args.oracle_cap
    env = os.environ.get("JTX_ORACLE_CAP")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"JTX_ORACLE_CAP must be an integer, got {env!r}") from None
    return ORACLE_NODE_CAP


def _run(args: argparse.Namespace) -> dict:
    x = _load_vector(args.vector)
    cap = _resolve_cap(args)

    if args.command == "norm":
        res = jt_norm_sq(x)
        doc = wire.norm_result_doc(res, args.digits)
        if args.oracle:
            check = oracle_norm_sq(x, cap)
            doc["oracle_norm_sq"] = format_rational(check)
            if check != res.norm_sq:
                raise InternalError(
                    f"oracle disagrees with the DP: {check} != {res.norm_sq}"
                )
        return doc

    if args.command == "gap":
        u, v = parse_node(args.u), parse_node(args.v)
        g = NormSolver(x).gap(u, v)
        return {"u": u.path, "v": v.path, "gap": format_rational(g)}

    if args.command == "separated":
        return wire.separation_doc(is_separated(x, all_pairs=args.all_pairs))

    if args.command == "extreme":
        return wire.certificate_doc(certify_extreme(x))

    if args.command == "greedy":
        partition, trace = greedy_partition(x, tie_policy=args.tie_policy)
        return {
            "norm_sq": format_rational(score(x, partition)),
            "partition": wire.partition_to_doc(partition),
            "trace": wire.greedy_trace_doc(trace),
        }

    if args.command == "consistent":
        partition = _load_partition(args.partition)
        ok, violations = consistent_with_greedy(x, partition)
        return {
            "consistent": ok,
            "violations": [wire.violation_doc(v) for v in violations],
        }

    if args.command == "equal-sums":
        return wire.equal_sums_doc(equal_sums_report(x))

    if args.command == "enumerate-norming":
        partitions = sorted(
            enumerate_norming(x, cap),
            key=lambda p: [s.sort_key() for s in p.sorted_segments()],
        )
        norm_sq = jt_norm_sq(x).norm_sq
        return {
            "norm_sq": format_rational(norm_sq),
            "count": len(partitions),
            "partitions": [wire.partition_to_doc(p) for p in partitions],
        }

    if args.command == "isolatable":
        per_node = isolatable_nodes(x)
        every, l2_match = all_isolatable_implies_l2(x)
        return {
            "all_isolatable": every,
            "l2_match": l2_match,
            "nodes": {n.path: ok for n, ok in sorted(per_node.items(), key=lambda kv: kv[0].sort_key())},
        }

    if args.command == "witness":
        u, v = parse_node(args.u), parse_node(args.v)
        y, eps = perturbation_witness(x, u, v)
        return {
            "u": u.path,
            "v": v.path,
            "epsilon": format_rational(eps),
            "y": wire.vector_to_doc(y),
            "norm_sq": format_rational(jt_norm_sq(x).norm_sq),
            "vanishes_on_all_norming": (
                vanishes_on_all_norming(x, y, cap) if len(x.range()) <= cap else None
            ),
        }

    if args.command == "dot":
        if not args.out:
            raise InputError("dot requires --out FILE for the DOT text")
        partition = (
            _load_partition(args.partition)
            if args.partition
            else jt_norm_sq(x).witness
        )
        text = dot_mod.render_dot(x, partition)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return {
            "out": args.out,
            "nodes": len(x.range()),
            "segments": len(partition),
        }

    raise InternalError(f"unhandled command {args.command!r}")  # pragma: no cover


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _run(args)
    except JtxError as exc:
        wire.dump(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}, sys.stderr
        )
        return exc.exit_code
    out: IO[str]
    if args.command != "dot" and args.out:
        with open(args.out, "w", encoding="utf-8") as out:
            wire.dump(doc, out)
    else:
        wire.dump(doc, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())

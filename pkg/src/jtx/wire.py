"""JSON wire forms for vectors, partitions, and result documents.

Rationals travel as strings ("p" or "p/q"); decimal renderings are
side-channel only and always labeled as such. Node wire form is the bit
string with "" for the root. All emitted documents order keys
canonically so identical inputs produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt
from typing import Any, IO

from .errors import InputError
from .extremality import EqualSumsReport, ExtremeCertificate, SeparationReport
from .greedy import GreedyTrace, GreedyViolation
from .norm import NormResult, Partition
from .tree import DEFAULT_MAX_DEPTH, Node, Segment, parse_node
from .vector import TreeVector, format_rational, parse_rational

DEFAULT_DIGITS = 12


# -- vectors ------------------------------------------------------------


def vector_to_doc(x: TreeVector) -> dict:
    return {"vector": {n.path: format_rational(v) for n, v in x.items()}}


def vector_from_doc(doc: Any, max_depth: int = DEFAULT_MAX_DEPTH) -> TreeVector:
    if not isinstance(doc, dict) or not isinstance(doc.get("vector"), dict):
        raise InputError('vector document must be {"vector": {"<bits>": "<rational>"}}')
    entries = {}
    for key, raw in doc["vector"].items():
        if not isinstance(key, str):
            raise InputError(f"node keys must be strings, got {key!r}")
        entries[parse_node(key, max_depth)] = parse_rational(raw)
    return TreeVector(entries)


def load_vector(stream: IO[str], max_depth: int = DEFAULT_MAX_DEPTH) -> TreeVector:
    try:
        doc = json.load(stream)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return vector_from_doc(doc, max_depth)


# -- segments and partitions ---------------------------------------------


def segment_to_doc(s: Segment) -> dict:
    return {"top": s.top.path, "bottom": s.bottom.path}


def segment_from_doc(doc: Any, max_depth: int = DEFAULT_MAX_DEPTH) -> Segment:
    if not isinstance(doc, dict) or "top" not in doc or "bottom" not in doc:
        raise InputError('segment document must be {"top": "...", "bottom": "..."}')
    return Segment(parse_node(doc["top"], max_depth), parse_node(doc["bottom"], max_depth))


def partition_to_doc(p: Partition) -> dict:
    return {"segments": [segment_to_doc(s) for s in p.sorted_segments()]}


def partition_from_doc(doc: Any, max_depth: int = DEFAULT_MAX_DEPTH) -> Partition:
    if not isinstance(doc, dict) or not isinstance(doc.get("segments"), list):
        raise InputError('partition document must be {"segments": [...]}')
    return Partition(frozenset(segment_from_doc(d, max_depth) for d in doc["segments"]))


def load_partition(stream: IO[str], max_depth: int = DEFAULT_MAX_DEPTH) -> Partition:
    try:
        doc = json.load(stream)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return partition_from_doc(doc, max_depth)


# -- decimal rendering ----------------------------------------------------


def sqrt_decimal(q: Fraction, digits: int = DEFAULT_DIGITS) -> str:
    """Decimal expansion of sqrt(q) with `digits` fractional digits.

    Correctly rounded to nearest; the only possible ties are rational
    square roots landing exactly on a half-ulp, which round up. Uses
    integer arithmetic throughout.
    """
    if q < 0:
        raise InputError("sqrt_decimal requires a nonnegative rational")
    if digits < 0:
        raise InputError("digits must be nonnegative")
    p, r = q.numerator, q.denominator
    scaled = p * 10 ** (2 * digits)
    n = isqrt(scaled // r)
    # n is within 2 of the correctly rounded value; settle it exactly:
    # want the unique n with (2n-1)^2 r <= 4*scaled < (2n+1)^2 r
    while n > 0 and 4 * scaled < (2 * n - 1) ** 2 * r:
        n -= 1
    while 4 * scaled >= (2 * n + 1) ** 2 * r:
        n += 1
    if digits == 0:
        return str(n)
    whole, frac = divmod(n, 10 ** digits)
    return f"{whole}.{frac:0{digits}d}"


# -- result documents ------------------------------------------------------


def norm_result_doc(res: NormResult, digits: int = DEFAULT_DIGITS) -> dict:
    return {
        "norm_sq": format_rational(res.norm_sq),
        "norm_decimal": sqrt_decimal(res.norm_sq, digits),
        "witness": partition_to_doc(res.witness),
    }


def separation_doc(report: SeparationReport) -> dict:
    pairs = sorted(
        report.pair_gaps.items(),
        key=lambda item: (item[0][0].sort_key(), item[0][1].sort_key()),
    )
    return {
        "separated": report.separated,
        "mode": report.mode,
        "pair_gaps": [
            {"u": u.path, "v": v.path, "gap": format_rational(g)}
            for (u, v), g in pairs
        ],
        "first_blocked_pair": (
            None
            if report.first_blocked_pair is None
            else [report.first_blocked_pair[0].path, report.first_blocked_pair[1].path]
        ),
    }


def certificate_doc(cert: ExtremeCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "basis": cert.basis,
        "blocked_pair": (
            None
            if cert.blocked_pair is None
            else [cert.blocked_pair[0].path, cert.blocked_pair[1].path]
        ),
        "witness_y": None if cert.witness_y is None else vector_to_doc(cert.witness_y),
        "epsilon": None if cert.epsilon is None else format_rational(cert.epsilon),
        "norm_sq": format_rational(cert.norm_sq),
    }


def greedy_trace_doc(trace: GreedyTrace) -> dict:
    nodes = sorted(trace.s_values, key=Node.sort_key)
    return {
        "s_values": {n.path: format_rational(trace.s_values[n]) for n in nodes},
        "chosen": {
            n.path: (None if trace.chosen[n] is None else trace.chosen[n].path)
            for n in nodes
        },
        "ties": {n.path: [c.path for c in trace.tie_sets[n]] for n in nodes},
    }


def violation_doc(v: GreedyViolation) -> dict:
    return {
        "segment": segment_to_doc(v.segment),
        "node": v.node.path,
        "chosen": v.chosen.path,
        "better": v.better.path,
        "chosen_sum": format_rational(v.chosen_sum),
        "better_sum": format_rational(v.better_sum),
    }


def equal_sums_doc(report: EqualSumsReport) -> dict:
    return {
        "holds": report.holds,
        "sigma": format_rational(report.sigma),
        "branch_sums": {
            u.path: {
                bottom.path: format_rational(s)
                for bottom, s in sorted(sums.items(), key=lambda kv: kv[0].sort_key())
            }
            for u, sums in sorted(
                report.branch_sums.items(), key=lambda kv: kv[0].sort_key()
            )
        },
        "sibling_balance": {
            u.path: [format_rational(a), format_rational(b)]
            for u, (a, b) in sorted(
                report.sibling_balance.items(), key=lambda kv: kv[0].sort_key()
            )
        },
    }


def dump(doc: Any, stream: IO[str]) -> None:
    json.dump(doc, stream, indent=2)
    stream.write("\n")

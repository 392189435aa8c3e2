"""The dyadic tree: nodes, the prefix order, segments, complete subtrees.

Nodes are finite 0/1 strings; the root is the empty string. The tree
order is the initial-segment (prefix) order. A segment is an
order-convex chain, stored by its two endpoints so that membership and
disjointness are O(depth) string tests and deep chains are never
materialized unless asked for.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, InputError

# Inputs deeper than this are rejected at the parse boundary; internal
# derived nodes (e.g. the exit child of a leaf in a branch-sum scan) may
# exceed it by one.
DEFAULT_MAX_DEPTH = 30

_BITS = frozenset("01")


@dataclass(frozen=True)
class Node:
    """A position in the dyadic tree, identified by its bit path."""

    path: str = ""

    def __post_init__(self) -> None:
        if not set(self.path) <= _BITS:
            raise InputError(f"node path must consist of 0/1 bits, got {self.path!r}")

    @property
    def depth(self) -> int:
        return len(self.path)

    def parent(self) -> Node | None:
        return Node(self.path[:-1]) if self.path else None

    def child(self, bit: int) -> Node:
        return Node(self.path + "01"[bit])

    def children(self) -> tuple[Node, Node]:
        return self.child(0), self.child(1)

    def sort_key(self) -> tuple[int, str]:
        """Canonical order: by depth, then lexicographic on bits."""
        return (len(self.path), self.path)

    def __repr__(self) -> str:
        return f"Node({self.path!r})"


ROOT = Node("")


def parse_node(text: str, max_depth: int = DEFAULT_MAX_DEPTH) -> Node:
    """Parse a node from its wire form (bit string, root = "")."""
    if len(text) > max_depth:
        raise InputError(f"node {text!r} exceeds max depth {max_depth}")
    return Node(text)


def leq(a: Node, b: Node) -> bool:
    """True iff a precedes b in the tree order (a's path is a prefix of b's)."""
    return b.path.startswith(a.path)


def comparable(a: Node, b: Node) -> bool:
    return leq(a, b) or leq(b, a)


@dataclass(frozen=True)
class Segment:
    """An order-convex chain [top, bottom], stored by its endpoints."""

    top: Node
    bottom: Node

    def __post_init__(self) -> None:
        if not leq(self.top, self.bottom):
            raise DomainError(
                f"segment endpoints out of order: {self.top.path!r} !<= {self.bottom.path!r}"
            )

    def __contains__(self, node: Node) -> bool:
        return leq(self.top, node) and leq(node, self.bottom)

    def __len__(self) -> int:
        return self.bottom.depth - self.top.depth + 1

    def members(self) -> list[Node]:
        """The chain from top to bottom inclusive, in increasing depth order."""
        b = self.bottom.path
        return [Node(b[:k]) for k in range(self.top.depth, self.bottom.depth + 1)]

    def sort_key(self) -> tuple[tuple[int, str], tuple[int, str]]:
        return (self.top.sort_key(), self.bottom.sort_key())

    def __repr__(self) -> str:
        return f"Segment({self.top.path!r}, {self.bottom.path!r})"


def singleton(node: Node) -> Segment:
    return Segment(node, node)


def segments_disjoint(s1: Segment, s2: Segment) -> bool:
    """True iff the member chains do not intersect.

    Two chains meet iff each top lies above the other's bottom, so this
    is a pair of prefix tests on the endpoints.
    """
    return not (leq(s1.top, s2.bottom) and leq(s2.top, s1.bottom))


def canonical_order(nodes: Iterable[Node]) -> list[Node]:
    return sorted(nodes, key=Node.sort_key)


def complete_closure(nodes: Iterable[Node]) -> frozenset[Node]:
    """Smallest complete subtree containing the given nodes.

    Adds every node between each comparable pair. One pass suffices: any
    two members of the result are bracketed by members of the input, so
    the output is already interval-closed.
    """
    paths = {n.path for n in nodes}
    out = set(paths)
    for a in paths:
        for b in paths:
            if b.startswith(a):
                out.update(b[:k] for k in range(len(a), len(b)))
    return frozenset(Node(p) for p in out)


def comparable_pairs(nodes: Iterable[Node]) -> list[tuple[Node, Node]]:
    """All strictly ordered pairs (u, v) with u < v, in canonical order."""
    ns = canonical_order(nodes)
    return [(u, v) for u in ns for v in ns if u != v and leq(u, v)]


def parent_child_pairs(nodes: Iterable[Node]) -> list[tuple[Node, Node]]:
    """Pairs (u, v) of the node set with v an immediate child of u."""
    ns = canonical_order(nodes)
    have = {n.path for n in ns}
    out = []
    for u in ns:
        for v in u.children():
            if v.path in have:
                out.append((u, v))
    return out


def minimal_nodes(nodes: Iterable[Node]) -> list[Node]:
    """Members with no strict ancestor in the set, in canonical order."""
    paths = {n.path for n in nodes}
    return canonical_order(
        Node(p) for p in paths if not any(p[:k] in paths for k in range(len(p)))
    )



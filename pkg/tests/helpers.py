"""Random instance generators shared across the test modules.

Every generator takes an explicit random.Random so each test pins its
own seed and the suite stays deterministic.
"""

from __future__ import annotations

import random
from fractions import Fraction

from jtx import Node, Segment, TreeVector


def grid(max_depth: int) -> list[str]:
    """All node paths of the full dyadic tree down to max_depth."""
    out = [""]
    for d in range(1, max_depth + 1):
        out.extend(format(i, f"0{d}b") for i in range(2**d))
    return out


def random_signed(
    rng: random.Random,
    max_depth: int = 4,
    max_ran: int = 11,
    density: float = 0.5,
    max_abs: int = 3,
    max_den: int = 4,
) -> TreeVector:
    """Random signed vector with |ran(x)| bounded; entries k/q, k nonzero."""
    choices = [k for k in range(-max_abs, max_abs + 1) if k != 0]
    while True:
        support = [p for p in grid(max_depth) if rng.random() < density]
        if not support:
            continue
        q = rng.randint(1, max_den)
        x = TreeVector.from_dict({p: Fraction(rng.choice(choices), q) for p in support})
        if len(x.range()) <= max_ran:
            return x


def random_positive(
    rng: random.Random,
    max_depth: int = 6,
    max_density: float = 0.6,
    max_den: int = 4,
) -> TreeVector:
    """Random entrywise-positive vector; depth and density vary per instance."""
    while True:
        depth = rng.randint(1, max_depth)
        density = rng.uniform(0.15, max_density)
        support = [p for p in grid(depth) if rng.random() < density]
        if support:
            q = rng.randint(1, max_den)
            return TreeVector.from_dict(
                {p: Fraction(rng.randint(1, 4), q) for p in support}
            )


def level_symmetric(rng: random.Random, max_depth: int = 3) -> TreeVector:
    """Full tree with one positive value per level (hence separated)."""
    depth = rng.randint(0, max_depth)
    values = [Fraction(rng.randint(1, 3), rng.randint(1, 2)) for _ in range(depth + 1)]
    return TreeVector.from_dict({p: values[len(p)] for p in grid(depth)})


def chain_vector(rng: random.Random, max_depth: int = 6) -> TreeVector:
    """Signed vector supported on a random chain along one branch."""
    while True:
        depth = rng.randint(1, max_depth)
        branch = format(rng.getrandbits(depth), f"0{depth}b")
        support = [branch[:k] for k in range(depth + 1) if rng.random() < 0.7]
        if support:
            return TreeVector.from_dict(
                {
                    p: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
                    for p in support
                }
            )


def antichain_vector(rng: random.Random, depth_lo: int = 1, depth_hi: int = 4) -> TreeVector:
    """Signed vector supported on pairwise incomparable nodes."""
    while True:
        depth = rng.randint(depth_lo, depth_hi)
        support = [p for p in grid(depth) if len(p) == depth and rng.random() < 0.5]
        if support:
            return TreeVector.from_dict(
                {
                    p: Fraction(rng.choice([-2, -1, 1, 2]), rng.randint(1, 3))
                    for p in support
                }
            )


def incomparable_segments_vector(rng: random.Random, top_depth: int = 3) -> TreeVector:
    """Signed vector supported on a family of pairwise incomparable segments."""
    while True:
        tops = [p for p in grid(top_depth) if len(p) == top_depth and rng.random() < 0.4]
        entries = {}
        for top in tops:
            path = top
            for step in range(rng.randint(1, 3)):
                if rng.random() < 0.8:
                    entries[path] = Fraction(
                        rng.choice([-2, -1, 1, 2]), rng.randint(1, 2)
                    )
                path += rng.choice("01")
        if entries:
            return TreeVector.from_dict(entries)


def full_tree_vector(n: int) -> TreeVector:
    """x_n: every node of depth at most n gets coefficient 1."""
    return TreeVector.from_dict({p: 1 for p in grid(n)})


def maximal_head_segment(x: TreeVector, head: Node) -> Segment:
    """A segment from `head` attaining the maximal downward sum (x positive)."""
    from jtx import SupportTree, canonical_order, max_segment_sum

    st = SupportTree(x)
    s_vals = {n: max_segment_sum(x, n) for n in x.support()}
    cur = head
    while st.children[cur]:
        best = max(s_vals[c] for c in st.children[cur])
        cur = next(c for c in canonical_order(st.children[cur]) if s_vals[c] == best)
    return Segment(head, cur)

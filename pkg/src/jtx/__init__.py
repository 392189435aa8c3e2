"""Exact-arithmetic toolkit for the James Tree norm of finite-support vectors.

Computes squared JT norms with witness partitions, enumerates norming
partitions on small instances, decides the separated property, certifies
extreme points (with explicit perturbation witnesses for non-extreme
vectors), and provides the heaviest-child greedy machinery and equal
sums checks for positive vectors. All arithmetic is exact rational.
"""

from .errors import (
    CapError,
    DomainError,
    InfeasibleError,
    InputError,
    InternalError,
    InvalidPartitionError,
    JtxError,
    PositivityError,
)
from .extremality import (
    EqualSumsReport,
    ExtremeCertificate,
    SeparationReport,
    all_isolatable_implies_l2,
    certify_extreme,
    equal_sums_report,
    is_separated,
    isolatable_nodes,
    perturbation_witness,
    vanishes_on_all_norming,
)
from .greedy import (
    GreedyTrace,
    GreedyViolation,
    SupportTree,
    consistent_with_greedy,
    forced_segment_is_norming,
    greedy_partition,
    max_segment_sum,
    recursive_norm_check,
)
from .norm import (
    EMPTY_PARTITION,
    ForceSegment,
    IsolateNode,
    NormResult,
    NormSolver,
    ORACLE_NODE_CAP,
    Partition,
    SeparatePair,
    canonical_segments,
    constrained_norm_sq,
    enumerate_norming,
    gap,
    jt_norm_sq,
    oracle_norm_sq,
    score,
)
from .tree import (
    DEFAULT_MAX_DEPTH,
    Node,
    ROOT,
    Segment,
    canonical_order,
    comparable,
    comparable_pairs,
    complete_closure,
    leq,
    minimal_nodes,
    parent_child_pairs,
    parse_node,
    segments_disjoint,
    singleton,
)
from .vector import Rational, TreeVector, format_rational, parse_rational

__version__ = "0.1.0"

__all__ = [
    "CapError",
    "DEFAULT_MAX_DEPTH",
    "DomainError",
    "EMPTY_PARTITION",
    "EqualSumsReport",
    "ExtremeCertificate",
    "ForceSegment",
    "GreedyTrace",
    "GreedyViolation",
    "InfeasibleError",
    "InputError",
    "InternalError",
    "InvalidPartitionError",
    "IsolateNode",
    "JtxError",
    "Node",
    "NormResult",
    "NormSolver",
    "ORACLE_NODE_CAP",
    "Partition",
    "PositivityError",
    "ROOT",
    "Rational",
    "SeparatePair",
    "SeparationReport",
    "Segment",
    "SupportTree",
    "TreeVector",
    "all_isolatable_implies_l2",
    "canonical_order",
    "canonical_segments",
    "certify_extreme",
    "comparable",
    "comparable_pairs",
    "complete_closure",
    "consistent_with_greedy",
    "constrained_norm_sq",
    "enumerate_norming",
    "equal_sums_report",
    "forced_segment_is_norming",
    "format_rational",
    "gap",
    "greedy_partition",
    "is_separated",
    "isolatable_nodes",
    "jt_norm_sq",
    "leq",
    "max_segment_sum",
    "minimal_nodes",
    "oracle_norm_sq",
    "parent_child_pairs",
    "parse_node",
    "parse_rational",
    "perturbation_witness",
    "recursive_norm_check",
    "score",
    "segments_disjoint",
    "singleton",
    "vanishes_on_all_norming",
]

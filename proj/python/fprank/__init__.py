"""Exact randomized rank algorithms over a prime field.

Matrices are lists of integer rows (entries are reduced into the field),
graphs are an integer vertex count plus an edge list, and every operation
takes an explicit seed, so results are reproducible across runs.
"""

from ._fprank import (
    DEFAULT_PRIME,
    Connectivity,
    DynRank,
    IOError,
    VerificationError,
    decompose,
    disjoint_bases,
    edge_connectivity,
    find_matching,
    indep_cols,
    lowrank_mul,
    matching_size,
    max_disjoint_bases,
    nullspace,
    rank,
    rank_atmost,
    sc_rank,
    subset_matching_size,
)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_PRIME",
    "Connectivity",
    "DynRank",
    "IOError",
    "VerificationError",
    "decompose",
    "disjoint_bases",
    "edge_connectivity",
    "find_matching",
    "indep_cols",
    "lowrank_mul",
    "matching_size",
    "max_disjoint_bases",
    "nullspace",
    "rank",
    "rank_atmost",
    "sc_rank",
    "subset_matching_size",
]

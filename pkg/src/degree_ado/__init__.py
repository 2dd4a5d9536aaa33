"""Degree-sensitive approximate distance oracles and set-intersection gadgets."""

from .ado import AdoParams, AdoStructure, PathKind, QueryResult, build_ado, build_for_degree, query, space_report
from .ado_io import deserialize_ado, serialize_ado
from .graph import UNREACHABLE, Graph, all_pairs_exact, bfs_full, max_degree
from .truncated import ecc_trunc, rad_trunc, truncated_bfs

__all__ = [
    "AdoParams",
    "AdoStructure",
    "Graph",
    "PathKind",
    "QueryResult",
    "UNREACHABLE",
    "all_pairs_exact",
    "bfs_full",
    "build_ado",
    "build_for_degree",
    "deserialize_ado",
    "ecc_trunc",
    "max_degree",
    "query",
    "rad_trunc",
    "serialize_ado",
    "space_report",
    "truncated_bfs",
]

"""Colorful Graph Motif on arbitrary graphs by same-color pair branching.

While some color has two carriers ``u`` and ``v``, one of them must go:
branch on deleting ``u`` or deleting ``v``.  Each branch spends one unit of
the dual parameter, so the search tree has at most ``2^ell`` leaves.  Once
all colors are distinct the remaining vertices are forced to be the
occurrence, and the answer is whether they induce a connected graph.
"""
from __future__ import annotations

from collections import Counter

from .core import Instance, Kind, MotifError, SolveResult, is_connected_subset, normalize, occurrence_from_indices


def _pick_pair(alive, color):
    carriers: dict = {}
    for v in sorted(alive):
        carriers.setdefault(color[v], []).append(v)
    dup = sorted(c for c, vs in carriers.items() if len(vs) >= 2)
    if not dup:
        return None
    return carriers[dup[0]][:2]


def _search(adj, color, alive, stats):
    stats["nodes"] += 1
    pair = _pick_pair(alive, color)
    if pair is None:
        return alive if is_connected_subset(adj, alive) else None
    stats["branch_nodes"] += 1
    for v in pair:
        found = _search(adj, color, alive - {v}, stats)
        if found is not None:
            return found
    return None


def solve_cgm_general(inst: Instance) -> SolveResult:
    if inst.kind is not Kind.CGM:
        raise MotifError("general-cgm handles CGM instances only")
    stats = Counter(nodes=0, branch_nodes=0)
    norm = normalize(inst)
    if norm is None:
        return SolveResult(False, stats=dict(stats))
    color = [norm.color(v) for v in range(norm.n)]
    found = _search(norm.adj, color, frozenset(range(norm.n)), stats)
    if found is None:
        return SolveResult(False, stats=dict(stats))
    return SolveResult(True, occurrence_from_indices(norm, found), dict(stats))

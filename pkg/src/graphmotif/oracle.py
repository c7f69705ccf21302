"""Brute-force reference solver.

Connected vertex sets of size k are enumerated with the ESU scheme: every
set is grown from its minimum-index vertex, and a vertex joins the
extension set only through its exclusive neighborhood, so each set is
produced exactly once.

When the dual parameter is small the complement is cheaper: every set of
``ell`` vertices to delete is tried instead (skipping vertices that every
occurrence must contain), which also lifts the vertex cap for such
instances.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .core import Instance, Kind, LimitExceeded, Occurrence, SolveResult, is_connected_subset


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = 20
    max_enumerated_sets: int = 5_000_000

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_enumerated_sets <= 0:
            raise ValueError("oracle limits must be positive")


def connected_sets(adj, k: int):
    """Yield every connected vertex set of size ``k`` exactly once (as tuples)."""
    n = len(adj)
    if k <= 0:
        return
    for root in range(n):
        ext = [w for w in adj[root] if w > root]
        yield from _extend([root], set(ext), {root} | set(adj[root]), root, adj, k)


def _extend(sub, ext, closed, root, adj, k):
    # closed = sub together with its neighborhood
    if len(sub) == k:
        yield tuple(sub)
        return
    ext = set(ext)
    while ext:
        w = ext.pop()
        fresh = [u for u in adj[w] if u > root and u not in closed]
        sub.append(w)
        yield from _extend(sub, ext | set(fresh), closed | set(fresh), root, adj, k)
        sub.pop()


def color_assignment_exists(subset, inst: Instance) -> dict | None:
    """Map ``subset`` (vertex indices) one-to-one onto the motif's color slots.

    Returns ``{vertex index: color}`` or ``None``.  Singleton-list instances
    reduce to a multiset comparison; list colorings go through a maximum
    bipartite matching between vertices and color slots.
    """
    subset = list(subset)
    if len(subset) != inst.k:
        return None
    if inst.kind is not Kind.LGM:
        if Counter(inst.color(v) for v in subset) != Counter(inst.motif):
            return None
        return {v: inst.color(v) for v in subset}
    supply = Counter(c for v in subset for c in inst.colors[v])
    if any(supply[c] < mult for c, mult in inst.motif.items()):
        return None
    slots = [c for c, mult in inst.motif.items() for _ in range(mult)]
    slot_of: dict = {}
    for s, c in enumerate(slots):
        slot_of.setdefault(c, []).append(s)
    rows, cols = [], []
    for i, v in enumerate(subset):
        for c in inst.colors[v]:
            for s in slot_of.get(c, ()):
                rows.append(i)
                cols.append(s)
    if not rows:
        return None
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(subset), len(slots))
    )
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        return None
    return {v: slots[match[i]] for i, v in enumerate(subset)}


def _forced(inst: Instance) -> set:
    """Carriers of colors with no spare carrier; every occurrence contains them."""
    carriers: dict = {}
    for v, lst in enumerate(inst.colors):
        for c in lst:
            carriers.setdefault(c, []).append(v)
    return {v for c, m in inst.motif.items() if len(carriers.get(c, ())) == m for v in carriers[c]}


def _by_deletion(inst: Instance, optional):
    everything = set(range(inst.n))
    for gone in itertools.combinations(optional, inst.ell):
        subset = everything.difference(gone)
        if is_connected_subset(inst.adj, subset):
            yield tuple(sorted(subset))


def _candidates(inst: Instance, lim: OracleLimits):
    if inst.ell < 0:
        return
    optional = sorted(set(range(inst.n)) - _forced(inst))
    deletions = math.comb(len(optional), inst.ell)
    if inst.n > lim.max_vertices or deletions <= 2000:
        if deletions > lim.max_enumerated_sets:
            raise LimitExceeded(f"oracle limited to {lim.max_vertices} vertices, got {inst.n}")
        sets = _by_deletion(inst, optional)
    else:
        sets = connected_sets(inst.adj, inst.k)
    count = 0
    for subset in sets:
        count += 1
        if count > lim.max_enumerated_sets:
            raise LimitExceeded("oracle enumeration cap reached")
        f = color_assignment_exists(subset, inst)
        if f is not None:
            yield Occurrence.from_colors({inst.vertices[v]: c for v, c in f.items()})


def oracle_solve(inst: Instance, lim: OracleLimits = OracleLimits()) -> SolveResult:
    for occ in _candidates(inst, lim):
        return SolveResult(True, occ)
    return SolveResult(False)


def enumerate_occurrences(inst: Instance, lim: OracleLimits = OracleLimits()) -> list:
    return list(_candidates(inst, lim))

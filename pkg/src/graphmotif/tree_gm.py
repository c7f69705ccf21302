"""Graph Motif on trees in O(3^ell * n).

For a vertex ``v`` the table ``D_v`` records, for each vector ``lam`` of
per-color deletion counts (one coordinate per abundant color, coordinate
``i`` bounded by that color's excess), whether ``T_v`` has a connected
subtree containing ``v`` and every non-abundantly colored vertex of ``T_v``
that deletes exactly ``lam`` abundant vertices.  Children are folded in one
at a time; the table after folding child ``u`` is kept (``P[u]``) so the
witness can be recovered by re-deriving each split.

The same code accepts forests, which appear after ``normalize`` strips
vertices whose color is not in the motif.
"""
from __future__ import annotations

import math

import numpy as np

from . import _kernels
from ._kernels import TableLayout
from .core import (
    Instance,
    Kind,
    MotifError,
    NotATree,
    SolveResult,
    normalize,
    occurrence_from_indices,
)


def init_leaf_table(layout: TableLayout) -> np.ndarray:
    """Table of a single vertex: only the all-zero deletion vector is realizable."""
    return layout.unit()


def combine_child(d_prev, d_child, layout: TableLayout, child_counts, child_only_abundant: bool,
                  backend=None):
    """Fold child ``u_i`` into the prefix table ``D^{i-1}_v``.

    ``child_counts`` gives the number of vertices of each abundant color in
    ``T_{u_i}``.  Dropping the whole child subtree is only possible when it
    holds abundant colors exclusively and those counts fit in the table.
    Returns ``(table, split_work)``.
    """
    drop_vec = np.asarray(child_counts, dtype=np.int64)
    drop_lin = layout.linear(drop_vec) if layout.j else 0
    can_drop = bool(child_only_abundant) and drop_lin >= 0
    return _kernels.combine(
        np.asarray(d_prev, dtype=np.uint8), np.asarray(d_child, dtype=np.uint8),
        can_drop, max(drop_lin, 0), drop_vec, layout.coords, layout.limits, backend=backend,
    )


def lift_first_child(d_child, layout: TableLayout, child_counts, child_only_abundant: bool,
                     backend=None) -> np.ndarray:
    """``D^1_v`` from ``D_{u_1}``: keep part of the child subtree or drop all of it."""
    table, _ = combine_child(init_leaf_table(layout), d_child, layout, child_counts,
                             child_only_abundant, backend=backend)
    return table


class GmTreeDp:
    """All tables for one GM instance on a forest, plus witness recovery."""

    def __init__(self, inst: Instance, backend=None):
        self.inst = inst
        self.backend = _kernels.resolve_backend(backend)
        occ = inst.occ
        self.abundant = [c for c in inst.motif if occ[c] > inst.motif[c]]
        self.layout = TableLayout([occ[c] - inst.motif[c] for c in self.abundant])
        self._root_forest()
        self._subtree_counts()

    def _root_forest(self):
        inst = self.inst
        n = inst.n
        adj = inst.adj
        parent = np.full(n, -1, dtype=np.int64)
        seen = bytearray(n)
        pre = []
        roots = []
        for s in range(n):
            if seen[s]:
                continue
            roots.append(s)
            seen[s] = 1
            stack = [s]
            while stack:
                v = stack.pop()
                pre.append(v)
                for w in sorted(adj[v], reverse=True):
                    if not seen[w]:
                        seen[w] = 1
                        parent[w] = v
                        stack.append(w)
        self.roots = roots
        self.parent = parent
        self.pre = np.asarray(pre, dtype=np.int64)
        counts = np.bincount(parent[parent >= 0], minlength=n)
        self.child_ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.child_ptr[1:])
        nonroot = np.flatnonzero(parent >= 0)
        order = np.lexsort((nonroot, parent[nonroot]))
        self.child_idx = nonroot[order].astype(np.int64)

    def _subtree_counts(self):
        # pre-order puts each subtree in a contiguous block [tin, tin + size)
        inst = self.inst
        n = inst.n
        j = self.layout.j
        pos = {c: d for d, c in enumerate(self.abundant)}
        size = np.ones(n, dtype=np.int64)
        parent = self.parent
        for v in self.pre[::-1].tolist():
            p = parent[v]
            if p >= 0:
                size[p] += size[v]
        tin = np.empty(n, dtype=np.int64)
        tin[self.pre] = np.arange(n)
        col = np.full(n, -1, dtype=np.int64)
        for v in range(n):
            col[v] = pos.get(inst.color(v), -1)
        col_pre = col[self.pre]
        marks = np.zeros((n + 1, j + 1), dtype=np.int64)
        for d in range(j):
            marks[1:, d] = np.cumsum(col_pre == d)
        marks[1:, j] = np.cumsum(col_pre < 0)
        span = marks[tin + size] - marks[tin]
        self.sub_counts = np.ascontiguousarray(span[:, :j])
        self.sub_plain = span[:, j]
        self.total_plain = int((col < 0).sum())
        self.drop_lin = self.sub_counts @ self.layout.strides if j else np.zeros(n, dtype=np.int64)
        self.can_drop = (self.sub_plain == 0) & (self.sub_counts <= self.layout.limits).all(axis=1)
        self.drop_lin = np.where(self.can_drop, self.drop_lin, 0).astype(np.int64)

    def fill(self):
        n = self.inst.n
        size = self.layout.size
        self.D = np.zeros((n, size), dtype=np.uint8)
        self.P = np.zeros((n, size), dtype=np.uint8)
        self.max_split_work, self.total_split_work = _kernels.dp_pass(
            self.pre[::-1].copy(), self.child_ptr, self.child_idx, self.can_drop, self.drop_lin,
            self.sub_counts, self.layout.coords, self.layout.limits, self.D, self.P,
            backend=self.backend,
        )
        return self

    def accepting_entry(self):
        """First ``(v, lam)`` whose table entry yields an occurrence, else ``None``."""
        motif_need = np.array([self.inst.motif[c] for c in self.abundant], dtype=np.int64)
        target = self.sub_counts - motif_need[None, :]
        ok = self.sub_plain == self.total_plain
        if self.layout.j:
            ok &= (target >= 0).all(axis=1) & (target <= self.layout.limits).all(axis=1)
        cand = np.flatnonzero(ok)
        if not len(cand):
            return None
        lin = (target[cand] @ self.layout.strides) if self.layout.j else np.zeros(len(cand), dtype=np.int64)
        hit = np.flatnonzero(self.D[cand, lin])
        if not len(hit):
            return None
        return int(cand[hit[0]]), int(lin[hit[0]])

    def reconstruct_witness(self, v: int, lam: int) -> list:
        selected = np.zeros(self.inst.n, dtype=np.uint8)
        ok = _kernels.reconstruct(
            v, lam, self.child_ptr, self.child_idx, self.can_drop, self.drop_lin, self.sub_counts,
            self.layout.coords, self.D, self.P, selected, backend=self.backend,
        )
        if not ok:
            raise AssertionError("DP tables inconsistent during witness reconstruction")
        return np.flatnonzero(selected).tolist()

    def stats(self) -> dict:
        limits = self.layout.limits.tolist()
        return {
            "abundant_colors": self.layout.j,
            "table_size": self.layout.size,
            "dp_entries": 2 * self.inst.n * self.layout.size,
            "max_split_work": int(self.max_split_work),
            "total_split_work": int(self.total_split_work),
            "split_bound": split_bound(limits),
        }


def split_bound(limits) -> int:
    """Number of (lam', lam) pairs with lam' <= lam over the table box."""
    return math.prod((x + 2) * (x + 1) // 2 for x in limits)


def solve_gm_forest(inst: Instance, backend=None) -> SolveResult:
    """DP on a normalized GM/CGM instance whose graph is a forest."""
    dp = GmTreeDp(inst, backend=backend).fill()
    entry = dp.accepting_entry()
    stats = dp.stats()
    if entry is None:
        return SolveResult(False, stats=stats)
    chosen = dp.reconstruct_witness(*entry)
    return SolveResult(True, occurrence_from_indices(inst, chosen), stats)


def solve_gm_tree(inst: Instance, backend=None) -> SolveResult:
    if inst.kind is Kind.LGM:
        raise MotifError("tree-gm handles GM and CGM instances only")
    if not inst.is_tree():
        raise NotATree("tree-gm requires the input graph to be a tree")
    norm = normalize(inst)
    if norm is None:
        return SolveResult(False, stats={"infeasible": 1})
    return solve_gm_forest(norm, backend=backend)

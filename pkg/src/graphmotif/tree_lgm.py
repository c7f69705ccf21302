"""List-colored Graph Motif on trees whose vertex-color graph is a forest.

The search keeps a list of admissible colors per vertex.  At every node:

* a color with fewer carriers than its multiplicity rejects the branch;
* a color with exactly as many carriers as its multiplicity claims them,
  shrinking their lists to that color (cascading);
* if at least ``ell + 1`` vertex-color components are *costly* (each one
  forces a deletion), the branch is rejected;
* a color carried by at least ``multiplicity + 2`` vertices is split by
  branching on which of ``multiplicity + 1`` of its child vertices loses it;
* otherwise every component is a tight star or a tree with exactly one
  spare vertex, and the instance is rewritten into plain GM for the tree DP.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .core import (
    Instance,
    Kind,
    NotATree,
    Occurrence,
    ShapeViolation,
    SolveResult,
    VcgNotForest,
    normalize,
    vertex_color_graph,
)
from .tree_gm import solve_gm_forest


@dataclass
class LgmState:
    lists: list  # per vertex index: set of admissible colors
    motif: dict
    depth: int = 0

    @property
    def n(self) -> int:
        return len(self.lists)

    @property
    def ell(self) -> int:
        return self.n - sum(self.motif.values())

    def carriers(self) -> dict:
        out = {c: set() for c in self.motif}
        for v, lst in enumerate(self.lists):
            for c in lst:
                out[c].add(v)
        return out

    def copy(self) -> "LgmState":
        return LgmState([set(s) for s in self.lists], self.motif, self.depth)


def rule_bad_color(st: LgmState) -> bool:
    """True when some color has fewer carriers than its multiplicity (answer no)."""
    car = st.carriers()
    return any(len(car[c]) < m for c, m in st.motif.items())


def rule_tight_color(st: LgmState) -> LgmState:
    """Restrict the carriers of every tight color to that color, to a fixpoint."""
    car = st.carriers()
    queue = deque(st.motif)
    queued = set(queue)
    while queue:
        c = queue.popleft()
        queued.discard(c)
        if len(car[c]) != st.motif[c]:
            continue
        for u in car[c]:
            lst = st.lists[u]
            if len(lst) == 1:
                continue
            for d in lst - {c}:
                car[d].discard(u)
                if d not in queued:
                    queued.add(d)
                    queue.append(d)
            st.lists[u] = {c}
    return st


def _vcg_components(st: LgmState, car=None):
    """Components as ``(vertices, colors)``, each ordered by minimum vertex."""
    car = car if car is not None else st.carriers()
    seen_v: set = set()
    seen_c: set = set()
    comps = []
    for s in range(st.n):
        if s in seen_v:
            continue
        vs, cs = [], []
        seen_v.add(s)
        stack = [("v", s)]
        while stack:
            side, x = stack.pop()
            if side == "v":
                vs.append(x)
                for c in st.lists[x]:
                    if c not in seen_c:
                        seen_c.add(c)
                        stack.append(("c", c))
            else:
                cs.append(x)
                for y in car[x]:
                    if y not in seen_v:
                        seen_v.add(y)
                        stack.append(("v", y))
        comps.append((sorted(vs), sorted(cs)))
    return comps


def _is_costly(st: LgmState, car, vs, cs) -> bool:
    if not cs:
        return len(vs) == 1
    return all(st.motif[c] == len(car[c]) - 1 for c in cs)


def costly_components(st: LgmState) -> int:
    car = st.carriers()
    return sum(_is_costly(st, car, vs, cs) for vs, cs in _vcg_components(st, car))


def rule_costly(st: LgmState) -> bool:
    """True when the costly components already outnumber the deletion budget."""
    return costly_components(st) >= st.ell + 1


def find_2abundant(st: LgmState):
    """Deepest 2-abundant color of the first component that has one.

    Each component is rooted at its minimum vertex; the first 2-abundant
    color met in post-order has none below it.  Returns ``(color, children)``
    with children sorted, or ``None``.
    """
    car = st.carriers()
    for vs, cs in _vcg_components(st, car):
        if not any(len(car[c]) >= st.motif[c] + 2 for c in cs):
            continue
        root = ("v", vs[0])
        parent = {root: None}
        order = []
        stack = [root]
        while stack:
            node = stack.pop()
            order.append(node)
            side, x = node
            nbrs = [("c", c) for c in sorted(st.lists[x])] if side == "v" else [("v", y) for y in sorted(car[x])]
            for nb in nbrs:
                if nb != parent[node]:
                    parent[nb] = node
                    stack.append(nb)
        for node in reversed(order):
            side, c = node
            if side == "c" and len(car[c]) >= st.motif[c] + 2:
                kids = sorted(y for y in car[c] if ("v", y) != parent[node])
                return c, kids
    return None


def branch_2abundant(st: LgmState) -> list:
    found = find_2abundant(st)
    if found is None:
        raise AssertionError("no 2-abundant color vertex")
    c, kids = found
    out = []
    for u in kids[: st.motif[c] + 1]:
        child = st.copy()
        child.lists[u].discard(c)
        child.depth += 1
        out.append(child)
    return out


@dataclass
class GmRewrite:
    """A GM instance equivalent to an LGM state plus what is needed to lift witnesses."""

    instance: Instance
    tight: dict = field(default_factory=dict)  # vertex index -> original color
    spare: list = field(default_factory=list)  # (vertices, colors) of one-spare components


def rewrite_to_gm(st: LgmState, base: Instance) -> GmRewrite:
    """Replace list constraints by plain colors; ``base`` supplies graph and ids."""
    car = st.carriers()
    new_colors = [None] * st.n
    motif: dict = {}
    rw = GmRewrite(instance=None)
    cindex = {c: i for i, c in enumerate(st.motif)}
    for vs, cs in _vcg_components(st, car):
        if len(cs) == 1 and st.motif[cs[0]] == len(car[cs[0]]) and all(len(st.lists[v]) == 1 for v in vs):
            c = cs[0]
            for v in vs:
                name = f"1:{cindex[c]}:{v}"
                new_colors[v] = (name,)
                motif[name] = 1
                rw.tight[v] = c
        elif _is_costly(st, car, vs, cs):
            name = f"2:{len(rw.spare)}"
            rw.spare.append((vs, cs))
            for v in vs:
                new_colors[v] = (name,)
            if len(vs) > 1:
                motif[name] = len(vs) - 1
        else:
            raise ShapeViolation(f"vertex-color component with colors {cs} fits neither rewrite case")
    inst = Instance(Kind.GM, base.vertices, tuple(new_colors), base.edges, motif)
    rw.instance = inst
    return rw


def lift_assignment(st: LgmState, rw: GmRewrite, chosen) -> dict:
    """Color assignment (vertex index -> color) for a GM witness ``chosen``."""
    chosen = set(chosen)
    out = {v: rw.tight[v] for v in chosen if v in rw.tight}
    car = st.carriers()
    for vs, cs in rw.spare:
        if len(vs) == 1:
            continue
        spare = [v for v in vs if v not in chosen]
        if len(spare) != 1:
            raise AssertionError("rewritten witness must skip exactly one vertex per component")
        # root at the skipped vertex; everyone else takes its parent color
        seen_c = set()
        seen_v = {spare[0]}
        queue = deque([spare[0]])
        while queue:
            x = queue.popleft()
            for c in sorted(st.lists[x]):
                if c in seen_c:
                    continue
                seen_c.add(c)
                for y in sorted(car[c]):
                    if y not in seen_v:
                        seen_v.add(y)
                        out[y] = c
                        queue.append(y)
    return out


def _solve_rewritten(st: LgmState, base: Instance, stats):
    rw = rewrite_to_gm(st, base)
    gm = normalize(rw.instance)
    if gm is None:
        return None
    res = solve_gm_forest(gm)
    stats["dp_calls"] += 1
    if not res.answer:
        return None
    chosen = [base.index[v] for v in res.occurrence.vertices]
    return lift_assignment(st, rw, chosen)


def _search(st: LgmState, base: Instance, stats, failed: set):
    # branches commute, so the same lists can be reached along several paths
    key = tuple(frozenset(lst) for lst in st.lists)
    if key in failed:
        stats["repeats"] += 1
        return None
    found = _search_fresh(st, base, stats, failed)
    if found is None:
        failed.add(key)
    return found


def _search_fresh(st: LgmState, base: Instance, stats, failed: set):
    stats["nodes"] += 1
    stats["max_depth"] = max(stats["max_depth"], st.depth)
    if rule_bad_color(st):
        stats["leaves"] += 1
        return None
    rule_tight_color(st)
    if rule_bad_color(st) or rule_costly(st):
        stats["leaves"] += 1
        return None
    if find_2abundant(st) is None:
        stats["leaves"] += 1
        return _solve_rewritten(st, base, stats)
    stats["branch_nodes"] += 1
    for child in branch_2abundant(st):
        found = _search(child, base, stats, failed)
        if found is not None:
            return found
    return None


def _solve_bicliques(norm: Instance, stats) -> SolveResult:
    """Each biclique component collapses into one color with the summed multiplicity."""
    h = vertex_color_graph(norm)
    colors = [None] * norm.n
    motif = {}
    merged = {}
    for i, (vs, cs) in enumerate(h.components()):
        if not vs or not cs:
            continue
        name = f"B:{i}"
        motif[name] = sum(norm.motif[c] for c in cs)
        merged[name] = cs
        for v in vs:
            colors[v] = (name,)
    gm = normalize(Instance(Kind.GM, norm.vertices, tuple(c or ("-",) for c in colors), norm.edges, motif))
    stats["biclique_merge"] = 1
    if gm is None:
        return SolveResult(False, stats=dict(stats))
    res = solve_gm_forest(gm)
    if not res.answer:
        return SolveResult(False, stats=dict(stats))
    assignment = {}
    by_color: dict = {}
    for vid in sorted(res.occurrence.vertices):
        by_color.setdefault(res.occurrence.assignment[vid], []).append(vid)
    for name, vids in by_color.items():
        slots = [c for c in merged[name] for _ in range(norm.motif[c])]
        assignment.update(zip(vids, slots))
    return SolveResult(True, Occurrence.from_colors(assignment), dict(stats))


def solve_lgm_tree(inst: Instance) -> SolveResult:
    if not inst.is_tree():
        raise NotATree("tree-lgm requires the input graph to be a tree")
    stats = Counter(nodes=0, branch_nodes=0, leaves=0, max_depth=0, dp_calls=0, repeats=0)
    norm = normalize(inst)
    if norm is None:
        return SolveResult(False, stats=dict(stats))
    h = vertex_color_graph(norm)
    if not h.is_forest():
        if h.is_biclique_union():
            return _solve_bicliques(norm, stats)
        raise VcgNotForest("tree-lgm requires the vertex-color graph to be a forest")
    for comp in norm.components():
        if len(comp) < norm.k:
            continue
        sub = norm.restrict(comp)
        st = LgmState([set(lst) for lst in sub.colors], dict(sub.motif))
        found = _search(st, sub, stats, set())
        if found is not None:
            assignment = {sub.vertices[v]: c for v, c in found.items()}
            return SolveResult(True, Occurrence.from_colors(assignment), dict(stats))
    return SolveResult(False, stats=dict(stats))

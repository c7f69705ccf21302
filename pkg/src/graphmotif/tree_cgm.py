"""Colorful Graph Motif on trees: linear kernel and sqrt(2)^ell search tree.

The working representation is a dict ``adj`` from vertex index to a set of
neighbor indices (indices into the original instance), so witnesses never
need translating back.

Kernelization roots the tree at a unique vertex ``r``.  Every vertex whose
subtree contains a unique vertex lies on a path between two unique vertices
and therefore belongs to every occurrence: it is contracted into ``r``
(phase I).  Other vertices sharing a color with a contracted vertex are
then removed together with everything below them (phase II).  A removal
can leave a color with a single carrier, which is then contracted in
turn; at the fixpoint every vertex but ``r`` is non-unique, so the kernel
has at most ``2 * ell + 1`` vertices.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .core import (
    Instance,
    Kind,
    MotifError,
    NotATree,
    Occurrence,
    ParseError,
    SolveResult,
    UnknownVertex,
    normalize,
    occurrence_from_indices,
)


@dataclass
class KernelTrace:
    contracted: list = field(default_factory=list)  # vertices merged into the root
    occupied: set = field(default_factory=set)
    reattached: list = field(default_factory=list)  # (r, pendant root) edges added
    root: int | None = None
    ops: int = 0


class _No(Exception):
    """Internal signal: the instance has no occurrence."""


def _color_counts(adj, color) -> Counter:
    return Counter(color[v] for v in adj)


def _kernelize(adj, color, motif):
    """Contract forced vertices into the root until no other vertex is unique.

    Returns ``(adj, motif, trace)``; raises ``_No`` on infeasibility.  Every
    vertex is contracted or removed at most once and every color's carrier
    list is scanned at most twice, so ``trace.ops`` stays below ``12 * n``.
    """
    trace = KernelTrace()
    members: dict = {}
    for v in adj:
        members.setdefault(color[v], []).append(v)
    trace.ops += len(adj)
    count = {c: len(vs) for c, vs in members.items()}
    unique = sorted(v for v in adj if count[color[v]] == 1)
    if not unique:
        return adj, motif, trace
    r = unique[0]
    trace.root = r
    parent = {r: None}
    stack = [r]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            trace.ops += 1
            if w not in parent:
                parent[w] = v
                stack.append(w)
    alive = set(adj)
    core = {r}
    occupied: set = set()
    queue = deque(unique[1:])

    def remove_subtree(x):
        todo = [x]
        while todo:
            y = todo.pop()
            alive.discard(y)
            trace.ops += 1
            c = color[y]
            count[c] -= 1
            if count[c] == 0 and c not in occupied:
                # a motif color vanished
                raise _No
            if count[c] == 1 and c not in occupied:
                for z in members[c]:
                    trace.ops += 1
                    if z in alive:
                        queue.append(z)
            for z in adj[y]:
                trace.ops += 1
                if z != parent[y] and z in alive:
                    todo.append(z)

    while queue:
        w = queue.popleft()
        trace.ops += 1
        if w not in alive or w in core:
            continue
        path = []
        x = w
        while x not in core:
            path.append(x)
            x = parent[x]
            trace.ops += 1
        colors = [color[x] for x in path]
        if len(set(colors)) < len(colors) or occupied.intersection(colors):
            raise _No
        occupied.update(colors)
        core.update(path)
        trace.contracted.extend(reversed(path))
        for x in path:
            for y in members[color[x]]:
                trace.ops += 1
                if y != x and y in alive:
                    remove_subtree(y)
    trace.occupied = occupied
    new_adj = {r: set()}
    for v in alive:
        trace.ops += 1
        if v in core:
            continue
        p = parent[v]
        if p in core:
            p = r
            trace.reattached.append((r, v))
        new_adj.setdefault(v, set()).add(p)
        new_adj.setdefault(p, set()).add(v)
    return new_adj, motif - occupied, trace


def _tree_adj(inst: Instance) -> dict:
    return {v: set(inst.adj[v]) for v in range(inst.n)}


def _check_cgm_tree(inst: Instance):
    if inst.kind is not Kind.CGM:
        raise MotifError("tree-cgm handles CGM instances only")
    if not inst.is_tree():
        raise NotATree("tree-cgm requires the input graph to be a tree")


def kernelize_cgm_tree(inst: Instance):
    """Kernel of a CGM tree instance as ``(kernel Instance, KernelTrace)``.

    Returns ``None`` when the kernelization proves the instance has no
    occurrence.  Kernel vertices keep their original identifiers.
    """
    _check_cgm_tree(inst)
    norm = normalize(inst)
    if norm is None:
        return None
    if not norm.is_tree():
        # stripping out-of-motif vertices split the tree; all motif colors must share a component
        comps = [c for c in norm.components() if {norm.color(v) for v in c} >= set(norm.motif)]
        if not comps:
            return None
        if len(comps) > 1:
            raise MotifError("removing out-of-motif vertices leaves several candidate "
                             "components; kernelize each component separately")
        norm = norm.restrict(comps[0])
    color = [norm.color(v) for v in range(norm.n)]
    try:
        adj, motif, trace = _kernelize(_tree_adj(norm), color, set(norm.motif))
    except _No:
        return None
    keep = sorted(adj)
    pos = {v: i for i, v in enumerate(keep)}
    edges = sorted({(min(pos[a], pos[b]), max(pos[a], pos[b])) for a in adj for b in adj[a]})
    kernel = Instance(
        Kind.CGM,
        tuple(norm.vertices[v] for v in keep),
        tuple((color[v],) for v in keep),
        tuple(edges),
        {c: 1 for c in norm.motif if c in motif},
    )
    # report trace entries as original identifiers
    ids = norm.vertices
    trace.contracted = [ids[v] for v in trace.contracted]
    trace.reattached = [(ids[a], ids[b]) for a, b in trace.reattached]
    trace.root = ids[trace.root] if trace.root is not None else None
    return kernel, trace


def _subtree_side(adj, u, v):
    """Vertices reachable from ``u`` without crossing ``u``'s edge toward ``v``."""
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                queue.append(y)
    step = v
    while prev[step] != u:
        step = prev[step]
    side = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in side and not (x == u and y == step):
                side.add(y)
                stack.append(y)
    return side


def branch_two_internal(adj, color):
    """Pick the branching pair for a same-colored pair of internal vertices.

    Returns ``(side_u, side_v)`` vertex sets to delete, or ``None`` when every
    duplicated color has at most one internal occurrence.
    """
    internal: dict = {}
    for v, nb in adj.items():
        if len(nb) >= 2:
            internal.setdefault(color[v], []).append(v)
    best = None
    for c, vs in internal.items():
        if len(vs) >= 2 and (best is None or (-len(vs), c) < (-len(internal[best]), best)):
            best = c
    if best is None:
        return None
    u, v = sorted(internal[best])[:2]
    return _subtree_side(adj, u, v), _subtree_side(adj, v, u)


def _delete(adj, gone):
    return {v: {w for w in nb if w not in gone} for v, nb in adj.items() if v not in gone}


def leaf_case_ok(adj, color) -> bool:
    occ = _color_counts(adj, color)
    leaves = Counter(color[v] for v, nb in adj.items() if len(nb) <= 1)
    return all(leaves[c] >= occ[c] - 1 for c in occ if occ[c] > 1)


def _solve_leaf_case(adj, color):
    """Delete ``occ(c) - 1`` leaves of every duplicated color; returns kept vertices."""
    occ = _color_counts(adj, color)
    if not leaf_case_ok(adj, color):
        raise AssertionError("leaf-case precondition violated")
    surplus = {c: occ[c] - 1 for c in occ if occ[c] > 1}
    keep = set(adj)
    # one DFS pass visiting leaves
    start = min(adj)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        if len(adj[v]) <= 1 and surplus.get(color[v], 0) > 0 and len(keep) > 1:
            surplus[color[v]] -= 1
            keep.discard(v)
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return keep


def solve_leaf_case(inst: Instance) -> SolveResult:
    _check_cgm_tree(inst)
    norm = normalize(inst)
    if norm is None:
        return SolveResult(False)
    color = [norm.color(v) for v in range(norm.n)]
    keep = _solve_leaf_case(_tree_adj(norm), color)
    return SolveResult(True, occurrence_from_indices(norm, keep))


def _search(adj, color, motif, stats):
    """Interleaved kernelize-and-branch.  Returns the chosen vertex set or None."""
    stats["nodes"] += 1
    try:
        adj, motif, trace = _kernelize(adj, color, motif)
    except _No:
        return None
    stats["kernel_ops"] += trace.ops
    forced = set(trace.contracted)
    pair = branch_two_internal(adj, color)
    if pair is None:
        return forced | _solve_leaf_case(adj, color)
    stats["branch_nodes"] += 1
    occ = _color_counts(adj, color)
    for side in pair:
        gone = Counter(color[v] for v in side)
        if any(gone[c] == occ[c] for c in gone):
            stats["pruned"] += 1
            continue
        found = _search(_delete(adj, side), color, motif, stats)
        if found is not None:
            return forced | found
    return None


def solve_cgm_tree(inst: Instance) -> SolveResult:
    _check_cgm_tree(inst)
    stats = Counter(nodes=0, branch_nodes=0, pruned=0, kernel_ops=0)
    norm = normalize(inst)
    if norm is None:
        return SolveResult(False, stats=dict(stats))
    color = [norm.color(v) for v in range(norm.n)]
    motif = set(norm.motif)
    for comp in norm.components():
        if not {color[v] for v in comp} >= motif:
            continue
        comp_set = set(comp)
        adj = {v: {w for w in norm.adj[v] if w in comp_set} for v in comp}
        found = _search(adj, color, motif, stats)
        if found is not None:
            return SolveResult(True, occurrence_from_indices(norm, found), dict(stats))
    return SolveResult(False, stats=dict(stats))


def format_trace(trace: KernelTrace) -> str:
    """Sidecar text for a kernel: the contracted vertices, which every occurrence contains."""
    lines = []
    if trace.root is not None:
        lines.append(f"root {trace.root}")
    if trace.contracted:
        lines.append("contracted " + " ".join(trace.contracted))
    for a, b in trace.reattached:
        lines.append(f"reattached {a} {b}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> list:
    """Contracted vertex ids from a sidecar trace."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "contracted":
            out.extend(rest)
        elif key not in ("root", "reattached"):
            raise ParseError(f"unexpected trace line {line!r}", lineno)
    return out


def lift_kernel_occurrence(inst: Instance, occ: Occurrence, contracted) -> Occurrence:
    """Occurrence of the original instance from a kernel occurrence and the contracted vertices."""
    assignment = dict(occ.assignment)
    for vid in contracted:
        if vid not in inst.index:
            raise UnknownVertex(f"trace names unknown vertex {vid}")
        assignment[vid] = inst.color(inst.index[vid])
    return Occurrence.from_colors(assignment)

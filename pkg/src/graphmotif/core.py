"""Instances, occurrences and the checks every solver relies on.

Vertices and colors are opaque strings at the API boundary.  Internally a
vertex is its position in ``Instance.vertices``; edges and adjacency lists
use those positions.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class MotifError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MotifError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotATree(MotifError):
    pass


class VcgNotForest(MotifError):
    pass


class ShapeViolation(MotifError):
    pass


class LimitExceeded(MotifError):
    pass


class UnknownVertex(MotifError):
    pass


class Kind(str, enum.Enum):
    GM = "GM"
    CGM = "CGM"
    LGM = "LGM"


@dataclass(frozen=True)
class Occurrence:
    vertices: frozenset
    assignment: dict  # vertex id -> color

    @classmethod
    def from_colors(cls, assignment: Mapping[str, str]) -> "Occurrence":
        return cls(frozenset(assignment), dict(assignment))


@dataclass
class SolveResult:
    answer: bool
    occurrence: Occurrence | None = None
    stats: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.answer


@dataclass(frozen=True)
class Instance:
    """A GM, CGM or LGM instance.

    ``colors[v]`` is the color list of vertex ``v``; for GM and CGM it holds
    exactly one color.  ``edges`` are index pairs ``(a, b)`` with ``a < b``.
    """

    kind: Kind
    vertices: tuple
    colors: tuple
    edges: tuple
    motif: dict

    @classmethod
    def build(
        cls,
        kind: Kind | str,
        vertices: Sequence[tuple[str, Sequence[str] | str]],
        edges: Iterable[tuple[str, str]],
        motif: Mapping[str, int],
    ) -> "Instance":
        kind = Kind(kind)
        ids = tuple(v for v, _ in vertices)
        index = {v: i for i, v in enumerate(ids)}
        if len(index) != len(ids):
            raise MotifError("duplicate vertex identifier")
        colors = tuple(
            (c,) if isinstance(c, str) else tuple(c) for _, c in vertices
        )
        pairs = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise UnknownVertex(f"edge {a} {b} names an undeclared vertex")
            i, j = sorted((index[a], index[b]))
            if i == j:
                raise MotifError(f"self-loop on {a}")
            if (i, j) in pairs:
                raise MotifError(f"duplicate edge {a} {b}")
            pairs.add((i, j))
        inst = cls(kind, ids, colors, tuple(sorted(pairs)), dict(motif))
        inst.check()
        return inst

    def check(self) -> None:
        """Raise ``MotifError`` unless the instance invariants hold."""
        if not self.motif:
            raise MotifError("motif is empty")
        for c, mult in self.motif.items():
            if mult < 1:
                raise MotifError(f"motif color {c} has multiplicity {mult}")
            if self.kind is Kind.CGM and mult != 1:
                raise MotifError(f"CGM motif color {c} has multiplicity {mult}")
        for v, lst in zip(self.vertices, self.colors):
            if self.kind is Kind.LGM:
                if not lst:
                    raise MotifError(f"vertex {v} has an empty color list")
                if len(set(lst)) != len(lst):
                    raise MotifError(f"vertex {v} repeats a color in its list")
            elif len(lst) != 1:
                raise MotifError(f"vertex {v} must have exactly one color")
        if self.ell < 0:
            raise MotifError(f"motif has {self.k} entries but graph has {self.n} vertices")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return sum(self.motif.values())

    @property
    def ell(self) -> int:
        return self.n - self.k

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adj(self) -> list:
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def color(self, v: int) -> str:
        """The single color of vertex ``v`` (GM/CGM only)."""
        return self.colors[v][0]

    @cached_property
    def occ(self) -> Counter:
        """Number of vertices carrying each color (list membership for LGM)."""
        return Counter(c for lst in self.colors for c in lst)

    def is_connected(self) -> bool:
        return self.n > 0 and len(_component(self.adj, 0, None)) == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def is_forest(self) -> bool:
        return self.m == self.n - len(self.components())

    def components(self) -> list:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if not seen[s]:
                comp = _component(self.adj, s, None)
                for v in comp:
                    seen[v] = True
                out.append(sorted(comp))
        return out

    def restrict(self, keep: Iterable[int], motif: Mapping[str, int] | None = None,
                 colors: Sequence | None = None) -> "Instance":
        """Induced sub-instance on ``keep`` (indices), optionally recolored.

        No validation is run, so the result may have ``ell < 0``.
        """
        keep = sorted(set(keep))
        pos = {v: i for i, v in enumerate(keep)}
        cols = self.colors if colors is None else colors
        edges = tuple(
            (pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos
        )
        return Instance(
            self.kind,
            tuple(self.vertices[v] for v in keep),
            tuple(tuple(cols[v]) for v in keep),
            edges,
            dict(self.motif if motif is None else motif),
        )


def _component(adj, start, alive) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen and (alive is None or w in alive):
                seen.add(w)
                stack.append(w)
    return seen


def is_connected_subset(adj, subset) -> bool:
    subset = set(subset)
    if not subset:
        return False
    return len(_component(adj, next(iter(subset)), subset)) == len(subset)


# ---------------------------------------------------------------------------
# instance files

def parse_instance(text: str) -> Instance:
    kind = None
    vertices: list = []
    declared: dict = {}
    edge_lines: list = []
    motif: dict = {}
    motif_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if kind is None:
            if head != "problem":
                raise ParseError("first statement must be 'problem GM|CGM|LGM'", lineno)
            if len(parts) != 2 or parts[1] not in Kind.__members__:
                raise ParseError(f"bad problem line {line!r}", lineno)
            kind = Kind(parts[1])
            continue
        if head == "problem":
            raise ParseError("duplicate problem line", lineno)
        if head == "vertex":
            if len(parts) != 3:
                raise ParseError("expected 'vertex <id> <color>'", lineno)
            vid, spec = parts[1], parts[2]
            if vid in declared:
                raise ParseError(f"duplicate vertex {vid} (first declared on line {declared[vid]})", lineno)
            cols = spec.split(",")
            if kind is Kind.LGM:
                if any(not c for c in cols):
                    raise ParseError(f"empty color in list {spec!r}", lineno)
                if len(set(cols)) != len(cols):
                    raise ParseError(f"repeated color in list {spec!r}", lineno)
            elif len(cols) != 1:
                raise ParseError(f"{kind.value} vertices take a single color", lineno)
            declared[vid] = lineno
            vertices.append((vid, tuple(cols)))
        elif head == "edge":
            if len(parts) != 3:
                raise ParseError("expected 'edge <id1> <id2>'", lineno)
            edge_lines.append((lineno, parts[1], parts[2]))
        elif head == "motif":
            if len(parts) not in (2, 3):
                raise ParseError("expected 'motif <color> [<multiplicity>]'", lineno)
            c = parts[1]
            try:
                mult = int(parts[2]) if len(parts) == 3 else 1
            except ValueError:
                raise ParseError(f"bad multiplicity {parts[2]!r}", lineno) from None
            if mult < 1:
                raise ParseError(f"multiplicity must be positive, got {mult}", lineno)
            if kind is Kind.CGM and mult != 1:
                raise ParseError("CGM motif multiplicities must be 1", lineno)
            if c in motif:
                raise ParseError(f"duplicate motif color {c}", lineno)
            motif[c] = mult
            motif_line = lineno
        else:
            raise ParseError(f"unknown statement {head!r}", lineno)
    if kind is None:
        raise ParseError("missing problem line")
    seen_edges: dict = {}
    for lineno, a, b in edge_lines:
        for x in (a, b):
            if x not in declared:
                raise ParseError(f"edge names undeclared vertex {x}", lineno)
        if a == b:
            raise ParseError(f"self-loop on {a}", lineno)
        key = frozenset((a, b))
        if key in seen_edges:
            raise ParseError(f"duplicate edge {a} {b} (first on line {seen_edges[key]})", lineno)
        seen_edges[key] = lineno
    if not motif:
        raise ParseError("motif is empty")
    k = sum(motif.values())
    if k > len(vertices):
        raise ParseError(f"motif size {k} exceeds vertex count {len(vertices)} (dual parameter < 0)", motif_line)
    return Instance.build(kind, vertices, [(a, b) for _, a, b in edge_lines], motif)


def serialize_instance(inst: Instance) -> str:
    lines = [f"problem {inst.kind.value}"]
    for v, lst in zip(inst.vertices, inst.colors):
        lines.append(f"vertex {v} {','.join(lst)}")
    for a, b in inst.edges:
        lines.append(f"edge {inst.vertices[a]} {inst.vertices[b]}")
    for c, mult in inst.motif.items():
        lines.append(f"motif {c}" if mult == 1 else f"motif {c} {mult}")
    return "\n".join(lines) + "\n"


def format_witness(result: SolveResult) -> str:
    if not result.answer:
        return "no\n"
    occ = result.occurrence
    ids = sorted(occ.vertices)
    lines = ["yes", "occurrence " + " ".join(ids)]
    lines += [f"assign {v} {occ.assignment[v]}" for v in ids]
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Occurrence | None:
    """Parse a witness file; ``None`` stands for a ``no`` answer."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines == ["no"]:
        return None
    if not lines or lines[0] != "yes":
        raise ParseError("witness must start with 'yes' or be the single line 'no'", 1)
    vertices = None
    assignment = {}
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        if parts[0] == "occurrence" and vertices is None:
            vertices = frozenset(parts[1:])
        elif parts[0] == "assign" and len(parts) == 3:
            if parts[1] in assignment:
                raise ParseError(f"vertex {parts[1]} assigned twice", lineno)
            assignment[parts[1]] = parts[2]
        else:
            raise ParseError(f"unexpected witness line {line!r}", lineno)
    if vertices is None:
        raise ParseError("missing occurrence line")
    return Occurrence(vertices, assignment)


# ---------------------------------------------------------------------------
# structural queries

def dual_parameter(inst: Instance) -> int:
    return inst.n - inst.k


def count_non_unique(inst: Instance) -> int:
    occ = inst.occ
    return sum(1 for v in range(inst.n) if occ[inst.color(v)] >= 2)


def normalize(inst: Instance) -> Instance | None:
    """Drop vertices that can never be in an occurrence; ``None`` if infeasible.

    For LGM the colors outside the motif are first removed from every list.
    Infeasible means some motif color has fewer carriers than its multiplicity.
    Vertex identifiers are kept, so witnesses need no translation.
    """
    support = inst.motif
    colors = [tuple(c for c in lst if c in support) for lst in inst.colors]
    keep = [v for v in range(inst.n) if colors[v]]
    occ = Counter(c for v in keep for c in colors[v])
    if any(occ[c] < mult for c, mult in support.items()):
        return None
    if len(keep) == inst.n and all(a == b for a, b in zip(colors, inst.colors)):
        return inst
    return inst.restrict(keep, colors=colors)


@dataclass(frozen=True)
class VertexColorGraph:
    """Bipartite graph between vertices and colors, one edge per list entry."""

    vertex_colors: tuple  # per vertex index: colors in its list
    color_vertices: dict  # color -> tuple of vertex indices

    def deg(self, c: str) -> int:
        return len(self.color_vertices.get(c, ()))

    @property
    def max_color_degree(self) -> int:
        return max((len(vs) for vs in self.color_vertices.values()), default=0)

    def edges(self):
        for v, lst in enumerate(self.vertex_colors):
            for c in lst:
                yield v, c

    def components(self) -> list:
        """Components as ``(vertex indices, colors)`` pairs."""
        seen_v: set = set()
        seen_c: set = set()
        out = []
        for s in range(len(self.vertex_colors)):
            if s in seen_v:
                continue
            vs, cs = [s], []
            seen_v.add(s)
            stack = [("v", s)]
            while stack:
                side, x = stack.pop()
                nbrs = self.vertex_colors[x] if side == "v" else self.color_vertices[x]
                for y in nbrs:
                    if side == "v" and y not in seen_c:
                        seen_c.add(y)
                        cs.append(y)
                        stack.append(("c", y))
                    elif side == "c" and y not in seen_v:
                        seen_v.add(y)
                        vs.append(y)
                        stack.append(("v", y))
            out.append((sorted(vs), cs))
        for c in self.color_vertices:
            if c not in seen_c:
                out.append(([], [c]))
        return out

    def is_forest(self) -> bool:
        n_edges = sum(len(lst) for lst in self.vertex_colors)
        n_nodes = len(self.vertex_colors) + len(self.color_vertices)
        return n_edges == n_nodes - len(self.components())

    def is_path_union(self) -> bool:
        if not self.is_forest():
            return False
        if any(len(lst) > 2 for lst in self.vertex_colors):
            return False
        return all(len(vs) <= 2 for vs in self.color_vertices.values())

    def is_biclique_union(self) -> bool:
        for vs, cs in self.components():
            cset = set(cs)
            if any(set(self.vertex_colors[v]) != cset for v in vs):
                return False
        return True


def vertex_color_graph(inst: Instance) -> VertexColorGraph:
    color_vertices: dict = {c: [] for c in inst.motif}
    for v, lst in enumerate(inst.colors):
        for c in lst:
            color_vertices.setdefault(c, []).append(v)
    return VertexColorGraph(
        tuple(tuple(lst) for lst in inst.colors),
        {c: tuple(vs) for c, vs in color_vertices.items()},
    )


def verify_occurrence(inst: Instance, occ: Occurrence) -> bool:
    try:
        idx = [inst.index[v] for v in occ.vertices]
    except KeyError as exc:
        raise UnknownVertex(f"unknown vertex {exc.args[0]}") from None
    if len(idx) != inst.k or set(occ.assignment) != set(occ.vertices):
        return False
    for v in idx:
        if occ.assignment[inst.vertices[v]] not in inst.colors[v]:
            return False
    if Counter(occ.assignment.values()) != Counter(inst.motif):
        return False
    return is_connected_subset(inst.adj, idx)


@dataclass
class ValidationReport:
    ok: bool
    ell: int
    abundant: list  # (color, excess) for motif colors carried by more vertices than needed
    graph_is_tree: bool
    vcg_is_forest: bool
    vcg_is_path_union: bool
    problems: list = field(default_factory=list)


def validate(inst: Instance) -> ValidationReport:
    problems = []
    try:
        inst.check()
    except MotifError as exc:
        problems.append(str(exc))
    occ = inst.occ
    abundant = [(c, occ[c] - m) for c, m in inst.motif.items() if occ[c] > m]
    h = vertex_color_graph(inst)
    return ValidationReport(
        ok=not problems,
        ell=inst.ell,
        abundant=abundant,
        graph_is_tree=inst.is_tree(),
        vcg_is_forest=h.is_forest(),
        vcg_is_path_union=h.is_path_union(),
        problems=problems,
    )


def occurrence_from_indices(inst: Instance, chosen: Iterable[int], colors: Mapping | None = None) -> Occurrence:
    """Build an ``Occurrence`` from vertex indices; GM/CGM colors are implied."""
    assignment = {}
    for v in chosen:
        vid = inst.vertices[v]
        assignment[vid] = colors[v] if colors is not None else inst.color(v)
    return Occurrence.from_colors(assignment)

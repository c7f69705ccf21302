"""Instance generators: hardness reductions and seeded random instances."""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .core import Instance, Kind, MotifError, ParseError


# ---------------------------------------------------------------------------
# CNF-SAT -> CGM

@dataclass(frozen=True)
class CnfFormula:
    r: int
    clauses: tuple  # tuples of signed variable indices

    def __post_init__(self):
        if not self.clauses:
            raise MotifError("formula has no clauses")
        for cl in self.clauses:
            if not cl:
                raise MotifError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.r:
                    raise MotifError(f"literal {lit} outside variables 1..{self.r}")

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i]`` is the truth value of variable ``i + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in cl) for cl in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    r = None
    clauses = []
    current: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno)
            r = int(parts[2])
            continue
        if r is None:
            raise ParseError("clause before problem line", lineno)
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if r is None:
        raise ParseError("missing 'p cnf' line")
    return CnfFormula(r, tuple(clauses))


def gen_cnf_to_cgm(phi: CnfFormula) -> Instance:
    """Two same-colored vertices per variable, one uniquely colored vertex per
    clause, and a hub adjacent to every variable vertex."""
    vertices = [("hub", "hub")]
    edges = []
    for i in range(1, phi.r + 1):
        vertices += [(f"x{i}T", f"X{i}"), (f"x{i}F", f"X{i}")]
        edges += [("hub", f"x{i}T"), ("hub", f"x{i}F")]
    for ci, cl in enumerate(phi.clauses, 1):
        vertices.append((f"u{ci}", f"C{ci}"))
        for lit in sorted(set(cl)):
            edges.append((f"u{ci}", f"x{abs(lit)}{'T' if lit > 0 else 'F'}"))
    motif = {c: 1 for c in dict.fromkeys(c for _, c in vertices)}
    return Instance.build(Kind.CGM, vertices, edges, motif)


def random_cnf(rng: random.Random, r: int, q: int, width: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(q):
        w = rng.randint(1, min(width, r))
        vs = rng.sample(range(1, r + 1), w)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(r, tuple(clauses))


# ---------------------------------------------------------------------------
# labeled graphs (multicolored independent set / clique)

@dataclass
class LabeledGraph:
    labels: dict  # vertex id -> label in 1..k
    edges: list  # pairs of vertex ids
    k: int

    def __post_init__(self):
        for v, lab in self.labels.items():
            if not 1 <= lab <= self.k:
                raise MotifError(f"label {lab} of {v} outside 1..{self.k}")
        for a, b in self.edges:
            if a not in self.labels or b not in self.labels:
                raise MotifError(f"edge {a} {b} names an unknown vertex")

    def classes(self) -> dict:
        out = {p: [] for p in range(1, self.k + 1)}
        for v in sorted(self.labels):
            out[self.labels[v]].append(v)
        return out

    def _pick_one_per_class(self):
        import itertools

        return itertools.product(*self.classes().values())

    def has_multicolored_independent_set(self) -> bool:
        adj = {frozenset(e) for e in self.edges}
        for pick in self._pick_one_per_class():
            if all(frozenset((a, b)) not in adj for i, a in enumerate(pick) for b in pick[i + 1:]):
                return True
        return False

    def has_multicolored_clique(self) -> bool:
        adj = {frozenset(e) for e in self.edges}
        for pick in self._pick_one_per_class():
            if all(frozenset((a, b)) in adj for i, a in enumerate(pick) for b in pick[i + 1:]):
                return True
        return False


def parse_labeled_graph(text: str, k: int | None = None) -> LabeledGraph:
    labels: dict = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 3:
            if parts[1] in labels:
                raise ParseError(f"duplicate node {parts[1]}", lineno)
            labels[parts[1]] = int(parts[2])
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if k is None:
        k = max(labels.values(), default=1)
    return LabeledGraph(labels, edges, k)


def serialize_labeled_graph(h: LabeledGraph) -> str:
    lines = [f"node {v} {lab}" for v, lab in h.labels.items()]
    lines += [f"edge {a} {b}" for a, b in h.edges]
    return "\n".join(lines) + "\n"


def pad_classes(h: LabeledGraph) -> tuple:
    """Pad every label class to a common size ``x >= 2``.

    A padding vertex is a twin of the class's first vertex: it is adjacent
    to that vertex's neighbors and to their twins, so picking it is as good
    as picking the original.  Pads
    of an empty class are adjacent to every vertex of the other classes,
    which (for ``k >= 2``) keeps them out of every independent set.
    Returns ``(padded graph, x)``.
    """
    classes = h.classes()
    x = max(2, max(len(vs) for vs in classes.values()))
    labels = dict(h.labels)
    nbrs: dict = {v: set() for v in labels}
    for a, b in h.edges:
        if a != b:
            nbrs[a].add(b)
            nbrs[b].add(a)
    edges = list(h.edges)
    blockers = []
    twins = []  # (pad, original)
    for p, vs in classes.items():
        for i in range(x - len(vs)):
            pid = f"pad{p}.{i}"
            while pid in labels:
                pid += "_"
            labels[pid] = p
            if vs:
                edges += [(pid, w) for w in sorted(nbrs[vs[0]])]
                twins.append((pid, vs[0]))
            else:
                blockers.append(pid)
    for i, (a, wa) in enumerate(twins):
        edges += [(a, b) for b, wb in twins[i + 1:] if wb in nbrs[wa]]
    done = set()
    for pid in blockers:
        done.add(pid)
        edges += [(pid, w) for w in labels if labels[w] != labels[pid] and w not in done]
    return LabeledGraph(labels, edges, h.k), x


def gen_mis_to_lgm(h: LabeledGraph, k: int | None = None) -> Instance:
    """List-colored instance whose dual parameter is the number of labels."""
    if k is not None and k != h.k:
        h = LabeledGraph(h.labels, h.edges, k)
    padded, x = pad_classes(h)
    vertices = [("star", ["star"])]
    edges = []
    for p, vs in padded.classes().items():
        order = sorted(vs, key=lambda v: (v.startswith("pad"), v))
        for j, v in enumerate(order, 1):
            if j == 1:
                lst = [f"L{p}.1"]
            elif j == x:
                lst = [f"L{p}.{x - 1}"]
            else:
                lst = [f"L{p}.{j - 1}", f"L{p}.{j}"]
            vertices.append((f"w:{v}", lst))
            edges.append(("star", f"w:{v}"))
    seen = set()
    for a, b in padded.edges:
        key = frozenset((a, b))
        if a == b or key in seen:
            continue
        seen.add(key)
        eid = f"e:{a}:{b}"
        vertices.append((eid, [eid]))
        edges += [(eid, f"w:{a}"), (eid, f"w:{b}")]
    motif = {c: 1 for c in dict.fromkeys(c for _, lst in vertices for c in lst)}
    return Instance.build(Kind.LGM, vertices, edges, motif)


def random_labeled_graph(rng: random.Random, n: int, k: int, p_edge: float) -> LabeledGraph:
    labels = {f"a{i}": rng.randint(1, k) for i in range(n)}
    ids = sorted(labels)
    edges = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:] if rng.random() < p_edge]
    return LabeledGraph(labels, edges, k)


# ---------------------------------------------------------------------------
# or-cross-composition of multicolored clique into GM on trees

@dataclass
class CrossCompConfig:
    instances: list  # LabeledGraph, all with the same vertex count and k
    n: int = field(init=False)
    k: int = field(init=False)
    s: int = field(init=False)

    def __post_init__(self):
        self.instances = list(self.instances)
        if not self.instances:
            raise MotifError("cross-composition needs at least one instance")
        sizes = {len(h.labels) for h in self.instances}
        ks = {h.k for h in self.instances}
        if len(sizes) != 1 or len(ks) != 1:
            raise MotifError("cross-composition instances must share vertex count and k")
        self.n = sizes.pop()
        self.k = ks.pop()
        self.s = math.ceil(math.log2(len(self.instances))) if len(self.instances) > 1 else 0
        first = self.instances[0]
        while len(self.instances) < 2 ** self.s:
            self.instances.append(LabeledGraph(dict(first.labels), [], self.k))

    @property
    def t(self) -> int:
        return len(self.instances)


def crosscomp_colors(cfg: CrossCompConfig) -> dict:
    """Every introduced color except the root's, mapped to its deletion count."""
    k, n = cfg.k, cfg.n
    pairs = [(p, q) for p in range(1, k + 1) for q in range(1, k + 1) if p != q]
    out = {"i+": 1, "i-": 1}
    for p, q in pairs:
        for tau in range(1, cfg.s + 1):
            out[f"i[{p}.{q}.{tau}]"] = 1
    for p, q in pairs:
        out[f"l[{p}.{q}]+"] = 1
        out[f"l[{p}.{q}]-"] = 1
    for p in range(1, k + 1):
        others = [q for q in range(1, k + 1) if q != p]
        for q in others[:-1]:
            out[f"w[{p}.{q}]"] = n
    for p, q in pairs:
        if p < q:
            out[f"e[{p}.{q}]"] = n
    return out


def gen_crosscomp_to_gm(cfg: CrossCompConfig) -> Instance:
    """GM instance on a tree that is a yes-instance iff some input has a multicolored clique.

    Vertex ids: ``r`` for the root, ``P{i}.{pos}`` on instance-selection paths
    and ``E{i}.{#u}.{#v}.{pos}`` on the path for edge ``(u, v)`` of instance ``i``.
    When some color occurs fewer times than it must be deleted, every input
    is a no-instance; the motif then asks for one more copy of that color
    than exists, keeping the output a no-instance.
    """
    n, k, s = cfg.n, cfg.k, cfg.s
    vertices = [("r", "rho")]
    edges = []

    def path(prefix, colors):
        prev = "r"
        for pos, c in enumerate(colors):
            vid = f"{prefix}.{pos}"
            vertices.append((vid, c))
            edges.append((prev, vid))
            prev = vid

    def bit(i, tau):
        return (i >> (tau - 1)) & 1

    pairs = [(p, q) for p in range(1, k + 1) for q in range(1, k + 1) if p != q]
    for i in range(cfg.t):
        sel = [f"i[{p}.{q}.{tau}]" for p, q in pairs for tau in range(1, s + 1) if bit(i, tau)]
        path(f"P{i}", ["i+"] + sel + ["i-"])
    for i, h in enumerate(cfg.instances):
        number = {v: idx for idx, v in enumerate(sorted(h.labels), 1)}
        lab = h.labels
        seen = set()
        for a, b in h.edges:
            if lab[a] == lab[b] or frozenset((a, b)) in seen:
                continue
            seen.add(frozenset((a, b)))
            for u, v in ((a, b), (b, a)):
                p, q = lab[u], lab[v]
                others = [x for x in range(1, k + 1) if x != p]
                cols = [f"l[{p}.{q}]+"]
                cols += [f"i[{p}.{q}.{tau}]" for tau in range(1, s + 1) if not bit(i, tau)]
                if p < q:
                    cols += [f"e[{p}.{q}]"] * number[u]
                else:
                    cols += [f"e[{q}.{p}]"] * (n - number[v])
                if q != others[-1]:
                    cols += [f"w[{p}.{q}]"] * number[u]
                if q != others[0]:
                    q_prev = others[others.index(q) - 1]
                    cols += [f"w[{p}.{q_prev}]"] * (n - number[u])
                cols.append(f"l[{p}.{q}]-")
                path(f"E{i}.{number[u]}.{number[v]}", cols)
    occ = Counter(c for _, c in vertices)
    delete = crosscomp_colors(cfg)
    motif = {}
    for c in occ:
        need = occ[c] - delete.get(c, 0)
        if need > 0:
            motif[c] = need
    deficient = [c for c, d in delete.items() if occ[c] < d]
    for c in deficient:
        motif[c] = occ[c] + 1
    if sum(motif.values()) > len(vertices):
        motif = {"rho": 1, deficient[0]: occ[deficient[0]] + 1}
    return Instance.build(Kind.GM, vertices, edges, motif)


# ---------------------------------------------------------------------------
# seeded random instances

def random_tree_edges(rng: random.Random, n: int) -> list:
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]


def random_graph_edges(rng: random.Random, n: int, p: float) -> list:
    return [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]


def random_instance(
    nodes: int,
    ell: int,
    kind: Kind | str = Kind.CGM,
    tree: bool = True,
    colors: int | None = None,
    seed: int = 0,
    density: float = 0.3,
    list_extra: float = 0.4,
    vcg_forest: bool = True,
    planted: bool = True,
) -> Instance:
    """Random instance with exactly ``nodes - ell`` motif slots.

    ``colors`` is the number of distinct motif colors (forced to ``nodes -
    ell`` for CGM).  For LGM each vertex keeps a base color and may gain
    extra list entries, added only while the vertex-color graph stays a
    forest when ``vcg_forest`` is set.  With ``planted`` off (GM and LGM
    only) the motif is redrawn at random among the carried colors, which
    yields far more no-instances.
    """
    kind = Kind(kind)
    rng = random.Random(seed)
    n = nodes
    k = n - ell
    if not 0 <= ell < n:
        raise MotifError(f"need 0 <= ell < nodes, got ell={ell}, nodes={n}")
    if kind is Kind.CGM:
        if colors is not None and colors != k:
            raise MotifError("CGM needs exactly nodes - ell colors")
        colors = k
    if colors is None:
        colors = rng.randint(1, k)
    if not 1 <= colors <= k:
        raise MotifError(f"colors must be in 1..{k}, got {colors}")
    palette = [f"c{i}" for i in range(colors)]
    base = palette + [rng.choice(palette) for _ in range(n - colors)]
    rng.shuffle(base)
    occ = Counter(base)
    motif = Counter({c: 1 for c in palette})
    for _ in range(k - colors):
        spare = [c for c in palette if occ[c] > motif[c]]
        motif[rng.choice(spare)] += 1
    lists = [[c] for c in base]
    if kind is Kind.LGM:
        parent: dict = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v, c in enumerate(base):
            parent[find(("v", v))] = find(("c", c))
        for v in range(n):
            for c in rng.sample(palette, len(palette)):
                if c in lists[v] or rng.random() >= list_extra / max(1, len(palette) - 1) * 2:
                    continue
                a, b = find(("v", v)), find(("c", c))
                if vcg_forest and a == b:
                    continue
                parent[a] = b
                lists[v].append(c)
    if not planted and kind is not Kind.CGM:
        supply = Counter(c for lst in lists for c in lst)
        motif = Counter()
        for _ in range(k):
            motif[rng.choice([c for c in palette if supply[c] > motif[c]])] += 1
    pairs = random_tree_edges(rng, n) if tree else random_graph_edges(rng, n, density)
    ids = [f"v{i}" for i in range(n)]
    vertices = [(ids[i], lists[i]) for i in range(n)]
    return Instance.build(kind, vertices, [(ids[a], ids[b]) for a, b in pairs],
                          dict(sorted(motif.items())))


def random_abundant_tree(nodes: int, ell: int, abundant: int, colors: int = 50,
                         seed: int = 0, kind: Kind | str = Kind.GM) -> Instance:
    """Random tree whose excess ``ell`` is spread over exactly ``abundant`` colors.

    For CGM every other color is unique, so ``colors`` is ignored and the
    instance has ``nodes - ell - abundant`` unique vertices.
    """
    kind = Kind(kind)
    rng = random.Random(seed)
    if not 1 <= abundant <= ell:
        raise MotifError("need 1 <= abundant <= ell")
    cuts = sorted(rng.sample(range(1, ell), abundant - 1))
    excess = [b - a for a, b in zip([0] + cuts, cuts + [ell])]
    if kind is Kind.CGM:
        base = []
        for i, e in enumerate(excess):
            base += [f"a{i}"] * (e + 1)
        base += [f"u{i}" for i in range(nodes - len(base))]
        if len(base) != nodes:
            raise MotifError("too few nodes for the requested excess")
        motif = {c: 1 for c in dict.fromkeys(base)}
    else:
        if colors < abundant:
            raise MotifError("need colors >= abundant")
        palette = [f"c{i}" for i in range(colors)]
        base = palette + [palette[i] for i, e in enumerate(excess) for _ in range(e)]
        if len(base) > nodes:
            raise MotifError("too few nodes for the requested colors")
        base += [rng.choice(palette) for _ in range(nodes - len(base))]
        occ = Counter(base)
        motif = {c: occ[c] - (excess[i] if i < abundant else 0) for i, c in enumerate(palette)}
    rng.shuffle(base)
    ids = [f"v{i}" for i in range(nodes)]
    edges = [(ids[a], ids[b]) for a, b in random_tree_edges(rng, nodes)]
    return Instance.build(kind, list(zip(ids, base)), edges, motif)


def random_pendant_cgm_tree(nodes: int, ell: int, abundant: int, seed: int = 0,
                            nest: float = 0.5) -> Instance:
    """CGM tree: a core of unique vertices with the duplicated colors hanging below it.

    Each duplicated vertex attaches to a random core vertex or, with
    probability ``nest``, below an earlier duplicated vertex.
    """
    rng = random.Random(seed)
    if not 1 <= abundant <= ell:
        raise MotifError("need 1 <= abundant <= ell")
    cuts = sorted(rng.sample(range(1, ell), abundant - 1))
    excess = [b - a for a, b in zip([0] + cuts, cuts + [ell])]
    dup = [f"a{i}" for i, e in enumerate(excess) for _ in range(e + 1)]
    core = nodes - len(dup)
    if core < 1:
        raise MotifError("too few nodes for the requested excess")
    rng.shuffle(dup)
    colors = [f"u{i}" for i in range(core)] + dup
    ids = [f"v{i}" for i in range(nodes)]
    edges = [(ids[a], ids[b]) for a, b in random_tree_edges(rng, core)]
    for j in range(core, nodes):
        if j > core and rng.random() < nest:
            parent = rng.randrange(core, j)
        else:
            parent = rng.randrange(core)
        edges.append((ids[j], ids[parent]))
    motif = {c: 1 for c in dict.fromkeys(colors)}
    return Instance.build(Kind.CGM, list(zip(ids, colors)), edges, motif)

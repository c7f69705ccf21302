"""Benchmark harness: timed solves with search and DP counters checked against bounds."""
from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core import Instance, Kind, MotifError, parse_instance
from .generators import random_instance

# grid families: name -> (kind, tree, algorithm)
FAMILIES = {
    "cgm-tree": (Kind.CGM, True, "tree-cgm"),
    "cgm-general": (Kind.CGM, False, "general-cgm"),
    "lgm-tree": (Kind.LGM, True, "tree-lgm"),
    "gm-tree": (Kind.GM, True, "tree-gm"),
}


@dataclass
class BenchRecord:
    instance: str
    n: int
    m: int
    k: int
    ell: int
    algorithm: str
    answer: str
    wall: float
    branch_nodes: int = 0
    leaves: int = 0
    dp_entries: int = 0
    split_work: int = 0
    kernel_size: int = -1
    max_mult: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.answer not in ("yes", "no"):
            raise ValueError(f"answer must be yes or no, got {self.answer}")
        for name in ("n", "m", "k", "ell", "branch_nodes", "leaves", "dp_entries", "split_work"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def to_line(self) -> str:
        d = asdict(self)
        extra = d.pop("extra")
        d["wall"] = f"{self.wall:.6f}"
        d.update(extra)
        return " ".join(f"{key}={value}" for key, value in d.items())

    def bound(self) -> int | None:
        """The search or DP bound this record is measured against."""
        if self.algorithm == "tree-cgm":
            return 2 ** math.ceil(self.ell / 2)
        if self.algorithm == "general-cgm":
            return 2 ** self.ell
        if self.algorithm == "tree-lgm":
            return (self.max_mult + 1) ** (self.ell + 1)
        if self.algorithm == "tree-gm":
            return 3 ** self.ell
        return None

    def measured(self) -> int:
        if self.algorithm == "tree-lgm":
            return self.leaves
        if self.algorithm == "tree-gm":
            return self.split_work
        return self.branch_nodes

    def within_bound(self) -> bool:
        b = self.bound()
        return b is None or self.measured() <= b


def parse_record(line: str) -> dict:
    return dict(tok.split("=", 1) for tok in line.split())


def bench_one(name: str, inst: Instance, algo: str = "auto", backend: str | None = None) -> BenchRecord:
    from .dispatch import solve

    start = time.perf_counter()
    algo, res = solve(inst, algo, backend)
    wall = time.perf_counter() - start
    st = res.stats or {}
    kernel_size = -1
    if algo == "tree-cgm":
        from .tree_cgm import kernelize_cgm_tree

        try:
            kern = kernelize_cgm_tree(inst)
            kernel_size = 0 if kern is None else kern[0].n
        except MotifError:
            pass
    return BenchRecord(
        instance=name,
        n=inst.n,
        m=inst.m,
        k=inst.k,
        ell=inst.ell,
        algorithm=algo,
        answer="yes" if res.answer else "no",
        wall=wall,
        branch_nodes=st.get("branch_nodes", 0),
        leaves=st.get("leaves", 0),
        dp_entries=st.get("dp_entries", 0),
        split_work=st.get("max_split_work", 0),
        kernel_size=kernel_size,
        max_mult=max(inst.motif.values()),
        extra={"split_bound": st["split_bound"]} if "split_bound" in st else {},
    )


def grid_instances(family: str, ells, per_cell: int, seed: int, max_extra: int = 8):
    """Seeded random instances for each ``ell``; yields ``(name, instance)``."""
    if family not in FAMILIES:
        raise MotifError(f"unknown family {family}; choose from {', '.join(FAMILIES)}")
    kind, tree, _ = FAMILIES[family]
    for ell in ells:
        rng = random.Random(f"{family}:{seed}:{ell}")
        for i in range(per_cell):
            k = rng.randint(2, max_extra)
            colors = None
            if kind is not Kind.CGM:
                colors = rng.randint(1, k)
            inst = random_instance(
                nodes=ell + k,
                ell=ell,
                kind=kind,
                tree=tree,
                colors=colors,
                seed=rng.randrange(2**32),
                density=rng.uniform(1.0, 3.0) / (ell + k),
            )
            yield f"{family}-l{ell}-{i}", inst


def suite_instances(directory):
    paths = sorted(Path(directory).glob("*.inst"))
    if not paths:
        raise MotifError(f"no .inst files in {directory}")
    for p in paths:
        yield p.stem, parse_instance(p.read_text())


def summarize(records) -> str:
    """Per algorithm and ell: runs, worst measured counter, bound, violations."""
    rows: dict = {}
    for r in records:
        key = (r.algorithm, r.ell)
        row = rows.setdefault(key, [0, 0, None, 0, 0.0])
        row[0] += 1
        row[1] = max(row[1], r.measured())
        b = r.bound()
        row[2] = b if row[2] is None or b is None else max(row[2], b)
        row[3] += not r.within_bound()
        row[4] = max(row[4], r.wall)
    header = f"{'algorithm':<12} {'ell':>4} {'runs':>5} {'worst':>10} {'bound':>12} {'viol':>5} {'max_s':>9}"
    lines = [header]
    for (algo, ell), (runs, worst, b, viol, wall) in sorted(rows.items()):
        lines.append(f"{algo:<12} {ell:>4} {runs:>5} {worst:>10} {str(b if b is not None else '-'):>12} {viol:>5} {wall:>9.4f}")
    return "\n".join(lines)

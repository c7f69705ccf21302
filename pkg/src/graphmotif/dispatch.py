"""Algorithm selection shared by the CLI and the bench harness."""
from __future__ import annotations

from .core import Instance, Kind, LimitExceeded, MotifError, SolveResult, normalize, vertex_color_graph

ALGORITHMS = ("auto", "oracle", "tree-gm", "tree-cgm", "tree-lgm", "general-cgm")
ORACLE_AUTO_LIMIT = 20


def choose_algorithm(inst: Instance) -> str:
    """Frozen order: CGM tree, GM tree, LGM tree with forest H, CGM general, small oracle."""
    tree = inst.is_tree()
    if inst.kind is Kind.CGM and tree:
        return "tree-cgm"
    if inst.kind is Kind.GM and tree:
        return "tree-gm"
    if inst.kind is Kind.LGM and tree:
        norm = normalize(inst)
        if norm is None or vertex_color_graph(norm).is_forest():
            return "tree-lgm"
    if inst.kind is Kind.CGM:
        return "general-cgm"
    if inst.n <= ORACLE_AUTO_LIMIT:
        return "oracle"
    raise LimitExceeded(
        f"no specialized solver fits this {inst.kind.value} instance and n={inst.n} "
        f"exceeds the oracle limit of {ORACLE_AUTO_LIMIT}"
    )


def solve(inst: Instance, algo: str = "auto", backend: str | None = None) -> tuple:
    """Returns ``(algorithm used, SolveResult)``."""
    from .cgm_general import solve_cgm_general
    from .oracle import oracle_solve
    from .tree_cgm import solve_cgm_tree
    from .tree_gm import solve_gm_tree
    from .tree_lgm import solve_lgm_tree

    if algo == "auto":
        algo = choose_algorithm(inst)
    if algo == "oracle":
        res = oracle_solve(inst)
    elif algo == "tree-gm":
        res = solve_gm_tree(inst, backend=backend)
    elif algo == "tree-cgm":
        res = solve_cgm_tree(inst)
    elif algo == "tree-lgm":
        res = solve_lgm_tree(inst)
    elif algo == "general-cgm":
        res = solve_cgm_general(inst)
    else:
        raise MotifError(f"unknown algorithm {algo}")
    return algo, res


def solve_result(inst: Instance, algo: str = "auto", backend: str | None = None) -> SolveResult:
    return solve(inst, algo, backend)[1]

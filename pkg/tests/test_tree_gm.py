import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphmotif._kernels import TableLayout
from graphmotif.core import MotifError, NotATree, is_connected_subset, normalize, parse_instance, verify_occurrence
from graphmotif.generators import random_abundant_tree, random_instance
from graphmotif.oracle import oracle_solve
from graphmotif.tree_gm import (
    GmTreeDp,
    combine_child,
    init_leaf_table,
    lift_first_child,
    solve_gm_tree,
    split_bound,
)

BACKENDS = ["numba", "numpy"]

PATH_RBR = "problem GM\nvertex v1 r\nvertex v2 b\nvertex v3 r\nedge v1 v2\nedge v2 v3\nmotif r\nmotif b\n"


@pytest.mark.parametrize("backend", BACKENDS)
def test_path_rbr(backend):
    res = solve_gm_tree(parse_instance(PATH_RBR), backend=backend)
    assert res.answer
    assert res.occurrence.vertices in ({"v1", "v2"}, {"v2", "v3"})


def test_star_center_outside_motif():
    inst = parse_instance("problem GM\nvertex c blue\nvertex x red\nvertex y red\nedge c x\nedge c y\nmotif red 2\n")
    assert not solve_gm_tree(inst).answer


def test_rejects_non_tree_and_lgm():
    cyc = parse_instance("problem GM\nvertex a r\nvertex b r\nvertex c r\nedge a b\nedge b c\nedge a c\nmotif r 2\n")
    with pytest.raises(NotATree):
        solve_gm_tree(cyc)
    with pytest.raises(MotifError):
        solve_gm_tree(parse_instance("problem LGM\nvertex a r\nmotif r\n"))


def test_ell_zero_takes_everything():
    inst = random_instance(7, 0, "GM", seed=2)
    res = solve_gm_tree(inst)
    assert res.answer and res.occurrence.vertices == set(inst.vertices)


def test_leaf_tables():
    assert init_leaf_table(TableLayout([1])).tolist() == [1, 0]
    assert init_leaf_table(TableLayout([])).tolist() == [1]
    two = init_leaf_table(TableLayout([1, 2]))
    assert two[0] == 1 and two.sum() == 1


def test_lift_first_child_cases():
    lay = TableLayout([1])
    leaf = init_leaf_table(lay)
    # abundant leaf child: keep it (0 deletions) or drop it (1 deletion)
    assert lift_first_child(leaf, lay, [1], True).tolist() == [1, 1]
    # child holds a non-abundant color: no drop
    assert lift_first_child(leaf, lay, [1], False).tolist() == [1, 0]
    # two abundant vertices below but only one deletion allowed
    assert lift_first_child(leaf, lay, [2], True).tolist() == [1, 0]


def test_combine_examples():
    lay = TableLayout([1])
    prev = np.array([1, 0], dtype=np.uint8)
    table, _ = combine_child(prev, init_leaf_table(lay), lay, [1], True)
    assert table.tolist() == [1, 1]
    empty = np.zeros(2, dtype=np.uint8)
    # only the drop case remains: the prefix table shifted by one deletion
    table, _ = combine_child(prev, empty, lay, [1], True)
    assert table.tolist() == [0, 1]
    table, _ = combine_child(prev, empty, lay, [1], False)
    assert table.tolist() == [0, 0]
    lay0 = TableLayout([])
    one = np.ones(1, dtype=np.uint8)
    assert combine_child(one, one, lay0, [], False)[0].tolist() == [1]
    assert combine_child(one, np.zeros(1, dtype=np.uint8), lay0, [], True)[0].tolist() == [1]
    assert combine_child(one, np.zeros(1, dtype=np.uint8), lay0, [], False)[0].tolist() == [0]


def test_split_bound_vs_power_of_three():
    for limits in itertools.product(range(5), repeat=3):
        assert split_bound(list(limits)) <= 3 ** sum(limits)


def safe_subtree_table(dp: GmTreeDp, v: int) -> np.ndarray:
    """D_v by enumerating every connected subset of T_v with v and all plain vertices."""
    inst = dp.inst
    sub = [v]
    i = 0
    while i < len(sub):
        x = sub[i]
        i += 1
        sub.extend(dp.child_idx[dp.child_ptr[x]:dp.child_ptr[x + 1]].tolist())
    pos = {c: d for d, c in enumerate(dp.abundant)}
    plain = [x for x in sub if inst.color(x) not in pos]
    optional = [x for x in sub if inst.color(x) in pos and x != v]
    table = np.zeros(dp.layout.size, dtype=np.uint8)
    for r in range(len(optional) + 1):
        for extra in itertools.combinations(optional, r):
            keep = set(plain) | set(extra) | {v}
            if not is_connected_subset(inst.adj, keep):
                continue
            lam = [0] * dp.layout.j
            for x in sub:
                if x not in keep:
                    lam[pos[inst.color(x)]] += 1
            lin = dp.layout.linear(np.array(lam, dtype=np.int64)) if dp.layout.j else 0
            if lin >= 0:
                table[lin] = 1
    return table


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10), data=st.data())
def test_tables_match_safe_subtrees(n, data):
    ell = data.draw(st.integers(0, n - 1))
    inst = normalize(random_instance(n, ell, "GM", seed=data.draw(st.integers(0, 10**6))))
    if inst is None:
        return
    dp = GmTreeDp(inst, backend=data.draw(st.sampled_from(BACKENDS))).fill()
    for v in range(inst.n):
        assert (dp.D[v] == safe_subtree_table(dp, v)).all()


@settings(max_examples=120, deadline=None)
@given(n=st.integers(1, 12), data=st.data(), planted=st.booleans(), kind=st.sampled_from(["GM", "CGM"]))
def test_agrees_with_oracle(n, data, planted, kind):
    ell = data.draw(st.integers(0, n - 1))
    inst = random_instance(n, ell, kind, seed=data.draw(st.integers(0, 10**6)), planted=planted)
    want = oracle_solve(inst).answer
    for backend in BACKENDS:
        res = solve_gm_tree(inst, backend=backend)
        assert res.answer == want
        if res.answer:
            assert verify_occurrence(inst, res.occurrence)
        if "split_bound" in res.stats:
            assert res.stats["max_split_work"] <= res.stats["split_bound"] <= 3 ** inst.ell


def test_backends_agree_on_large_tree():
    inst = random_abundant_tree(5000, 6, 3, colors=20, seed=4)
    a = solve_gm_tree(inst, backend="numba")
    b = solve_gm_tree(inst, backend="numpy")
    assert a.answer == b.answer
    assert a.stats["total_split_work"] == b.stats["total_split_work"]
    if a.answer:
        assert verify_occurrence(inst, a.occurrence) and verify_occurrence(inst, b.occurrence)


def test_backend_env_flag(monkeypatch):
    from graphmotif._kernels import resolve_backend

    monkeypatch.setenv("GRAPHMOTIF_BACKEND", "numpy")
    assert resolve_backend(None) == "numpy"
    monkeypatch.setenv("GRAPHMOTIF_BACKEND", "numba")
    assert resolve_backend(None) == "numba"
    with pytest.raises(ValueError):
        resolve_backend("cuda")

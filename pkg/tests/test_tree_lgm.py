import pytest
from hypothesis import given, settings, strategies as st

from graphmotif.core import Instance, Kind, NotATree, VcgNotForest, normalize, verify_occurrence
from graphmotif.generators import LabeledGraph, gen_mis_to_lgm, random_instance
from graphmotif.oracle import oracle_solve
from graphmotif.tree_gm import solve_gm_tree
from graphmotif.tree_lgm import (
    LgmState,
    branch_2abundant,
    costly_components,
    find_2abundant,
    lift_assignment,
    rewrite_to_gm,
    rule_bad_color,
    rule_costly,
    rule_tight_color,
    solve_lgm_tree,
)


def state(lists, motif):
    return LgmState([set(x) for x in lists], dict(motif))


def lgm_path(lists, motif):
    """LGM instance on the path v0-v1-... with the given lists."""
    ids = [f"v{i}" for i in range(len(lists))]
    return Instance.build(Kind.LGM, list(zip(ids, lists)), list(zip(ids, ids[1:])), motif)


def test_bad_color():
    assert rule_bad_color(state([{"c"}, {"d"}], {"c": 2, "d": 1}))
    assert not rule_bad_color(state([{"c"}, {"c"}], {"c": 2}))
    st_ = state([{"c", "d"}, {"c"}], {"c": 2, "d": 1})
    st_.lists[0].discard("c")
    assert rule_bad_color(st_)


def test_tight_color_restricts_neighbors():
    st_ = rule_tight_color(state([{"c", "d"}, {"d"}, {"d"}], {"c": 1, "d": 1}))
    assert st_.lists == [{"c"}, {"d"}, {"d"}]
    unchanged = state([{"c", "d"}, {"c", "d"}], {"c": 1, "d": 1})
    assert rule_tight_color(unchanged).lists == [{"c", "d"}, {"c", "d"}]


def test_tight_color_cascade_on_path():
    # vertex-color graph a - v0 - b - v1 - c - v2
    st_ = rule_tight_color(state([{"a", "b"}, {"b", "c"}, {"c"}], {"a": 1, "b": 1, "c": 1}))
    assert st_.lists == [{"a"}, {"b"}, {"c"}]


def test_costly_components():
    assert costly_components(state([set()], {})) == 1
    # star with multiplicity equal to degree
    assert costly_components(state([{"c"}, {"c"}], {"c": 2})) == 0
    # path v1 - c1 - v2 with one spare carrier
    assert costly_components(state([{"c1"}, {"c1"}], {"c1": 1})) == 1
    # two isolated vertices but one deletion: the first component is over-demanded
    assert rule_costly(state([{"c"}, {"c", "d"}, set(), set()], {"c": 2, "d": 1}))
    assert not rule_costly(state([{"c1"}, {"c1"}, set()], {"c1": 1}))


def test_branch_two_abundant():
    st_ = state([{"c"}, {"c"}, {"c"}], {"c": 1})
    color, kids = find_2abundant(st_)
    assert color == "c" and kids == [1, 2]
    children = branch_2abundant(st_)
    assert len(children) == 2
    assert [ch.lists for ch in children] == [[{"c"}, set(), {"c"}], [{"c"}, {"c"}, set()]]
    assert all(ch.depth == 1 for ch in children)
    with pytest.raises(AssertionError):
        branch_2abundant(state([{"c"}, {"c"}], {"c": 1}))


def test_rewrite_case_one_star():
    base = lgm_path([["c"], ["c"]], {"c": 2})
    rw = rewrite_to_gm(state([{"c"}, {"c"}], {"c": 2}), base)
    assert sorted(rw.instance.motif.values()) == [1, 1]
    assert len({rw.instance.color(v) for v in range(2)}) == 2
    assert rw.tight == {0: "c", 1: "c"}


def test_rewrite_case_two_path():
    lists = [["c1"], ["c1", "c2"], ["c2"]]
    base = lgm_path(lists, {"c1": 1, "c2": 1})
    st_ = state(lists, {"c1": 1, "c2": 1})
    rw = rewrite_to_gm(st_, base)
    assert list(rw.instance.motif.values()) == [2]
    assert len({rw.instance.color(v) for v in range(3)}) == 1
    res = solve_gm_tree(rw.instance)
    assert res.answer
    chosen = [base.index[v] for v in res.occurrence.vertices]
    lifted = lift_assignment(st_, rw, chosen)
    assert sorted(lifted.values()) == ["c1", "c2"]
    assert all(c in st_.lists[v] for v, c in lifted.items())


def test_biclique_union_reduces_to_gm():
    inst = lgm_path([["r", "g"], ["r", "g"], ["b"]], {"r": 1, "g": 1, "b": 1})
    res = solve_lgm_tree(inst)
    assert res.answer and res.stats.get("biclique_merge") == 1
    assert verify_occurrence(inst, res.occurrence)
    no = lgm_path([["r", "g"], ["b"], ["r", "g"]], {"r": 2, "g": 1})
    assert solve_lgm_tree(no).answer == oracle_solve(no).answer


def test_rejects_cyclic_vertex_color_graph():
    inst = lgm_path([["r", "g"], ["r", "g"], ["g"]], {"r": 1, "g": 1})
    with pytest.raises(VcgNotForest):
        solve_lgm_tree(inst)


def test_rejects_non_tree():
    inst = Instance.build(Kind.LGM, [("a", ["r"]), ("b", ["g"]), ("c", ["b"])],
                          [("a", "b"), ("b", "c"), ("a", "c")], {"r": 1, "g": 1, "b": 1})
    with pytest.raises(NotATree):
        solve_lgm_tree(inst)


def test_independent_set_shaped_tree():
    # without edges the construction is a star around the hub
    h = LabeledGraph({"a1": 1, "a2": 1, "b1": 2, "b2": 2}, [], 2)
    inst = gen_mis_to_lgm(h)
    assert inst.is_tree()
    res = solve_lgm_tree(inst)
    assert res.answer == oracle_solve(inst).answer is True
    assert verify_occurrence(inst, res.occurrence)


def bound_holds(inst, res):
    if res.stats.get("biclique_merge"):
        return True
    m_max = max(inst.motif.values())
    return res.stats["leaves"] <= (m_max + 1) ** (inst.ell + 1) and res.stats["max_depth"] <= inst.ell + 1


@settings(max_examples=300, deadline=None)
@given(n=st.integers(1, 12), data=st.data(), planted=st.booleans())
def test_matches_oracle(n, data, planted):
    inst = random_instance(n, data.draw(st.integers(0, n - 1)), "LGM",
                           seed=data.draw(st.integers(0, 10**6)), planted=planted,
                           list_extra=data.draw(st.floats(0.0, 1.0)))
    res = solve_lgm_tree(inst)
    assert res.answer == oracle_solve(inst).answer
    assert bound_holds(inst, res)
    if res.answer:
        assert verify_occurrence(inst, res.occurrence)


@settings(max_examples=150, deadline=None)
@given(n=st.integers(1, 12), data=st.data())
def test_fixpoint_shape_before_rewrite(n, data):
    inst = normalize(random_instance(n, data.draw(st.integers(0, n - 1)), "LGM",
                                     seed=data.draw(st.integers(0, 10**6)), planted=False))
    if inst is None:
        return
    st_ = LgmState([set(x) for x in inst.colors], dict(inst.motif))
    rule_tight_color(st_)
    if rule_bad_color(st_) or find_2abundant(st_) is not None:
        return
    car = st_.carriers()
    for c, m in st_.motif.items():
        assert len(car[c]) - m in (0, 1)

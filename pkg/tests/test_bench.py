import pytest

from graphmotif.bench import BenchRecord, bench_one, grid_instances, parse_record, summarize
from graphmotif.core import MotifError, serialize_instance


def record(**kw):
    base = dict(instance="x", n=5, m=4, k=3, ell=2, algorithm="tree-cgm", answer="yes", wall=0.01)
    base.update(kw)
    return BenchRecord(**base)


def test_record_validation():
    with pytest.raises(ValueError):
        record(answer="maybe")
    with pytest.raises(ValueError):
        record(branch_nodes=-1)


def test_record_line_round_trip():
    rec = record(branch_nodes=2, extra={"split_bound": 6})
    fields = parse_record(rec.to_line())
    assert fields["instance"] == "x" and fields["branch_nodes"] == "2" and fields["split_bound"] == "6"


@pytest.mark.parametrize(
    "algo,ell,mult,bound",
    [("tree-cgm", 5, 1, 8), ("general-cgm", 5, 1, 32), ("tree-lgm", 2, 2, 27), ("tree-gm", 3, 1, 27), ("oracle", 3, 1, None)],
)
def test_bounds(algo, ell, mult, bound):
    assert record(algorithm=algo, ell=ell, max_mult=mult).bound() == bound


def test_within_bound_uses_family_counter():
    assert not record(algorithm="tree-cgm", ell=2, branch_nodes=3).within_bound()
    assert record(algorithm="tree-lgm", ell=1, leaves=4, branch_nodes=99).within_bound()
    assert not record(algorithm="tree-gm", ell=1, split_work=4).within_bound()


def test_grid_is_deterministic():
    a = [(name, serialize_instance(i)) for name, i in grid_instances("lgm-tree", [2, 3], 4, seed=1)]
    b = [(name, serialize_instance(i)) for name, i in grid_instances("lgm-tree", [2, 3], 4, seed=1)]
    assert a == b and len(a) == 8
    assert all(name.startswith("lgm-tree-l") for name, _ in a)
    with pytest.raises(MotifError):
        list(grid_instances("nope", [2], 1, 0))


@pytest.mark.parametrize("family", ["cgm-tree", "cgm-general", "lgm-tree", "gm-tree"])
def test_small_grid_within_bounds(family):
    recs = [bench_one(name, inst) for name, inst in grid_instances(family, range(2, 7), 5, seed=3)]
    assert all(r.within_bound() for r in recs)
    table = summarize(recs)
    assert table.splitlines()[0].split()[:3] == ["algorithm", "ell", "runs"]
    assert len(table.splitlines()) == 1 + 5


def test_kernel_size_recorded():
    name, inst = next(grid_instances("cgm-tree", [4], 1, seed=0))
    rec = bench_one(name, inst)
    assert 0 <= rec.kernel_size <= 2 * inst.ell + 1

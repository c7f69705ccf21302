import pytest

from graphmotif.cli import main
from graphmotif.core import Kind, parse_instance, parse_witness, vertex_color_graph
from graphmotif.dispatch import choose_algorithm
from graphmotif.generators import random_instance

YES_CGM = "problem CGM\nvertex a r\nvertex b g\nvertex c b\nedge a b\nedge b c\nmotif r\nmotif g\nmotif b\n"
TRIANGLE_GM = "problem GM\nvertex a r\nvertex b r\nvertex c g\nedge a b\nedge b c\nedge a c\nmotif r\nmotif g\n"
# vertex-color graph contains the cycle a - r - b - g - a plus c
LGM_CYCLE = ("problem LGM\nvertex a r,g\nvertex b r,g\nvertex c g\nvertex d b\n"
             "edge a b\nedge b c\nedge c d\nedge a d\nmotif r\nmotif g\nmotif b\n")


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def test_solve_yes_with_witness(write, capsys):
    path = write("yes.inst", YES_CGM)
    assert main(["solve", "--algo", "tree-cgm", "--witness", path]) == 0
    out = capsys.readouterr().out
    occ = parse_witness(out)
    assert out.startswith("yes\n") and occ.vertices == {"a", "b", "c"}


def test_solve_no_exit_code(write, capsys):
    path = write("no.inst", "problem GM\nvertex c blue\nvertex x red\nvertex y red\nedge c x\nedge c y\nmotif red 2\n")
    assert main(["solve", path]) == 1
    assert capsys.readouterr().out == "no\n"


def test_tree_solver_on_cycle_is_error(write, capsys):
    path = write("cyc.inst", TRIANGLE_GM)
    assert main(["solve", "--algo", "tree-gm", path]) == 2
    assert "NotATree" in capsys.readouterr().err


def test_parse_error_exit(write, capsys):
    assert main(["solve", write("bad.inst", "problem GM\nvertex a\n")]) == 2
    assert main(["solve", "/nonexistent/x.inst"]) == 2


def test_auto_falls_back_to_oracle(write, capsys):
    path = write("lgm.inst", LGM_CYCLE)
    inst = parse_instance(LGM_CYCLE)
    assert not vertex_color_graph(inst).is_forest()
    assert choose_algorithm(inst) == "oracle"
    assert main(["solve", "--stats", path]) == 0
    captured = capsys.readouterr()
    assert captured.out == "yes\n" and "algorithm=oracle" in captured.err


@pytest.mark.parametrize("kind", ["GM", "CGM", "LGM"])
def test_exit_codes_agree_across_algorithms(write, kind):
    for seed in range(6):
        inst = random_instance(9, 3, kind, seed=seed, planted=seed % 2 == 0)
        path = write(f"{kind}{seed}.inst", open_text(inst))
        algos = ["auto", "oracle", {"GM": "tree-gm", "CGM": "tree-cgm", "LGM": "tree-lgm"}[kind]]
        if kind == "CGM":
            algos += ["general-cgm", "tree-gm"]
        codes = {main(["solve", "--algo", a, path]) for a in algos}
        assert len(codes) == 1


def open_text(inst):
    from graphmotif.core import serialize_instance

    return serialize_instance(inst)


def test_generate_random_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.inst", tmp_path / "b.inst"
    for p in (a, b):
        assert main(["generate", "random", "--nodes", "10", "--ell", "3", "--tree", "--kind", "CGM",
                     "--seed", "7", "-o", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    inst = parse_instance(a.read_text())
    assert inst.ell == 3 and inst.kind is Kind.CGM and inst.is_tree()


def test_generate_random_infeasible(capsys):
    assert main(["generate", "random", "--nodes", "4", "--ell", "4", "--seed", "1"]) == 2


def test_generate_cnf(write, capsys):
    path = write("f.cnf", "p cnf 3 2\n1 -2 0\n2 3 0\n")
    assert main(["generate", "cnf2cgm", path]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert inst.ell == 3


def test_generate_mis(write, capsys):
    path = write("g.lg", "node a1 1\nnode a2 1\nnode b1 2\nedge a1 b1\n")
    assert main(["generate", "mis2lgm", path, "2"]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert vertex_color_graph(inst).is_path_union() and inst.ell == 2


def test_generate_crosscomp(write, capsys):
    a = write("a.lg", "node a 1\nnode b 2\nedge a b\n")
    b = write("b.lg", "node a 1\nnode b 2\n")
    assert main(["generate", "crosscomp", a, b]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert inst.is_tree() and inst.kind is Kind.GM


def test_kernelize_then_verify_lifted(tmp_path, capsys):
    inst = random_instance(12, 4, "CGM", seed=0)  # a yes-instance with an 8-vertex kernel
    src = tmp_path / "in.inst"
    src.write_text(open_text(inst))
    kern = tmp_path / "k.inst"
    assert main(["kernelize", str(src), "-o", str(kern)]) == 0
    assert (tmp_path / "k.inst.trace").read_text().startswith("root ")
    wit = tmp_path / "k.wit"
    assert main(["solve", "--witness", str(kern)]) == 0
    wit.write_text(capsys.readouterr().out)
    assert main(["verify", str(src), str(wit), "--trace", str(kern) + ".trace"]) == 0
    assert capsys.readouterr().out == "valid\n"
    # the kernel witness alone misses the contracted vertices
    assert main(["verify", str(src), str(wit)]) == 1


def test_verify_rejects_bad_witness(write, capsys):
    path = write("p.inst", YES_CGM)
    bad = write("bad.wit", "yes\noccurrence a c\nassign a r\nassign c b\n")
    assert main(["verify", path, bad]) == 1
    assert capsys.readouterr().out.startswith("invalid")
    no = write("no.wit", "no\n")
    assert main(["verify", path, no]) == 1


def test_verify_confirms_no(write, capsys):
    path = write("n.inst", "problem GM\nvertex c blue\nvertex x red\nvertex y red\nedge c x\nedge c y\nmotif red 2\n")
    assert main(["verify", path, write("no.wit", "no\n")]) == 0


def test_bench_grid(tmp_path, capsys):
    out = tmp_path / "records.txt"
    assert main(["bench", "--grid", "cgm-tree", "--ell-min", "2", "--ell-max", "3",
                 "--per-cell", "3", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6 and all("algorithm=tree-cgm" in ln for ln in lines)
    assert "viol" in capsys.readouterr().out


def test_bench_suite(tmp_path, capsys):
    for seed in range(3):
        (tmp_path / f"s{seed}.inst").write_text(open_text(random_instance(12, 4, "GM", tree=False, seed=seed)))
    assert main(["bench", "--suite", str(tmp_path), "--algo", "oracle"]) == 0
    assert capsys.readouterr().out.count("algorithm=oracle") == 3
    assert main(["bench", "--suite", str(tmp_path / "missing")]) == 2

"""Command-line front end: solve, kernelize, generate, verify, bench."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as benchmod
from . import generators as gen
from .core import (
    MotifError,
    format_witness,
    parse_instance,
    parse_witness,
    serialize_instance,
    verify_occurrence,
)
from .dispatch import ALGORITHMS, solve

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    algo, res = solve(inst, args.algo, args.backend)
    if args.witness:
        sys.stdout.write(format_witness(res))
    else:
        print("yes" if res.answer else "no")
    if args.stats:
        items = {"algorithm": algo, **(res.stats or {})}
        print(" ".join(f"{k}={v}" for k, v in items.items()), file=sys.stderr)
    return EXIT_YES if res.answer else EXIT_NO


def cmd_kernelize(args) -> int:
    from .tree_cgm import format_trace, kernelize_cgm_tree

    inst = parse_instance(_read(args.instance))
    out = kernelize_cgm_tree(inst)
    if out is None:
        print("no", file=sys.stderr)
        return EXIT_NO
    kernel, trace = out
    _write(args.output, serialize_instance(kernel))
    trace_path = args.trace or (args.output + ".trace" if args.output and args.output != "-" else None)
    if trace_path:
        Path(trace_path).write_text(format_trace(trace), encoding="utf-8")
    else:
        sys.stderr.write(format_trace(trace))
    print(f"n={inst.n} ell={inst.ell} kernel_n={kernel.n} kernel_ell={kernel.ell} "
          f"ops={trace.ops}", file=sys.stderr)
    return EXIT_YES


def cmd_generate(args) -> int:
    if args.source == "cnf2cgm":
        inst = gen.gen_cnf_to_cgm(gen.parse_dimacs(_read(args.input)))
    elif args.source == "mis2lgm":
        inst = gen.gen_mis_to_lgm(gen.parse_labeled_graph(_read(args.input), args.k), args.k)
    elif args.source == "crosscomp":
        graphs = [gen.parse_labeled_graph(_read(p), args.k) for p in args.inputs]
        inst = gen.gen_crosscomp_to_gm(gen.CrossCompConfig(graphs))
    else:
        inst = gen.random_instance(
            nodes=args.nodes,
            ell=args.ell,
            kind=args.kind,
            tree=args.tree,
            colors=args.colors,
            seed=args.seed,
            density=args.density,
            planted=not args.unplanted,
        )
    _write(args.output, serialize_instance(inst))
    return EXIT_YES


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    occ = parse_witness(_read(args.witness))
    if occ is None:
        algo, res = solve(inst, args.algo)
        if res.answer:
            print(f"invalid: {algo} finds an occurrence")
            return EXIT_NO
        print(f"valid: {algo} confirms no occurrence")
        return EXIT_YES
    if args.trace:
        from .tree_cgm import lift_kernel_occurrence, parse_trace

        occ = lift_kernel_occurrence(inst, occ, parse_trace(_read(args.trace)))
    try:
        ok = verify_occurrence(inst, occ)
    except MotifError as exc:
        print(f"invalid: {exc}")
        return EXIT_NO
    if not ok:
        print("invalid: not a connected occurrence matching the motif")
        return EXIT_NO
    print("valid")
    return EXIT_YES


def cmd_bench(args) -> int:
    if args.suite:
        items = benchmod.suite_instances(args.suite)
        algo = args.algo
    else:
        items = benchmod.grid_instances(args.grid, range(args.ell_min, args.ell_max + 1),
                                        args.per_cell, args.seed)
        algo = benchmod.FAMILIES[args.grid][2] if args.algo == "auto" else args.algo
    records = []
    sink = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for name, inst in items:
            rec = benchmod.bench_one(name, inst, algo, args.backend)
            records.append(rec)
            print(rec.to_line(), file=sink, flush=True)
    finally:
        if sink is not sys.stdout:
            sink.close()
    print(benchmod.summarize(records))
    return EXIT_YES if all(r.within_bound() for r in records) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphmotif", description="Exact Graph Motif solvers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide an instance; exit 0 yes, 1 no, 2 error")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGORITHMS, default="auto")
    s.add_argument("--witness", action="store_true", help="print the witness file format")
    s.add_argument("--stats", action="store_true", help="print search counters to stderr")
    s.add_argument("--backend", choices=("numba", "numpy"), default=None)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("kernelize", help="kernel of a colorful instance on a tree")
    s.add_argument("instance")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--trace", default=None, help="sidecar trace path (default OUTPUT.trace)")
    s.set_defaults(func=cmd_kernelize)

    s = sub.add_parser("generate", help="write a generated instance")
    gsub = s.add_subparsers(dest="source", required=True)
    g = gsub.add_parser("cnf2cgm")
    g.add_argument("input", help="DIMACS CNF file")
    g = gsub.add_parser("mis2lgm")
    g.add_argument("input", help="labeled graph file")
    g.add_argument("k", type=int)
    g = gsub.add_parser("crosscomp")
    g.add_argument("inputs", nargs="+", help="labeled graph files")
    g.add_argument("--k", type=int, default=None)
    g = gsub.add_parser("random")
    g.add_argument("--nodes", type=int, required=True)
    g.add_argument("--ell", type=int, required=True)
    g.add_argument("--colors", type=int, default=None)
    g.add_argument("--kind", choices=("GM", "CGM", "LGM"), default="CGM")
    g.add_argument("--tree", action="store_true", help="random tree instead of a random graph")
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--unplanted", action="store_true", help="draw the motif independently")
    g.add_argument("--seed", type=int, required=True)
    for g in gsub.choices.values():
        g.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("verify", help="check a witness against an instance")
    s.add_argument("instance")
    s.add_argument("witness")
    s.add_argument("--trace", default=None, help="kernel trace; the witness is for the kernel")
    s.add_argument("--algo", choices=ALGORITHMS, default="auto", help="solver used to confirm a 'no'")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="timed runs with bound checks")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--suite", help="directory of .inst files")
    src.add_argument("--grid", choices=sorted(benchmod.FAMILIES))
    s.add_argument("--algo", choices=ALGORITHMS, default="auto")
    s.add_argument("--ell-min", type=int, default=2)
    s.add_argument("--ell-max", type=int, default=12)
    s.add_argument("--per-cell", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--backend", choices=("numba", "numpy"), default=None)
    s.add_argument("-o", "--output", default=None, help="record file (default stdout)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MotifError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: gen, kernelize, approx, solve, check, bench.  Same seed and
flags produce byte-identical outputs.  Exit codes: 0 ok, 1 the result is
a certified no-instance, 2 input validation failure, 3 internal invariant
breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .graphs import Graph, InvariantError, delete_vertices
from .chordal import find_any_hole, is_chordal
from .approx import NoInstance, approximate
from .generate import GeneratorSpec, generate, kernel_instance_pool, \
    random_near_chordal
from .instance_io import (
    InstanceFile,
    InstanceFormatError,
    emit,
    emit_solution,
    parse,
    parse_solution,
)
from .kernel import KernelResult, ReductionEvent, kernelize, replay_trace
from .oracle import exact_chvd, exact_chvd_forced

EXIT_OK = 0
EXIT_NO_INSTANCE = 1
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _event_record(event: ReductionEvent) -> str:
    record = {
        "rule": event.rule,
        "witness": list(event.witness),
        "deleted": list(event.deleted),
        "added_edges": [list(e) for e in event.added_edges],
        "forced_pair": list(event.forced_pair) if event.forced_pair else None,
        "k_delta": event.k_delta,
        "counters": {key: value for key, value in event.counters},
    }
    return json.dumps(record, separators=(",", ":"))


def trace_text(result: KernelResult) -> str:
    return "".join(_event_record(e) + "\n" for e in result.trace)


def cmd_gen(args) -> int:
    if args.pool:
        g, k, modulator = kernel_instance_pool(args.seed)
    else:
        g, k, planted = generate(GeneratorSpec(
            seed=args.seed,
            core_vertices=args.core,
            planted=args.planted,
            noise_edges=args.noise,
            budget=args.k,
        ))
        modulator = sorted(planted)
    inst = InstanceFile.from_graph(
        g, k, modulator=modulator,
        comments=[f"seed {args.seed}"],
    )
    _write(args.output, emit(inst))
    return EXIT_OK


def _greedy_modulator(g: Graph) -> list[int]:
    removed: set[int] = set()
    while True:
        rest = delete_vertices(g, removed)
        hole = find_any_hole(rest.graph)
        if hole is None:
            return sorted(removed)
        removed |= {rest.old_of[v] for v in hole.vertices}


def cmd_kernelize(args) -> int:
    instance = parse(_read(args.input))
    g = instance.graph()
    modulator = list(instance.modulator)
    if not modulator and not is_chordal(g):
        if not args.auto_modulator:
            print("error: instance has no modulator lines; "
                  "pass --auto-modulator to compute one greedily",
                  file=sys.stderr)
            return EXIT_VALIDATION
        modulator = _greedy_modulator(g)
    if not is_chordal(delete_vertices(g, modulator).graph):
        print("error: graph minus modulator is not chordal", file=sys.stderr)
        return EXIT_VALIDATION
    result = kernelize(g, instance.k, modulator)
    replayed_graph, replayed_k = replay_trace(g, instance.k, result.trace)
    if replayed_graph != result.graph or replayed_k != result.k:
        print("internal invariant breached: trace replay mismatch",
              file=sys.stderr)
        return EXIT_INTERNAL
    if args.format == "json":
        _write(args.output, json.dumps({
            "verdict": result.verdict,
            "n": result.graph.n,
            "k": result.k,
            "edges": sorted([u, v] for u, v in result.graph.edges()),
            "events": len(result.trace),
        }, separators=(",", ":")) + "\n")
    else:
        out = InstanceFile.from_graph(
            result.graph, result.k,
            comments=[f"kernel verdict {result.verdict}"],
        )
        _write(args.output, emit(out))
    if args.trace:
        _write(args.trace, trace_text(result))
    return EXIT_NO_INSTANCE if result.verdict == "no" else EXIT_OK


def cmd_approx(args) -> int:
    instance = parse(_read(args.input))
    g = instance.graph()
    got = approximate(g, instance.k, tolerance=args.tolerance,
                      max_iters=args.max_iters)
    if isinstance(got, NoInstance):
        if args.format == "json":
            _write(args.output, '{"status":"no-instance"}\n')
        else:
            _write(args.output, "c no-instance\n")
        return EXIT_NO_INSTANCE
    report = f"approx size {len(got)}"
    if args.oracle:
        res = exact_chvd(g, g.n)
        if res.optimum:
            ratio = len(got) / res.optimum
        else:
            ratio = 1.0 if not got else float(len(got))
        report += f"; optimum {res.optimum}; ratio {ratio:.3f}"
    if args.format == "json":
        record = {"status": "ok", "size": len(got), "vertices": sorted(got)}
        if args.oracle:
            record["optimum"] = res.optimum
        _write(args.output, json.dumps(record, separators=(",", ":")) + "\n")
    else:
        _write(args.output, emit_solution(got, comment=report))
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = parse(_read(args.input))
    res = exact_chvd_forced(instance.graph(), instance.k, instance.forced)
    if res is None:
        if args.format == "json":
            _write(args.output, '{"status":"no-solution"}\n')
        else:
            _write(args.output, "c no solution within budget\n")
        return EXIT_NO_INSTANCE
    if args.format == "json":
        _write(args.output, json.dumps(
            {"status": "ok", "optimum": res.optimum,
             "vertices": sorted(res.solution)}, separators=(",", ":")) + "\n")
    else:
        _write(args.output,
               emit_solution(res.solution, comment=f"optimum {res.optimum}"))
    return EXIT_OK


def cmd_check(args) -> int:
    instance = parse(_read(args.input))
    solution = parse_solution(_read(args.solution))
    g = instance.graph()
    if any(v < 0 or v >= g.n for v in solution):
        print("invalid: solution uses unknown vertex ids", file=sys.stderr)
        return EXIT_VALIDATION
    if len(solution) > instance.k:
        print(f"invalid: solution size {len(solution)} exceeds budget "
              f"{instance.k}", file=sys.stderr)
        return EXIT_VALIDATION
    for x, y in instance.forced:
        if x not in solution and y not in solution:
            print(f"invalid: forced pair ({x},{y}) not hit", file=sys.stderr)
            return EXIT_VALIDATION
    if not is_chordal(delete_vertices(g, solution).graph):
        print("invalid: residual graph is not chordal", file=sys.stderr)
        return EXIT_VALIDATION
    print("valid")
    return EXIT_OK


def _bench_flower(seed: int) -> tuple[str, bool]:
    from .flower import flower_and_cover
    g, v = random_near_chordal(seed, core_vertices=12)
    flower, cover = flower_and_cover(g, v)
    ok = len(cover) <= 12 * flower.order and v not in cover and \
        is_chordal(delete_vertices(g, cover).graph)
    return f"flower seed={seed} order={flower.order} cover={len(cover)}", ok


def _bench_kernel(seed: int) -> tuple[str, bool]:
    g, k, modulator = kernel_instance_pool(seed)
    result = kernelize(g, k, modulator)
    before = exact_chvd(g, k) is not None
    if result.verdict == "yes":
        after = True
    elif result.verdict == "no":
        after = False
    else:
        after = exact_chvd(result.graph, result.k) is not None
    return (f"kernel seed={seed} n={g.n}->{result.graph.n} "
            f"verdict={result.verdict}", before == after)


def _bench_approx(seed: int) -> tuple[str, bool]:
    g, k, _ = generate(GeneratorSpec(seed=seed, core_vertices=10, planted=2,
                                     noise_edges=1))
    got = approximate(g, k)
    opt = exact_chvd(g, k)
    if isinstance(got, NoInstance):
        return f"approx seed={seed} no-instance", opt is None
    ok = is_chordal(delete_vertices(g, got).graph)
    return f"approx seed={seed} size={len(got)}", ok


def cmd_bench(args) -> int:
    suites = {
        "flower": _bench_flower,
        "kernel": _bench_kernel,
        "approx": _bench_approx,
    }
    threads = max(1, int(os.environ.get("CHVD_THREADS", "1")))
    rows = []
    failures = 0
    for name, fn in suites.items():
        seeds = list(range(args.base_seed, args.base_seed + args.seeds))
        start = time.perf_counter()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(fn, seeds))
        else:
            results = [fn(s) for s in seeds]
        elapsed = time.perf_counter() - start
        bad = [line for line, ok in results if not ok]
        failures += len(bad)
        rows.append((name, len(seeds), len(seeds) - len(bad), elapsed))
        for line in bad:
            print(f"FAIL {line}")
    width = max(len(r[0]) for r in rows)
    print(f"{'suite'.ljust(width)}  runs  pass  seconds")
    for name, runs, passed, elapsed in rows:
        print(f"{name.ljust(width)}  {runs:4d}  {passed:4d}  {elapsed:7.2f}")
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as handle:
        return handle.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chvd",
        description="Chordal vertex deletion: kernelization and approximation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--core", type=int, default=12)
    p_gen.add_argument("--planted", type=int, default=2)
    p_gen.add_argument("--noise", type=int, default=1)
    p_gen.add_argument("--k", type=int, default=None)
    p_gen.add_argument("--pool", action="store_true",
                       help="draw from the shaped kernel-test pool")
    p_gen.add_argument("-o", "--output", default="-")
    p_gen.set_defaults(func=cmd_gen)

    p_ker = sub.add_parser("kernelize", help="shrink an instance")
    p_ker.add_argument("input")
    p_ker.add_argument("-o", "--output", default="-")
    p_ker.add_argument("--trace", default=None,
                       help="write the reduction trace to this path")
    p_ker.add_argument("--auto-modulator", action="store_true")
    p_ker.add_argument("--format", choices=("text", "json"), default="text")
    p_ker.set_defaults(func=cmd_kernelize)

    p_apx = sub.add_parser("approx", help="poly(opt) approximate solution")
    p_apx.add_argument("input")
    p_apx.add_argument("-o", "--output", default="-")
    p_apx.add_argument("--oracle", action="store_true",
                       help="also run the exact solver and report the ratio")
    p_apx.add_argument("--tolerance", type=float, default=1e-6)
    p_apx.add_argument("--max-iters", type=int, default=2000)
    p_apx.add_argument("--format", choices=("text", "json"), default="text")
    p_apx.set_defaults(func=cmd_approx)

    p_solve = sub.add_parser("solve", help="exact solution at desk scale")
    p_solve.add_argument("input")
    p_solve.add_argument("-o", "--output", default="-")
    p_solve.add_argument("--format", choices=("text", "json"), default="text")
    p_solve.set_defaults(func=cmd_solve)

    p_check = sub.add_parser("check", help="verify a claimed solution")
    p_check.add_argument("input")
    p_check.add_argument("--solution", required=True)
    p_check.set_defaults(func=cmd_check)

    p_bench = sub.add_parser("bench", help="run the verification suites")
    p_bench.add_argument("--seeds", type=int, default=20)
    p_bench.add_argument("--base-seed", type=int, default=0)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvariantError as exc:
        print(f"internal invariant breached: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

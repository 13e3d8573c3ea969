"""Benchmark and verification command line.

Two subcommands: `run` loads a graph, solves shortest paths with the chosen
backend, optionally checks the result against the reference solver, and
prints one "label<TAB>distance" line per reachable vertex; `selftest` runs
an embedded randomized oracle suite.

Exit codes: 0 success, 1 load or parse failure, 2 verification mismatch,
3 bad flags (including a source label the graph does not have).
"""

from __future__ import annotations

import argparse
import logging
import statistics
import sys
from dataclasses import dataclass

import numpy as np

from .core import SparseVector
from .fused import BackendChoice
from .generate import random_graph
from .io import GraphFile, GraphLoadError, load_graph
from .sssp import delta_stepping, dijkstra_oracle

__all__ = ["RunConfig", "run", "selftest", "main", "console_main"]

REL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RunConfig:
    graph: GraphFile
    source: int
    delta: float = 1.0
    backend: BackendChoice = BackendChoice()
    verify: bool = False
    repeat: int = 1
    skip_empty_buckets: bool = False
    output: str | None = None
    inject_fault: bool = False


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here reserves 2 for
    # verification mismatches, so surface usage problems as exceptions
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="deltasparse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="solve shortest paths on a graph file")
    run_p.add_argument("--graph", required=True, help="path to the graph, or - for stdin")
    run_p.add_argument("--format", required=True, choices=("mtx", "edges"))
    run_p.add_argument(
        "--directed",
        action="store_true",
        help="treat edge-list lines as one-directional (mtx symmetry comes from its header)",
    )
    run_p.add_argument("--source", required=True, type=int, help="source vertex label")
    run_p.add_argument("--delta", type=float, default=1.0, help="bucket width (default 1.0)")
    run_p.add_argument("--backend", choices=("unfused", "fused"), default="unfused")
    run_p.add_argument("--workers", type=int, default=1)
    run_p.add_argument("--chunks-per-worker", type=int, default=1)
    run_p.add_argument("--verify", action="store_true", help="check against the reference solver")
    run_p.add_argument("--repeat", type=int, default=1, help="timed repetitions, median reported")
    run_p.add_argument("--skip-empty-buckets", action="store_true")
    run_p.add_argument("--output", default=None, help="write distances here instead of stdout")
    run_p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    st_p = sub.add_parser("selftest", help="run the embedded randomized oracle suite")
    st_p.add_argument("--cases", type=int, default=50)
    st_p.add_argument("--seed", type=int, default=0)
    st_p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def _deviations(got: SparseVector, want: SparseVector) -> tuple[bool, float]:
    """Compare reachable sets and values. Returns (within tolerance, max
    absolute deviation); a reachable-set mismatch is reported as inf."""
    if not np.array_equal(got.indices, want.indices):
        return False, float("inf")
    if want.nnz == 0:
        return True, 0.0
    dev = np.abs(got.values - want.values)
    ok = bool(np.all(dev <= REL_TOLERANCE * (1.0 + want.values)))
    return ok, float(dev.max())


def _perturb(distances: SparseVector) -> SparseVector:
    if distances.nnz == 0:
        return distances
    values = distances.values.copy()
    values[-1] += 1.0
    return SparseVector(distances.length, distances.indices.copy(), values)


def run(config: RunConfig) -> int:
    try:
        matrix, labels = load_graph(config.graph)
    except (GraphLoadError, OSError) as exc:
        print(f"deltasparse: {exc}", file=sys.stderr)
        return 1
    if config.source not in labels:
        print(f"deltasparse: source label {config.source} not in graph", file=sys.stderr)
        return 3
    internal_source = labels.to_internal(config.source)

    result = None
    times = []
    for _ in range(config.repeat):
        result = delta_stepping(
            matrix,
            internal_source,
            config.delta,
            backend=config.backend,
            skip_empty_buckets=config.skip_empty_buckets,
        )
        times.append(result.elapsed)
    assert result is not None
    distances = _perturb(result.distances) if config.inject_fault else result.distances

    code = 0
    if config.verify:
        oracle = dijkstra_oracle(matrix, internal_source)
        ok, deviation = _deviations(distances, oracle)
        status = "OK" if ok else "FAILED"
        print(f"verification {status}: max deviation {deviation:g}", file=sys.stderr)
        if not ok:
            code = 2

    lines = sorted((labels.to_external(i), v) for i, v in distances.items())
    text = "".join(f"{label}\t{value!r}\n" for label, value in lines)
    if config.output is None:
        sys.stdout.write(text)
    else:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)

    print(
        f"n={matrix.n} m={matrix.nnz} delta={config.delta:g} "
        f"backend={config.backend.kind} workers={config.backend.workers} "
        f"outer_iterations={result.outer_iterations} inner_phases={result.inner_phases} "
        f"median_time_s={statistics.median(times):.6f}",
        file=sys.stderr,
    )
    return code


def selftest(cases: int = 50, seed: int = 0, inject_fault: bool = False) -> int:
    """Randomized acceptance check runnable from any install."""
    print(f"selftest: cases={cases} seed={seed}")
    if cases == 0:
        print("selftest: WARNING: 0 cases requested, passing vacuously")
        return 0
    rng = np.random.default_rng(seed)
    deltas = (0.5, 1.0, 3.0, 11.0)
    for case in range(cases):
        n = int(rng.integers(1, 61))
        m = int(rng.integers(0, 4 * n + 1))
        kind = "int" if case % 2 == 0 else "float"
        matrix = random_graph(n, m, rng, weights=kind)
        source = int(rng.integers(0, n))
        delta = float(deltas[int(rng.integers(0, len(deltas)))])

        expected = dijkstra_oracle(matrix, source)
        got = delta_stepping(matrix, source, delta).distances
        fused = delta_stepping(
            matrix, source, delta, backend=BackendChoice("fused")
        ).distances
        if inject_fault and case == 0:
            got = _perturb(got)

        ok, deviation = _deviations(got, expected)
        if kind == "int" and deviation != 0.0:
            ok = False
        if not ok or fused != got:
            reason = "fused/unfused mismatch" if ok else f"max deviation {deviation:g}"
            print(
                f"selftest case {case} FAILED ({reason}): "
                f"seed={seed} n={n} m={m} source={source} delta={delta:g} weights={kind}"
            )
            return 2
    print(f"selftest: all {cases} cases passed")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"deltasparse: error: {exc}", file=sys.stderr)
        return 3

    if args.command == "selftest":
        if args.cases < 0:
            print("deltasparse: error: --cases must be >= 0", file=sys.stderr)
            return 3
        return selftest(cases=args.cases, seed=args.seed, inject_fault=args.inject_fault)

    if args.delta <= 0:
        print("deltasparse: error: --delta must be positive", file=sys.stderr)
        return 3
    if args.workers < 1 or args.chunks_per_worker < 1:
        print("deltasparse: error: --workers and --chunks-per-worker must be >= 1", file=sys.stderr)
        return 3
    if args.repeat < 1:
        print("deltasparse: error: --repeat must be >= 1", file=sys.stderr)
        return 3
    config = RunConfig(
        graph=GraphFile(path=args.graph, format=args.format, directed=args.directed),
        source=args.source,
        delta=args.delta,
        backend=BackendChoice(
            kind=args.backend, workers=args.workers, chunks_per_worker=args.chunks_per_worker
        ),
        verify=args.verify,
        repeat=args.repeat,
        skip_empty_buckets=args.skip_empty_buckets,
        output=args.output,
        inject_fault=args.inject_fault,
    )
    return run(config)


def console_main() -> None:
    sys.exit(main())

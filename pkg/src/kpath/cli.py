"""Command-line entry point.

Exit status: 0 for YES, 1 for NO, 2 for usage or input errors. ``--k``
always counts path vertices; the undirected engine receives k - 1 edges.

Graph files: '#' comment lines, a header line "n m", then m lines "u v"
with 1-based endpoints. Whether edges are directed is chosen by the
subcommand.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .bench import growth_ratios, random_digraph, time_directed
from .directed import Digraph, directed_kpath
from .field import FieldConfig, set_field
from .mmtest import TestParams, Verdict
from .oracle import PathWitness, dfs_kpath_directed, dfs_kpath_undirected
from .undirected import Ugraph, choose_rs, trial_count, undirected_kpath

__all__ = ["GraphParseError", "RunReport", "main", "parse_graph"]

K_CONVENTION = "vertices"


class GraphParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_graph(text: str, directed: bool) -> Digraph | Ugraph:
    """Parse the edge-list format; vertices come back 0-based."""
    header = None
    edges: list[tuple[int, int]] = []
    n = m = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise GraphParseError(lineno, f"expected header 'n m', got {line!r}")
            n, m = int(parts[0]), int(parts[1])
            header = lineno
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(lineno, f"expected edge 'u v', got {line!r}")
        if len(edges) == m:
            raise GraphParseError(lineno, f"more than the {m} edges announced in the header")
        u, v = int(parts[0]), int(parts[1])
        for end in (u, v):
            if not 1 <= end <= n:
                raise GraphParseError(lineno, f"endpoint {end} outside 1..{n}")
        if not directed and u == v:
            raise GraphParseError(lineno, f"self-loop at vertex {u} in an undirected graph")
        edges.append((u - 1, v - 1))
    if header is None:
        raise GraphParseError(max(lineno, 1), "missing header 'n m'")
    if len(edges) != m:
        raise GraphParseError(lineno, f"header announced {m} edges, found {len(edges)}")
    if directed:
        return Digraph.from_edges(n, edges)
    return Ugraph.from_edges(n, edges)


@dataclass
class RunReport:
    command: str
    graph: dict
    k: int
    k_convention: str
    parameters: dict
    answer: str
    failure_bound: float
    queries_used: int
    elapsed_seconds: float = 0.0
    version: str = __version__
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        data = asdict(self)
        if not data["extra"]:
            del data["extra"]
        return json.dumps(data, sort_keys=True)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kpath",
        description="Decide whether a graph has a simple path on k vertices.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            p.add_argument("graph", help="edge-list file, or '-' for stdin")
            p.add_argument("--k", type=int, required=True, help="path length in vertices")
        p.add_argument("--seed", type=_u64, default=0)
        p.add_argument("--field-bits", type=int, choices=(8, 16, 32, 64), default=64)
        p.add_argument("--json", action="store_true", help="print the JSON run report")

    p = sub.add_parser("directed", help="randomized test on a directed graph")
    common(p)
    p.add_argument("--trials", type=_positive, default=3)

    p = sub.add_parser("undirected", help="randomized test on an undirected graph")
    common(p)
    p.add_argument("--trials", type=_positive, default=3)
    p.add_argument("--amplify", type=_positive, default=10)

    p = sub.add_parser("oracle", help="exhaustive search (ground truth)")
    common(p)
    p.add_argument("--undirected", action="store_true", help="read edges as undirected")

    p = sub.add_parser("bench", help="time the directed test for a range of k")
    common(p, graph=False)
    p.add_argument("--n", type=_positive, default=50)
    p.add_argument("--p", type=float, default=0.1, help="arc probability")
    p.add_argument("--k-min", type=_positive, default=14)
    p.add_argument("--k-max", type=_positive, default=20)
    p.add_argument("--repeats", type=_positive, default=1)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _graph_summary(g: Digraph | Ugraph, directed: bool) -> dict:
    return {"n": g.n, "m": g.m, "directed": directed}


def _run_directed(args, g: Digraph) -> tuple[Verdict, dict]:
    field_cfg = FieldConfig(args.field_bits)
    verdict = directed_kpath(g, args.k, TestParams(args.trials, args.seed, field_cfg))
    return verdict, {"trials": args.trials}


def _run_undirected(args, g: Ugraph) -> tuple[Verdict, dict]:
    field_cfg = FieldConfig(args.field_bits)
    k_edges = args.k - 1
    params = {"trials": args.trials, "amplification": args.amplify, "k_edges": k_edges}
    if k_edges == 0:
        verdict = Verdict("YES", 0, 0.0, 0) if g.n else Verdict("NO", None, 0.0, 0)
        return verdict, params
    r, s = choose_rs(k_edges)
    params.update(r=r, s=s, T=trial_count(k_edges, r, s))
    verdict = undirected_kpath(
        g, k_edges, TestParams(args.trials, args.seed, field_cfg), args.amplify
    )
    return verdict, params


def _run_oracle(args, g: Digraph | Ugraph) -> tuple[Verdict, dict]:
    if not args.undirected:
        witness = dfs_kpath_directed(g, args.k)
    elif args.k > 1:
        witness = dfs_kpath_undirected(g, args.k - 1)
    else:
        witness = PathWitness((0,)) if g.n else None
    if witness is None:
        return Verdict("NO", None, 0.0, 0), {}
    return Verdict("YES", 0, 0.0, 0), {"witness": [v + 1 for v in witness.vertices]}


def _bench(args) -> int:
    field_cfg = FieldConfig(args.field_bits)
    if args.k_max < args.k_min:
        raise ValueError("--k-max must be at least --k-min")
    g = random_digraph(args.n, args.p, args.seed)
    start = time.perf_counter()
    rows = time_directed(g, range(args.k_min, args.k_max + 1), field_cfg, args.seed, args.repeats)
    ratios = growth_ratios(rows)
    report = {
        "command": "bench",
        "graph": _graph_summary(g, True),
        "k_convention": K_CONVENTION,
        "parameters": {
            "p": args.p,
            "k_min": args.k_min,
            "k_max": args.k_max,
            "repeats": args.repeats,
            "field_bits": args.field_bits,
            "seed": args.seed,
        },
        "timings": rows,
        "ratios": ratios,
        "growth_ratio": statistics.fmean(ratios) if ratios else None,
        "elapsed_seconds": time.perf_counter() - start,
        "version": __version__,
    }
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for row in rows:
            print(f"k={row['k']:3d}  {row['seconds']:.4f}s  queries={row['queries']}")
        if ratios:
            print(f"mean t(k+1)/t(k) = {report['growth_ratio']:.3f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        set_field(FieldConfig(args.field_bits))
        if args.command == "bench":
            return _bench(args)
        if args.k < 1:
            raise ValueError("--k must be at least 1")
        directed = args.command == "directed" or (
            args.command == "oracle" and not args.undirected
        )
        g = parse_graph(_read(args.graph), directed)
        start = time.perf_counter()
        if args.command == "directed":
            verdict, params = _run_directed(args, g)
        elif args.command == "undirected":
            verdict, params = _run_undirected(args, g)
        else:
            verdict, extra = _run_oracle(args, g)
            params = {}
        elapsed = time.perf_counter() - start
    except (OSError, ValueError) as exc:
        print(f"kpath: error: {exc}", file=sys.stderr)
        return 2

    params.update(field_bits=args.field_bits, seed=args.seed)
    report = RunReport(
        command=args.command,
        graph=_graph_summary(g, directed),
        k=args.k,
        k_convention=K_CONVENTION,
        parameters=params,
        answer=verdict.answer,
        failure_bound=verdict.failure_bound,
        queries_used=verdict.queries_used,
        elapsed_seconds=elapsed,
        extra=extra if args.command == "oracle" else {},
    )
    if args.json:
        print(report.to_json())
    else:
        print(
            f"{verdict.answer}  (k={args.k} vertices, failure bound "
            f"{verdict.failure_bound:.3g}, {verdict.queries_used} queries)"
        )
    return 0 if verdict.yes else 1


if __name__ == "__main__":
    sys.exit(main())

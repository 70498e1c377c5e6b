"""Compare the compiled and pure-Python search kernels on the same games.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

from __future__ import annotations

import argparse
import json
import time

from latingame.game import GameConfig
from latingame.graphs import GraphGameConfig, build_contraction_graph
from latingame.kernel import BACKENDS
from latingame.solver import Solver
from latingame.symmetry import Isotopism

CASES = {
    "H(3,3) trivial, 3 colours, Bob first": GameConfig(Isotopism.trivial((3, 3), 3), 3, first_player="B"),
    "H(3,3) trivial, 4 colours, Bob first": GameConfig(Isotopism.trivial((3, 3), 3), 4, first_player="B"),
    "H(2,4) trivial, 5 colours, Alice first": GameConfig(Isotopism.trivial((2, 4), 4), 5),
    "H(3,4) trivial, 5 colours, Bob first": GameConfig(Isotopism.trivial((3, 4), 4), 5, first_player="B"),
    "H(4,4) trivial, 4 colours, Alice first": GameConfig(Isotopism.trivial((4, 4), 4), 4),
    "2x2 swapped symbols, 3 colours": GameConfig(
        Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "(1 2)"), 3, first_player="B"),
    "contracted 2^4 hypercube, 4 colours, Bob first": GraphGameConfig(
        build_contraction_graph(Isotopism.from_strings((2,) * 4, 2, *(["(1 2)"] * 4), "Id")), 4, 1, 2, "B"),
}


def time_case(cfg, backend: str, repeat: int) -> tuple[float, int, str]:
    best, nodes, outcome = float("inf"), 0, ""
    for _ in range(repeat):
        solver = Solver(cfg, backend=backend)
        start = time.perf_counter()
        outcome = solver.outcome(cfg.initial_state()).value
        best = min(best, time.perf_counter() - start)
        nodes = solver.nodes
    return best, nodes, outcome


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="runs per case; the fastest is reported")
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)

    rows = []
    for name, cfg in CASES.items():
        row = {"case": name}
        for backend in sorted(BACKENDS):
            secs, nodes, outcome = time_case(cfg, backend, args.repeat)
            row[backend] = {"seconds": round(secs, 5), "nodes": nodes, "outcome": outcome}
        outcomes = {row[b]["outcome"] for b in BACKENDS}
        if len(outcomes) != 1:
            raise SystemExit(f"backends disagree on {name}: {row}")
        if "compiled" in row:
            row["speedup"] = round(row["python"]["seconds"] / max(row["compiled"]["seconds"], 1e-9), 1)
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    width = max(len(r["case"]) for r in rows)
    print(f"{'case':<{width}}  {'python s':>9}  {'compiled s':>10}  {'speedup':>7}  nodes")
    for r in rows:
        comp = r.get("compiled", {}).get("seconds", float("nan"))
        print(f"{r['case']:<{width}}  {r['python']['seconds']:>9.4f}  {comp:>10.4f}  "
              f"{r.get('speedup', float('nan')):>7}  {r['python']['nodes']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line front end (``lgl``).

Isotopisms are given with ``--iso`` as a JSON file, inline JSON, or the compact
form ``"3,3;3;(1 2 3);(1 2 3);Id"`` (dims; symbol count; one permutation per
coordinate; the symbol permutation).  Exit status: 0 on success, 1 when the
input is well formed but fails the requested property, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .board import Board, is_member, is_theta_compatible, validate_latin
from .errors import BudgetExceeded
from .game import (
    GameConfig,
    Player,
    Variant,
    apply_move,
    legal_moves,
    parse_move,
    terminal_status,
    transcript_to_json,
)
from .graphs import GraphGameConfig, WeightedGraph, build_contraction_graph, build_reference_graph
from .perm import Perm, cycle_structure, parse_cycles
from .solver import (
    Solver,
    contracted_chromatic_number,
    game_chromatic_number,
    graph_chromatic_number,
    lexicographic_first,
    solve,
)
from .symmetry import Isotopism, is_extendable, is_feasible, natural_extension


class UsageError(Exception):
    """Malformed command-line input (exit status 2)."""


class DomainFailure(Exception):
    """Well-formed input that fails the requested property (exit status 1)."""


def _load_text(spec: str) -> str:
    path = Path(spec)
    if len(spec) < 4096 and path.is_file():
        return path.read_text()
    return spec


def load_isotopism(spec: str) -> Isotopism:
    text = _load_text(spec).strip()
    try:
        if text.startswith("{"):
            return Isotopism.from_json(text)
        parts = [p.strip() for p in text.split(";")]
        if len(parts) < 3:
            raise ValueError("compact form needs dims;n;perm;...;symbol-perm")
        dims = tuple(int(x) for x in parts[0].replace("x", ",").split(","))
        n = int(parts[1])
        if len(parts) != len(dims) + 3:
            raise ValueError(f"expected {len(dims) + 1} permutations after dims and n")
        return Isotopism.from_strings(dims, n, *parts[2:])
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"--iso: {exc}") from None


def load_board(spec: str) -> Board:
    try:
        return Board.from_json(_load_text(spec))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"--board: {exc}") from None


def load_graph(spec: str) -> WeightedGraph:
    try:
        return build_reference_graph(_load_text(spec).strip())
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"--graph: {exc}") from None


def emit(args, data: dict, human: list[str] | None = None) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
        return
    if human is None:
        width = max((len(k) for k in data), default=0)
        human = [f"{k.ljust(width)} : {_human(v)}" for k, v in data.items()]
    print("\n".join(human))


def _human(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return str(v)


def _budget(args) -> int | None:
    return getattr(args, "budget", None)


# -- subcommands --------------------------------------------------------------------


def cmd_perm_cycles(args) -> int:
    text = args.perm.strip()
    try:
        if "(" in text or text.lower() in ("id", "e"):
            if args.size is None:
                raise UsageError("--size is required for cycle notation")
            p = parse_cycles(text, args.size)
        else:
            p = Perm(tuple(int(x) for x in text.replace(",", " ").split()))
    except ValueError as exc:
        raise UsageError(f"perm: {exc}") from None
    emit(args, {
        "one_line": list(p.mapping),
        "cycles": p.cycle_string(show_fixed=True),
        "cycle_structure": str(cycle_structure(p)),
        "order": p.order,
    })
    return 0


def cmd_iso_check(args) -> int:
    t = load_isotopism(args.iso)
    feasible, extendable = is_feasible(t), is_extendable(t)
    data = {
        "isotopism": str(t),
        "cycle_structure": str(t.cycle_structure()),
        "principal": t.is_principal(),
        "feasible": feasible,
        "extendable": extendable,
        "orbits": len(t.orbits),
    }
    if args.feasible:
        data = {"isotopism": str(t), "feasible": feasible}
    elif args.extendable:
        data = {"isotopism": str(t), "extendable": extendable}
    emit(args, data)
    if (args.feasible and not feasible) or (args.extendable and not extendable):
        return 1
    return 0


def cmd_iso_extend(args) -> int:
    t = load_isotopism(args.iso)
    if args.size < t.shape.n:
        raise UsageError(f"--size {args.size} is below the symbol count {t.shape.n}")
    if not is_extendable(t):
        emit(args, {"isotopism": str(t), "extendable": False})
        return 1
    ext = natural_extension(t, args.size)
    if args.json:
        print(json.dumps(ext.to_json(), sort_keys=True))
    else:
        print(f"{ext}  (symbols 1..{ext.sym_perm.size}, {ext.sym_perm.size - t.shape.n} added as fixed points)")
    return 0


def cmd_orbits(args) -> int:
    t = load_isotopism(args.iso)
    part = t.orbits
    rows = [
        {"orbit": i + 1, "size": len(orb), "cells": [list(c) for c in orb]}
        for i, orb in enumerate(part.orbits)
    ]
    if args.json:
        print(json.dumps({"isotopism": str(t), "count": len(rows), "orbits": rows}, sort_keys=True))
    else:
        lines = [f"{len(rows)} orbits of {t}"]
        for r in rows:
            cells = " ".join("(" + ",".join(map(str, c)) + ")" for c in r["cells"])
            lines.append(f"  o{r['orbit']:<3} size {r['size']:<3} {cells}")
        print("\n".join(lines))
    return 0


def cmd_board_validate(args) -> int:
    b = load_board(args.board)
    ok = validate_latin(b)
    emit(args, {"latin": ok, "filled": len(b.entries()), "cells": b.shape.size})
    return 0 if ok else 1


def cmd_board_member(args) -> int:
    b, t = load_board(args.board), load_isotopism(args.iso)
    ok = is_member(b, t)
    emit(args, {"member": ok, "isotopism": str(t)})
    return 0 if ok else 1


def cmd_board_compat(args) -> int:
    b, t = load_board(args.board), load_isotopism(args.iso)
    ok = is_theta_compatible(b, t)
    emit(args, {"compatible": ok, "isotopism": str(t)})
    return 0 if ok else 1


def _game_config(args, t: Isotopism) -> GameConfig:
    if not is_extendable(t):
        raise DomainFailure(f"isotopism {t} is not extendable")
    if args.colors < t.shape.n:
        raise UsageError(f"--colors {args.colors} is below the symbol count {t.shape.n}")
    return GameConfig(t, args.colors, args.a, args.b, Player.parse(args.first), Variant(args.variant))


def cmd_solve(args) -> int:
    cfg = _game_config(args, load_isotopism(args.iso))
    res = solve(cfg, _budget(args), args.threads, normalize=args.normalize)
    emit(args, res.to_json())
    return 0


def cmd_contract(args) -> int:
    t = load_isotopism(args.iso)
    if not t.is_principal() or not is_feasible(t):
        raise DomainFailure(f"contraction needs a feasible principal isotopism; got {t}")
    g = build_contraction_graph(t)
    if args.dot:
        print(g.to_dot())
    elif args.json:
        print(json.dumps(g.to_json(), sort_keys=True))
    else:
        lines = [f"{g.n} vertices, {len(g.edges)} edges, weights {list(g.weights)}"]
        lines += [f"  {u + 1} -- {v + 1}" for u, v in sorted(g.edges)]
        print("\n".join(lines))
    return 0


def cmd_solve_graph(args) -> int:
    g = load_graph(args.graph)
    if args.chromatic:
        prof = graph_chromatic_number(g, args.a, args.b, args.first, args.min, args.max, _budget(args), args.threads)
        emit(args, prof.to_json())
        return 0
    if args.colors is None:
        raise UsageError("--colors is required unless --chromatic is given")
    cfg = GraphGameConfig(g, args.colors, args.a, args.b, Player.parse(args.first))
    emit(args, solve(cfg, _budget(args), args.threads).to_json())
    return 0


def cmd_chromatic(args) -> int:
    t = load_isotopism(args.iso)
    if not is_extendable(t):
        raise DomainFailure(f"isotopism {t} is not extendable")
    if args.contracted:
        prof = contracted_chromatic_number(t, args.a, args.b, args.first, args.max, _budget(args), args.threads)
    else:
        prof = game_chromatic_number(
            t, args.a, args.b, args.first, args.max, Variant(args.variant), _budget(args), args.threads
        )
    data = prof.to_json()
    if args.json:
        emit(args, data)
    else:
        lines = [f"least_winning : {data['least_winning']}", f"partial       : {_human(data['partial'])}"]
        lines += [f"  n'={k:<3} {v}" for k, v in data["profile"].items()]
        lines.append(f"nodes         : {data['nodes']}")
        print("\n".join(lines))
    return 0


def cmd_play(args) -> int:
    cfg = _game_config(args, load_isotopism(args.iso))
    human = Player.parse(args.human)
    engine = Solver(cfg, _budget(args)) if args.engine == "optimal" else None
    fallback = lexicographic_first()
    s = cfg.initial_state()
    moves = []
    stream = sys.stdin
    while (done := terminal_status(s)) is None:
        print(s.board.pretty())
        if s.to_move is human:
            print(f"{human.value} to move ({s.remaining} left this turn)> ", end="", flush=True)
            line = stream.readline()
            if not line:
                return 0
            line = line.strip()
            if line in ("quit", "q"):
                return 0
            if line == "moves":
                print(" ".join(str(m) for m in legal_moves(s)))
                continue
            try:
                m = parse_move(line)
                s2 = apply_move(s, m)
            except ValueError as exc:
                print(f"rejected: {exc}")
                continue
        else:
            m = engine.best_move(s) if engine else fallback(s)
            print(f"{s.to_move.value} plays {m}")
            s2 = apply_move(s, m)
        moves.append(m)
        s = s2
    print(s.board.pretty())
    print(done.value)
    if args.transcript:
        Path(args.transcript).write_text(transcript_to_json(cfg, moves))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    try:
        results = run_suite(args.scale, args.only or None, echo=None if args.json else print)
    except ValueError as exc:
        raise UsageError(f"--only: {exc}") from None
    if args.json:
        print(json.dumps([r.to_json() for r in results], sort_keys=True))
    return 0 if all(r.passed for r in results) else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("--a", type=int, default=1, help="cells Alice colours per turn")
    game.add_argument("--b", type=int, default=1, help="cells Bob colours per turn")
    game.add_argument("--first", choices=["A", "B"], default="A", help="who moves first")
    game.add_argument("--threads", type=int, default=1, help="worker processes at the root")
    game.add_argument("--budget", type=int, default=None,
                      help="node budget (default: LGL_NODE_BUDGET or 1e8)")

    parser = argparse.ArgumentParser(prog="lgl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    perm = sub.add_parser("perm", help="permutation utilities").add_subparsers(dest="action", required=True)
    p = perm.add_parser("cycles", parents=[common], help="cycle decomposition of a permutation")
    p.add_argument("perm", help='cycle notation such as "(1 2)(3 4)", or one-line form "2 1 4 3"')
    p.add_argument("--size", type=int, help="number of points (needed for cycle notation)")
    p.set_defaults(func=cmd_perm_cycles)

    iso = sub.add_parser("iso", help="isotopism queries").add_subparsers(dest="action", required=True)
    p = iso.add_parser("check", parents=[common], help="feasibility and extendability")
    p.add_argument("--iso", required=True)
    which = p.add_mutually_exclusive_group()
    which.add_argument("--feasible", action="store_true")
    which.add_argument("--extendable", action="store_true")
    p.set_defaults(func=cmd_iso_check)
    p = iso.add_parser("extend", parents=[common], help="natural extension to a larger palette")
    p.add_argument("--iso", required=True)
    p.add_argument("--size", type=int, required=True)
    p.set_defaults(func=cmd_iso_extend)

    p = sub.add_parser("orbits", parents=[common], help="cell orbits of an isotopism")
    p.add_argument("--iso", required=True)
    p.set_defaults(func=cmd_orbits)

    board = sub.add_parser("board", help="board checks").add_subparsers(dest="action", required=True)
    p = board.add_parser("validate", parents=[common], help="Latin condition")
    p.add_argument("--board", required=True)
    p.set_defaults(func=cmd_board_validate)
    for name, func, text in (("member", cmd_board_member, "board fixed by the isotopism"),
                             ("compat", cmd_board_compat, "board compatible with the isotopism")):
        p = board.add_parser(name, parents=[common], help=text)
        p.add_argument("--board", required=True)
        p.add_argument("--iso", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("solve", parents=[common, game], help="solve the board game")
    p.add_argument("--iso", required=True)
    p.add_argument("--colors", type=int, required=True, help="palette size n'")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="standard")
    p.add_argument("--normalize", action="store_true", help="cap a and b at the orbit count first")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("contract", parents=[common], help="orbit contraction graph")
    p.add_argument("--iso", required=True)
    p.add_argument("--dot", action="store_true", help="Graphviz output")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("solve-graph", parents=[common, game], help="solve the modified graph game")
    p.add_argument("--graph", required=True, help="JSON file, inline JSON or an expression such as K(4,4)")
    p.add_argument("--colors", type=int)
    p.add_argument("--chromatic", action="store_true", help="scan palette sizes instead")
    p.add_argument("--min", type=int, default=1)
    p.add_argument("--max", type=int, default=None)
    p.set_defaults(func=cmd_solve_graph)

    p = sub.add_parser("chromatic", parents=[common, game], help="least winning palette size")
    p.add_argument("--iso", required=True)
    p.add_argument("--max", type=int, default=None, help="largest palette to try")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="standard")
    p.add_argument("--contracted", action="store_true", help="play on the contraction graph")
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("play", parents=[common, game], help="interactive game on stdin")
    p.add_argument("--iso", required=True)
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="standard")
    p.add_argument("--human", choices=["A", "B"], default="A")
    p.add_argument("--engine", choices=["optimal", "lexicographic"], default="optimal")
    p.add_argument("--transcript", help="write the move list as JSON here")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify", parents=[common], help="run the reproduction checks")
    p.add_argument("--scale", choices=["quick", "full"], default="quick")
    p.add_argument("--only", nargs="*", help="check keys to run")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lgl: error: {exc}", file=sys.stderr)
        return 2
    except (DomainFailure, BudgetExceeded) as exc:
        print(f"lgl: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"lgl: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

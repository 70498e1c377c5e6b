"""Exact solving, chromatic profiles and scripted strategies.

The search itself runs in a kernel (see :mod:`latingame.kernel`).  This module
wraps it with the rule engines so that principal variations, strategies and
verification walks use the engines' move order and legality checks.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable

from .errors import BudgetExceeded
from .game import GameConfig, GameState, Move, Outcome, Player, Variant, apply_move, legal_colours
from .graphs import GraphGameConfig, GraphMove, build_contraction_graph
from .kernel import graph_kernel, hamming_kernel
from .symmetry import Isotopism

DEFAULT_BUDGET = 10**8


def node_budget(budget: int | None = None) -> int:
    """Explicit budget, else ``LGL_NODE_BUDGET``, else the default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("LGL_NODE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _player_code(p: Player) -> int:
    return 0 if p is Player.ALICE else 1


class Solver:
    """Outcome oracle for one game configuration, sharing one transposition table."""

    def __init__(self, config, budget: int | None = None, backend: str | None = None,
                 extension_symmetry: bool = False) -> None:
        self.config = config
        self.budget = node_budget(budget)
        self.is_graph = isinstance(config, GraphGameConfig)
        if self.is_graph:
            self.kernel = graph_kernel(config, self.budget, backend)
        else:
            self.kernel = hamming_kernel(config, self.budget, backend, extension_symmetry)

    @property
    def nodes(self) -> int:
        return int(self.kernel.nodes)

    def alice_wins(self, state) -> bool:
        done = self.config.outcome(state)
        if done is not None:
            return done is Outcome.ALICE_WINS
        code = _player_code(state.to_move)
        if self.is_graph:
            return self.kernel.wins(list(state.colouring), state.pass_pool, code, state.remaining)
        return self.kernel.wins(list(state.board.cells), code, state.remaining)

    def outcome(self, state) -> Outcome:
        return Outcome.ALICE_WINS if self.alice_wins(state) else Outcome.BOB_WINS

    def best_move(self, state):
        """First move in engine order that keeps the mover winning, else the first move."""
        moves = self.config.legal_moves(state)
        if not moves:
            return None
        for m in moves:
            if self.outcome(self.config.apply(state, m)).winner is state.to_move:
                return m
        return moves[0]

    def principal_variation(self, state) -> list:
        line = []
        while True:
            m = self.best_move(state)
            if m is None:
                return line
            line.append(m)
            state = self.config.apply(state, m)


@dataclass
class SolveResult:
    outcome: Outcome
    principal_variation: list
    nodes_searched: int
    wall_time: float = 0.0
    config: Any = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "principal_variation": [str(m) for m in self.principal_variation],
            "nodes": self.nodes_searched,
            "wall_time": round(self.wall_time, 6),
        }


def effective_quota(theta: Isotopism, a: int, b: int) -> tuple[int, int]:
    """Cap both quotas at the number of cell orbits."""
    k = len(theta.orbits)
    return min(a, k), min(b, k)


def _normalized(config):
    if isinstance(config, GameConfig):
        a, b = effective_quota(config.theta, config.a, config.b)
        return replace(config, a=a, b=b)
    return config


def _child_outcome(config, state, budget, backend, extension_symmetry) -> tuple[bool, int]:
    solver = Solver(config, budget, backend, extension_symmetry)
    return solver.alice_wins(state), solver.nodes


def solve(config, budget: int | None = None, threads: int = 1, backend: str | None = None,
          extension_symmetry: bool = False, normalize: bool = False, state=None) -> SolveResult:
    """Exact outcome of ``config`` from its initial position (or ``state``).

    With ``threads > 1`` the root's children are solved in worker processes,
    each with its own table; the principal variation is then resolved in the
    same move order as the serial search, so both modes report the same line.
    ``normalize`` caps the quotas (see :func:`effective_quota`) first.
    """
    start = time.perf_counter()
    if normalize:
        config = _normalized(config)
    state = state if state is not None else config.initial_state()
    solver = Solver(config, budget, backend, extension_symmetry)
    moves = config.legal_moves(state)
    if threads > 1 and len(moves) > 1:
        children = [config.apply(state, m) for m in moves]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_child_outcome, config, c, solver.budget, backend, extension_symmetry)
                for c in children
            ]
            results = [f.result() for f in futures]
        nodes = sum(n for _, n in results)
        mover = state.to_move
        wins = [Outcome.ALICE_WINS if w else Outcome.BOB_WINS for w, _ in results]
        pick = next((i for i, o in enumerate(wins) if o.winner is mover), 0)
        outcome = wins[pick]
        pv = [moves[pick]] + solver.principal_variation(children[pick])
        nodes += solver.nodes
    else:
        outcome = solver.outcome(state)
        pv = solver.principal_variation(state)
        nodes = solver.nodes
    return SolveResult(outcome, pv, nodes, time.perf_counter() - start, config)


# -- chromatic profiles -------------------------------------------------------------


@dataclass
class ChromaticProfile:
    """Outcome per palette size; ``None`` marks a size whose search ran out of budget."""

    outcomes: dict[int, Outcome | None]
    nodes: int = 0
    wall_time: float = 0.0

    @property
    def partial(self) -> bool:
        return any(o is None for o in self.outcomes.values())

    @property
    def least_winning(self) -> int | None:
        """Smallest winning size, reported only if every smaller size was decided."""
        for k in sorted(self.outcomes):
            o = self.outcomes[k]
            if o is None:
                return None
            if o is Outcome.ALICE_WINS:
                return k
        return None

    def to_json(self) -> dict:
        return {
            "least_winning": self.least_winning,
            "partial": self.partial,
            "profile": {str(k): (o.value if o else "budget-exceeded") for k, o in sorted(self.outcomes.items())},
            "nodes": self.nodes,
            "wall_time": round(self.wall_time, 6),
        }


def _scan(make_config, sizes, budget, threads, backend, extension_symmetry=False) -> ChromaticProfile:
    start = time.perf_counter()
    outcomes: dict[int, Outcome | None] = {}
    nodes = 0
    for k in sizes:
        try:
            res = solve(make_config(k), budget, threads, backend, extension_symmetry)
        except BudgetExceeded as exc:
            outcomes[k] = None
            nodes += exc.budget
            continue
        outcomes[k] = res.outcome
        nodes += res.nodes_searched
    return ChromaticProfile(outcomes, nodes, time.perf_counter() - start)


def game_chromatic_number(theta: Isotopism, a: int = 1, b: int = 1,
                          first_player: Player | str = Player.ALICE, n_max: int | None = None,
                          variant: Variant | str = Variant.STANDARD, budget: int | None = None,
                          threads: int = 1, backend: str | None = None,
                          normalize: bool = True, extension_symmetry: bool = False) -> ChromaticProfile:
    """Linear scan of palette sizes from ``n`` to ``n_max`` (default ``|orbits| + n - 1``)."""
    n = theta.shape.n
    if n_max is None:
        n_max = len(theta.orbits) + n - 1
    if normalize:
        a, b = effective_quota(theta, a, b)
    base = GameConfig(theta, n, a, b, Player.parse(first_player), Variant(variant))
    return _scan(base.with_palette, range(n, n_max + 1), budget, threads, backend, extension_symmetry)


def graph_chromatic_number(graph, a: int = 1, b: int = 1, first_player: Player | str = Player.ALICE,
                           n_min: int = 1, n_max: int | None = None, budget: int | None = None,
                           threads: int = 1, backend: str | None = None) -> ChromaticProfile:
    """Profile of the modified game on ``graph`` (default ceiling: max degree + 1)."""
    if n_max is None:
        n_max = graph.max_degree + 1
    base = GraphGameConfig(graph, n_min, a, b, Player.parse(first_player))
    return _scan(base.with_colours, range(n_min, n_max + 1), budget, threads, backend)


def contracted_chromatic_number(theta: Isotopism, a: int = 1, b: int = 1,
                                first_player: Player | str = Player.ALICE, n_max: int | None = None,
                                budget: int | None = None, threads: int = 1,
                                backend: str | None = None) -> ChromaticProfile:
    """Same scan as :func:`game_chromatic_number`, played on the orbit contraction graph."""
    n = theta.shape.n
    if n_max is None:
        n_max = len(theta.orbits) + n - 1
    g = build_contraction_graph(theta)
    return graph_chromatic_number(g, a, b, first_player, n, n_max, budget, threads, backend)


def contracted_config(config: GameConfig) -> GraphGameConfig:
    """The modified game on the contraction graph matching a Hamming game."""
    if config.variant is not Variant.STANDARD:
        raise ValueError("contraction applies to the standard game only")
    g = build_contraction_graph(config.theta)
    return GraphGameConfig(g, config.palette, config.a, config.b, config.first_player)


# -- strategies ---------------------------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    """A deterministic move chooser.  Falls back to the first legal move when its
    prescription is unavailable, so it always returns a legal move if one exists."""

    name: str
    choose: Callable[[Any, list], Any] = field(compare=False, repr=False)
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, state):
        moves = state.config.legal_moves(state)
        if not moves:
            return None
        m = self.choose(state, moves)
        return m if m in moves else moves[0]


def lexicographic_first() -> Strategy:
    return Strategy("lexicographic_first", lambda s, moves: moves[0])


def optimal_strategy(config, budget: int | None = None, backend: str | None = None) -> Strategy:
    solver = Solver(config, budget, backend)
    return Strategy("optimal", lambda s, moves: solver.best_move(s), {"solver": solver})


def _pairing_k2(params: dict) -> Strategy:
    def choose(s, moves):
        cfg = s.config
        if not isinstance(cfg, GraphGameConfig):
            raise ValueError("pairing_K2 plays the graph colouring game")
        n = cfg.graph.n
        half = params.get("half", n // 2)
        if 2 * half != n:
            raise ValueError("pairing_K2 needs a K_2 product with two equal layers")
        delta = cfg.colours
        col = s.colouring
        for v in range(half):
            lo, hi = col[v], col[v + half]
            if bool(lo) == bool(hi):
                continue
            # the coloured copy sits on side +1 (first layer) or -1 (second layer)
            if lo:
                return GraphMove(v + half, lo % delta + 1)
            return GraphMove(v, (hi - 2) % delta + 1)
        return moves[0]

    return Strategy("pairing_K2", choose, dict(params))


def _simulation(params: dict) -> Strategy:
    """Alice lifts a base (a,b) strategy to a longer turn.

    Inside her turn, position ``k`` falls into segment ``k mod (a+b)``: the first
    ``a`` positions follow the base strategy, the rest stand in for Bob's moves
    and play the first legal move.
    """
    a, b = int(params["a"]), int(params["b"])
    base = params.get("base", "optimal")
    cache: dict = {}

    def base_strategy(cfg) -> Strategy:
        if not isinstance(base, str):
            return base
        key = id(cfg)
        if key not in cache:
            cache[key] = (cfg, optimal_strategy(replace(cfg, a=a, b=b), params.get("budget")))
        return cache[key][1]

    def choose(s, moves):
        cfg = s.config
        seg = s.moves_in_turn % (a + b)
        if s.to_move is not Player.ALICE or seg >= a:
            return moves[0]
        strat = base_strategy(cfg)
        base_cfg = replace(cfg, a=a, b=b)
        left = s.total_residual if isinstance(cfg, GraphGameConfig) else s.board.empty_count()
        virtual = replace(s, config=base_cfg, remaining=min(a - seg, left), moves_in_turn=seg)
        return strat(virtual)

    return Strategy("simulation", choose, dict(params))


def _forced_symbol(t: Isotopism, board, y) -> int | None:
    """The symbol the orbit rule demands at empty cell ``y``, if a mate is coloured."""
    x, k = y, 0
    for k in range(1, t.cell_period(y)):
        x = t.step(x)
        if board[x]:
            return t.sym_perm.power(-k)(board[x])
    return None


def _first_try_destroyer(params: dict) -> Strategy:
    """Bob kills a cell whose symbol is already forced by its orbit.

    For an empty cell ``y`` with forced symbol ``f``, Bob writes ``f`` into a
    cell on one of ``y``'s lines; ``y`` then has no legal symbol.
    """

    def choose(s, moves):
        cfg = s.config
        if not isinstance(cfg, GameConfig):
            raise ValueError("first_try_destroyer plays the Hamming board game")
        t = cfg.theta_ext
        board = s.board
        for y in board.shape.cells():
            if board[y]:
                continue
            f = _forced_symbol(t, board, y)
            if f is None:
                continue
            line = set(board.shape.neighbours(y))
            for m in moves:
                if m.symbol == f and m.cell in line:
                    child = apply_move(s, m)
                    if not legal_colours(child, y):
                        return m
        return moves[0]

    return Strategy("first_try_destroyer", choose, dict(params))


_SCRIPTED = {
    "pairing_K2": _pairing_k2,
    "simulation": _simulation,
    "first_try_destroyer": _first_try_destroyer,
}


def scripted_strategy(name: str, params: dict | None = None) -> Strategy:
    try:
        make = _SCRIPTED[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {sorted(_SCRIPTED)}") from None
    return make(params or {})


def destroyer_move(state: GameState) -> Move | None:
    """The move the destroyer prescribes, or ``None`` when no kill is available."""
    strat = _first_try_destroyer({})
    moves = state.config.legal_moves(state)
    if not moves:
        return None
    m = strat.choose(state, moves)
    return m if _kills(state, m) else None


def _kills(state: GameState, m: Move) -> bool:
    child = apply_move(state, m)
    return state.config.outcome(child) is Outcome.BOB_WINS


def verify_strategy(config, strategy: Strategy, role: Player | str, state=None,
                    budget: int | None = None) -> bool:
    """True iff ``strategy`` playing ``role`` wins against every adversary line."""
    role = Player.parse(role)
    limit = node_budget(budget)
    memo: dict = {}
    count = 0
    state = state if state is not None else config.initial_state()

    def walk(s) -> bool:
        nonlocal count
        key = s.key()
        if key in memo:
            return memo[key]
        count += 1
        if count > limit:
            raise BudgetExceeded(limit)
        done = config.outcome(s)
        if done is not None:
            ok = done.winner is role
        elif s.to_move is role:
            m = strategy(s)
            ok = m is not None and walk(config.apply(s, m))
        else:
            ok = all(walk(config.apply(s, m)) for m in config.legal_moves(s))
        memo[key] = ok
        return ok

    return walk(state)

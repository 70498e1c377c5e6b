"""Reproduction suite: each check recomputes a published value and compares.

Every check returns a :class:`CheckResult` carrying the expected and computed
values.  ``quick`` scale skips the checks that take more than about a minute.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .board import Shape, plh_census
from .game import (
    GameConfig,
    GameState,
    Move,
    Outcome,
    Variant,
    apply_move,
    forced_completion,
    legal_colours,
    legal_moves,
    terminal_status,
)
from .graphs import (
    build_contraction_graph,
    cartesian,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    hamming,
    hypercube_plus_diag,
    is_isomorphic,
    path_graph,
    replicate,
    standard_graph_game,
    strong,
)
from .kernel import hamming_kernel
from .perm import Perm
from .symmetry import Isotopism, is_extendable, is_feasible
from .solver import (
    contracted_chromatic_number,
    contracted_config,
    game_chromatic_number,
    scripted_strategy,
    solve,
    verify_strategy,
)


@dataclass
class CheckResult:
    key: str
    title: str
    expected: Any
    computed: Any
    passed: bool
    seconds: float = 0.0
    skipped: bool = False

    def line(self) -> str:
        tag = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        if self.skipped:
            return f"[{tag}] {self.key}: {self.title} (skipped at this scale)"
        return (
            f"[{tag}] {self.key}: {self.title}; expected {self.expected}, "
            f"computed {self.computed} ({self.seconds:.1f}s)"
        )

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "expected": _plain(self.expected),
            "computed": _plain(self.computed),
            "passed": self.passed,
            "skipped": self.skipped,
            "seconds": round(self.seconds, 3),
        }


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Outcome):
        return x.value
    return x


# -- helpers ------------------------------------------------------------------------


def cyclic(l: int) -> str:
    return "(" + " ".join(str(i) for i in range(1, l + 1)) + ")"


def uniform_perms(size: int, l: int) -> list[Perm]:
    """Every permutation of ``size`` points whose cycles all have length ``l``."""
    out = []
    for img in itertools.permutations(range(1, size + 1)):
        p = Perm(img)
        if all(x == l for x in p.cycle_lengths):
            out.append(p)
    return out


def uniform_principal_isotopisms(dims: tuple[int, ...], n: int) -> list[Isotopism]:
    """Feasible principal isotopisms whose row permutations all share one cycle length."""
    out = []
    for l in range(1, min(dims) + 1):
        if any(k % l for k in dims):
            continue
        for rows in itertools.product(*(uniform_perms(k, l) for k in dims)):
            t = Isotopism(Shape(dims, n), rows, Perm.identity(n))
            if is_feasible(t):
                out.append(t)
    return out


def all_two_cycle_hypercube(d: int) -> Isotopism:
    return Isotopism.from_strings((2,) * d, 2, *(["(1 2)"] * d + ["Id"]))


def cyclic_diagonal(l: int) -> Isotopism:
    return Isotopism.from_strings((l, l), l, cyclic(l), cyclic(l), "Id")


def _least(theta, a=1, b=1, first="A") -> int | None:
    return game_chromatic_number(theta, a, b, first).least_winning


# -- the checks ---------------------------------------------------------------------


def check_h33_bob_first(scale: str):
    prof = game_chromatic_number(Isotopism.trivial((3, 3), 3), 1, 1, "B")
    computed = (prof.least_winning, prof.outcomes[3].value, prof.outcomes[4].value)
    return (4, "BobWins", "AliceWins"), computed


def check_h33_alice_first(scale: str):
    return 3, _least(Isotopism.trivial((3, 3), 3), 1, 1, "A")


def check_thin_hamming(scale: str):
    expected, computed = {}, {}
    for n in (2, 3, 4):
        for rows in (1, 2):
            t = Isotopism.trivial((rows, n), n)
            for first in "AB":
                key = f"H({rows},{n}) {first}"
                expected[key] = n + 1 if (rows == 2 and first == "A") else n
                computed[key] = _least(t, 1, 1, first)
    return expected, computed


def check_small_bounds_tight(scale: str):
    t1 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "Id")
    t2 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "(1 2)")
    expected = {"identity symbols A": 2, "identity symbols B": 2, "swapped symbols A": 3, "swapped symbols B": 3}
    computed = {
        "identity symbols A": _least(t1, first="A"),
        "identity symbols B": _least(t1, first="B"),
        "swapped symbols A": _least(t2, first="A"),
        "swapped symbols B": _least(t2, first="B"),
    }
    return expected, computed


def check_cyclic_diagonal(scale: str):
    expected, computed = {}, {}
    for l in (2, 3, 4):
        t = cyclic_diagonal(l)
        for first in "AB":
            key = f"l={l} {first}"
            expected[key] = l
            if l < 4:
                computed[key] = _least(t, 1, 1, first)
            else:
                computed[key] = contracted_chromatic_number(t, 1, 1, first).least_winning
    return expected, computed


def check_hypercube(scale: str):
    expected, computed = {}, {}
    for d, value in ((2, 2), (3, 4)):
        t = all_two_cycle_hypercube(d)
        for a, b, first in itertools.product((1, 2), (1, 2), "AB"):
            key = f"H{d} ({a},{b}) {first}"
            expected[key] = value
            computed[key] = _least(t, a, b, first)
    t4 = all_two_cycle_hypercube(4)
    cases = [("A", 2, 1, 2)]
    cases += [("A", 1, b, min(b + 2, 5)) for b in (1, 2, 3)]
    cases += [("B", 1, b, min(b + 1, 5)) for b in (1, 2, 3, 4)]
    for first, a, b, value in cases:
        key = f"H4 ({a},{b}) {first}"
        expected[key] = value
        computed[key] = contracted_chromatic_number(t4, a, b, first).least_winning
    return expected, computed


CONTRACTION_DIMS = ((2, 2), (2, 4), (3, 3), (4, 4), (2, 2, 2))


def contraction_sweep(dims_list=CONTRACTION_DIMS, max_palette: int = 5, quotas=(1, 2)):
    """Compare the board game with the modified game on its contraction graph."""
    total, mismatches = 0, []
    for dims in dims_list:
        n = max(dims)
        for t in uniform_principal_isotopisms(dims, n):
            for palette in range(n, max_palette + 1):
                for a, b, first in itertools.product(quotas, quotas, "AB"):
                    cfg = GameConfig(t, palette, a, b, first)
                    left = solve(cfg).outcome
                    right = solve(contracted_config(cfg)).outcome
                    total += 1
                    if left is not right:
                        mismatches.append((str(t), palette, a, b, first, left.value, right.value))
    return total, mismatches


def check_contraction_equivalence(scale: str):
    total, mismatches = contraction_sweep()
    computed = f"{len(mismatches)} mismatches in {total} games"
    if mismatches:
        computed += f"; first {mismatches[0]}"
    return "0 mismatches", computed, not mismatches and total > 0


def first_try_example(palette: int) -> dict:
    """Every opening in the first-try game loses to the destroyer's reply,
    and the destroyer's reply is illegal in the standard game."""
    theta = Isotopism.from_strings((3, 6), 6, "(1 2 3)", "(1 2 3)(4 5 6)", "Id")
    loose = GameConfig(theta, palette, variant=Variant.FIRST_TRY)
    strict = GameConfig(theta, palette, variant=Variant.STANDARD)
    destroyer = scripted_strategy("first_try_destroyer")
    openings = killed = blocked = 0
    for m in legal_moves(loose.initial_state()):
        openings += 1
        after = apply_move(loose.initial_state(), m)
        reply = destroyer(after)
        if terminal_status(apply_move(after, reply)) is Outcome.BOB_WINS:
            killed += 1
        if reply not in legal_moves(apply_move(strict.initial_state(), m)):
            blocked += 1
    return {"openings": openings, "killed": killed, "blocked in standard": blocked}


def check_first_try(scale: str):
    expected, computed = {}, {}
    for palette in (6, 7, 8):
        res = first_try_example(palette)
        expected[palette] = f"{res['openings']} killed, {res['openings']} blocked"
        computed[palette] = f"{res['killed']} killed, {res['blocked in standard']} blocked"
    return expected, computed


def check_pairing(scale: str):
    strat = scripted_strategy("pairing_K2")
    expected, computed = {}, {}
    for name, g in (("K3", complete_graph(3)), ("C4", cycle_graph(4)), ("C5", cycle_graph(5)), ("P4", path_graph(4))):
        prod = cartesian(complete_graph(2), g)
        cfg = standard_graph_game(prod, prod.max_degree, 1, 1, "B")
        expected[name] = True
        computed[name] = verify_strategy(cfg, strat, "A")
    return expected, computed


def check_simulation(scale: str):
    t = Isotopism.trivial((3, 3), 3)
    expected, computed, passed = {}, {}, True
    for first in "AB":
        lifted = _least(t, 3, 1, first)
        base = _least(t, 1, 1, first)
        expected[f"{first} first"] = "(3,1) value <= (1,1) value"
        computed[f"{first} first"] = f"{lifted} <= {base}"
        passed &= lifted is not None and base is not None and lifted <= base
    sim = scripted_strategy("simulation", {"a": 1, "b": 1})
    wins = verify_strategy(GameConfig(t, 4, 3, 1, "B"), sim, "A")
    expected["lifted strategy, 4 colours, B first"] = True
    computed["lifted strategy, 4 colours, B first"] = wins
    return expected, computed, passed and wins


def structure_cases() -> list[tuple[str, Any, Any]]:
    """(label, left graph, right graph) pairs that must be isomorphic."""
    cases = [
        ("H1+diag ~ K2", hypercube_plus_diag(1), complete_graph(2)),
        ("H2+diag ~ K4", hypercube_plus_diag(2), complete_graph(4)),
        ("H3+diag ~ K4,4", hypercube_plus_diag(3), complete_bipartite(4, 4)),
    ]
    for l in (2, 3):
        for k1, k2 in ((1, 1), (1, 2), (2, 2)):
            n1, n2 = k1 * l, k2 * l
            p1 = "".join(cyclic_block(l, j) for j in range(k1))
            p2 = "".join(cyclic_block(l, j) for j in range(k2))
            t = Isotopism.from_strings((n1, n2), max(n1, n2), p1, p2, "Id")
            target = replicate(strong(hamming(k1, k2), complete_graph(l)), l)
            cases.append((f"contraction of ({l}^{k1},{l}^{k2},1) ~ strong(H({k1},{k2}),K{l})^*{l}", build_contraction_graph(t), target))
    for d in (2, 3, 4):
        t = all_two_cycle_hypercube(d)
        cases.append((f"contraction of 2-cycle H{d} ~ H{d - 1}+diag^*2", build_contraction_graph(t), replicate(hypercube_plus_diag(d - 1), 2)))
    return cases


def cyclic_block(l: int, j: int) -> str:
    return "(" + " ".join(str(j * l + i) for i in range(1, l + 1)) + ")"


def check_structure(scale: str):
    expected, computed = {}, {}
    for label, g1, g2 in structure_cases():
        expected[label] = True
        computed[label] = is_isomorphic(g1, g2)
    return expected, computed


CENSUS_PAIRS = (
    (("(1 2 3)", "(1 2 3)", "Id"), ("(1 3)", "(2 3)", "(1 2)")),
    (("(1 2)", "(1 2)", "(1 2)"), ("(2 3)", "(1 3)", "(1 3)")),
    (("(1 2 3)", "(1 2 3)", "(1 2 3)"), ("(1 2)", "Id", "(2 3)")),
    (("(1 2)", "Id", "(1 2)"), ("(1 3)", "(1 2 3)", "(2 3)")),
)


def census_pairs() -> list[tuple[Isotopism, Isotopism]]:
    out = []
    for perms, conj in CENSUS_PAIRS:
        t = Isotopism.from_strings((3, 3), 3, *perms)
        q = Isotopism.from_strings((3, 3), 3, *conj)
        out.append((t, t.conjugate_by(q)))
    return out


def check_census(scale: str):
    expected, computed = {}, {}
    for t, u in census_pairs():
        left, right = plh_census(t), plh_census(u)
        expected[f"{t} vs {u}"] = "equal"
        computed[f"{t} vs {u}"] = f"{left} vs {right}"
    passed = all(v.split(" vs ")[0] == v.split(" vs ")[1] for v in computed.values())
    return expected, computed, passed


# -- random playouts ----------------------------------------------------------------


def random_extendable_isotopism(rng: random.Random, max_dims=(3, 6), max_palette: int = 8) -> Isotopism:
    """A random extendable two-dimensional isotopism within ``max_dims``."""
    while True:
        n1 = rng.randint(1, max_dims[0])
        n2 = rng.randint(max(2, n1), max_dims[1])
        n = rng.randint(n2, min(max_palette, n2 + 1))
        lengths = [l for l in range(1, n1 + 1) if n1 % l == 0 and n2 % l == 0]
        l = rng.choice(lengths)
        rows = tuple(_random_uniform_perm(rng, k, l) for k in (n1, n2))
        sym = _random_perm_dividing(rng, n, l)
        t = Isotopism(Shape((n1, n2), n), rows, sym)
        if is_extendable(t) and is_feasible(t):
            return t


def _random_uniform_perm(rng: random.Random, size: int, l: int) -> Perm:
    pts = list(range(1, size + 1))
    rng.shuffle(pts)
    return Perm.from_cycles([pts[i : i + l] for i in range(0, size, l)], size)


def _random_perm_dividing(rng: random.Random, size: int, l: int) -> Perm:
    """Random symbol permutation whose cycle lengths all divide ``l``."""
    pts = list(range(1, size + 1))
    rng.shuffle(pts)
    cycles, i = [], 0
    divisors = [x for x in range(1, l + 1) if l % x == 0]
    while i < size:
        k = rng.choice([x for x in divisors if i + x <= size])
        cycles.append(pts[i : i + k])
        i += k
    return Perm.from_cycles(cycles, size)


@dataclass
class PlayoutReport:
    playouts: int = 0
    states_checked: int = 0
    violations: list = field(default_factory=list)
    completions: int = 0


def open_orbit_playouts(count: int, seed: int = 0, engine_every: int = 0) -> PlayoutReport:
    """Random standard-game playouts checking colourability while an orbit is open.

    At every visited state with a symbol-free orbit: (i) each empty cell accepts
    some colour once one fresh fixed symbol is added to the palette, and (ii)
    each fixed extension symbol absent from the board fits some empty cell.
    When the last open orbit closes, forced completion must succeed.  The
    compiled tables decide legality; every ``engine_every``-th playout is
    replayed with the reference engine as well.
    """
    rng = random.Random(seed)
    rep = PlayoutReport()
    kernels: dict = {}
    for i in range(count):
        t = random_extendable_isotopism(rng)
        n = t.shape.n
        palette = rng.randint(n, 8)
        cfg = GameConfig(t, palette, rng.randint(1, 2), rng.randint(1, 2), rng.choice("AB"))
        wide = cfg.with_palette(palette + 1)
        key = (t, palette)
        if key not in kernels:
            kernels[key] = hamming_kernel(wide, 1)
        kern = kernels[key]
        s = cfg.initial_state()
        use_engine = engine_every and i % engine_every == 0
        rep.playouts += 1
        orbits = t.orbits
        while True:
            cells = list(s.board.cells)
            if orbits.symbol_free_count(s.board) == 0:
                if any(s.board.cells):
                    forced_completion(s)  # raises on an inconsistent board
                    rep.completions += 1
                break
            rep.states_checked += 1
            empty = [c for c in range(len(cells)) if not cells[c]]
            options = {c: kern.legal(cells, c) for c in empty}
            if use_engine:
                wstate = GameState(s.board, s.to_move, s.remaining, wide)
                for c in empty:
                    ref = sorted(legal_colours(wstate, t.shape.cell(c)))
                    if ref != options[c]:
                        rep.violations.append(("engine disagreement", str(t), cells, c))
            for c in empty:
                if not options[c]:
                    rep.violations.append(("dead cell", str(t), palette, cells, c))
            present = set(cells)
            for sym in range(n + 1, palette + 1):
                if sym not in present and not any(sym in options[c] for c in empty):
                    rep.violations.append(("unusable fresh symbol", str(t), palette, cells, sym))
            moves = [(c, v) for c in empty for v in options[c] if v <= palette]
            if any(all(v > palette for v in options[c]) for c in empty):
                break  # a dead cell within the real palette ends the game
            c, v = rng.choice(moves)
            s = apply_move(s, Move(t.shape.cell(c), v), check=bool(use_engine))
    return rep


def check_playouts(scale: str):
    count = 10_000 if scale == "full" else 500
    rep = open_orbit_playouts(count, seed=2024, engine_every=50)
    computed = f"{len(rep.violations)} violations over {rep.playouts} playouts ({rep.states_checked} states)"
    return f"0 violations over {count} playouts", computed, not rep.violations and rep.playouts == count


@dataclass
class Check:
    key: str
    title: str
    run: Callable[[str], tuple]
    quick: bool = True


CHECKS: list[Check] = [
    Check("h33-bob-first", "trivial isotopism on H(3,3), (1,1), Bob first: least winning palette", check_h33_bob_first),
    Check("h33-alice-first", "trivial isotopism on H(3,3), (1,1), Alice first: least winning palette", check_h33_alice_first),
    Check("thin-hamming", "game chromatic numbers of H(1,n) and H(2,n), n = 2..4", check_thin_hamming),
    Check("bounds-tight-2x2", "2x2 isotopisms meeting the lower and upper palette bounds", check_small_bounds_tight),
    Check("cyclic-diagonal", "cycle structure (l,l,1^l) has least winning palette l", check_cyclic_diagonal),
    Check("hypercube", "hypercube values for H2, H3 and contracted H4", check_hypercube),
    Check("contraction", "board game and contracted modified game agree", check_contraction_equivalence, quick=False),
    Check("first-try", "destroyer wins the first-try game, blocked in the standard game", check_first_try),
    Check("pairing", "pairing strategy on K2 x G wins with max-degree colours, Bob first", check_pairing),
    Check("simulation", "longer Alice turns never hurt her on H(3,3)", check_simulation),
    Check("structure", "isomorphism checks for contraction graphs and hypercubes with diagonals", check_structure),
    Check("census", "conjugate isotopisms fix equally many partial Latin squares", check_census),
    Check("open-orbit", "every cell stays colourable while an orbit is symbol-free", check_playouts),
]


def run_check(check: Check, scale: str = "full") -> CheckResult:
    if scale == "quick" and not check.quick:
        return CheckResult(check.key, check.title, None, None, True, 0.0, skipped=True)
    start = time.perf_counter()
    out = check.run(scale)
    if len(out) == 3:
        expected, computed, passed = out
    else:
        expected, computed = out
        passed = expected == computed
    return CheckResult(check.key, check.title, expected, computed, bool(passed), time.perf_counter() - start)


def run_suite(scale: str = "quick", only: list[str] | None = None, echo: Callable[[str], None] | None = print) -> list[CheckResult]:
    if scale not in ("quick", "full"):
        raise ValueError("scale must be quick or full")
    unknown = set(only or ()) - {c.key for c in CHECKS}
    if unknown:
        raise ValueError(f"unknown check keys {sorted(unknown)}; choose from {[c.key for c in CHECKS]}")
    results = []
    for check in CHECKS:
        if only and check.key not in only:
            continue
        res = run_check(check, scale)
        results.append(res)
        if echo:
            echo(res.line())
    return results

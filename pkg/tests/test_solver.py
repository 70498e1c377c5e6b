from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latingame.errors import BudgetExceeded
from latingame.game import GameConfig, Move, Outcome, Player, Variant, apply_move, play, terminal_status
from latingame.graphs import cartesian, complete_graph, cycle_graph, hamming, standard_graph_game
from latingame.kernel import BACKENDS
from latingame.solver import (
    ChromaticProfile,
    Solver,
    contracted_chromatic_number,
    contracted_config,
    destroyer_move,
    effective_quota,
    game_chromatic_number,
    graph_chromatic_number,
    lexicographic_first,
    optimal_strategy,
    scripted_strategy,
    solve,
    verify_strategy,
)
from latingame.symmetry import Isotopism, is_extendable

from strategies import games, perms

H33 = Isotopism.trivial((3, 3), 3)
THETA1 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "Id")
THETA2 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "(1 2)")


@pytest.mark.parametrize("palette,first,expected", [
    (4, "B", Outcome.ALICE_WINS),
    (3, "B", Outcome.BOB_WINS),
    (3, "A", Outcome.ALICE_WINS),
])
def test_solve_examples(palette, first, expected):
    assert solve(GameConfig(H33, palette, first_player=first)).outcome is expected


def replay(cfg, pv):
    s = cfg.initial_state()
    for m in pv:
        s = cfg.apply(s, m)
    return s


@settings(max_examples=30)
@given(games(max_dim=3, max_palette_extra=1))
def test_principal_variation_reaches_declared_outcome(cfg):
    res = solve(cfg)
    end = replay(cfg, res.principal_variation)
    assert cfg.outcome(end) is res.outcome
    assert res.nodes_searched >= 0


def test_solve_is_deterministic_and_thread_invariant():
    cfg = GameConfig(H33, 4, first_player="B")
    runs = [solve(cfg) for _ in range(2)] + [solve(cfg, threads=2)]
    assert len({r.outcome for r in runs}) == 1
    assert len({tuple(r.principal_variation) for r in runs}) == 1
    data = runs[0].to_json()
    assert data["outcome"] == "AliceWins" and all(isinstance(m, str) for m in data["principal_variation"])


def test_solve_from_given_state_and_graph_game():
    cfg = GameConfig(THETA2, 3)
    s = apply_move(cfg.initial_state(), cfg.legal_moves(cfg.initial_state())[0])
    assert solve(cfg, state=s).outcome is Solver(cfg).outcome(s)
    g = standard_graph_game(complete_graph(3), 3, first_player="B")
    assert solve(g).outcome is Outcome.ALICE_WINS


def test_budget_error_surfaces():
    with pytest.raises(BudgetExceeded):
        solve(GameConfig(H33, 4, first_player="B"), budget=10)


# ---------------------------------------------------------------- chromatic numbers

@pytest.mark.parametrize("theta,first,expected", [
    (THETA1, "A", 2), (THETA1, "B", 2),
    (THETA2, "A", 3), (THETA2, "B", 3),
    (Isotopism.from_strings((3, 3), 3, "(1 2 3)", "(1 2 3)", "Id"), "A", 3),
    (Isotopism.from_strings((3, 3), 3, "(1 2 3)", "(1 2 3)", "Id"), "B", 3),
    (Isotopism.trivial((2, 3), 3), "A", 4),
])
def test_chromatic_examples(theta, first, expected):
    assert game_chromatic_number(theta, 1, 1, first).least_winning == expected


def test_profile_reports_every_size_and_partial_scans():
    prof = game_chromatic_number(H33, 1, 1, "B", n_max=5)
    assert prof.outcomes == {3: Outcome.BOB_WINS, 4: Outcome.ALICE_WINS, 5: Outcome.ALICE_WINS}
    assert prof.least_winning == 4 and not prof.partial
    tiny = game_chromatic_number(H33, 1, 1, "B", n_max=4, budget=50)
    assert tiny.partial and tiny.least_winning is None
    assert tiny.to_json()["profile"]["4"] == "budget-exceeded"
    assert ChromaticProfile({2: Outcome.BOB_WINS}).least_winning is None


def test_chromatic_default_ceiling():
    prof = game_chromatic_number(THETA2, 1, 1, "A")
    # two orbits and n = 2 give a ceiling of 3
    assert sorted(prof.outcomes) == [2, 3]


def test_graph_and_contracted_scans():
    assert graph_chromatic_number(complete_graph(4)).least_winning == 4
    assert graph_chromatic_number(hamming(1, 3), 1, 1, "B").least_winning == 3
    t = Isotopism.from_strings((4, 4), 4, "(1 2 3 4)", "(1 2 3 4)", "Id")
    assert contracted_chromatic_number(t, 1, 1, "A").least_winning == 4
    with pytest.raises(ValueError):
        contracted_config(GameConfig(THETA1, 2, variant=Variant.FIRST_TRY))


# ---------------------------------------------------------------- quota normalization

def test_effective_quota_examples():
    fig = Isotopism.from_strings((3, 4), 4, "(1 2)(3)", "(1 2 3 4)", "(1 2 3 4)")
    assert effective_quota(fig, 10, 1) == (3, 1)
    assert effective_quota(fig, 1, 1) == (1, 1)
    assert effective_quota(Isotopism.trivial((2, 2), 2), 7, 9) == (4, 4)


@settings(max_examples=25)
@given(games(max_dim=3, max_palette_extra=1), st.integers(0, 6), st.integers(0, 6))
def test_quota_cap_does_not_change_outcome(cfg, da, db):
    from dataclasses import replace

    k = len(cfg.theta.orbits)
    big = replace(cfg, a=k + da, b=k + db)
    capped = replace(cfg, a=k, b=k)
    assert solve(big).outcome is solve(capped).outcome
    assert solve(big, normalize=True).outcome is solve(big).outcome


# ---------------------------------------------------------------- conjugate isotopisms

@settings(max_examples=25)
@given(st.data())
def test_conjugate_isotopisms_share_chromatic_profile(data):
    from strategies import isotopisms

    t = data.draw(isotopisms(max_dim=3).filter(is_extendable))
    q = Isotopism(t.shape, tuple(data.draw(perms(k)) for k in t.shape.dims), data.draw(perms(t.shape.n)))
    u = t.conjugate_by(q)
    first = data.draw(st.sampled_from("AB"))
    n_max = t.shape.n + 2
    p1 = game_chromatic_number(t, 1, 1, first, n_max=n_max)
    p2 = game_chromatic_number(u, 1, 1, first, n_max=n_max)
    assert p1.outcomes == p2.outcomes


# ---------------------------------------------------------------- strategies

def test_pairing_strategy_examples():
    for g in (complete_graph(3), cycle_graph(4)):
        prod = cartesian(complete_graph(2), g)
        cfg = standard_graph_game(prod, prod.max_degree, first_player="B")
        assert verify_strategy(cfg, scripted_strategy("pairing_K2"), "A")


def test_lexicographic_strategy_is_refuted():
    cfg = GameConfig(H33, 3, first_player="B")
    assert verify_strategy(cfg, lexicographic_first(), "A") is False


def test_strategy_on_terminal_state():
    cfg = GameConfig(Isotopism.trivial((1, 2), 2), 2)
    s = play(cfg, [Move((1, 1), 1), Move((1, 2), 2)])
    assert terminal_status(s) is Outcome.ALICE_WINS
    assert verify_strategy(cfg, lexicographic_first(), "A", state=s)
    assert lexicographic_first()(s) is None


def test_optimal_strategy_wins_when_solver_says_so():
    cfg = GameConfig(H33, 4, first_player="B")
    assert verify_strategy(cfg, optimal_strategy(cfg), "A")
    cfg = GameConfig(H33, 3, first_player="B")
    assert verify_strategy(cfg, optimal_strategy(cfg), "B")


def test_simulation_strategy_lifts_base():
    cfg = GameConfig(H33, 4, a=3, b=1, first_player="B")
    strat = scripted_strategy("simulation", {"a": 1, "b": 1})
    assert verify_strategy(cfg, strat, "A")


@pytest.mark.parametrize("palette", [6, 7, 8])
def test_first_try_destroyer(palette):
    t = Isotopism.from_strings((3, 6), 6, "(1 2 3)", "(1 2 3)(4 5 6)", "Id")
    cfg = GameConfig(t, palette, variant=Variant.FIRST_TRY)
    bob = scripted_strategy("first_try_destroyer")
    s0 = cfg.initial_state()
    for opening in cfg.legal_moves(s0):
        s = cfg.apply(s0, opening)
        reply = bob(s)
        assert terminal_status(cfg.apply(s, reply)) is Outcome.BOB_WINS
        assert destroyer_move(s) == reply
        std = GameConfig(t, palette)
        assert reply not in std.legal_moves(std.apply(std.initial_state(), opening))


def test_scripted_strategy_errors():
    with pytest.raises(ValueError):
        scripted_strategy("telepathy")
    cfg = GameConfig(H33, 3)
    s = cfg.apply(cfg.initial_state(), cfg.legal_moves(cfg.initial_state())[0])
    with pytest.raises(ValueError):
        scripted_strategy("pairing_K2")(s)
    g = standard_graph_game(complete_graph(3), 3)
    with pytest.raises(ValueError):
        scripted_strategy("first_try_destroyer")(g.initial_state())


def test_strategies_always_return_legal_moves():
    cfg = standard_graph_game(cartesian(complete_graph(2), cycle_graph(5)), 3, first_player="B")
    strat = scripted_strategy("pairing_K2")
    s = cfg.initial_state()
    while cfg.outcome(s) is None:
        m = strat(s) if s.to_move is Player.ALICE else cfg.legal_moves(s)[-1]
        assert m in cfg.legal_moves(s)
        s = cfg.apply(s, m)


def test_backends_give_same_chromatic_profile():
    profiles = {b: game_chromatic_number(H33, 1, 1, "B", n_max=4, backend=b).outcomes for b in BACKENDS}
    assert len({json.dumps({k: v.value for k, v in p.items()}) for p in profiles.values()}) == 1

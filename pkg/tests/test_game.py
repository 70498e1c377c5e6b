from __future__ import annotations

import json
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latingame.board import Board, is_member, is_theta_compatible, validate_latin
from latingame.game import (
    GameConfig,
    GameState,
    IllegalMoveError,
    Move,
    Outcome,
    Player,
    Variant,
    apply_move,
    dead_cells,
    forced_completion,
    legal_colours,
    legal_moves,
    parse_move,
    play,
    terminal_status,
    transcript_from_json,
    transcript_to_json,
)
from latingame.symmetry import Isotopism

from strategies import games

THETA2 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "(1 2)")
EX31 = Isotopism.from_strings((3, 6), 6, "(1 2 3)", "(1 2 3)(4 5 6)", "Id")


def test_legal_colours_empty_board():
    s = GameConfig(THETA2, 3).initial_state()
    assert legal_colours(s, (1, 1)) == {1, 2, 3}


def test_orbit_mate_is_forced():
    s = play(GameConfig(THETA2, 3), [Move((1, 1), 1)])
    assert legal_colours(s, (2, 2)) == {2}


@pytest.mark.parametrize("palette", [6, 7, 8])
def test_lookahead_rule_separates_variants(palette):
    for variant, allowed in ((Variant.STANDARD, False), (Variant.FIRST_TRY, True)):
        cfg = GameConfig(EX31, palette, variant=variant)
        s = play(cfg, [Move((1, 1), 1)])
        assert (1 in legal_colours(s, (2, 4))) is allowed


def test_legal_colours_errors():
    s = play(GameConfig(THETA2, 3), [Move((1, 1), 1)])
    with pytest.raises(ValueError):
        legal_colours(s, (1, 1))
    with pytest.raises(ValueError):
        legal_colours(s, (3, 1))


def test_legal_moves_order():
    cfg = GameConfig(Isotopism.trivial((1, 2), 2), 2)
    got = legal_moves(cfg.initial_state())
    assert got == [Move((1, 1), 1), Move((1, 1), 2), Move((1, 2), 1), Move((1, 2), 2)]
    s = play(cfg, [Move((1, 1), 1), Move((1, 2), 2)])
    assert s.board.is_full() and legal_moves(s) == []


def test_first_try_kill_position():
    cfg = GameConfig(EX31, 6, variant=Variant.FIRST_TRY)
    s = play(cfg, [Move((1, 1), 3), Move((2, 4), 3)])
    assert (2, 2) in dead_cells(s)
    assert legal_moves(s) == []
    assert terminal_status(s) is Outcome.BOB_WINS
    # without the terminal short-cut, no move targets the dead cell either
    assert legal_colours(s, (2, 2)) == set()


def test_turn_schedule():
    t = Isotopism.trivial((2, 2), 3)
    s = GameConfig(t, 3, a=2, b=1).initial_state()
    assert (s.to_move, s.remaining) == (Player.ALICE, 2)
    s = apply_move(s, Move((1, 1), 1))
    assert (s.to_move, s.remaining) == (Player.ALICE, 1)
    s = apply_move(s, Move((1, 2), 2))
    assert (s.to_move, s.remaining) == (Player.BOB, 1)
    s = apply_move(s, Move((2, 1), 2))
    # one empty cell left: Alice's quota shrinks to it
    assert (s.to_move, s.remaining) == (Player.ALICE, 1)
    s = apply_move(s, Move((2, 2), 1))
    assert terminal_status(s) is Outcome.ALICE_WINS


def test_unit_quota_alternates():
    s = GameConfig(Isotopism.trivial((2, 2), 2), 3, first_player="B").initial_state()
    seen = []
    for m in [Move((1, 1), 1), Move((1, 2), 2), Move((2, 1), 2)]:
        seen.append(s.to_move)
        s = apply_move(s, m)
    assert seen == [Player.BOB, Player.ALICE, Player.BOB]


def test_apply_rejects_illegal():
    s = play(GameConfig(THETA2, 3), [Move((1, 1), 1)])
    with pytest.raises(IllegalMoveError):
        apply_move(s, Move((2, 2), 1))
    with pytest.raises(IllegalMoveError):
        apply_move(s, Move((1, 1), 2))


def test_terminal_status_examples():
    cfg = GameConfig(Isotopism.trivial((1, 2), 2), 2)
    assert terminal_status(cfg.initial_state()) is None
    assert terminal_status(play(cfg, [Move((1, 1), 1), Move((1, 2), 2)])) is Outcome.ALICE_WINS


def test_forced_completion_examples():
    s = play(GameConfig(THETA2, 3), [Move((1, 1), 1), Move((1, 2), 3)])
    assert forced_completion(s).rows() == [[1, 3], [3, 2]]
    s0 = play(GameConfig(THETA2, 3), [Move((1, 1), 1)])
    assert forced_completion(s0) is None
    full = play(GameConfig(Isotopism.trivial((1, 2), 2), 2), [Move((1, 1), 1), Move((1, 2), 2)])
    assert forced_completion(full) == full.board


def test_config_validation():
    with pytest.raises(ValueError):
        GameConfig(THETA2, 1)
    with pytest.raises(ValueError):
        GameConfig(THETA2, 3, a=0)
    with pytest.raises(ValueError):
        GameConfig(Isotopism.from_strings((3, 4), 6, "(1 2 3)", "(1 2)(3 4)", "(1 2 3 4 5 6)"), 6)


def test_move_text_and_transcript():
    assert parse_move(" (1, 2)=3 ") == Move((1, 2), 3)
    assert str(Move((1, 2, 3), 4)) == "(1,2,3)=4"
    with pytest.raises(ValueError):
        parse_move("1,2=3")
    cfg = GameConfig(THETA2, 3, first_player="B")
    moves = [Move((1, 1), 1), Move((1, 2), 3)]
    rows = transcript_from_json(transcript_to_json(cfg, moves))
    assert rows == [(Player.BOB, moves[0]), (Player.ALICE, moves[1])]
    assert json.loads(transcript_to_json(cfg, moves))[0] == {"player": "B", "move": "(1,1)=1"}


# ---------------------------------------------------------------- playouts

def orbit_closure_holds(s) -> bool:
    """Within every orbit, the filled cells are images of one another."""
    t = s.config.theta_ext
    for orb in t.orbits.orbits:
        seed = next((c for c in orb if s.board[c]), None)
        if seed is None:
            continue
        x, w = seed, s.board[seed]
        for _ in range(len(orb) - 1):
            x, w = t.step(x), t.sym_perm(w)
            if s.board[x] and s.board[x] != w:
                return False
    return True


@settings(max_examples=80)
@given(games(), st.randoms(use_true_random=False))
def test_random_playout_invariants(cfg, rng):
    s = cfg.initial_state()
    dead = set()
    while True:
        assert validate_latin(s.board)
        assert is_theta_compatible(s.board, cfg.theta_ext)
        assert orbit_closure_holds(s)
        now_dead = set(dead_cells(s))
        assert dead <= now_dead
        dead = now_dead
        status = terminal_status(s)
        assert (status is Outcome.BOB_WINS) == bool(dead) or s.board.is_full()
        if cfg.variant is Variant.STANDARD and cfg.theta_ext.orbits.symbol_free_count(s.board) == 0:
            done = forced_completion(s)
            assert validate_latin(done) and is_member(done, cfg.theta_ext) and done.is_full()
        if status is not None:
            break
        moves = legal_moves(s)
        assert moves
        # non-terminal: every empty cell still has a colour
        s = apply_move(s, rng.choice(moves))


@settings(max_examples=80)
@given(games(max_dim=3, max_palette_extra=3).filter(lambda c: c.variant is Variant.STANDARD),
       st.randoms(use_true_random=False))
def test_open_orbit_keeps_board_colourable(cfg, rng):
    """While an orbit is symbol-free: (i) with one unused fixed symbol added, every
    empty cell has a colour; (ii) each unused fixed extension symbol fits somewhere."""
    s = cfg.initial_state()
    t = cfg.theta_ext
    wide = cfg.with_palette(cfg.palette + 1)
    base = set(range(1, cfg.shape.n + 1))
    while terminal_status(s) is None:
        if t.orbits.symbol_free_count(s.board) > 0:
            empties = [c for c in cfg.shape.cells() if not s.board[c]]
            ws = GameState(Board(s.board.shape, s.board.cells, wide.palette), s.to_move, s.remaining, wide)
            assert all(legal_colours(ws, c) for c in empties)
            used = set(s.board.cells)
            for v in set(range(1, cfg.palette + 1)) - used - base:
                assert any(v in legal_colours(s, c) for c in empties)
        s = apply_move(s, rng.choice(legal_moves(s)))


# ---------------------------------------------------------------- minimax oracle

def naive_outcome(cfg: GameConfig) -> Outcome:
    """Plain minimax over the reference engine, no symmetry reductions."""

    @lru_cache(maxsize=None)
    def alice_wins(key):
        s = states[key]
        status = terminal_status(s)
        if status is not None:
            return status is Outcome.ALICE_WINS
        results = []
        for m in legal_moves(s):
            c = apply_move(s, m, check=False)
            states.setdefault(c.key(), c)
            results.append(alice_wins(c.key()))
        return any(results) if s.to_move is Player.ALICE else all(results)

    s0 = cfg.initial_state()
    states = {s0.key(): s0}
    return Outcome.ALICE_WINS if alice_wins(s0.key()) else Outcome.BOB_WINS


SMALL_GAMES = [
    GameConfig(Isotopism.trivial((2, 2), 2), 2, first_player=f) for f in "AB"
] + [
    GameConfig(Isotopism.trivial((2, 3), 3), p, a, b, f)
    for p in (3, 4) for (a, b) in ((1, 1), (2, 1)) for f in "AB"
] + [
    GameConfig(THETA2, p, first_player=f) for p in (2, 3, 4) for f in "AB"
] + [
    GameConfig(Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "Id"), 2, first_player=f)
    for f in "AB"
] + [
    GameConfig(THETA2, p, first_player=f, variant=Variant.FIRST_TRY)
    for p in (3, 4) for f in "AB"
]


@pytest.mark.parametrize("cfg", SMALL_GAMES, ids=lambda c: f"{c.theta}-{c.palette}-{c.a}{c.b}{c.first_player.value}-{c.variant.value}")
def test_kernels_match_naive_minimax(cfg):
    from latingame.kernel import BACKENDS
    from latingame.solver import Solver

    expected = naive_outcome(cfg)
    for backend in BACKENDS:
        assert Solver(cfg, backend=backend).outcome(cfg.initial_state()) is expected

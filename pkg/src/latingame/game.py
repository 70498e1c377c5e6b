"""The Θ-stabilized (a,b)-colouring game on Hamming boards.

This module is the reference engine: every rule is evaluated directly from the
isotopism on the current board.  The search kernels in :mod:`latingame.kernel`
compile the same rules into lookup tables and are cross-checked against it.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from functools import cached_property

from .board import Board, Cell, validate_latin
from .symmetry import Isotopism, is_extendable, lcm_compatible, natural_extension


class Player(enum.Enum):
    ALICE = "A"
    BOB = "B"

    @property
    def other(self) -> Player:
        return Player.BOB if self is Player.ALICE else Player.ALICE

    @classmethod
    def parse(cls, text: str | Player) -> Player:
        if isinstance(text, Player):
            return text
        key = text.strip().upper()[:1]
        if key not in ("A", "B"):
            raise ValueError(f"player must be A or B, got {text!r}")
        return cls(key)


class Variant(enum.Enum):
    STANDARD = "standard"
    FIRST_TRY = "first-try"


class Outcome(enum.Enum):
    ALICE_WINS = "AliceWins"
    BOB_WINS = "BobWins"

    @property
    def winner(self) -> Player:
        return Player.ALICE if self is Outcome.ALICE_WINS else Player.BOB

    @classmethod
    def for_player(cls, p: Player) -> Outcome:
        return cls.ALICE_WINS if p is Player.ALICE else cls.BOB_WINS


class IllegalMoveError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Forced completion produced a non-Latin board."""


@dataclass(frozen=True)
class Move:
    cell: Cell
    symbol: int

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.cell)) + f")={self.symbol}"


_MOVE_RE = re.compile(r"^\s*\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*=\s*(\d+)\s*$")


def parse_move(text: str) -> Move:
    m = _MOVE_RE.match(text)
    if not m:
        raise ValueError(f"malformed move {text!r}; expected (i1,...,id)=s")
    return Move(tuple(int(x) for x in m.group(1).split(",")), int(m.group(2)))


@dataclass(frozen=True)
class GameConfig:
    theta: Isotopism
    palette: int
    a: int = 1
    b: int = 1
    first_player: Player = Player.ALICE
    variant: Variant = Variant.STANDARD

    def __post_init__(self) -> None:
        object.__setattr__(self, "first_player", Player.parse(self.first_player))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be positive")
        if self.palette < self.theta.shape.n:
            raise ValueError(f"palette {self.palette} below symbol count {self.theta.shape.n}")
        if not is_extendable(self.theta):
            raise ValueError(f"isotopism {self.theta} is not extendable")

    @cached_property
    def theta_ext(self) -> Isotopism:
        """The natural extension of Θ to the palette in play."""
        return natural_extension(self.theta, self.palette)

    @property
    def shape(self):
        return self.theta.shape

    def quota(self, p: Player) -> int:
        return self.a if p is Player.ALICE else self.b

    def initial_state(self) -> GameState:
        board = Board.empty(self.shape, self.palette)
        first = self.first_player
        return GameState(board, first, min(self.quota(first), board.empty_count()), self)

    def with_palette(self, palette: int) -> GameConfig:
        return replace(self, palette=palette)

    # generic game protocol shared with the graph games
    def legal_moves(self, s: GameState) -> list[Move]:
        return legal_moves(s)

    def apply(self, s: GameState, m: Move) -> GameState:
        return apply_move(s, m)

    def outcome(self, s: GameState) -> Outcome | None:
        return terminal_status(s)


@dataclass(frozen=True)
class GameState:
    board: Board
    to_move: Player
    remaining: int
    config: GameConfig = field(repr=False)
    moves_in_turn: int = 0

    def key(self) -> tuple:
        return (self.board.cells, self.to_move, self.remaining, self.moves_in_turn)


def _rule1(board: Board, c: Cell, v: int) -> bool:
    return all(board[y] != v for y in board.shape.neighbours(c))


def _rule2(t: Isotopism, board: Board, c: Cell, v: int) -> bool:
    sym = t.sym_perm
    if not lcm_compatible(t.cell_cycle_lengths(c) + (sym.cycle_lengths[v - 1],)):
        return False
    period = t.cell_period(c)
    x, w = c, v
    for k in range(1, period):
        x, w = t.step(x), sym(w)
        mate = board[x]
        if not mate:
            continue
        # the mate must be the image of the new entry, and vice versa
        if mate != w or sym.power(period - k)(mate) != v:
            return False
    return True


def _rule3(t: Isotopism, board: Board, c: Cell, v: int) -> bool:
    sym = t.sym_perm
    x, w = c, v
    for _ in range(1, t.cell_period(c)):
        x, w = t.step(x), sym(w)
        for y in board.shape.neighbours(x):
            if board[y] == w:
                return False
    return True


def colour_is_legal(s: GameState, c: Cell, v: int) -> bool:
    cfg = s.config
    t = cfg.theta_ext
    if not _rule1(s.board, c, v) or not _rule2(t, s.board, c, v):
        return False
    if cfg.variant is Variant.STANDARD and not _rule3(t, s.board, c, v):
        return False
    return True


def legal_colours(s: GameState, c: Cell) -> set[int]:
    if s.board[c]:
        raise ValueError(f"cell {c} is not empty")
    return {v for v in range(1, s.config.palette + 1) if colour_is_legal(s, c, v)}


def legal_moves(s: GameState) -> list[Move]:
    if terminal_status(s) is not None:
        return []
    return _all_moves(s)


def _all_moves(s: GameState) -> list[Move]:
    out = []
    for c in s.board.shape.cells():
        if not s.board[c]:
            out.extend(Move(c, v) for v in sorted(legal_colours(s, c)))
    return out


def apply_move(s: GameState, m: Move, check: bool = True) -> GameState:
    if check and (s.board[m.cell] or not colour_is_legal(s, m.cell, m.symbol)):
        raise IllegalMoveError(f"illegal move {m}")
    board = s.board.with_entry(m.cell, m.symbol)
    remaining = s.remaining - 1
    if remaining > 0:
        return GameState(board, s.to_move, remaining, s.config, s.moves_in_turn + 1)
    nxt = s.to_move.other
    return GameState(board, nxt, min(s.config.quota(nxt), board.empty_count()), s.config, 0)


def dead_cells(s: GameState) -> list[Cell]:
    return [c for c in s.board.shape.cells() if not s.board[c] and not legal_colours(s, c)]


def terminal_status(s: GameState) -> Outcome | None:
    """AliceWins on a full board, BobWins as soon as some empty cell is dead."""
    if s.board.is_full():
        return Outcome.ALICE_WINS
    for c in s.board.shape.cells():
        if not s.board[c] and not any(
            colour_is_legal(s, c, v) for v in range(1, s.config.palette + 1)
        ):
            return Outcome.BOB_WINS
    return None


def forced_completion(s: GameState) -> Board | None:
    """Fill every marked orbit by propagating its entry along Θ; ``None`` while a symbol-free orbit remains."""
    t = s.config.theta_ext
    board = s.board
    orbits = t.orbits
    if orbits.symbol_free_count(board) > 0:
        return None
    cells = list(board.cells)
    shape = board.shape
    for orb in orbits.orbits:
        seed = next(c for c in orb if board[c])
        x, w = seed, board[seed]
        for _ in range(len(orb) - 1):
            x, w = t.step(x), t.sym_perm(w)
            i = shape.index(x)
            if cells[i] and cells[i] != w:
                raise InconsistencyError(f"cell {x} holds {cells[i]} but propagation along Θ forces {w}")
            cells[i] = w
    out = Board(shape, tuple(cells), board.palette)
    if not validate_latin(out):
        raise InconsistencyError("forced completion violates the Latin condition")
    return out


def play(config: GameConfig, moves: list[Move]) -> GameState:
    s = config.initial_state()
    for m in moves:
        s = apply_move(s, m)
    return s


def transcript_to_json(config: GameConfig, moves: list[Move]) -> str:
    s = config.initial_state()
    rows = []
    for m in moves:
        rows.append({"player": s.to_move.value, "move": str(m)})
        s = apply_move(s, m)
    return json.dumps(rows)


def transcript_from_json(text: str) -> list[tuple[Player, Move]]:
    return [(Player.parse(r["player"]), parse_move(r["move"])) for r in json.loads(text)]

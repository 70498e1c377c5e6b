"""Partial Latin hyper-rectangles stored as flat row-major arrays.

A cell is a 1-based coordinate tuple ``(i_1, ..., i_d)``; the value ``0`` marks
an empty cell.  Boards are immutable; :meth:`Board.with_entry` returns a copy.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .symmetry import Isotopism

Cell = tuple[int, ...]
EMPTY = 0


@dataclass(frozen=True)
class Shape:
    dims: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        dims = tuple(int(x) for x in self.dims)
        if not dims:
            raise ValueError("a shape needs at least one dimension")
        if any(x < 1 for x in dims) or self.n < 1:
            raise ValueError(f"dimensions and symbol count must be >= 1: {dims}, n={self.n}")
        object.__setattr__(self, "dims", dims)

    @property
    def d(self) -> int:
        return len(self.dims)

    @cached_property
    def size(self) -> int:
        return math.prod(self.dims)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = [1] * self.d
        for j in range(self.d - 2, -1, -1):
            strides[j] = strides[j + 1] * self.dims[j + 1]
        return tuple(strides)

    def cells(self) -> Iterator[Cell]:
        return itertools.product(*(range(1, k + 1) for k in self.dims))

    def index(self, cell: Cell) -> int:
        if len(cell) != self.d or any(not 1 <= c <= k for c, k in zip(cell, self.dims)):
            raise ValueError(f"cell {cell} outside {self.dims}")
        return sum((c - 1) * s for c, s in zip(cell, self._strides))

    def cell(self, index: int) -> Cell:
        out = []
        for s in self._strides:
            q, index = divmod(index, s)
            out.append(q + 1)
        return tuple(out)

    def neighbours(self, cell: Cell) -> list[Cell]:
        """Cells collinear with ``cell`` (differing in exactly one coordinate)."""
        out = []
        for j, k in enumerate(self.dims):
            for x in range(1, k + 1):
                if x != cell[j]:
                    out.append(cell[:j] + (x,) + cell[j + 1 :])
        return out

    @cached_property
    def neighbour_index(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.index(y) for y in self.neighbours(self.cell(i))) for i in range(self.size)
        )


@dataclass(frozen=True)
class Entry:
    cell: Cell
    symbol: int


@dataclass(frozen=True)
class Board:
    """A d-dimensional array of optional symbols in ``[palette]``.

    ``shape.n`` is the base symbol count; ``palette >= n`` lets the same type
    hold boards of games played over a natural extension.
    """

    shape: Shape
    cells: tuple[int, ...]
    palette: int = 0

    def __post_init__(self) -> None:
        cells = tuple(int(x) for x in self.cells)
        if len(cells) != self.shape.size:
            raise ValueError(f"expected {self.shape.size} cells, got {len(cells)}")
        palette = self.palette or self.shape.n
        if palette < self.shape.n:
            raise ValueError("palette smaller than the symbol count")
        for x in cells:
            if not 0 <= x <= palette:
                raise ValueError(f"symbol {x} outside 1..{palette}")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "palette", palette)

    @classmethod
    def empty(cls, shape: Shape, palette: int | None = None) -> Board:
        return cls(shape, (EMPTY,) * shape.size, palette or shape.n)

    @classmethod
    def from_rows(cls, rows: list[list[int]], n: int, palette: int | None = None) -> Board:
        shape = Shape((len(rows), len(rows[0])), n)
        return cls(shape, tuple(x for row in rows for x in row), palette or n)

    @classmethod
    def from_entries(cls, shape: Shape, entries: Iterable[Entry | tuple], palette: int | None = None) -> Board:
        cells = [EMPTY] * shape.size
        for e in entries:
            cell, sym = (e.cell, e.symbol) if isinstance(e, Entry) else (tuple(e[:-1]), e[-1])
            i = shape.index(cell)
            if cells[i] not in (EMPTY, sym):
                raise ValueError(f"cell {cell} given two symbols")
            cells[i] = sym
        return cls(shape, tuple(cells), palette or shape.n)

    def __getitem__(self, cell: Cell) -> int:
        return self.cells[self.shape.index(cell)]

    def with_entry(self, cell: Cell, symbol: int) -> Board:
        cells = list(self.cells)
        cells[self.shape.index(cell)] = symbol
        return Board(self.shape, tuple(cells), self.palette)

    def entries(self) -> list[Entry]:
        """E(P) in lexicographic cell order."""
        return [Entry(self.shape.cell(i), s) for i, s in enumerate(self.cells) if s]

    def entry_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(e.cell + (e.symbol,) for e in self.entries())

    def is_trivial(self) -> bool:
        return not any(self.cells)

    def is_full(self) -> bool:
        return all(self.cells)

    def empty_count(self) -> int:
        return self.cells.count(EMPTY)

    def rows(self) -> list[list[int]]:
        if self.shape.d != 2:
            raise ValueError("rows() only makes sense for d = 2")
        n2 = self.shape.dims[1]
        return [list(self.cells[r * n2 : (r + 1) * n2]) for r in range(self.shape.dims[0])]

    def to_json(self) -> dict:
        out: dict = {"dims": list(self.shape.dims), "n": self.shape.n, "palette": self.palette}
        if self.shape.d == 2:
            out["rows"] = self.rows()
        else:
            out["cells"] = list(self.cells)
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> Board:
        if isinstance(data, str):
            data = json.loads(data)
        dims = tuple(data["dims"])
        n = int(data["n"])
        palette = int(data.get("palette", n))
        if "rows" in data:
            flat = [x for row in data["rows"] for x in row]
        else:
            flat = list(data["cells"])
        return cls(Shape(dims, n), tuple(flat), palette)

    def pretty(self) -> str:
        if self.shape.d == 1:
            return " ".join(str(x) if x else "." for x in self.cells)
        if self.shape.d == 2:
            width = len(str(self.palette))
            return "\n".join(
                " ".join((str(x) if x else ".").rjust(width) for x in row) for row in self.rows()
            )
        return json.dumps(self.to_json())


def validate_latin(b: Board) -> bool:
    """True iff no symbol repeats within any line."""
    shape = b.shape
    for j, k in enumerate(shape.dims):
        others = [range(1, m + 1) for i, m in enumerate(shape.dims) if i != j]
        for fixed in itertools.product(*others):
            seen = set()
            for x in range(1, k + 1):
                cell = fixed[:j] + (x,) + fixed[j:]
                s = b[cell]
                if s:
                    if s in seen:
                        return False
                    seen.add(s)
    return True


def _check_shape(b: Board, t: Isotopism) -> None:
    if t.shape.dims != b.shape.dims:
        raise ValueError(f"isotopism dims {t.shape.dims} do not match board dims {b.shape.dims}")


def apply_isotopism(b: Board, t: Isotopism) -> Board:
    """P^Θ: permute every coordinate and the symbol of each entry."""
    _check_shape(b, t)
    sym = t.sym_perm
    cells = [EMPTY] * b.shape.size
    for e in b.entries():
        if e.symbol > sym.size:
            raise ValueError(f"symbol {e.symbol} outside the symbol permutation's range")
        image = tuple(p(i) for p, i in zip(t.row_perms, e.cell))
        cells[b.shape.index(image)] = sym(e.symbol)
    return Board(b.shape, tuple(cells), max(b.palette, sym.size))


def is_theta_compatible(b: Board, t: Isotopism) -> bool:
    """Conditions C.1 and C.2 for every non-empty cell of ``b``."""
    _check_shape(b, t)
    from .symmetry import lcm_compatible

    sym = t.sym_perm
    for e in b.entries():
        if e.symbol > sym.size:
            return False
        lens = t.cell_cycle_lengths(e.cell) + (sym.cycle_lengths[e.symbol - 1],)
        if not lcm_compatible(lens):
            return False
        # C.2 is periodic in m with period lcm of the cell's cycle lengths
        period = math.lcm(*lens[:-1])
        cell, s = e.cell, e.symbol
        for _ in range(period):
            cell = t.step(cell)
            s = sym(s)
            v = b[cell]
            if v and v != s:
                return False
    return True


def is_member(b: Board, t: Isotopism) -> bool:
    """Membership in PLH_Θ: non-trivial and fixed by ``t``."""
    _check_shape(b, t)
    if b.is_trivial():
        return False
    if any(s > t.sym_perm.size for s in b.cells):
        return False
    return apply_isotopism(b, t).cells == b.cells


def plh_census(t: Isotopism) -> int:
    """Brute-force |PLH_Θ| over all partial arrays on ``[n]``.

    Vectorised over the ``(n+1)^(n_1...n_d)`` candidate arrays, so only for
    desk-scale shapes (a few hundred thousand candidates).
    """
    import numpy as np

    shape = t.shape
    ncell, n = shape.size, shape.n
    if t.sym_perm.size != n:
        raise ValueError("census is defined for the base symbol set only")
    total = (n + 1) ** ncell
    if total > 50_000_000:
        raise ValueError(f"census of {total} arrays is beyond desk scale")
    codes = np.arange(total, dtype=np.int64)
    arr = np.empty((total, ncell), dtype=np.int8)
    for i in range(ncell - 1, -1, -1):
        arr[:, i] = codes % (n + 1)
        codes //= n + 1
    ok = np.ones(total, dtype=bool)
    # Latin condition, line by line
    for j, k in enumerate(shape.dims):
        others = [range(1, m + 1) for i, m in enumerate(shape.dims) if i != j]
        for fixed in itertools.product(*others):
            idx = [shape.index(fixed[:j] + (x,) + fixed[j:]) for x in range(1, k + 1)]
            for a_, b_ in itertools.combinations(idx, 2):
                ok &= (arr[:, a_] == 0) | (arr[:, a_] != arr[:, b_])
    # P^Θ = P: value at image cell equals the permuted value
    symmap = np.array((0,) + t.sym_perm.mapping, dtype=np.int8)
    for i in range(ncell):
        img = shape.index(t.step(shape.cell(i)))
        ok &= arr[:, img] == symmap[arr[:, i]]
    ok &= arr.any(axis=1)
    return int(ok.sum())

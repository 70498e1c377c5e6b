"""Isotopisms, cell orbits, lcm-compatibility, feasibility and extensions."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .board import Board, Cell, Entry, Shape
from .perm import CycleStructure, Perm, conjugation_witness, cycle_structure


class IncompatibleEntryError(ValueError):
    """The cycle lengths of an entry are not lcm-compatible."""


def lcm_compatible(t: Sequence[int]) -> bool:
    """Membership in C_k: dropping any one element leaves the lcm unchanged."""
    t = tuple(int(x) for x in t)
    if len(t) < 2:
        raise ValueError("lcm-compatibility needs a tuple of length >= 2")
    if any(x < 1 for x in t):
        raise ValueError("entries must be positive")
    whole = math.lcm(*t)
    return all(math.lcm(*(t[:i] + t[i + 1 :])) == whole for i in range(len(t)))


@dataclass(frozen=True)
class IsoCycleStructure:
    components: tuple[CycleStructure, ...]

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class Isotopism:
    """Θ = (π_1, ..., π_d, π) acting on ``shape``.

    ``sym_perm`` may be larger than ``shape.n`` when Θ is an extension; the
    shape keeps the base symbol count.
    """

    shape: Shape
    row_perms: tuple[Perm, ...]
    sym_perm: Perm

    def __post_init__(self) -> None:
        object.__setattr__(self, "row_perms", tuple(self.row_perms))
        if len(self.row_perms) != self.shape.d:
            raise ValueError(f"need {self.shape.d} row permutations, got {len(self.row_perms)}")
        for p, k in zip(self.row_perms, self.shape.dims):
            if p.size != k:
                raise ValueError(f"permutation of size {p.size} for a dimension of size {k}")
        if self.sym_perm.size < self.shape.n:
            raise ValueError("symbol permutation smaller than the symbol count")

    @classmethod
    def from_cycles(cls, dims: Sequence[int], n: int, perms: Sequence[Sequence[Sequence[int]]]) -> Isotopism:
        """``perms`` lists d+1 permutations in cycle form; the last acts on symbols."""
        dims = tuple(dims)
        if len(perms) != len(dims) + 1:
            raise ValueError(f"need {len(dims) + 1} permutations")
        rows = tuple(Perm.from_cycles(c, k) for c, k in zip(perms, dims))
        sym_size = max([n] + [x for cyc in perms[-1] for x in cyc])
        return cls(Shape(dims, n), rows, Perm.from_cycles(perms[-1], sym_size))

    @classmethod
    def from_strings(cls, dims: Sequence[int], n: int, *perms: str) -> Isotopism:
        from .perm import parse_cycles

        dims = tuple(dims)
        rows = tuple(parse_cycles(p, k) for p, k in zip(perms[:-1], dims))
        return cls(Shape(dims, n), rows, parse_cycles(perms[-1], n))

    @classmethod
    def trivial(cls, dims: Sequence[int], n: int) -> Isotopism:
        shape = Shape(tuple(dims), n)
        return cls(shape, tuple(Perm.identity(k) for k in shape.dims), Perm.identity(n))

    @property
    def perms(self) -> tuple[Perm, ...]:
        return self.row_perms + (self.sym_perm,)

    @property
    def palette(self) -> int:
        return self.sym_perm.size

    def is_principal(self) -> bool:
        return self.sym_perm.is_identity()

    def is_trivial(self) -> bool:
        return all(p.is_identity() for p in self.perms)

    def step(self, cell: Cell) -> Cell:
        return tuple(p(i) for p, i in zip(self.row_perms, cell))

    def cell_power(self, cell: Cell, m: int) -> Cell:
        out = cell
        for _ in range(m % self.cell_period(cell)):
            out = self.step(out)
        return out

    def cell_cycle_lengths(self, cell: Cell) -> tuple[int, ...]:
        return tuple(p.cycle_lengths[i - 1] for p, i in zip(self.row_perms, cell))

    def cell_period(self, cell: Cell) -> int:
        return math.lcm(*self.cell_cycle_lengths(cell))

    def symbol_cycle_length(self, s: int) -> int:
        return self.sym_perm.cycle_lengths[s - 1]

    def cycle_structure(self) -> IsoCycleStructure:
        return IsoCycleStructure(tuple(cycle_structure(p) for p in self.perms))

    def inverse(self) -> Isotopism:
        return Isotopism(self.shape, tuple(p.inverse() for p in self.row_perms), self.sym_perm.inverse())

    def compose(self, other: Isotopism) -> Isotopism:
        """Componentwise ``self * other`` (``other`` acts first)."""
        return Isotopism(
            self.shape,
            tuple(p * q for p, q in zip(self.row_perms, other.row_perms)),
            self.sym_perm * other.sym_perm,
        )

    __mul__ = compose

    def conjugate_by(self, q: Isotopism) -> Isotopism:
        """``q * self * q^-1``."""
        return q * self * q.inverse()

    @cached_property
    def orbits(self) -> OrbitPartition:
        return orbit_partition(self)

    def to_json(self) -> dict:
        out = {
            "dims": list(self.shape.dims),
            "n": self.shape.n,
            "perms": [p.nontrivial_cycles() for p in self.perms],
        }
        if self.sym_perm.size > self.shape.n:
            out["palette"] = self.sym_perm.size
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> Isotopism:
        if isinstance(data, str):
            data = json.loads(data)
        t = cls.from_cycles(data["dims"], int(data["n"]), data["perms"])
        palette = int(data.get("palette", t.sym_perm.size))
        if palette > t.sym_perm.size:
            mapping = t.sym_perm.mapping + tuple(range(t.sym_perm.size + 1, palette + 1))
            t = cls(t.shape, t.row_perms, Perm(mapping))
        return t

    def __str__(self) -> str:
        return "(" + ", ".join(p.cycle_string() if not p.is_identity() else "Id" for p in self.perms) + ")"


@dataclass(frozen=True)
class OrbitPartition:
    """Cell orbits in order of their lexicographically smallest cell."""

    orbits: tuple[tuple[Cell, ...], ...]
    index: dict[Cell, int]

    def __len__(self) -> int:
        return len(self.orbits)

    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def orbit_of(self, cell: Cell) -> tuple[Cell, ...]:
        return self.orbits[self.index[cell]]

    def status(self, b: Board, orbit_id: int) -> str:
        """``"symbol-free"``, ``"complete"`` or ``"marked"`` (some but not all filled)."""
        filled = sum(1 for c in self.orbits[orbit_id] if b[c])
        if filled == 0:
            return "symbol-free"
        if filled == len(self.orbits[orbit_id]):
            return "complete"
        return "marked"

    def symbol_free_count(self, b: Board) -> int:
        return sum(1 for o in self.orbits if not any(b[c] for c in o))


def cell_orbit(t: Isotopism, c: Cell) -> list[Cell]:
    """The distinct images of ``c`` under powers of the row permutations, starting at ``c``."""
    t.shape.index(c)
    out = [c]
    x = t.step(c)
    while x != c:
        out.append(x)
        x = t.step(x)
    return out


def orbit_partition(t: Isotopism) -> OrbitPartition:
    orbits: list[tuple[Cell, ...]] = []
    index: dict[Cell, int] = {}
    for c in t.shape.cells():
        if c in index:
            continue
        orb = tuple(cell_orbit(t, c))
        for x in orb:
            index[x] = len(orbits)
        orbits.append(orb)
    return OrbitPartition(tuple(orbits), index)


def entry_closure(t: Isotopism, e: Entry | tuple) -> set[Entry]:
    """All images of an entry under Θ; raises if it cannot belong to PLH_Θ."""
    if not isinstance(e, Entry):
        e = Entry(tuple(e[:-1]), e[-1])
    t.shape.index(e.cell)
    if not 1 <= e.symbol <= t.sym_perm.size:
        raise ValueError(f"symbol {e.symbol} outside 1..{t.sym_perm.size}")
    lens = t.cell_cycle_lengths(e.cell) + (t.symbol_cycle_length(e.symbol),)
    if not lcm_compatible(lens):
        raise IncompatibleEntryError(f"cycle lengths {lens} are not lcm-compatible")
    out = set()
    cell, s = e.cell, e.symbol
    for _ in range(math.lcm(*lens)):
        cell, s = t.step(cell), t.sym_perm(s)
        out.add(Entry(cell, s))
    return out


def _length_sets(perms: Sequence[Perm]) -> list[list[int]]:
    return [sorted(set(p.cycle_lengths)) for p in perms]


def is_feasible(t: Isotopism) -> bool:
    """Every realisable tuple of cycle lengths (rows..., symbol) lies in C_{d+1}."""
    for combo in itertools.product(*_length_sets(t.perms)):
        if not lcm_compatible(combo):
            return False
    return True


def _rows_feasible(t: Isotopism) -> bool:
    if t.shape.d == 1:
        return all(x == 1 for x in t.row_perms[0].cycle_lengths)
    return all(lcm_compatible(c) for c in itertools.product(*_length_sets(t.row_perms)))


def natural_extension(t: Isotopism, n_prime: int) -> Isotopism:
    """Same row permutations; the symbol permutation fixes every s in (n, n']."""
    base = t.shape.n
    if n_prime < base:
        raise ValueError(f"extension size {n_prime} below symbol count {base}")
    mapping = t.sym_perm.mapping[:base] + tuple(range(base + 1, n_prime + 1))
    return Isotopism(t.shape, t.row_perms, Perm(mapping))


def is_extendable(t: Isotopism) -> bool:
    """Feasible, and the row permutations alone admit a fixed extra symbol.

    For d = 2 this says every cycle of π_1 and π_2 has one common length; for
    d > 2 that (π_1, ..., π_d) is itself feasible.
    """
    if not is_feasible(t):
        return False
    if t.shape.d == 2:
        return len(set(t.row_perms[0].cycle_lengths) | set(t.row_perms[1].cycle_lengths)) == 1
    return _rows_feasible(t)


def isotopism_conjugation_witness(t1: Isotopism, t2: Isotopism) -> Isotopism | None:
    """Componentwise witness ``q`` with ``t2 = q * t1 * q^-1``."""
    if t1.shape != t2.shape or t1.sym_perm.size != t2.sym_perm.size:
        raise ValueError("isotopisms act on different shapes")
    parts = [conjugation_witness(p, q) for p, q in zip(t1.perms, t2.perms)]
    if any(p is None for p in parts):
        return None
    return Isotopism(t1.shape, tuple(parts[:-1]), parts[-1])

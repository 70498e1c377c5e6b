"""Permutations of ``{1..m}`` in one-line form, with cycle bookkeeping.

Symbols are 1-based throughout.  Cycle notation is only parsed and printed at
the I/O boundary (:func:`parse_cycles`, :meth:`Perm.cycle_string`).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Perm:
    """A bijection on ``{1..size}`` stored as the tuple of images."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        m = tuple(int(x) for x in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError(f"not a permutation of 1..{len(m)}: {m}")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, size: int) -> Perm:
        return cls(tuple(range(1, size + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], size: int) -> Perm:
        """Build from disjoint cycles; elements not mentioned are fixed."""
        img = list(range(size + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 1 <= x <= size:
                    raise ValueError(f"cycle element {x} outside 1..{size}")
                if x in seen:
                    raise ValueError(f"element {x} appears in two cycles")
                seen.add(x)
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img[1:]))

    @property
    def size(self) -> int:
        return len(self.mapping)

    def __call__(self, s: int) -> int:
        return self.mapping[s - 1]

    def apply_inverse(self, s: int) -> int:
        return self._inverse_map[s - 1]

    @cached_property
    def _inverse_map(self) -> tuple[int, ...]:
        inv = [0] * self.size
        for i, x in enumerate(self.mapping):
            inv[x - 1] = i + 1
        return tuple(inv)

    def inverse(self) -> Perm:
        return Perm(self._inverse_map)

    def compose(self, other: Perm) -> Perm:
        """``self * other``: apply ``other`` first, then ``self``."""
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Perm(tuple(self(other(s)) for s in range(1, self.size + 1)))

    __mul__ = compose

    def power(self, k: int) -> Perm:
        if k < 0:
            return self.inverse().power(-k)
        out = list(range(1, self.size + 1))
        for _ in range(k % self.order if self.order else 0):
            out = [self(x) for x in out]
        return Perm(tuple(out))

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self.mapping))

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Disjoint cycles (fixed points included), each starting at its minimum."""
        seen = [False] * (self.size + 1)
        out = []
        for s in range(1, self.size + 1):
            if seen[s]:
                continue
            cyc = [s]
            seen[s] = True
            x = self(s)
            while x != s:
                cyc.append(x)
                seen[x] = True
                x = self(x)
            out.append(tuple(cyc))
        return tuple(out)

    @cached_property
    def cycle_lengths(self) -> tuple[int, ...]:
        """``cycle_lengths[s-1]`` is the length of the cycle through ``s``."""
        lens = [0] * self.size
        for cyc in self.cycles:
            for x in cyc:
                lens[x - 1] = len(cyc)
        return tuple(lens)

    @cached_property
    def order(self) -> int:
        from math import lcm

        return lcm(*self.cycle_lengths) if self.size else 1

    def cycle_string(self, show_fixed: bool = False) -> str:
        parts = [c for c in self.cycles if show_fixed or len(c) > 1]
        if not parts:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in parts)

    def nontrivial_cycles(self) -> list[list[int]]:
        return [list(c) for c in self.cycles if len(c) > 1]

    def __str__(self) -> str:
        return self.cycle_string()


@dataclass(frozen=True)
class CycleStructure:
    """Multiplicities ``{length: count}`` of the cycles of a permutation."""

    counts: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, counts: dict[int, int]) -> CycleStructure:
        return cls(tuple(sorted((int(k), int(v)) for k, v in counts.items() if v > 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def degree(self) -> int:
        return sum(length * mult for length, mult in self.counts)

    def lengths(self) -> list[int]:
        return [length for length, _ in self.counts]

    def __str__(self) -> str:
        # descending lengths, exponent omitted when 1: "3^2 1"
        terms = []
        for length, mult in sorted(self.counts, reverse=True):
            terms.append(str(length) if mult == 1 else f"{length}^{mult}")
        return " ".join(terms)


def cycle_structure(p: Perm) -> CycleStructure:
    return CycleStructure.from_dict(Counter(len(c) for c in p.cycles))


def cycle_length_at(p: Perm, s: int) -> int:
    if not 1 <= s <= p.size:
        raise ValueError(f"symbol {s} outside 1..{p.size}")
    return p.cycle_lengths[s - 1]


def conjugation_witness(p1: Perm, p2: Perm) -> Perm | None:
    """Return ``q`` with ``p2 == q * p1 * q^-1``, or ``None`` if not conjugate.

    Cycles of each permutation are sorted by (length, smallest element) and
    matched in that order, so the witness is deterministic.
    """
    if p1.size != p2.size:
        raise ValueError("size mismatch")
    if cycle_structure(p1) != cycle_structure(p2):
        return None
    key = lambda c: (len(c), c[0])  # noqa: E731
    img = [0] * (p1.size + 1)
    for c1, c2 in zip(sorted(p1.cycles, key=key), sorted(p2.cycles, key=key)):
        for x, y in zip(c1, c2):
            img[x] = y
    return Perm(tuple(img[1:]))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, size: int) -> Perm:
    """Parse ``"(1 2)(3 4)"``; commas are accepted as separators too.

    ``Id`` (or an empty string) denotes the identity.
    A separator-free body such as ``(123)`` is read digit by digit, which is
    only unambiguous for ``size <= 9``.
    """
    text = text.strip()
    if text.lower() in ("id", "e", "()"):
        return Perm.identity(size)
    if text and _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        elems = body.replace(",", " ").split()
        if len(elems) == 1 and len(elems[0]) > 1 and size <= 9:
            elems = list(elems[0])
        if elems:
            cycles.append([int(e) for e in elems])
    return Perm.from_cycles(cycles, size)

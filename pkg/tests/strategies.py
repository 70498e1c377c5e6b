"""Hypothesis generators shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from latingame.board import Board, Shape
from latingame.game import GameConfig, Variant
from latingame.perm import Perm
from latingame.symmetry import Isotopism, is_extendable


@st.composite
def perms(draw, size=None, max_size=7):
    m = size if size is not None else draw(st.integers(1, max_size))
    img = draw(st.permutations(list(range(1, m + 1))))
    return Perm(tuple(img))


@st.composite
def isotopisms(draw, max_dim=4, max_d=2, min_d=2):
    d = draw(st.integers(min_d, max_d))
    dims = tuple(draw(st.integers(1, max_dim)) for _ in range(d))
    n = draw(st.integers(max(dims), max_dim))
    rows = tuple(draw(perms(k)) for k in dims)
    return Isotopism(Shape(dims, n), rows, draw(perms(n)))


@st.composite
def principal_isotopisms(draw, max_dim=6):
    dims = (draw(st.integers(1, max_dim)), draw(st.integers(1, max_dim)))
    n = max(dims)
    rows = tuple(draw(perms(k)) for k in dims)
    return Isotopism(Shape(dims, n), rows, Perm.identity(n))


@st.composite
def latin_boards(draw, shape: Shape, fill=0.6):
    """Random partial Latin board on ``shape``, filled greedily."""
    cells = [0] * shape.size
    for i in draw(st.permutations(list(range(shape.size)))):
        if not draw(st.booleans()):
            continue
        c = shape.cell(i)
        used = {cells[shape.index(y)] for y in shape.neighbours(c)}
        options = [v for v in range(1, shape.n + 1) if v not in used]
        if options:
            cells[i] = draw(st.sampled_from(options))
    return Board(shape, tuple(cells), shape.n)


@st.composite
def games(draw, max_dim=3, max_palette_extra=2):
    t = draw(isotopisms(max_dim=max_dim).filter(is_extendable))
    palette = t.shape.n + draw(st.integers(0, max_palette_extra))
    a, b = draw(st.integers(1, 2)), draw(st.integers(1, 2))
    first = draw(st.sampled_from(["A", "B"]))
    variant = draw(st.sampled_from([Variant.STANDARD, Variant.FIRST_TRY]))
    return GameConfig(t, palette, a, b, first, variant)

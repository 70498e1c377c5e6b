from __future__ import annotations

import itertools
import json
import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latingame.board import Board, Shape, is_member, plh_census, validate_latin
from latingame.perm import Perm
from latingame.symmetry import (
    IncompatibleEntryError,
    Isotopism,
    cell_orbit,
    entry_closure,
    is_extendable,
    is_feasible,
    isotopism_conjugation_witness,
    lcm_compatible,
    natural_extension,
    orbit_partition,
)

from strategies import isotopisms, perms, principal_isotopisms

THREE_ORBITS = Isotopism.from_strings((3, 4), 4, "(1 2)(3)", "(1 2 3 4)", "(1 2 3 4)")


def lcm_compatible_oracle(t):
    full = math.lcm(*t)
    return all(math.lcm(*sub) == full for sub in itertools.combinations(t, len(t) - 1))


def test_lcm_compatible_examples():
    assert lcm_compatible((1, 2, 4, 4))
    assert not lcm_compatible((3, 2))
    assert lcm_compatible((1, 1, 1))
    assert lcm_compatible((2, 3, 6, 3))
    with pytest.raises(ValueError):
        lcm_compatible((3,))


@given(st.lists(st.integers(1, 12), min_size=2, max_size=5))
def test_lcm_compatible_matches_oracle(t):
    assert lcm_compatible(tuple(t)) == lcm_compatible_oracle(t)


def test_cell_orbit_examples():
    assert set(cell_orbit(THREE_ORBITS, (1, 1))) == {(1, 1), (2, 2), (1, 3), (2, 4)}
    assert set(cell_orbit(THREE_ORBITS, (3, 1))) == {(3, 1), (3, 2), (3, 3), (3, 4)}
    assert cell_orbit(Isotopism.trivial((2, 3), 3), (2, 2)) == [(2, 2)]


def test_orbit_partition_examples():
    assert orbit_partition(THREE_ORBITS).sizes() == [4, 4, 4]
    assert orbit_partition(Isotopism.trivial((2, 2), 2)).sizes() == [1, 1, 1, 1]
    t = Isotopism.from_strings((3, 6), 6, "(1 2 3)", "(1 2 3)(4 5 6)", "Id")
    assert orbit_partition(t).sizes() == [3] * 6


def test_orbit_status():
    part = THREE_ORBITS.orbits
    p3 = Board.from_rows([[1, 0, 3, 0], [0, 2, 0, 4], [2, 3, 4, 1]], 4)
    p2 = Board.from_rows([[0, 0, 2, 0], [0, 1, 0, 3], [1, 2, 0, 0]], 4)
    assert [part.status(p3, i) for i in range(3)] == ["complete", "symbol-free", "complete"]
    assert part.status(p2, 0) == "marked"


@given(isotopisms(max_dim=4, max_d=3))
def test_orbits_partition_cells(t):
    part = t.orbits
    assert sum(part.sizes()) == t.shape.size
    # oracle: weakly connected components of the functional graph c -> step(c)
    g = nx.DiGraph()
    g.add_nodes_from(t.shape.cells())
    g.add_edges_from((c, t.step(c)) for c in t.shape.cells())
    oracle = {frozenset(comp) for comp in nx.weakly_connected_components(g)}
    assert {frozenset(o) for o in part.orbits} == oracle
    for orb in part.orbits:
        assert len(orb) == t.cell_period(orb[0])
        for c in orb:
            assert set(cell_orbit(t, c)) == set(orb)
    firsts = [min(o) for o in part.orbits]
    assert firsts == sorted(firsts)


def test_entry_closure_examples():
    closure = entry_closure(THREE_ORBITS, (1, 1, 1))
    assert {(e.cell, e.symbol) for e in closure} == {((1, 1), 1), ((2, 2), 2), ((1, 3), 3), ((2, 4), 4)}
    with pytest.raises(IncompatibleEntryError):
        entry_closure(Isotopism.from_strings((2, 2), 2, "(1 2)", "Id", "Id"), (1, 1, 1))
    triv = Isotopism.trivial((2, 2), 2)
    assert {(e.cell, e.symbol) for e in entry_closure(triv, (1, 2, 2))} == {((1, 2), 2)}


def test_feasibility_examples():
    big = Isotopism.from_strings(
        (6, 6, 6), 6, "(1 2)(3 4)(5 6)", "(1 2 3)(4 5 6)", "(1 2 3 4 5 6)", "(1 2 3)(4 5)(6)"
    )
    assert is_feasible(big)
    assert not is_feasible(Isotopism.from_strings((2, 2), 2, "(1 2)", "Id", "Id"))
    assert is_feasible(Isotopism.trivial((3, 3), 3))


def test_extension_examples():
    t2 = Isotopism.from_strings((2, 2), 2, "(1 2)", "(1 2)", "(1 2)")
    ext = natural_extension(t2, 3)
    assert ext.sym_perm == Perm.from_cycles([[1, 2]], 3)
    assert ext.sym_perm.cycle_lengths[2] == 1
    assert natural_extension(t2, 2) == t2
    assert natural_extension(Isotopism.trivial((2, 2), 2), 4).is_trivial()
    with pytest.raises(ValueError):
        natural_extension(t2, 1)


def test_extendability_examples():
    assert is_extendable(Isotopism.from_strings((2, 4), 3, "(1 2)", "(1 2)(3 4)", "(1 2)(3)"))
    assert not is_extendable(Isotopism.from_strings((3, 4), 6, "(1 2 3)", "(1 2)(3 4)", "(1 2 3 4 5 6)"))
    assert is_extendable(
        Isotopism.from_strings((3, 4, 6), 5, "(1 2 3)", "(1 2)(3 4)", "(1 2 3 4 5 6)", "(1 2 3)(4 5)")
    )


def extendable_oracle(t: Isotopism, up_to: int = 4) -> bool:
    """Extendable means every natural extension is feasible; check a few sizes."""
    return all(is_feasible(natural_extension(t, t.shape.n + k)) for k in range(up_to))


@given(isotopisms(max_dim=4, max_d=3))
def test_extendable_matches_definition(t):
    assert is_extendable(t) == extendable_oracle(t)
    if is_extendable(t):
        assert is_feasible(t)


@given(principal_isotopisms(max_dim=6))
def test_feasible_principal_is_extendable(t):
    if is_feasible(t):
        assert is_extendable(t)


@given(isotopisms(max_dim=3), st.integers(0, 3))
def test_feasible_extension_implies_feasible_base(t, k):
    if is_feasible(natural_extension(t, t.shape.n + k)):
        assert is_feasible(t)


def test_entry_closure_iff_lcm_compatible_exhaustive():
    for dims, n in (((2, 2), 2), ((2, 4), 4), ((3, 3), 3), ((4, 4), 4)):
        for rows in itertools.product(*(_class_reps(k) for k in dims)):
            for sym in _class_reps(n):
                t = Isotopism(Shape(dims, n), rows, sym)
                for cell in t.shape.cells():
                    for s in range(1, n + 1):
                        lens = t.cell_cycle_lengths(cell) + (t.symbol_cycle_length(s),)
                        if lcm_compatible_oracle(lens):
                            closure = entry_closure(t, (*cell, s))
                            b = Board.from_entries(t.shape, closure)
                            assert validate_latin(b) and is_member(b, t)
                        else:
                            with pytest.raises(IncompatibleEntryError):
                                entry_closure(t, (*cell, s))


def _class_reps(m: int) -> list[Perm]:
    """One permutation per cycle structure of S_m, built from consecutive blocks."""
    out = []

    def partitions(k, largest):
        if k == 0:
            yield []
            return
        for x in range(min(k, largest), 0, -1):
            for rest in partitions(k - x, x):
                yield [x] + rest

    for parts in partitions(m, m):
        cycles, start = [], 1
        for x in parts:
            cycles.append(list(range(start, start + x)))
            start += x
        out.append(Perm.from_cycles(cycles, m))
    return out


@pytest.mark.parametrize("dims,n", [((2, 2), 2), ((2, 3), 3), ((3, 3), 3), ((1, 3), 3)])
def test_nonempty_iff_some_entry_closes(dims, n):
    for rows in itertools.product(*(_class_reps(k) for k in dims)):
        for sym in _class_reps(n):
            t = Isotopism(Shape(dims, n), rows, sym)
            closes = False
            for cell in t.shape.cells():
                for s in range(1, n + 1):
                    try:
                        closure = entry_closure(t, (*cell, s))
                    except IncompatibleEntryError:
                        continue
                    b = Board.from_entries(t.shape, closure)
                    closes |= validate_latin(b) and is_member(b, t)
            assert (plh_census(t) > 0) == closes, str(t)


@given(isotopisms(max_dim=3), st.data())
def test_conjugation_witness_for_isotopisms(t, data):
    q = Isotopism(
        t.shape,
        tuple(data.draw(perms(k)) for k in t.shape.dims),
        data.draw(perms(t.shape.n)),
    )
    u = t.conjugate_by(q)
    w = isotopism_conjugation_witness(t, u)
    assert w is not None and t.conjugate_by(w) == u
    assert u.cycle_structure() == t.cycle_structure()
    assert is_feasible(u) == is_feasible(t) and is_extendable(u) == is_extendable(t)


def test_json_roundtrip():
    data = THREE_ORBITS.to_json()
    assert data == {"dims": [3, 4], "n": 4, "perms": [[[1, 2]], [[1, 2, 3, 4]], [[1, 2, 3, 4]]]}
    assert Isotopism.from_json(json.dumps(data)) == THREE_ORBITS
    ext = natural_extension(THREE_ORBITS, 6)
    assert Isotopism.from_json(ext.to_json()) == ext


def test_isotopism_validation():
    with pytest.raises(ValueError):
        Isotopism.from_strings((3, 4), 4, "(1 2)", "(1 2)")
    with pytest.raises(ValueError):
        Isotopism(Shape((2, 2), 3), (Perm.identity(2), Perm.identity(3)), Perm.identity(3))
    with pytest.raises(ValueError):
        Shape((0, 2), 2)

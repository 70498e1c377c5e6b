"""Lookup tables for the search kernels and backend selection.

The compiled backend (``_ckernel``) is used when it was built; otherwise, or
when ``LGL_KERNEL=python`` is set, the pure-Python ``_pykernel`` is used.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernel
from .symmetry import lcm_compatible

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = {"python": _pykernel}
if _ckernel is not None:
    BACKENDS["compiled"] = _ckernel

_requested = os.environ.get("LGL_KERNEL", "").lower()
if _requested and _requested not in BACKENDS:
    raise ImportError(f"LGL_KERNEL={_requested!r} is not available; have {sorted(BACKENDS)}")
BACKEND = _requested or ("compiled" if _ckernel is not None else "python")


def _csr(rows: list[list[tuple[int, ...]]], width: int) -> tuple[np.ndarray, ...]:
    ptr = np.zeros(len(rows) + 1, dtype=np.int32)
    cols = [[] for _ in range(width)]
    for i, row in enumerate(rows):
        ptr[i + 1] = ptr[i] + len(row)
        for item in row:
            for j in range(width):
                cols[j].append(item[j])
    return (ptr,) + tuple(np.asarray(c, dtype=np.int32) for c in cols)


@dataclass
class HammingTables:
    ncell: int
    ncol: int
    standard: int
    qa: int
    qb: int
    nbr_ptr: np.ndarray
    nbr: np.ndarray
    mate_ptr: np.ndarray
    mate_cell: np.ndarray
    mate_k: np.ndarray
    r3_ptr: np.ndarray
    r3_cell: np.ndarray
    r3_m: np.ndarray
    spow: np.ndarray
    c1ok: np.ndarray
    relabel_order: np.ndarray


def hamming_tables(config, extension_symmetry: bool = False) -> HammingTables:
    """Compile the Latin, orbit-consistency and lookahead rules of ``config`` into flat arrays.

    Colour relabelling is always on for principal Θ (every colour bijection is
    a game automorphism).  Otherwise only the extension symbols, which Θ' fixes,
    may be relabelled, and only when ``extension_symmetry`` is set.
    """
    from .game import Variant

    t = config.theta_ext
    shape = t.shape
    ncol = config.palette
    sym = t.sym_perm
    cells = [shape.cell(i) for i in range(shape.size)]
    mates, r3 = [], []
    max_period = 1
    for c in cells:
        period = t.cell_period(c)
        max_period = max(max_period, period)
        row_m, row_r = [], []
        x = c
        for k in range(1, period):
            x = t.step(x)
            row_m.append((shape.index(x), k))
            row_r.extend((shape.index(y), k) for y in shape.neighbours(x))
        mates.append(row_m)
        r3.append(row_r)
    nbr_ptr, nbr = _csr([[(y,) for y in row] for row in shape.neighbour_index], 1)
    mate_ptr, mate_cell, mate_k = _csr(mates, 2)
    r3_ptr, r3_cell, r3_m = _csr(r3, 2)
    spow = np.zeros((max_period + 1) * (ncol + 1), dtype=np.int32)
    for v in range(1, ncol + 1):
        w = v
        for k in range(max_period + 1):
            spow[k * (ncol + 1) + v] = w
            w = sym(w)
    c1ok = np.zeros(shape.size * (ncol + 1), dtype=np.uint8)
    for i, c in enumerate(cells):
        lens = t.cell_cycle_lengths(c)
        for v in range(1, ncol + 1):
            c1ok[i * (ncol + 1) + v] = lcm_compatible(lens + (sym.cycle_lengths[v - 1],))
    if t.is_principal():
        relabel = list(range(1, ncol + 1))
    elif extension_symmetry:
        relabel = list(range(shape.n + 1, ncol + 1))
    else:
        relabel = []
    if shape.size + 2 > 255:
        raise ValueError("board too large for the search key encoding")
    return HammingTables(
        ncell=shape.size,
        ncol=ncol,
        standard=int(config.variant is Variant.STANDARD),
        qa=config.a,
        qb=config.b,
        nbr_ptr=nbr_ptr,
        nbr=nbr,
        mate_ptr=mate_ptr,
        mate_cell=mate_cell,
        mate_k=mate_k,
        r3_ptr=r3_ptr,
        r3_cell=r3_cell,
        r3_m=r3_m,
        spow=spow,
        c1ok=c1ok,
        relabel_order=np.asarray(relabel, dtype=np.uint8),
    )


@dataclass
class GraphTables:
    nv: int
    ncol: int
    qa: int
    qb: int
    nbr_ptr: np.ndarray
    nbr: np.ndarray
    weight: np.ndarray


def graph_tables(config) -> GraphTables:
    g = config.graph
    nbr_ptr, nbr = _csr([[(y,) for y in g.neighbours(v)] for v in range(g.n)], 1)
    if sum(g.weights) > 255:
        raise ValueError("total weight too large for the search key encoding")
    return GraphTables(
        nv=g.n,
        ncol=config.colours,
        qa=config.a,
        qb=config.b,
        nbr_ptr=nbr_ptr,
        nbr=nbr,
        weight=np.asarray(g.weights, dtype=np.int32),
    )


def hamming_kernel(config, budget: int, backend: str | None = None, extension_symmetry: bool = False):
    mod = BACKENDS[backend or BACKEND]
    return mod.HammingKernel(hamming_tables(config, extension_symmetry), int(budget))


def graph_kernel(config, budget: int, backend: str | None = None):
    mod = BACKENDS[backend or BACKEND]
    return mod.GraphKernel(graph_tables(config), int(budget))

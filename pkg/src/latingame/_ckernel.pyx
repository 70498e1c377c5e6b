# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.

Mirrors ``_pykernel`` exactly; both consume the tables built in ``kernel.py``.
Colours are bit positions in a 64-bit mask, so palettes are capped at 62.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.string cimport memset

from latingame.errors import BudgetExceeded

DEF MAXCELL = 128
DEF MAXCOL = 62

ctypedef unsigned long long u64


cdef inline int _lowbit(u64 x):
    cdef int i = 0
    while not (x >> i) & 1:
        i += 1
    return i


cdef class HammingKernel:
    """Exact solver for the Θ-stabilized game over a flat board."""

    cdef int ncell, ncol, stride, standard
    cdef int qa, qb
    cdef int[::1] nbr_ptr, nbr
    cdef int[::1] mate_ptr, mate_cell, mate_k
    cdef int[::1] r3_ptr, r3_cell, r3_m
    cdef int[::1] spow
    cdef unsigned char[::1] c1ok
    cdef u64 relabel_mask
    cdef unsigned char[::1] relabel_order
    cdef int nrelabel
    cdef public dict table
    cdef public long long nodes
    cdef public long long budget

    def __init__(self, tables, long long budget):
        self.ncell = tables.ncell
        self.ncol = tables.ncol
        if self.ncell > MAXCELL or self.ncol > MAXCOL:
            raise ValueError("board too large for the compiled kernel")
        self.stride = self.ncol + 1
        self.standard = tables.standard
        self.qa = tables.qa
        self.qb = tables.qb
        self.nbr_ptr = tables.nbr_ptr
        self.nbr = tables.nbr
        self.mate_ptr = tables.mate_ptr
        self.mate_cell = tables.mate_cell
        self.mate_k = tables.mate_k
        self.r3_ptr = tables.r3_ptr
        self.r3_cell = tables.r3_cell
        self.r3_m = tables.r3_m
        self.spow = tables.spow
        self.c1ok = tables.c1ok
        self.relabel_order = tables.relabel_order
        self.nrelabel = len(tables.relabel_order)
        self.relabel_mask = 0
        cdef int i
        for i in range(self.nrelabel):
            self.relabel_mask |= (<u64>1) << tables.relabel_order[i]
        self.table = {}
        self.nodes = 0
        self.budget = budget

    cdef inline bint _legal(self, unsigned char* board, int c, int v):
        cdef int i, x
        if not self.c1ok[c * self.stride + v]:
            return 0
        for i in range(self.nbr_ptr[c], self.nbr_ptr[c + 1]):
            if board[self.nbr[i]] == v:
                return 0
        for i in range(self.mate_ptr[c], self.mate_ptr[c + 1]):
            x = board[self.mate_cell[i]]
            if x and x != self.spow[self.mate_k[i] * self.stride + v]:
                return 0
        if self.standard:
            for i in range(self.r3_ptr[c], self.r3_ptr[c + 1]):
                if board[self.r3_cell[i]] == self.spow[self.r3_m[i] * self.stride + v]:
                    return 0
        return 1

    cdef inline u64 _mask(self, unsigned char* board, int c):
        cdef u64 m = 0
        cdef int v
        for v in range(1, self.ncol + 1):
            if self._legal(board, c, v):
                m |= (<u64>1) << v
        return m

    cdef bytes _key(self, unsigned char* board, int to_move, int remaining):
        cdef unsigned char buf[MAXCELL + 2]
        cdef unsigned char lab[MAXCOL + 1]
        cdef int i, x, nxt = 0
        memset(lab, 0, sizeof(lab))
        for i in range(self.ncell):
            x = board[i]
            if x and (self.relabel_mask >> x) & 1:
                if not lab[x]:
                    lab[x] = self.relabel_order[nxt]
                    nxt += 1
                x = lab[x]
            buf[i] = x
        buf[self.ncell] = to_move
        buf[self.ncell + 1] = remaining
        return PyBytes_FromStringAndSize(<char*>buf, self.ncell + 2)

    cdef int _search(self, unsigned char* board, int empties, int to_move, int remaining) except -1:
        # returns 1 when Alice wins under optimal play
        cdef u64 masks[MAXCELL]
        cdef u64 used = 0, fresh, first_fresh, m
        cdef int c, v, result, child, nxt_player, nxt_rem, q
        if empties == 0:
            return 1
        key = self._key(board, to_move, remaining)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        for c in range(self.ncell):
            if board[c]:
                used |= (<u64>1) << board[c]
        fresh = self.relabel_mask & ~used
        first_fresh = fresh & (~fresh + 1)
        for c in range(self.ncell):
            if board[c]:
                masks[c] = 0
                continue
            m = self._mask(board, c)
            if m == 0:
                self.table[key] = 0
                return 0
            masks[c] = (m & ~fresh) | (m & first_fresh)
        result = 0 if to_move == 0 else 1
        for c in range(self.ncell):
            m = masks[c]
            while m:
                v = _lowbit(m)
                m &= m - 1
                board[c] = v
                if remaining > 1:
                    nxt_player, nxt_rem = to_move, remaining - 1
                else:
                    nxt_player = 1 - to_move
                    q = self.qa if nxt_player == 0 else self.qb
                    nxt_rem = q if q < empties - 1 else empties - 1
                child = self._search(board, empties - 1, nxt_player, nxt_rem)
                board[c] = 0
                if to_move == 0 and child:
                    result = 1
                    break
                if to_move == 1 and not child:
                    result = 0
                    break
            else:
                continue
            break
        self.table[key] = result
        return result

    def wins(self, board, int to_move, int remaining):
        """Alice-wins flag for ``board`` (sequence of ints, 0 = empty)."""
        cdef unsigned char buf[MAXCELL]
        cdef int i, empties = 0
        if len(board) != self.ncell:
            raise ValueError("board size mismatch")
        for i in range(self.ncell):
            buf[i] = board[i]
            if not board[i]:
                empties += 1
        return bool(self._search(buf, empties, to_move, remaining))

    def legal(self, board, int c):
        cdef unsigned char buf[MAXCELL]
        cdef int i
        for i in range(self.ncell):
            buf[i] = board[i]
        return [v for v in range(1, self.ncol + 1) if self._legal(buf, c, v)]

    def dead(self, board):
        """True iff some empty cell has no legal colour."""
        cdef unsigned char buf[MAXCELL]
        cdef int i
        for i in range(self.ncell):
            buf[i] = board[i]
        for i in range(self.ncell):
            if not buf[i] and self._mask(buf, i) == 0:
                return True
        return False


cdef class GraphKernel:
    """Exact solver for the modified (weighted, passing) colouring game."""

    cdef int nv, ncol, qa, qb
    cdef int[::1] nbr_ptr, nbr, weight
    cdef public dict table
    cdef public long long nodes
    cdef public long long budget

    def __init__(self, tables, long long budget):
        self.nv = tables.nv
        self.ncol = tables.ncol
        if self.nv > MAXCELL or self.ncol > MAXCOL:
            raise ValueError("graph too large for the compiled kernel")
        self.qa = tables.qa
        self.qb = tables.qb
        self.nbr_ptr = tables.nbr_ptr
        self.nbr = tables.nbr
        self.weight = tables.weight
        self.table = {}
        self.nodes = 0
        self.budget = budget

    cdef bytes _key(self, unsigned char* col, int pool, int to_move, int remaining):
        cdef unsigned char buf[MAXCELL + 4]
        cdef unsigned char lab[MAXCOL + 1]
        cdef int i, x, nxt = 1
        memset(lab, 0, sizeof(lab))
        for i in range(self.nv):
            x = col[i]
            if x:
                if not lab[x]:
                    lab[x] = nxt
                    nxt += 1
                x = lab[x]
            buf[i] = x
        buf[self.nv] = pool & 0xFF
        buf[self.nv + 1] = pool >> 8
        buf[self.nv + 2] = to_move
        buf[self.nv + 3] = remaining
        return PyBytes_FromStringAndSize(<char*>buf, self.nv + 4)

    cdef inline u64 _mask(self, unsigned char* col, int v):
        cdef u64 blocked = 0
        cdef int i
        for i in range(self.nbr_ptr[v], self.nbr_ptr[v + 1]):
            blocked |= (<u64>1) << col[self.nbr[i]]
        return ((((<u64>1) << (self.ncol + 1)) - 2)) & ~blocked

    cdef int _search(self, unsigned char* col, int uncoloured, int pool, int u,
                     int to_move, int remaining) except -1:
        cdef u64 masks[MAXCELL]
        cdef u64 used = 0, fresh, first_fresh, m
        cdef int v, c, result, child, nxt_player, nxt_rem, q
        if uncoloured == 0:
            return 1
        key = self._key(col, pool, to_move, remaining)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        for v in range(self.nv):
            if col[v]:
                used |= (<u64>1) << col[v]
        fresh = ((((<u64>1) << (self.ncol + 1)) - 2)) & ~used
        first_fresh = fresh & (~fresh + 1)
        for v in range(self.nv):
            if col[v]:
                masks[v] = 0
                continue
            m = self._mask(col, v)
            if m == 0:
                self.table[key] = 0
                return 0
            masks[v] = (m & ~fresh) | (m & first_fresh)
        result = 0 if to_move == 0 else 1
        if remaining > 1:
            nxt_player, nxt_rem = to_move, remaining - 1
        else:
            nxt_player = 1 - to_move
            q = self.qa if nxt_player == 0 else self.qb
            nxt_rem = q if q < u - 1 else u - 1
        # a pass first: it is the cheapest move to refute
        if pool > 0:
            child = self._search(col, uncoloured, pool - 1, u - 1, nxt_player, nxt_rem)
            if (to_move == 0 and child) or (to_move == 1 and not child):
                self.table[key] = child
                return child
        for v in range(self.nv):
            m = masks[v]
            while m:
                c = _lowbit(m)
                m &= m - 1
                col[v] = c
                child = self._search(col, uncoloured - 1, pool + self.weight[v] - 1, u - 1,
                                     nxt_player, nxt_rem)
                col[v] = 0
                if to_move == 0 and child:
                    result = 1
                    break
                if to_move == 1 and not child:
                    result = 0
                    break
            else:
                continue
            break
        self.table[key] = result
        return result

    def wins(self, colours, int pool, int to_move, int remaining):
        cdef unsigned char buf[MAXCELL]
        cdef int i, unc = 0, u = pool
        if len(colours) != self.nv:
            raise ValueError("colouring size mismatch")
        for i in range(self.nv):
            buf[i] = colours[i]
            if not colours[i]:
                unc += 1
                u += self.weight[i]
        return bool(self._search(buf, unc, pool, u, to_move, remaining))

"""Pure-Python search kernels; same algorithm and tables as ``_ckernel.pyx``."""

from __future__ import annotations

import sys

from .errors import BudgetExceeded


class HammingKernel:
    def __init__(self, tables, budget: int) -> None:
        self.ncell = tables.ncell
        self.ncol = tables.ncol
        self.stride = self.ncol + 1
        self.standard = bool(tables.standard)
        self.qa, self.qb = tables.qa, tables.qb
        self.c1ok = [int(x) for x in tables.c1ok]
        self.spow = [int(x) for x in tables.spow]
        self.relabel_order = [int(x) for x in tables.relabel_order]
        self.relabel_mask = 0
        for x in self.relabel_order:
            self.relabel_mask |= 1 << x

        def csr(ptr, *cols):
            ptr = [int(x) for x in ptr]
            cols = [[int(x) for x in c] for c in cols]
            return [list(zip(*(c[ptr[i] : ptr[i + 1]] for c in cols))) for i in range(self.ncell)]

        self.nbrs = [[y for (y,) in row] for row in csr(tables.nbr_ptr, tables.nbr)]
        self.mates = csr(tables.mate_ptr, tables.mate_cell, tables.mate_k)
        self.r3 = csr(tables.r3_ptr, tables.r3_cell, tables.r3_m)
        self.table: dict[bytes, int] = {}
        self.nodes = 0
        self.budget = budget
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))

    def _legal(self, board: bytearray, c: int, v: int) -> bool:
        stride, spow = self.stride, self.spow
        if not self.c1ok[c * stride + v]:
            return False
        for y in self.nbrs[c]:
            if board[y] == v:
                return False
        for x, k in self.mates[c]:
            w = board[x]
            if w and w != spow[k * stride + v]:
                return False
        if self.standard:
            for y, m in self.r3[c]:
                if board[y] == spow[m * stride + v]:
                    return False
        return True

    def _mask(self, board: bytearray, c: int) -> int:
        m = 0
        for v in range(1, self.ncol + 1):
            if self._legal(board, c, v):
                m |= 1 << v
        return m

    def _key(self, board: bytearray, to_move: int, remaining: int) -> bytes:
        lab: dict[int, int] = {}
        out = bytearray(board)
        rmask, order = self.relabel_mask, self.relabel_order
        for i, x in enumerate(board):
            if x and (rmask >> x) & 1:
                if x not in lab:
                    lab[x] = order[len(lab)]
                out[i] = lab[x]
        out.append(to_move)
        out.append(remaining)
        return bytes(out)

    def _search(self, board: bytearray, empties: int, to_move: int, remaining: int) -> int:
        if empties == 0:
            return 1
        key = self._key(board, to_move, remaining)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        used = 0
        for x in board:
            used |= 1 << x
        fresh = self.relabel_mask & ~used
        first_fresh = fresh & -fresh
        masks = []
        for c in range(self.ncell):
            if board[c]:
                continue
            m = self._mask(board, c)
            if m == 0:
                self.table[key] = 0
                return 0
            masks.append((c, (m & ~fresh) | (m & first_fresh)))
        if remaining > 1:
            nxt_player, nxt_rem = to_move, remaining - 1
        else:
            nxt_player = 1 - to_move
            nxt_rem = min(self.qa if nxt_player == 0 else self.qb, empties - 1)
        result = 0 if to_move == 0 else 1
        for c, m in masks:
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                board[c] = v
                child = self._search(board, empties - 1, nxt_player, nxt_rem)
                board[c] = 0
                if child == (to_move == 0):
                    self.table[key] = child
                    return child
        self.table[key] = result
        return result

    def wins(self, board, to_move: int, remaining: int) -> bool:
        if len(board) != self.ncell:
            raise ValueError("board size mismatch")
        buf = bytearray(board)
        return bool(self._search(buf, buf.count(0), to_move, remaining))

    def legal(self, board, c: int) -> list[int]:
        buf = bytearray(board)
        return [v for v in range(1, self.ncol + 1) if self._legal(buf, c, v)]

    def dead(self, board) -> bool:
        buf = bytearray(board)
        return any(not buf[c] and self._mask(buf, c) == 0 for c in range(self.ncell))


class GraphKernel:
    def __init__(self, tables, budget: int) -> None:
        self.nv = tables.nv
        self.ncol = tables.ncol
        self.qa, self.qb = tables.qa, tables.qb
        ptr, nbr = [int(x) for x in tables.nbr_ptr], [int(x) for x in tables.nbr]
        self.nbrs = [nbr[ptr[i] : ptr[i + 1]] for i in range(self.nv)]
        self.weight = [int(x) for x in tables.weight]
        self.all_colours = ((1 << (self.ncol + 1)) - 2)
        self.table: dict[bytes, int] = {}
        self.nodes = 0
        self.budget = budget
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))

    def _key(self, col: bytearray, pool: int, to_move: int, remaining: int) -> bytes:
        lab: dict[int, int] = {}
        out = bytearray(col)
        for i, x in enumerate(col):
            if x:
                if x not in lab:
                    lab[x] = len(lab) + 1
                out[i] = lab[x]
        out += bytes((pool & 0xFF, pool >> 8, to_move, remaining))
        return bytes(out)

    def _mask(self, col: bytearray, v: int) -> int:
        blocked = 0
        for y in self.nbrs[v]:
            blocked |= 1 << col[y]
        return self.all_colours & ~blocked

    def _search(self, col: bytearray, uncoloured: int, pool: int, u: int, to_move: int, remaining: int) -> int:
        if uncoloured == 0:
            return 1
        key = self._key(col, pool, to_move, remaining)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        used = 0
        for x in col:
            used |= 1 << x
        fresh = self.all_colours & ~used
        first_fresh = fresh & -fresh
        masks = []
        for v in range(self.nv):
            if col[v]:
                continue
            m = self._mask(col, v)
            if m == 0:
                self.table[key] = 0
                return 0
            masks.append((v, (m & ~fresh) | (m & first_fresh)))
        if remaining > 1:
            nxt_player, nxt_rem = to_move, remaining - 1
        else:
            nxt_player = 1 - to_move
            nxt_rem = min(self.qa if nxt_player == 0 else self.qb, u - 1)
        want = 1 if to_move == 0 else 0
        if pool > 0:
            child = self._search(col, uncoloured, pool - 1, u - 1, nxt_player, nxt_rem)
            if child == want:
                self.table[key] = child
                return child
        for v, m in masks:
            while m:
                low = m & -m
                c = low.bit_length() - 1
                m ^= low
                col[v] = c
                child = self._search(col, uncoloured - 1, pool + self.weight[v] - 1, u - 1, nxt_player, nxt_rem)
                col[v] = 0
                if child == want:
                    self.table[key] = child
                    return child
        result = 1 - want
        self.table[key] = result
        return result

    def wins(self, colours, pool: int, to_move: int, remaining: int) -> bool:
        if len(colours) != self.nv:
            raise ValueError("colouring size mismatch")
        buf = bytearray(colours)
        unc = sum(1 for x in buf if not x)
        u = pool + sum(w for w, x in zip(self.weight, buf) if not x)
        return bool(self._search(buf, unc, pool, u, to_move, remaining))

"""Vertex-weighted graphs, reference constructions and the modified game.

Vertices are ``0..n-1`` internally and 1-based in JSON and move text.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

from .game import Outcome, Player
from .symmetry import Isotopism, is_feasible


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: frozenset[tuple[int, int]]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        edges = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            edges.add((min(u, v), max(u, v)))
        weights = tuple(int(w) for w in self.weights) if self.weights else (1,) * self.n
        if len(weights) != self.n or any(w < 1 for w in weights):
            raise ValueError("need one positive weight per vertex")
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], weights: Sequence[int] | None = None) -> WeightedGraph:
        return cls(n, frozenset(tuple(e) for e in edges), tuple(weights) if weights else (1,) * n)

    @cached_property
    def _adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def is_regular(self, k: int) -> bool:
        return all(self.degree(v) == k for v in range(self.n))

    def with_weights(self, weights: Sequence[int]) -> WeightedGraph:
        return WeightedGraph(self.n, self.edges, tuple(weights))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [[u + 1, v + 1] for u, v in sorted(self.edges)],
            "weights": list(self.weights),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> WeightedGraph:
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        edges = [(int(u) - 1, int(v) - 1) for u, v in data.get("edges", [])]
        return cls.from_edges(n, edges, data.get("weights"))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            lines.append(f'  {v + 1} [label="{v + 1} (w={self.weights[v]})"];')
        for u, v in sorted(self.edges):
            lines.append(f"  {u + 1} -- {v + 1};")
        lines.append("}")
        return "\n".join(lines)


# -- reference constructions ------------------------------------------------


def complete_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(m: int, n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)])


def cartesian(g1: WeightedGraph, g2: WeightedGraph) -> WeightedGraph:
    """G1 □ G2 on vertices ``(u1, u2) -> u1 * |G2| + u2``; unit weights."""
    n2 = g2.n
    edges = []
    for u1 in range(g1.n):
        for a, b in g2.edges:
            edges.append((u1 * n2 + a, u1 * n2 + b))
    for a, b in g1.edges:
        for u2 in range(n2):
            edges.append((a * n2 + u2, b * n2 + u2))
    return WeightedGraph.from_edges(g1.n * n2, edges)


def strong(g1: WeightedGraph, g2: WeightedGraph) -> WeightedGraph:
    """G1 ⊠ G2: the Cartesian edges plus pairs adjacent in both factors."""
    n2 = g2.n
    edges = set(cartesian(g1, g2).edges)
    for a, b in g1.edges:
        for c, d in g2.edges:
            edges.add((a * n2 + c, b * n2 + d))
            edges.add((a * n2 + d, b * n2 + c))
    return WeightedGraph.from_edges(g1.n * n2, edges)


def hamming(*dims: int) -> WeightedGraph:
    """K_{n_1} □ ... □ K_{n_d}, vertices in lexicographic cell order."""
    if not dims:
        raise ValueError("need at least one dimension")
    g = complete_graph(dims[0])
    for k in dims[1:]:
        g = cartesian(g, complete_graph(k))
    return g


def hypercube(d: int) -> WeightedGraph:
    return hamming(*([2] * d))


def hypercube_plus_diag(d: int) -> WeightedGraph:
    """H_d with an extra edge between every pair of antipodal vertices."""
    g = hypercube(d)
    top = 2**d - 1
    edges = set(g.edges) | {(min(i, top - i), max(i, top - i)) for i in range(2**d)}
    return WeightedGraph.from_edges(g.n, edges)


def replicate(g: WeightedGraph, weight: int) -> WeightedGraph:
    """G^{*l}: the same graph with every weight set to ``weight``."""
    return g.with_weights((weight,) * g.n)


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|[(),])")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse graph expression at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def build_reference_graph(spec: str | dict) -> WeightedGraph:
    """Build a graph from an expression or an explicit edge-list dict.

    Expressions: ``K(n)`` (also ``K4``), ``K(m,n)`` complete bipartite, ``C(n)``,
    ``P(n)``, ``hamming(n1,...)``, ``hypercube(d)``, ``hypercube_plus_diag(d)``,
    ``cartesian(G,H)``, ``strong(G,H)``, ``replicate(G,l)``.
    """
    if isinstance(spec, dict):
        return WeightedGraph.from_json(spec)
    if spec.lstrip().startswith("{"):
        return WeightedGraph.from_json(spec)
    toks = _tokens(spec)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of graph expression")
        name = toks[pos]
        pos += 1
        args: list = []
        if pos < len(toks) and toks[pos] == "(":
            pos += 1
            while True:
                if toks[pos].isdigit():
                    args.append(int(toks[pos]))
                    pos += 1
                else:
                    args.append(parse())
                if toks[pos] == ",":
                    pos += 1
                    continue
                if toks[pos] == ")":
                    pos += 1
                    break
                raise ValueError(f"expected ',' or ')' in graph expression, got {toks[pos]!r}")
        return _construct(name, args)

    try:
        g = parse()
    except IndexError:
        raise ValueError(f"malformed graph expression {spec!r}") from None
    if pos != len(toks):
        raise ValueError(f"trailing input in graph expression {spec!r}")
    return g


def _construct(name: str, args: list) -> WeightedGraph:
    m = re.fullmatch(r"([KCP])_?(\d+)", name)
    if m and not args:
        name, args = m.group(1), [int(m.group(2))]
    ints = all(isinstance(a, int) for a in args)
    key = name.lower()
    if name == "K" and ints and len(args) == 1:
        return complete_graph(args[0])
    if name == "K" and ints and len(args) == 2:
        return complete_bipartite(*args)
    if name == "C" and ints and len(args) == 1:
        return cycle_graph(args[0])
    if name == "P" and ints and len(args) == 1:
        return path_graph(args[0])
    if key == "hamming" and ints and args:
        return hamming(*args)
    if key == "hypercube" and ints and len(args) == 1:
        return hypercube(args[0])
    if key in ("hypercube_plus_diag", "hdiag") and ints and len(args) == 1:
        return hypercube_plus_diag(args[0])
    if key == "cartesian" and len(args) == 2 and not any(isinstance(a, int) for a in args):
        return cartesian(*args)
    if key == "strong" and len(args) == 2 and not any(isinstance(a, int) for a in args):
        return strong(*args)
    if key == "replicate" and len(args) == 2 and isinstance(args[1], int):
        return replicate(args[0], args[1])
    raise ValueError(f"unknown graph constructor {name}({', '.join(map(str, args))})")


# -- orbit contraction --------------------------------------------------------


def build_contraction_graph(t: Isotopism) -> WeightedGraph:
    """One vertex per cell orbit, weighted by orbit size.

    Two orbits are adjacent when some of their cells are collinear; adjacency
    inside an orbit is dropped.
    """
    if not t.is_principal():
        raise ValueError("orbit contraction is only defined for principal isotopisms")
    if not is_feasible(t):
        raise ValueError(f"isotopism {t} is not feasible")
    part = t.orbits
    shape = t.shape
    edges = set()
    for c, oid in part.index.items():
        for y in shape.neighbours(c):
            other = part.index[y]
            if other != oid:
                edges.add((min(oid, other), max(oid, other)))
    return WeightedGraph.from_edges(len(part), edges, part.sizes())


def orbit_adjacency_well_defined(t: Isotopism) -> bool:
    """Every cell of an orbit sees the same set of neighbouring orbits."""
    part = t.orbits
    shape = t.shape
    for orb in part.orbits:
        seen = None
        for c in orb:
            nb = frozenset(part.index[y] for y in shape.neighbours(c)) - {part.index[c]}
            if seen is None:
                seen = nb
            elif nb != seen:
                return False
    return True


# -- isomorphism ----------------------------------------------------------------


ISO_LIMIT = 16


def is_isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    """Weight- and adjacency-preserving bijection, by backtracking."""
    if g1.n > ISO_LIMIT or g2.n > ISO_LIMIT:
        raise ValueError(f"isomorphism test limited to {ISO_LIMIT} vertices")
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    inv1 = [(g1.degree(v), g1.weights[v]) for v in range(g1.n)]
    inv2 = [(g2.degree(v), g2.weights[v]) for v in range(g2.n)]
    if sorted(inv1) != sorted(inv2):
        return False
    # most constrained first: high degree, then rare invariants
    order = sorted(range(g1.n), key=lambda v: (-g1.degree(v), v))
    image = [-1] * g1.n
    taken = [False] * g2.n

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in range(g2.n):
            if taken[w] or inv2[w] != inv1[v]:
                continue
            if any(
                g1.adjacent(v, u) != g2.adjacent(w, image[u]) for u in order[:i]
            ):
                continue
            image[v], taken[w] = w, True
            if extend(i + 1):
                return True
            image[v], taken[w] = -1, False
        return False

    return extend(0)


# -- the modified colouring game -----------------------------------------------


@dataclass(frozen=True)
class GraphMove:
    vertex: int
    colour: int = 0  # 0 marks a passing move

    @property
    def is_pass(self) -> bool:
        return self.colour == 0

    def __str__(self) -> str:
        if self.is_pass:
            return f"pass({self.vertex + 1})"
        return f"v{self.vertex + 1}={self.colour}"


def parse_graph_move(text: str) -> GraphMove:
    text = text.strip()
    m = re.fullmatch(r"pass\(\s*(\d+)\s*\)", text)
    if m:
        return GraphMove(int(m.group(1)) - 1)
    m = re.fullmatch(r"v?(\d+)\s*=\s*(\d+)", text)
    if m:
        return GraphMove(int(m.group(1)) - 1, int(m.group(2)))
    raise ValueError(f"malformed graph move {text!r}")


@dataclass(frozen=True)
class GraphGameConfig:
    graph: WeightedGraph
    colours: int
    a: int = 1
    b: int = 1
    first_player: Player = Player.ALICE

    def __post_init__(self) -> None:
        object.__setattr__(self, "first_player", Player.parse(self.first_player))
        if self.a < 1 or self.b < 1 or self.colours < 1:
            raise ValueError("a, b and the number of colours must be positive")

    def quota(self, p: Player) -> int:
        return self.a if p is Player.ALICE else self.b

    def initial_state(self) -> ModifiedGameState:
        g = self.graph
        u = sum(g.weights)
        first = self.first_player
        return ModifiedGameState((0,) * g.n, g.weights, first, min(self.quota(first), u), self)

    def with_colours(self, colours: int) -> GraphGameConfig:
        return replace(self, colours=colours)

    def legal_moves(self, s: ModifiedGameState) -> list[GraphMove]:
        return modified_legal_moves(s)

    def apply(self, s: ModifiedGameState, m: GraphMove) -> ModifiedGameState:
        return apply_graph_move(s, m)

    def outcome(self, s: ModifiedGameState) -> Outcome | None:
        return graph_terminal_status(s)


@dataclass(frozen=True)
class ModifiedGameState:
    colouring: tuple[int, ...]
    residual: tuple[int, ...]
    to_move: Player
    remaining: int
    config: GraphGameConfig = field(repr=False)
    moves_in_turn: int = 0

    def key(self) -> tuple:
        return (self.colouring, self.residual, self.to_move, self.remaining, self.moves_in_turn)

    @property
    def total_residual(self) -> int:
        return sum(self.residual)

    @property
    def pass_pool(self) -> int:
        return sum(r for r, c in zip(self.residual, self.colouring) if c)


def available_colours(s: ModifiedGameState, v: int) -> list[int]:
    blocked = {s.colouring[y] for y in s.config.graph.neighbours(v)}
    return [c for c in range(1, s.config.colours + 1) if c not in blocked]


def graph_terminal_status(s: ModifiedGameState) -> Outcome | None:
    if all(s.colouring):
        return Outcome.ALICE_WINS
    for v, c in enumerate(s.colouring):
        if not c and not available_colours(s, v):
            return Outcome.BOB_WINS
    return None


def modified_legal_moves(s: ModifiedGameState) -> list[GraphMove]:
    """Colourings of uncoloured vertices, then passes on coloured vertices with weight left."""
    if graph_terminal_status(s) is not None:
        return []
    out = []
    for v, c in enumerate(s.colouring):
        if not c:
            out.extend(GraphMove(v, col) for col in available_colours(s, v))
    for v, c in enumerate(s.colouring):
        if c and s.residual[v] > 0:
            out.append(GraphMove(v))
    return out


def apply_graph_move(s: ModifiedGameState, m: GraphMove, check: bool = True) -> ModifiedGameState:
    colouring, residual = list(s.colouring), list(s.residual)
    v = m.vertex
    if m.is_pass:
        if check and (not colouring[v] or residual[v] <= 0):
            raise ValueError(f"illegal pass on vertex {v + 1}")
    else:
        if check and (colouring[v] or m.colour not in available_colours(s, v)):
            raise ValueError(f"illegal move {m}")
        colouring[v] = m.colour
    residual[v] -= 1
    remaining = s.remaining - 1
    cfg = s.config
    if remaining > 0:
        return ModifiedGameState(tuple(colouring), tuple(residual), s.to_move, remaining, cfg, s.moves_in_turn + 1)
    nxt = s.to_move.other
    u = sum(residual)
    return ModifiedGameState(tuple(colouring), tuple(residual), nxt, min(cfg.quota(nxt), u), cfg, 0)


def standard_graph_game(g: WeightedGraph, colours: int, a: int = 1, b: int = 1, first_player: Player | str = Player.ALICE) -> GraphGameConfig:
    """The classical (a,b)-colouring game: unit weights, so passes never arise."""
    return GraphGameConfig(replicate(g, 1), colours, a, b, Player.parse(first_player))

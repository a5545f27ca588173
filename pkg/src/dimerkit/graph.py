"""Weighted multigraphs, dimer configurations and brute-force matching oracles."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from .errors import CapExceeded, GraphError

Number = Union[Fraction, float]

DEFAULT_CAP = 36


class Edge(NamedTuple):
    id: int
    u: int
    v: int
    weight: Number

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


def as_weight(value) -> Number:
    """Normalize a weight: integers/rationals/strings become exact Fractions."""
    if isinstance(value, bool):
        raise GraphError(f"invalid weight {value!r}")
    if isinstance(value, Fraction):
        w = value
    elif isinstance(value, Rational):
        w = Fraction(int(value.numerator), int(value.denominator))
    elif isinstance(value, float):
        w = value
    elif isinstance(value, str):
        try:
            w = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphError(f"invalid weight {value!r}") from exc
    else:
        try:
            w = float(value)
        except (TypeError, ValueError) as exc:
            raise GraphError(f"invalid weight {value!r}") from exc
    if not w > 0:
        raise GraphError(f"weights must be strictly positive, got {value!r}")
    return w


@dataclass(frozen=True)
class WeightedGraph:
    """A finite multigraph without loops and with positive edge weights.

    Edges keep their caller-supplied ids; internally an edge is addressed by
    its position in ``edges`` (that position is what darts and orientations
    index).
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    _position: dict = field(init=False, repr=False, compare=False)
    _incident: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise GraphError("vertex_count must be nonnegative")
        edges = tuple(Edge(int(e[0]), int(e[1]), int(e[2]), as_weight(e[3])) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        position = {}
        incident = [[] for _ in range(self.vertex_count)]
        for pos, e in enumerate(edges):
            if e.id in position:
                raise GraphError(f"duplicate edge id {e.id}")
            for x in (e.u, e.v):
                if not 0 <= x < self.vertex_count:
                    raise GraphError(f"edge {e.id}: endpoint {x} out of range")
            if e.u == e.v:
                raise GraphError(f"edge {e.id} is a loop")
            position[e.id] = pos
            incident[e.u].append(pos)
            incident[e.v].append(pos)
        object.__setattr__(self, "_position", position)
        object.__setattr__(self, "_incident", tuple(tuple(sorted(x, key=lambda p: edges[p].id)) for x in incident))

    @classmethod
    def from_edges(cls, vertex_count: int, triples: Iterable[Sequence]) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, weight)`` items; ids are 0, 1, 2, ..."""
        edges = []
        for i, t in enumerate(triples):
            w = t[2] if len(t) > 2 else 1
            edges.append((i, t[0], t[1], w))
        return cls(vertex_count, tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def position(self, edge_id: int) -> int:
        return self._position[edge_id]

    def edge(self, edge_id: int) -> Edge:
        return self.edges[self._position[edge_id]]

    def incident(self, vertex: int) -> tuple[int, ...]:
        """Positions of the edges at ``vertex``, in ascending edge-id order."""
        return self._incident[vertex]

    @property
    def exact(self) -> bool:
        return all(isinstance(e.weight, Fraction) for e in self.edges)

    def with_weights(self, weights: Sequence) -> "WeightedGraph":
        if len(weights) != len(self.edges):
            raise GraphError("one weight per edge required")
        return WeightedGraph(self.vertex_count, tuple(e._replace(weight=w) for e, w in zip(self.edges, weights)))

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for p in self._incident[x]:
                y = self.edges[p].other(x)
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.vertex_count


class DimerConfiguration(frozenset):
    """A perfect matching, stored as a frozenset of edge ids."""

    def weight(self, graph: WeightedGraph) -> Number:
        out = Fraction(1)
        for eid in sorted(self):
            out = out * graph.edge(eid).weight
        return out

    def __repr__(self):
        return f"DimerConfiguration({sorted(self)})"


def is_perfect_matching(graph: WeightedGraph, edge_ids: Iterable[int]) -> bool:
    covered = [0] * graph.vertex_count
    for eid in edge_ids:
        e = graph.edge(eid)
        covered[e.u] += 1
        covered[e.v] += 1
    return all(c == 1 for c in covered)


def _matchings(graph: WeightedGraph) -> Iterator[list[int]]:
    # Match the lowest uncovered vertex first, trying its edges by ascending id.
    n = graph.vertex_count
    if n % 2:
        return
    covered = [False] * n
    chosen: list[int] = []

    def rec(start: int):
        v = start
        while v < n and covered[v]:
            v += 1
        if v == n:
            yield list(chosen)
            return
        covered[v] = True
        for p in graph.incident(v):
            e = graph.edges[p]
            x = e.other(v)
            if covered[x]:
                continue
            covered[x] = True
            chosen.append(e.id)
            yield from rec(v + 1)
            chosen.pop()
            covered[x] = False
        covered[v] = False

    yield from rec(0)


def find_perfect_matching(graph: WeightedGraph) -> Optional[DimerConfiguration]:
    for m in _matchings(graph):
        return DimerConfiguration(m)
    return None


def enumerate_matchings(graph: WeightedGraph, cap: int = DEFAULT_CAP) -> list[DimerConfiguration]:
    """All perfect matchings of ``graph`` in deterministic backtracking order."""
    if graph.vertex_count > cap:
        raise CapExceeded(f"{graph.vertex_count} vertices exceeds enumeration cap {cap}")
    return [DimerConfiguration(m) for m in _matchings(graph)]


def brute_force_Z(graph: WeightedGraph, cap: int = DEFAULT_CAP) -> Number:
    """Sum over all perfect matchings of the product of edge weights."""
    total = Fraction(0)
    for m in enumerate_matchings(graph, cap):
        total += m.weight(graph)
    return total

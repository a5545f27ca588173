"""Combinatorial maps: rotation systems on closed orientable surfaces.

Darts are numbered ``2 * p + s`` where ``p`` is the edge position in the
underlying graph; ``s == 0`` is the half running ``u -> v`` (written ``d+``
in files) and ``s == 1`` the half running ``v -> u`` (``d-``).  The
rotation at a vertex lists the darts leaving it in counterclockwise order.

Faces are traced keeping the face on the left of every dart, so each face
orbit is the counterclockwise boundary of its face.
"""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateBasis,
    DegeneratePairing,
    Disconnected,
    MapError,
    OddDegree,
)
from .graph import WeightedGraph


def dart_edge(d: int) -> int:
    return d >> 1


def reverse(d: int) -> int:
    return d ^ 1


class CombinatorialMap:
    """A connected graph cellularly embedded in a closed orientable surface."""

    def __init__(self, graph: WeightedGraph, rotation: Sequence[Sequence[int]]):
        self.graph = graph
        self.rotation = tuple(tuple(int(d) for d in r) for r in rotation)
        n = graph.vertex_count
        if len(self.rotation) != n:
            raise MapError("one rotation per vertex required")
        ndarts = 2 * graph.edge_count
        self._next = [-1] * ndarts
        self._prev = [-1] * ndarts
        for v, rot in enumerate(self.rotation):
            for i, d in enumerate(rot):
                if not 0 <= d < ndarts:
                    raise MapError(f"dart {d} out of range at vertex {v}")
                if self.tail(d) != v:
                    raise MapError(f"dart {d} does not leave vertex {v}")
                if self._next[d] != -1:
                    raise MapError(f"dart {d} repeated in rotation")
                nxt = rot[(i + 1) % len(rot)]
                self._next[d] = nxt
                self._prev[nxt] = d
        if any(x == -1 for x in self._next):
            raise MapError("rotation system misses some darts")
        if not graph.is_connected():
            raise Disconnected("map is disconnected")
        chi = n - graph.edge_count + len(self.faces)
        if chi % 2 or chi > 2:
            raise MapError(f"Euler characteristic {chi} is not that of a closed orientable surface")

    # -- darts -----------------------------------------------------------
    def tail(self, d: int) -> int:
        e = self.graph.edges[d >> 1]
        return e.v if d & 1 else e.u

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    def next_ccw(self, d: int) -> int:
        return self._next[d]

    def prev_ccw(self, d: int) -> int:
        return self._prev[d]

    def face_step(self, d: int) -> int:
        """Dart following ``d`` on the boundary of the face to its left."""
        return self._prev[d ^ 1]

    @property
    def dart_count(self) -> int:
        return len(self._next)

    # -- faces and genus -------------------------------------------------
    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * len(self._next)
        out = []
        for start in range(len(self._next)):
            if seen[start]:
                continue
            orbit = []
            d = start
            while not seen[d]:
                seen[d] = True
                orbit.append(d)
                d = self.face_step(d)
            out.append(tuple(orbit))
        return tuple(out)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        f = [0] * len(self._next)
        for i, orbit in enumerate(self.faces):
            for d in orbit:
                f[d] = i
        return tuple(f)

    @property
    def genus(self) -> int:
        return (2 - self.graph.vertex_count + self.graph.edge_count - len(self.faces)) // 2

    def dual_edges(self) -> list[tuple[int, int, int]]:
        """Dual multigraph as ``(edge_id, left face of d+, left face of d-)``; loops allowed."""
        return [(e.id, self.face_of[2 * p], self.face_of[2 * p + 1]) for p, e in enumerate(self.graph.edges)]

    # -- tree-cotree -----------------------------------------------------
    @cached_property
    def _primal_tree(self):
        # BFS from vertex 0 over edges in ascending id order
        g = self.graph
        parent_dart: list[Optional[int]] = [None] * g.vertex_count
        depth = [0] * g.vertex_count
        seen = [False] * g.vertex_count
        tree = set()
        if g.vertex_count:
            seen[0] = True
            queue = deque([0])
            while queue:
                x = queue.popleft()
                for p in g.incident(x):
                    e = g.edges[p]
                    y = e.other(x)
                    if seen[y]:
                        continue
                    seen[y] = True
                    tree.add(p)
                    parent_dart[y] = 2 * p if e.u == x else 2 * p + 1
                    depth[y] = depth[x] + 1
                    queue.append(y)
        return frozenset(tree), tuple(parent_dart), tuple(depth)

    @cached_property
    def _dual_tree(self):
        tree_edges = self._primal_tree[0]
        nf = len(self.faces)
        parent: list[Optional[int]] = [None] * nf
        depth = [0] * nf
        seen = [False] * nf
        cotree = set()
        seen[0] = True
        queue = deque([0])
        while queue:
            f = queue.popleft()
            for d in self.faces[f]:
                p = d >> 1
                if p in tree_edges:
                    continue
                h = self.face_of[d ^ 1]
                if seen[h]:
                    continue
                seen[h] = True
                cotree.add(p)
                parent[h] = d ^ 1  # dart of h whose reverse lies on the parent face
                depth[h] = depth[f] + 1
                queue.append(h)
        if not all(seen):
            raise MapError("dual graph minus the primal tree is disconnected")
        return frozenset(cotree), tuple(parent), tuple(depth)

    def tree_cotree(self) -> tuple[frozenset, frozenset, tuple[int, ...]]:
        """Primal spanning tree, dual cotree and leftover edges, as edge positions."""
        tree = self._primal_tree[0]
        cotree = self._dual_tree[0]
        left = tuple(p for p in range(self.graph.edge_count) if p not in tree and p not in cotree)
        if len(left) != 2 * self.genus:
            raise MapError(f"tree-cotree leftover has {len(left)} edges, expected {2 * self.genus}")
        return tree, cotree, left

    def tree_path(self, a: int, b: int) -> list[int]:
        """Darts of the primal-tree path from vertex ``a`` to vertex ``b``."""
        _, parent, depth = self._primal_tree
        up_a, up_b = [], []
        x, y = a, b
        while depth[x] > depth[y]:
            d = parent[x]
            up_a.append(d ^ 1)
            x = self.tail(d)
        while depth[y] > depth[x]:
            d = parent[y]
            up_b.append(d)
            y = self.tail(d)
        while x != y:
            d = parent[x]
            up_a.append(d ^ 1)
            x = self.tail(d)
            d = parent[y]
            up_b.append(d)
            y = self.tail(d)
        return up_a + up_b[::-1]

    def _dual_path(self, f: int, h: int) -> list[int]:
        _, parent, depth = self._dual_tree
        edges = []
        while depth[f] > depth[h]:
            edges.append(parent[f] >> 1)
            f = self.face_of[parent[f] ^ 1]
        while depth[h] > depth[f]:
            edges.append(parent[h] >> 1)
            h = self.face_of[parent[h] ^ 1]
        while f != h:
            edges.append(parent[f] >> 1)
            f = self.face_of[parent[f] ^ 1]
            edges.append(parent[h] >> 1)
            h = self.face_of[parent[h] ^ 1]
        return edges

    # -- homology --------------------------------------------------------
    @cached_property
    def homology_basis(self) -> tuple["OrientedCycle", ...]:
        """Fundamental cycles of the leftover edges through the primal tree."""
        _, _, left = self.tree_cotree()
        basis = []
        for p in left:
            d = 2 * p
            darts = [d] + self.tree_path(self.head(d), self.tail(d))
            basis.append(OrientedCycle(self, darts))
        gram = [[intersection_number(self, a, b) for b in basis] for a in basis]
        if gf2_inverse(gram) is None:
            raise DegenerateBasis("intersection form on the fundamental cycles is singular")
        return tuple(basis)

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        basis = self.homology_basis
        return tuple(tuple(intersection_number(self, a, b) for b in basis) for a in basis)

    @cached_property
    def cocycle_basis(self) -> tuple[frozenset, ...]:
        """Dual fundamental cycles of the leftover edges, as sets of edge positions."""
        _, _, left = self.tree_cotree()
        out = []
        for p in left:
            edges = {p}
            for q in self._dual_path(self.face_of[2 * p], self.face_of[2 * p + 1]):
                edges ^= {q}
            coc = frozenset(edges)
            for orbit in self.faces:
                if sum((d >> 1) in coc for d in orbit) % 2:
                    raise MapError("cocycle is not closed")
            out.append(coc)
        return tuple(out)

    @cached_property
    def _pairing_inverse(self):
        basis = self.homology_basis
        pairing = [[len(c.edge_set & coc) % 2 for coc in self.cocycle_basis] for c in basis]
        inv = gf2_inverse(pairing)
        if inv is None:
            raise DegeneratePairing("cocycle/cycle pairing is singular")
        return inv

    def homology_class(self, edge_positions: Iterable[int]) -> tuple[int, ...]:
        """Coordinates over the homology basis of an even-degree edge set."""
        edges = set()
        for p in edge_positions:
            edges ^= {p}
        deg = [0] * self.graph.vertex_count
        for p in edges:
            e = self.graph.edges[p]
            deg[e.u] += 1
            deg[e.v] += 1
        if any(x % 2 for x in deg):
            raise OddDegree("edge set has a vertex of odd degree")
        y = [len(edges & coc) % 2 for coc in self.cocycle_basis]
        inv = self._pairing_inverse
        k = len(y)
        return tuple(sum(y[j] * inv[j][i] for j in range(k)) % 2 for i in range(k))

    # -- cycles ----------------------------------------------------------
    def left_darts(self, cycle: "OrientedCycle") -> list[int]:
        """Darts leaving the vertices of ``cycle`` strictly to its left (with multiplicity)."""
        out = []
        darts = cycle.darts
        for i, d_out in enumerate(darts):
            back = darts[i - 1] ^ 1
            d = self._next[d_out]
            while d != back:
                out.append(d)
                d = self._next[d]
        return out

    def vertex_darts(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]


class OrientedCycle:
    """A simple closed walk in a map, given as its cyclic dart sequence."""

    def __init__(self, cmap: CombinatorialMap, darts: Sequence[int]):
        darts = tuple(int(d) for d in darts)
        if not darts:
            raise MapError("empty cycle")
        verts = []
        for i, d in enumerate(darts):
            if cmap.head(d) != cmap.tail(darts[(i + 1) % len(darts)]):
                raise MapError("darts do not form a closed walk")
            verts.append(cmap.tail(d))
        if len(set(verts)) != len(verts):
            raise MapError("cycle is not simple")
        if len(darts) == 2 and darts[0] >> 1 == darts[1] >> 1:
            raise MapError("cycle backtracks along one edge")
        self.darts = darts
        self.vertices = tuple(verts)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(d >> 1 for d in self.darts)

    def reversed(self, cmap: CombinatorialMap) -> "OrientedCycle":
        return OrientedCycle(cmap, [d ^ 1 for d in reversed(self.darts)])

    def __len__(self):
        return len(self.darts)

    def __repr__(self):
        return f"OrientedCycle({list(self.darts)})"


def intersection_number(cmap: CombinatorialMap, c1: OrientedCycle, c2) -> int:
    """Mod-2 intersection of a simple cycle with a cycle (or any even edge set).

    ``c1`` is pushed off to its left inside the ribbon neighbourhood; the
    pushed copy crosses exactly the edges leaving ``c1`` on that side, so the
    intersection is the parity of those crossings that land on ``c2``.
    """
    target = c2.edge_set if isinstance(c2, OrientedCycle) else frozenset(c2)
    return sum((d >> 1) in target for d in cmap.left_darts(c1)) % 2


def gf2_inverse(matrix: Sequence[Sequence[int]]) -> Optional[list[list[int]]]:
    """Inverse over Z/2, or None when singular."""
    n = len(matrix)
    rows = [[x % 2 for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[col])]
    return [r[n:] for r in rows]


def dual_face_orbits(cmap: CombinatorialMap) -> list[frozenset]:
    """Face orbits of the dual map (rotations = face cycles, same involution).

    Each orbit is the set of darts pointing into one vertex of the original
    map, which is how the dual of the dual is matched back to the original.
    """
    seen = set()
    out = []
    for start in range(cmap.dart_count):
        if start in seen:
            continue
        orbit = set()
        d = start
        while d not in seen:
            seen.add(d)
            orbit.add(d)
            d = cmap.next_ccw(d ^ 1) ^ 1
        out.append(frozenset(orbit))
    return out

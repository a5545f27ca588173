"""Generators for the standard fixtures and the closed-form square-lattice products."""
from __future__ import annotations

import math
import random
from itertools import product

from .errors import OddM
from .graph import WeightedGraph
from .kasteleyn import Orientation
from .surface import CombinatorialMap
from .toric import TorusDimerModel


def square_planar(m: int, n: int, x=1, y=1) -> CombinatorialMap:
    """m columns by n rows; horizontal edges weigh ``x``, vertical ones ``y``.

    Vertex ``(i, j)`` (column i, row j) has index ``j * m + i``.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    edges = []
    east, north = {}, {}
    for j in range(n):
        for i in range(m):
            v = j * m + i
            if i + 1 < m:
                east[(i, j)] = len(edges)
                edges.append((len(edges), v, v + 1, x))
            if j + 1 < n:
                north[(i, j)] = len(edges)
                edges.append((len(edges), v, v + m, y))
    rotation = []
    for j in range(n):
        for i in range(m):
            rot = []
            if (i, j) in east:
                rot.append(2 * east[(i, j)])
            if (i, j) in north:
                rot.append(2 * north[(i, j)])
            if (i - 1, j) in east:
                rot.append(2 * east[(i - 1, j)] + 1)
            if (i, j - 1) in north:
                rot.append(2 * north[(i, j - 1)] + 1)
            rotation.append(rot)
    return CombinatorialMap(WeightedGraph(m * n, tuple(edges)), rotation)


def _square_torus(m: int, n: int, x, y):
    # Returns the map and each edge's (hx, hy) crossing counts in the u -> v direction:
    # wrapping north crosses the horizontal curve (hx), wrapping east the vertical one (hy).
    if m < 2 or n < 2:
        raise ValueError("torus sides must be at least 2")
    edges, windings = [], []
    east, north = {}, {}
    for j in range(n):
        for i in range(m):
            v = j * m + i
            east[(i, j)] = len(edges)
            edges.append((len(edges), v, j * m + (i + 1) % m, x))
            windings.append((0, 1 if i == m - 1 else 0))
            north[(i, j)] = len(edges)
            edges.append((len(edges), v, ((j + 1) % n) * m + i, y))
            windings.append((1 if j == n - 1 else 0, 0))
    rotation = []
    for j in range(n):
        for i in range(m):
            rotation.append([
                2 * east[(i, j)],
                2 * north[(i, j)],
                2 * east[((i - 1) % m, j)] + 1,
                2 * north[(i, (j - 1) % n)] + 1,
            ])
    return CombinatorialMap(WeightedGraph(m * n, tuple(edges)), rotation), windings


def square_torus(m: int, n: int, x=1, y=1) -> CombinatorialMap:
    """The m x n square lattice wrapped on the torus (mn vertices, 2mn edges)."""
    return _square_torus(m, n, x, y)[0]


def hex_torus(a=1, b=1, c=1) -> TorusDimerModel:
    """Unit hexagonal fundamental domain: one white and one black vertex, three edges.

    All edges run white -> black, which is Kasteleyn; edge ``b`` crosses the
    horizontal curve and edge ``c`` the vertical one, so P = a + b z + c w.
    """
    graph = WeightedGraph(2, ((0, 0, 1, a), (1, 0, 1, b), (2, 0, 1, c)))
    cmap = CombinatorialMap(graph, [[0, 2, 4], [1, 3, 5]])
    return TorusDimerModel(cmap, ("white", "black"), ((0, 0), (1, 0), (0, 1)), Orientation((True, True, True)))


# Kasteleyn directions for the 2 x 2 bipartite square domain, in edge order
# h(0,0) v(0,0) h(1,0) v(1,0) h(0,1) v(0,1) h(1,1) v(1,1); True means u -> v.
_BIPARTITE_SQUARE_K = (True, True, False, True, False, False, True, False)


def bipartite_square_torus(x=1, y=1) -> TorusDimerModel:
    """2 x 2 fundamental domain of the bipartite square lattice.

    Vertices with even ``i + j`` are white.  The baked orientation gives
    P = y^2 (2 + z + 1/z) + x^2 (2 + w + 1/w) before canonicalization.
    """
    cmap, uv = _square_torus(2, 2, x, y)
    coloring = tuple("white" if (v % 2 + v // 2) % 2 == 0 else "black" for v in range(4))
    windings = []
    for e, (hx, hy) in zip(cmap.graph.edges, uv):
        windings.append((hx, hy) if coloring[e.u] == "white" else (-hx, -hy))
    return TorusDimerModel(cmap, coloring, tuple(windings), Orientation(_BIPARTITE_SQUARE_K))


def square_torus_model(m: int, n: int, x=1, y=1) -> TorusDimerModel:
    """Bipartite toric square lattice (m, n even) with windings; orientation constructed."""
    if m % 2 or n % 2:
        raise ValueError("bipartite square torus needs even sides")
    cmap, uv = _square_torus(m, n, x, y)
    coloring = tuple("white" if (v % m + v // m) % 2 == 0 else "black" for v in range(m * n))
    windings = []
    for e, (hx, hy) in zip(cmap.graph.edges, uv):
        windings.append((hx, hy) if coloring[e.u] == "white" else (-hx, -hy))
    return TorusDimerModel(cmap, coloring, tuple(windings))


def k33_torus() -> CombinatorialMap:
    """K_{3,3} with the first (in a fixed search order) rotation system of genus one."""
    edges = tuple((3 * i + j, i, 3 + j, 1) for i in range(3) for j in range(3))
    graph = WeightedGraph(6, edges)
    base = []
    for v in range(6):
        base.append([2 * e[0] + (0 if e[1] == v else 1) for e in edges if v in (e[1], e[2])])
    for flips in product((False, True), repeat=6):
        rotation = [[r[0], r[2], r[1]] if f else list(r) for r, f in zip(base, flips)]
        cmap = CombinatorialMap(graph, rotation)
        if cmap.genus == 1:
            return cmap
    raise AssertionError("no genus-one rotation found for K33")


def genus2_fixture() -> CombinatorialMap:
    """A 16-vertex genus-two map with integer weights in [1, 5].

    Built from the 4 x 4 toric grid by transposing two darts in the rotation
    at the first vertex where that raises the genus to two.
    """
    base = square_torus(4, 4)
    weights = [1 + (7 * p + 3) % 5 for p in range(base.graph.edge_count)]
    graph = base.graph.with_weights(weights)
    for v in range(graph.vertex_count):
        rot = list(base.rotation[v])
        for i in range(len(rot)):
            for j in range(i + 1, len(rot)):
                trial = [list(r) for r in base.rotation]
                r = list(rot)
                r[i], r[j] = r[j], r[i]
                trial[v] = r
                cmap = CombinatorialMap(graph, trial)
                if cmap.genus == 2:
                    return cmap
    raise AssertionError("no genus-two transposition found")


def random_planar_map(seed: int, max_vertices: int = 14, max_weight: int = 5) -> CombinatorialMap:
    """Random connected plane graph on a small grid with random diagonals and deletions.

    The rotation at each vertex is the angular order of its neighbours, so
    the embedding is planar by construction.
    """
    rng = random.Random(seed)
    shapes = [(c, r) for c in range(2, 8) for r in range(2, 8) if c * r <= max_vertices and c * r % 2 == 0]
    cols, rows = rng.choice(shapes)
    pos = [(i, j) for j in range(rows) for i in range(cols)]
    cand = []
    for j in range(rows):
        for i in range(cols):
            v = j * cols + i
            if i + 1 < cols:
                cand.append((v, v + 1))
            if j + 1 < rows:
                cand.append((v, v + cols))
            if i + 1 < cols and j + 1 < rows:
                pick = rng.random()
                if pick < 0.35:
                    cand.append((v, v + cols + 1))
                elif pick < 0.7:
                    cand.append((v + 1, v + cols))
    rng.shuffle(cand)
    keep = list(cand)
    for e in cand:
        if rng.random() < 0.3:
            trial = [f for f in keep if f != e]
            if _connected(len(pos), trial):
                keep = trial
    keep.sort()
    edges = tuple((k, u, v, rng.randint(1, max_weight)) for k, (u, v) in enumerate(keep))
    graph = WeightedGraph(len(pos), edges)
    rotation = []
    for v in range(len(pos)):
        darts = []
        for k, (a, b) in enumerate(keep):
            if a == v:
                darts.append((2 * k, b))
            elif b == v:
                darts.append((2 * k + 1, a))
        darts.sort(key=lambda t: math.atan2(pos[t[1]][1] - pos[v][1], pos[t[1]][0] - pos[v][0]))
        rotation.append([d for d, _ in darts])
    return CombinatorialMap(graph, rotation)


def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def closed_form_Z_square(m: int, n: int, x=1.0, y=1.0) -> float:
    """Kasteleyn's product for the planar m x n grid (m even).

    Overflows to ``inf`` for large grids; see :func:`closed_form_log_Z_square`.
    """
    if m % 2:
        raise OddM("the closed form needs m even")
    out = 1.0
    for k in range(1, m // 2 + 1):
        for l in range(1, n + 1):
            out *= _square_factor(k, l, m, n, x, y)
    return out


def closed_form_log_Z_square(m: int, n: int, x=1.0, y=1.0) -> float:
    """Logarithm of the same product, summed in log space."""
    if m % 2:
        raise OddM("the closed form needs m even")
    return math.fsum(math.log(_square_factor(k, l, m, n, x, y))
                     for k in range(1, m // 2 + 1) for l in range(1, n + 1))


def _square_factor(k, l, m, n, x, y) -> float:
    return 2 * math.sqrt(x * x * math.cos(k * math.pi / (m + 1)) ** 2 + y * y * math.cos(l * math.pi / (n + 1)) ** 2)


def closed_form_toric_P(e1: int, e2: int, m: int, n: int, x=1.0, y=1.0, reading: str = "printed") -> float:
    """The four toric Pfaffian products P_{e1 e2} for the m x n torus (m even).

    ``reading="printed"`` multiplies the two squared sines inside the root;
    ``reading="sum"`` adds them, as in the planar product.
    """
    if m % 2:
        raise OddM("the closed form needs m even")
    if reading not in ("printed", "sum"):
        raise ValueError(f"unknown reading {reading!r}")
    out = 1.0
    for k in range(1, m // 2 + 1):
        for l in range(1, n + 1):
            a = x * x * _sin2(2 * l + e2 - 1, n)
            b = y * y * _sin2(2 * k + e1 - 1, m)
            out *= 2 * math.sqrt(a * b if reading == "printed" else a + b)
    return out


def _sin2(p: int, q: int) -> float:
    # sin^2(p pi / q), exactly zero at multiples of pi
    return 0.0 if p % q == 0 else math.sin(p * math.pi / q) ** 2

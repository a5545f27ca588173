"""Small fixtures shared by several test modules."""
from fractions import Fraction

from dimerkit.graph import WeightedGraph
from dimerkit.surface import CombinatorialMap, OrientedCycle


def y_graph():
    return WeightedGraph.from_edges(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])


def baby_graph(nu=(2, 3, 5, 7, 11)):
    """Four vertices, a doubled edge 0-1 (nu1, nu2), 1-2 (nu3), 2-3 (nu4), 1-3 (nu5)."""
    n1, n2, n3, n4, n5 = nu
    return WeightedGraph.from_edges(4, [(0, 1, n1), (0, 1, n2), (1, 2, n3), (2, 3, n4), (1, 3, n5)])


# directions matching the displayed matrix: 0->1 twice, 2->1, 2->3, 1->3
BABY_K = (True, True, False, True, True)


def baby_map(nu=(2, 3, 5, 7, 11)):
    """Planar embedding: 0 left, 1 centre, 2 upper right, 3 lower right."""
    g = baby_graph(nu)
    rotation = [
        [2, 0],        # vertex 0: nu2 above, nu1 below
        [4, 3, 1, 8],  # vertex 1: nu3 up to 2, nu2 and nu1 back to 0, nu5 down to 3
        [5, 6],
        [9, 7],
    ]
    return CombinatorialMap(g, rotation)


def simple_cycles(cmap, max_len):
    """All simple oriented cycles (as dart tuples) up to ``max_len`` edges, each listed once per direction."""
    out = set()
    n = cmap.graph.vertex_count
    for start in range(n):
        stack = [(start, [], {start})]
        while stack:
            v, darts, seen = stack.pop()
            for d in cmap.rotation[v]:
                w = cmap.head(d)
                if darts and d >> 1 == darts[-1] >> 1:
                    continue
                if w == start and darts:
                    cyc = darts + [d]
                    if len(cyc) == 2 and cyc[0] >> 1 == cyc[1] >> 1:
                        continue
                    if min(cmap.tail(x) for x in cyc) == start:
                        k = cyc.index(min(cyc))
                        out.add(tuple(cyc[k:] + cyc[:k]))
                elif w not in seen and w > start and len(darts) + 1 < max_len:
                    stack.append((w, darts + [d], seen | {w}))
    return [OrientedCycle(cmap, c) for c in sorted(out)]


def frac(x):
    return Fraction(x)

import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from dimerkit.errors import NotBipartite, UnequalColorClasses
from dimerkit.graph import WeightedGraph, enumerate_matchings
from dimerkit.kasteleyn import Orientation, construct_kasteleyn, n_K
from dimerkit.lattices import hex_torus, random_planar_map, square_planar, square_torus
from dimerkit.pfaffian import (
    SkewMatrix, bipartite_reduce, determinant, kasteleyn_matrix, matching_sign, pfaffian, pfaffian_expansion,
)
from dimerkit.verify import random_skew

from helpers import BABY_K, baby_graph


def test_two_by_two():
    assert pfaffian(SkewMatrix([[0, 7], [-7, 0]])) == 7
    g = WeightedGraph.from_edges(2, [(0, 1, 3)])
    assert kasteleyn_matrix(g, [True]).entries == [[0, 3], [-3, 0]]


def test_odd_and_empty():
    assert pfaffian(SkewMatrix([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])) == 0
    assert pfaffian(SkewMatrix([])) == 1


def test_skewness_validated():
    with pytest.raises(ValueError):
        SkewMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        SkewMatrix([[1, 0], [0, 0]])


def test_baby_matrix_and_pfaffian():
    nu = (2, 3, 5, 7, 11)
    n1, n2, n3, n4, n5 = nu
    a = kasteleyn_matrix(baby_graph(nu), BABY_K)
    assert a.entries == [
        [0, n1 + n2, 0, 0],
        [-n1 - n2, 0, -n3, n5],
        [0, n3, 0, n4],
        [0, -n5, -n4, 0],
    ]
    assert pfaffian(a) == n1 * n4 + n2 * n4


def test_baby_symbolic():
    # symbolic weights: det must be the square of nu1 nu4 + nu2 nu4
    nus = sympy.symbols("n1:6", positive=True)
    n1, n2, n3, n4, n5 = nus
    m = sympy.Matrix([[0, n1 + n2, 0, 0], [-n1 - n2, 0, -n3, n5], [0, n3, 0, n4], [0, -n5, -n4, 0]])
    assert sympy.expand(m.det() - (n1 * n4 + n2 * n4) ** 2) == 0


def test_hex_block():
    h = hex_torus(2, 3, 5)
    a = kasteleyn_matrix(h.cmap, h.orientation)
    assert a.entries == [[0, 10], [-10, 0]]
    block = bipartite_reduce(a, h.coloring)
    assert block.matrix == [[-10]]  # black row 1, white column 0
    assert block.sign * determinant(block.matrix) == pfaffian(a)


def test_bipartite_reduce_grid():
    grid = square_planar(2, 2)
    coloring = ["white" if (v % 2 + v // 2) % 2 == 0 else "black" for v in range(4)]
    a = kasteleyn_matrix(grid, construct_kasteleyn(grid))
    block = bipartite_reduce(a, coloring)
    assert abs(determinant(block.matrix)) == 2
    assert block.sign * determinant(block.matrix) == pfaffian(a)


def test_bipartite_reduce_single_edge():
    a = SkewMatrix([[0, 4], [-4, 0]])
    block = bipartite_reduce(a, ["black", "white"])
    assert block.matrix == [[4]] and block.sign == 1


def test_bipartite_reduce_errors():
    a = kasteleyn_matrix(square_planar(2, 2), construct_kasteleyn(square_planar(2, 2)))
    with pytest.raises(NotBipartite):
        bipartite_reduce(a, ["white", "white", "black", "black"])
    g = WeightedGraph.from_edges(3, [(0, 1, 1), (0, 2, 1)])
    with pytest.raises(UnequalColorClasses):
        bipartite_reduce(kasteleyn_matrix(g, [True, True]), ["white", "black", "black"])


@pytest.mark.parametrize("seed", range(30))
def test_pf_squared_matches_sympy_det(seed):
    rng = random.Random(seed)
    a = random_skew(rng, rng.randint(2, 10))
    assert pfaffian(a) ** 2 == sympy.Matrix(a.entries).det()


def test_random_8x8_against_independent_determinant():
    rng = random.Random(8)
    for _ in range(10):
        a = random_skew(rng, 8, -9, 9)
        assert pfaffian(a) ** 2 == determinant(a.entries)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_congruence(seed):
    rng = random.Random(seed)
    a = random_skew(rng, rng.choice([2, 4, 6]))
    b = [[Fraction(rng.randint(-3, 3)) for _ in range(a.size)] for _ in range(a.size)]
    assert pfaffian(a.congruent(b)) == determinant(b) * pfaffian(a)


def test_float_mode_agrees():
    rng = random.Random(3)
    for _ in range(20):
        a = random_skew(rng, 8)
        f = SkewMatrix(a.to_numpy())
        assert not f.exact
        assert pfaffian(f) == pytest.approx(float(pfaffian(a)), rel=1e-9, abs=1e-9)
        assert determinant(a.to_numpy()) == pytest.approx(float(determinant(a.entries)), rel=1e-9, abs=1e-6)


@pytest.mark.parametrize("seed", range(15))
def test_expansion_identity(seed):
    cmap = random_planar_map(seed, max_vertices=10)
    rng = random.Random(seed)
    k = Orientation(rng.random() < 0.5 for _ in range(cmap.graph.edge_count))
    ms = enumerate_matchings(cmap.graph)
    # holds for any orientation, Kasteleyn or not
    assert pfaffian(kasteleyn_matrix(cmap, k)) == pfaffian_expansion(cmap.graph, k, ms)


def test_matching_sign_examples():
    g = WeightedGraph.from_edges(2, [(0, 1, 1)])
    assert matching_sign(g, [True], {0}) == 1
    assert matching_sign(baby_graph(), BABY_K, {0, 3}) == 1


def test_matching_sign_order_independent():
    rng = random.Random(5)
    t = square_torus(4, 4)
    k = Orientation(rng.random() < 0.5 for _ in range(t.graph.edge_count))
    for m in enumerate_matchings(t.graph)[:40]:
        ids = list(m)
        base = matching_sign(t.graph, k, m)
        for _ in range(3):
            rng.shuffle(ids)
            assert matching_sign(t.graph, k, m, order=ids) == base
        p = t.graph.position(ids[0])
        assert matching_sign(t.graph, k.flipped([p]), m) == -base


def _cycles_of(graph, d1, d2):
    """Alternating cycles of d1 ^ d2 as dart lists (dart = 2 * position + side)."""
    diff = d1 ^ d2
    at = {}
    for eid in diff:
        e = graph.edge(eid)
        at.setdefault(e.u, []).append(eid)
        at.setdefault(e.v, []).append(eid)
    used, cycles = set(), []
    for start in diff:
        if start in used:
            continue
        darts, eid = [], start
        v = graph.edge(start).u
        while eid not in used:
            used.add(eid)
            e = graph.edge(eid)
            p = graph.position(eid)
            darts.append(2 * p + (0 if e.u == v else 1))
            v = e.other(v)
            eid = next((x for x in at[v] if x not in used), start)
        cycles.append(darts)
    return cycles


@pytest.mark.parametrize("fixture", ["grid", "torus", "hex"])
def test_two_matching_sign_product(fixture):
    cmap = {"grid": square_planar(4, 4), "torus": square_torus(4, 4), "hex": hex_torus().cmap}[fixture]
    g = cmap.graph
    rng = random.Random(11)
    ms = enumerate_matchings(g)
    for _ in range(60):
        k = Orientation(rng.random() < 0.5 for _ in range(g.edge_count))
        d1, d2 = rng.choice(ms), rng.choice(ms)
        prod = 1
        for darts in _cycles_of(g, d1, d2):
            prod *= (-1) ** (n_K(k, darts) + 1)
        assert matching_sign(g, k, d1) * matching_sign(g, k, d2) == prod


def test_triplets_roundtrip():
    a = random_skew(random.Random(2), 5)
    m = np.zeros((5, 5))
    for i, j, v in a.triplets():
        m[i, j] = v
    assert np.array_equal(m, a.to_numpy())

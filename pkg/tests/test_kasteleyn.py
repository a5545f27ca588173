import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dimerkit.errors import OddVertexCount, SingularGram
from dimerkit.graph import WeightedGraph, brute_force_Z, find_perfect_matching
from dimerkit.kasteleyn import (
    Orientation, QuadraticFormTable, all_quadratic_forms, arf, class_representatives, class_terms,
    construct_kasteleyn, ell_D, is_kasteleyn, n_K, partition_function, quadratic_form, standard_symplectic_gram,
)
from dimerkit.lattices import (
    bipartite_square_torus, closed_form_toric_P, genus2_fixture, hex_torus, k33_torus, random_planar_map,
    square_planar, square_torus,
)
from dimerkit.surface import CombinatorialMap, OrientedCycle
from dimerkit.toric import enlarge
from dimerkit.verify import homology_resolved

from helpers import BABY_K, baby_map, simple_cycles


def triangulated_torus(m=4, n=4, seed=None):
    """m x n toric grid with a north-east diagonal in every square: all faces are triangles."""
    rng = random.Random(seed)
    edges, east, north, diag = [], {}, {}, {}
    for j in range(n):
        for i in range(m):
            v = j * m + i
            for table, target in ((east, j * m + (i + 1) % m), (north, ((j + 1) % n) * m + i),
                                  (diag, ((j + 1) % n) * m + (i + 1) % m)):
                table[(i, j)] = len(edges)
                edges.append((len(edges), v, target, rng.randint(1, 4) if seed is not None else 1))
    rotation = []
    for j in range(n):
        for i in range(m):
            rotation.append([
                2 * east[(i, j)], 2 * diag[(i, j)], 2 * north[(i, j)],
                2 * east[((i - 1) % m, j)] + 1, 2 * diag[((i - 1) % m, (j - 1) % n)] + 1,
                2 * north[(i, (j - 1) % n)] + 1,
            ])
    return CombinatorialMap(WeightedGraph(m * n, tuple(edges)), rotation)


def torus_fixtures():
    return [square_torus(2, 2), square_torus(4, 4, 2, 3), hex_torus(2, 3, 5).cmap, bipartite_square_torus().cmap,
            k33_torus(), enlarge(hex_torus(), 2).cmap, triangulated_torus()]


def test_n_K_examples():
    grid = square_planar(2, 2)
    k = construct_kasteleyn(grid)
    for f in grid.faces:
        assert n_K(k, f) % 2 == 1
    aligned = [2 * p if k[p] else 2 * p + 1 for p in range(grid.graph.edge_count)]
    assert n_K(k, aligned) == 0
    bigon = CombinatorialMap(WeightedGraph.from_edges(2, [(0, 1, 1), (0, 1, 1)]), [[0, 2], [1, 3]])
    cyc = OrientedCycle(bigon, [0, 3])
    assert n_K([True, True], cyc) == 1
    assert n_K([True, False], cyc) == 0
    assert n_K([False, True], cyc) == 2


def test_construct_kasteleyn_planar_grid():
    grid = square_planar(4, 3)
    k = construct_kasteleyn(grid)
    assert is_kasteleyn(grid, k)
    assert len(grid.faces) == 7


def test_classic_square_pattern_is_kasteleyn():
    # horizontal edges east, vertical edges up in even columns and down in odd ones
    for m, n in ((4, 3), (5, 6), (2, 2)):
        grid = square_planar(m, n)
        bits = []
        for e in grid.graph.edges:
            horizontal = e.v == e.u + 1
            bits.append(True if horizontal else (e.u % m) % 2 == 0)
        assert is_kasteleyn(grid, bits)


def test_hex_white_to_black_is_kasteleyn():
    h = hex_torus()
    assert is_kasteleyn(h.cmap, h.orientation)


def test_is_kasteleyn_reports_faces():
    grid = square_planar(4, 3)
    k = construct_kasteleyn(grid)
    for p in range(grid.graph.edge_count):
        check = is_kasteleyn(grid, k.flipped([p]))
        assert not check
        faces = {grid.face_of[2 * p], grid.face_of[2 * p + 1]}
        assert set(check.violations) == faces
    assert not is_kasteleyn(grid, Orientation.toward_higher(grid))


def test_odd_vertex_count():
    with pytest.raises(OddVertexCount):
        construct_kasteleyn(square_torus(3, 3))
    with pytest.raises(OddVertexCount):
        partition_function(square_planar(3, 3))


def test_construct_on_all_fixtures():
    for cmap in torus_fixtures() + [genus2_fixture(), square_planar(6, 5)]:
        assert is_kasteleyn(cmap, construct_kasteleyn(cmap))


def test_ccw_cycle_parity_counts_enclosed_vertices():
    # counterclockwise simple cycle: n_K plus enclosed vertices is odd
    m, n = 4, 3
    grid = square_planar(m, n)
    k = construct_kasteleyn(grid)
    pos = [(v % m, v // m) for v in range(m * n)]
    checked = 0
    for cyc in simple_cycles(grid, 12):
        pts = [pos[v] for v in cyc.vertices]
        area2 = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))
        if area2 <= 0:
            continue
        inside = sum(_inside(pos[v], pts) for v in range(m * n) if v not in cyc.vertices)
        assert (n_K(k, cyc) + inside) % 2 == 1
        checked += 1
    assert checked > 20


def _inside(p, poly):
    x, y = p
    crossings = 0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        if (y0 > y) != (y1 > y) and x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
            crossings += 1
    return crossings % 2


def test_class_representatives():
    grid = square_planar(4, 3)
    k0 = construct_kasteleyn(grid)
    assert class_representatives(grid, k0) == [k0]
    for cmap in torus_fixtures() + [genus2_fixture()]:
        k0 = construct_kasteleyn(cmap)
        reps = class_representatives(cmap, k0)
        assert len(reps) == 4 ** cmap.genus
        assert all(is_kasteleyn(cmap, k) for k in reps)
        d0 = find_perfect_matching(cmap.graph)
        forms = {quadratic_form(cmap, k, d0).basis_values for k in reps}
        assert len(forms) == len(reps)


def test_toric_square_class_pfaffians_match_closed_form():
    for m, n in ((2, 2), (4, 4), (4, 6)):
        t = square_torus(m, n)
        got = sorted(abs(t_.pfaffian) for t_ in class_terms(t))
        want = sorted(closed_form_toric_P(e1, e2, m, n, reading="sum") for e1, e2 in product((0, 1), repeat=2))
        assert got == pytest.approx(want, abs=1e-6)


def test_closed_form_readings_against_brute_force():
    # the product-inside-the-root reading fails; the sum reading reproduces brute force
    for m, n in ((2, 2), (4, 4), (4, 6), (2, 4)):
        bf = brute_force_Z(square_torus(m, n).graph)
        vals = {r: [closed_form_toric_P(a, b, m, n, reading=r) for a, b in ((0, 0), (1, 0), (0, 1), (1, 1))]
                for r in ("printed", "sum")}
        z = {r: (v[0] + v[1] + v[2] - v[3]) / 2 for r, v in vals.items()}
        assert z["sum"] == pytest.approx(float(bf), rel=1e-9)
        assert z["printed"] != pytest.approx(float(bf), rel=1e-3)
        assert vals["printed"][3] == 0 and vals["sum"][3] == 0


def test_ell_D_examples():
    h = hex_torus()
    d0 = find_perfect_matching(h.graph)
    on = [c for c in h.cmap.homology_basis if next(iter(d0)) in {h.graph.edges[p].id for p in c.edge_set}]
    assert on and all(ell_D(h.cmap, d0, c) == 0 for c in on)
    grid = square_planar(4, 3)
    # unit square at the lower left, counterclockwise; dimers (1,0)-(2,0) hang off to the right side
    sq = [0, 1, 5, 4]
    darts = []
    for a, b in zip(sq, sq[1:] + sq[:1]):
        for d in grid.rotation[a]:
            if grid.head(d) == b:
                darts.append(d)
    cyc = OrientedCycle(grid, darts)
    g = grid.graph
    eid = lambda a, b: next(e.id for e in g.edges if {e.u, e.v} == {a, b})
    d = {eid(0, 4), eid(1, 2), eid(5, 6)}
    assert ell_D(grid, d, cyc) == 0
    assert ell_D(grid, d, cyc.reversed(grid)) == 2


def test_ell_D_reversal_and_q_parity():
    for cmap in torus_fixtures():
        k = construct_kasteleyn(cmap)
        d0 = find_perfect_matching(cmap.graph)
        on = {cmap.graph.position(e) for e in d0}
        for c in cmap.homology_basis:
            r = c.reversed(cmap)
            off = sum(1 for v in c.vertices if not any(
                (d >> 1) in on and (d >> 1) in c.edge_set for d in cmap.rotation[v]))
            assert ell_D(cmap, d0, c) + ell_D(cmap, d0, r) == off
            q1 = n_K(k, c) + ell_D(cmap, d0, c) + 1
            q2 = n_K(k, r) + ell_D(cmap, d0, r) + 1
            assert q1 % 2 == q2 % 2


def test_quadratic_form_vertex_flip_invariance():
    for cmap in torus_fixtures():
        k = construct_kasteleyn(cmap)
        d0 = find_perfect_matching(cmap.graph)
        q = quadratic_form(cmap, k, d0)
        rng = random.Random(0)
        for _ in range(5):
            v = rng.randrange(cmap.graph.vertex_count)
            assert quadratic_form(cmap, k.flip_vertex(cmap, v), d0) == q


def test_signed_pfaffian_vertex_flip_invariance():
    for cmap in torus_fixtures():
        k = construct_kasteleyn(cmap)
        d0 = find_perfect_matching(cmap.graph)
        base = class_terms(cmap, d0=d0, k0=k)
        for v in range(0, cmap.graph.vertex_count, 3):
            flipped = class_terms(cmap, d0=d0, k0=k.flip_vertex(cmap, v))
            assert [t.signed_pfaffian for t in flipped] == [t.signed_pfaffian for t in base]
            assert is_kasteleyn(cmap, k.flip_vertex(cmap, v))


def test_quadratic_form_table_rules():
    q = QuadraticFormTable((1, 0), ((0, 1), (1, 0)))
    assert q((1, 1)) == 0
    for a, b in product(product((0, 1), repeat=2), repeat=2):
        s = tuple((x + y) % 2 for x, y in zip(a, b))
        assert q(s) == (q(a) + q(b) + q.dot(a, b)) % 2
    with pytest.raises(ValueError):
        QuadraticFormTable((0, 0), ((1, 1), (1, 0)))
    with pytest.raises(ValueError):
        QuadraticFormTable((0, 0), ((0, 1), (0, 0)))


def test_arf_examples():
    h = standard_symplectic_gram(1)
    assert arf(QuadraticFormTable((0, 0), h)) == 0
    assert arf(QuadraticFormTable((1, 1), h)) == 1
    assert arf(QuadraticFormTable((), ())) == 0
    with pytest.raises(SingularGram):
        arf(QuadraticFormTable((0, 0), ((0, 0), (0, 0))))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_arf_identity(g):
    forms = all_quadratic_forms(standard_symplectic_gram(g))
    arfs = [arf(q) for q in forms]
    for alpha in product((0, 1), repeat=2 * g):
        assert sum(Fraction((-1) ** (a + q(alpha))) for q, a in zip(forms, arfs)) == 2 ** g
    # Arf is the majority value
    for q, a in zip(forms, arfs):
        ones = sum(q(x) for x in product((0, 1), repeat=2 * g))
        assert a == int(ones > 2 ** (2 * g - 1))


def _random_invertible(rng, n):
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(4 * n * n):
        i, j = rng.sample(range(n), 2)
        m[i] = [(a + b) % 2 for a, b in zip(m[i], m[j])]
    return m


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
def test_arf_basis_independent(seed, g):
    rng = random.Random(seed)
    n = 2 * g
    gram = standard_symplectic_gram(g)
    q = QuadraticFormTable(tuple(rng.randint(0, 1) for _ in range(n)), gram)
    b = _random_invertible(rng, n)
    new_gram = tuple(tuple(q.dot(b[i], b[j]) for j in range(n)) for i in range(n))
    q2 = QuadraticFormTable(tuple(q(row) for row in b), new_gram)
    assert arf(q2) == arf(q)


@pytest.mark.parametrize("weights", [(1, 1, 1), (2, 3, 5), (Fraction(1, 2), 7, 3)])
def test_hex_partition_function(weights):
    assert partition_function(hex_torus(*weights).cmap) == sum(Fraction(w) for w in weights)


def test_planar_counts():
    assert partition_function(square_planar(4, 3)) == 11
    assert partition_function(baby_map()) == 2 * 7 + 3 * 7


def test_no_matching_gives_zero():
    g = WeightedGraph.from_edges(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    y = CombinatorialMap(g, [[0, 2, 4], [1], [3], [5]])
    assert partition_function(y) == 0


def test_float_weights():
    t = square_torus(4, 4, 0.5, 1.5)
    assert partition_function(t) == pytest.approx(float(brute_force_Z(t.graph)), rel=1e-9)


def test_jobs_do_not_change_result():
    t = genus2_fixture()
    assert partition_function(t, jobs=4) == partition_function(t)


@pytest.mark.parametrize("seed", [None, 1, 2])
def test_triangulated_torus(seed):
    t = triangulated_torus(seed=seed)
    assert t.genus == 1 and all(len(f) == 3 for f in t.faces)
    assert partition_function(t) == brute_force_Z(t.graph)


def test_genus_two_fixture():
    t = genus2_fixture()
    assert t.genus == 2 and t.graph.vertex_count <= 16
    assert len(class_terms(t)) == 16
    assert partition_function(t) == brute_force_Z(t.graph)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_random_planar_partition_function(seed):
    cmap = random_planar_map(seed)
    assert partition_function(cmap) == brute_force_Z(cmap.graph)


def test_homology_resolved_pfaffian():
    for cmap in (square_torus(2, 2), square_torus(4, 4, 2, 3), hex_torus(2, 3, 5).cmap, triangulated_torus(seed=3),
                 k33_torus()):
        for lhs, rhs in homology_resolved(cmap):
            assert lhs == rhs


def test_homology_resolved_pfaffian_genus_two():
    for lhs, rhs in homology_resolved(genus2_fixture()):
        assert lhs == rhs


def test_baby_orientation_class():
    m = baby_map()
    assert is_kasteleyn(m, BABY_K)
    assert class_representatives(m, Orientation(BABY_K)) == [Orientation(BABY_K)]

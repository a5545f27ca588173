from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dimerkit.errors import CapExceeded, GraphError
from dimerkit.graph import (
    DimerConfiguration, WeightedGraph, brute_force_Z, enumerate_matchings, find_perfect_matching,
    is_perfect_matching,
)
from dimerkit.lattices import random_planar_map, square_planar

from helpers import baby_graph, y_graph


def test_single_edge_matching():
    g = WeightedGraph.from_edges(2, [(0, 1, 5)])
    assert find_perfect_matching(g) == {0}
    assert brute_force_Z(g) == 5


def test_y_graph_has_no_matching():
    assert find_perfect_matching(y_graph()) is None
    assert enumerate_matchings(y_graph()) == []
    assert brute_force_Z(y_graph()) == 0


def test_grid_matching_counts():
    g43 = square_planar(4, 3).graph
    d = find_perfect_matching(g43)
    assert len(d) == 6 and is_perfect_matching(g43, d)
    assert len(enumerate_matchings(g43)) == 11
    assert len(enumerate_matchings(square_planar(2, 2).graph)) == 2
    assert brute_force_Z(square_planar(4, 4).graph) == 36


def test_parallel_edges_sum():
    g = WeightedGraph.from_edges(2, [(0, 1, 2), (0, 1, 3), (0, 1, Fraction(1, 7))])
    assert brute_force_Z(g) == 2 + 3 + Fraction(1, 7)


def test_baby_graph_partition_function():
    n1, n2, n3, n4, n5 = 2, 3, 5, 7, 11
    assert brute_force_Z(baby_graph()) == n1 * n4 + n2 * n4


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_matchings(square_planar(8, 6).graph)
    assert len(enumerate_matchings(square_planar(2, 3).graph, cap=6)) == 3


def test_invalid_graphs_rejected():
    with pytest.raises(GraphError):
        WeightedGraph.from_edges(2, [(0, 0, 1)])
    with pytest.raises(GraphError):
        WeightedGraph.from_edges(2, [(0, 2, 1)])
    with pytest.raises(GraphError):
        WeightedGraph.from_edges(2, [(0, 1, 0)])
    with pytest.raises(GraphError):
        WeightedGraph(2, ((0, 0, 1, 1), (0, 1, 0, 1)))


def test_weights_are_exact():
    g = WeightedGraph.from_edges(2, [(0, 1, 3)])
    assert isinstance(g.edges[0].weight, Fraction) and g.exact
    assert not WeightedGraph.from_edges(2, [(0, 1, 0.5)]).exact


def test_enumeration_is_deterministic():
    g = square_planar(4, 3).graph
    assert enumerate_matchings(g) == enumerate_matchings(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_enumeration_invariants(seed):
    g = random_planar_map(seed).graph
    ms = enumerate_matchings(g)
    assert len(set(ms)) == len(ms)
    assert all(is_perfect_matching(g, m) for m in ms)
    assert (find_perfect_matching(g) is None) == (not ms)
    unit = g.with_weights([1] * g.edge_count)
    assert brute_force_Z(unit) == len(ms)
    assert brute_force_Z(g) == sum(DimerConfiguration(m).weight(g) for m in ms)

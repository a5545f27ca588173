"""Skew-symmetric matrices, Pfaffians, Kasteleyn matrices and matching signs."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NotBipartite, UnequalColorClasses
from .graph import DimerConfiguration, WeightedGraph


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _exact(x):
    return Fraction(x) if isinstance(x, int) else x


class SkewMatrix:
    """Dense skew-symmetric matrix over exact rationals or floats."""

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[_exact(x) for x in row] for row in entries]
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix must be square")
            if row[i] != 0:
                raise ValueError("diagonal must vanish")
            for j in range(i):
                if row[j] != -rows[j][i]:
                    raise ValueError(f"not skew-symmetric at ({i}, {j})")
        self.entries = rows

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return all(_is_exact(x) for row in self.entries for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if isinstance(other, SkewMatrix):
            return self.entries == other.entries
        return NotImplemented

    def congruent(self, b: Sequence[Sequence]) -> "SkewMatrix":
        """B A B^T."""
        n = self.size
        b = [[_exact(x) for x in row] for row in b]
        ba = [[sum((b[i][k] * self.entries[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        out = [[sum((ba[i][k] * b[j][k] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        return SkewMatrix(out)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) if isinstance(x, complex) else float(x) for x in row] for row in self.entries])

    def triplets(self) -> list[tuple[int, int, object]]:
        return [(i, j, x) for i, row in enumerate(self.entries) for j, x in enumerate(row) if x != 0]

    def __repr__(self):
        return f"SkewMatrix({self.entries!r})"


def pfaffian(a: SkewMatrix):
    """Pfaffian by skew-symmetric Gaussian elimination.

    Each step pivots a nonzero entry into position (k, k+1) by a simultaneous
    row/column swap, then applies a congruence of determinant one that
    clears row and column k and k+1.  Exact input stays exact.
    """
    m = [list(row) for row in a.entries]
    n = len(m)
    if n % 2:
        return Fraction(0) if a.exact else 0.0
    exact = a.exact
    result = Fraction(1) if exact else 1.0
    for k in range(0, n - 1, 2):
        if exact:
            piv = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
        else:
            piv = max(range(k + 1, n), key=lambda j: abs(m[k][j]))
            if m[k][piv] == 0:
                piv = None
        if piv is None:
            return Fraction(0) if exact else 0.0
        if piv != k + 1:
            m[k + 1], m[piv] = m[piv], m[k + 1]
            for row in m:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            result = -result
        pivot = m[k][k + 1]
        result *= pivot
        rk, rk1 = m[k], m[k + 1]
        for i in range(k + 2, n):
            ci, bi = rk1[i], rk[i]
            if ci == 0 and bi == 0:
                continue
            row = m[i]
            for j in range(k + 2, n):
                if i == j:
                    continue
                delta = ci * rk[j] - bi * rk1[j]
                if delta != 0:
                    row[j] += delta / pivot
    return result


def determinant(matrix: Sequence[Sequence]):
    """Determinant: fraction-free Bareiss elimination when exact, LAPACK otherwise."""
    rows = [list(r) for r in matrix]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if not all(_is_exact(x) for r in rows for x in r):
        return np.linalg.det(np.array(rows, dtype=complex if any(isinstance(x, complex) for r in rows for x in r) else float))
    denom = 1
    for r in rows:
        for x in r:
            if isinstance(x, Fraction):
                denom = denom * x.denominator // math.gcd(denom, x.denominator)
    m = [[int(Fraction(x) * denom) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], denom ** n)


def kasteleyn_matrix(graph, orientation: Sequence[bool]) -> SkewMatrix:
    """Weighted skew-adjacency matrix; parallel edges are summed.

    ``orientation[p]`` is true when edge ``p`` runs ``u -> v``.
    """
    g = getattr(graph, "graph", graph)
    n = g.vertex_count
    zero = Fraction(0) if g.exact else 0.0
    m = [[zero] * n for _ in range(n)]
    for p, e in enumerate(g.edges):
        w = e.weight if orientation[p] else -e.weight
        m[e.u][e.v] += w
        m[e.v][e.u] -= w
    return SkewMatrix(m)


def permutation_sign(seq: Sequence[int]) -> int:
    seen = [False] * len(seq)
    sign = 1
    for i in range(len(seq)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = seq[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def matching_sign(graph: WeightedGraph, orientation: Sequence[bool], dimers, order=None) -> int:
    """The sign with which matching ``dimers`` appears in Pf(A^K).

    ``order`` optionally lists the dimers (edge ids) in the order used to
    build the permutation; the result does not depend on it.
    """
    g = getattr(graph, "graph", graph)
    ids = list(order) if order is not None else sorted(dimers)
    seq = []
    sign = 1
    for eid in ids:
        p = g.position(eid)
        e = g.edges[p]
        seq += [e.u, e.v]
        if not orientation[p]:
            sign = -sign
    return sign * permutation_sign(seq)


class BipartiteBlock(NamedTuple):
    matrix: list  # rows: black vertices, columns: white vertices
    sign: int  # Pf(A) == sign * det(matrix)
    blacks: tuple
    whites: tuple


def _is_black(c) -> bool:
    if isinstance(c, str):
        if c not in ("black", "white"):
            raise ValueError(f"unknown colour {c!r}")
        return c == "black"
    return bool(c)


def bipartite_reduce(a: SkewMatrix, coloring: Sequence) -> BipartiteBlock:
    """Split a bipartite skew-adjacency matrix into its black x white block."""
    blacks = tuple(i for i, c in enumerate(coloring) if _is_black(c))
    whites = tuple(i for i, c in enumerate(coloring) if not _is_black(c))
    for group in (blacks, whites):
        for i in group:
            for j in group:
                if a[i, j] != 0:
                    raise NotBipartite(f"vertices {i} and {j} share a colour but are adjacent")
    if len(blacks) != len(whites):
        raise UnequalColorClasses(f"{len(blacks)} black vs {len(whites)} white vertices")
    k = len(blacks)
    block = [[a[b, w] for w in whites] for b in blacks]
    sign = permutation_sign(blacks + whites) * (-1) ** (k * (k - 1) // 2)
    return BipartiteBlock(block, sign, blacks, whites)


def pfaffian_expansion(graph: WeightedGraph, orientation: Sequence[bool], matchings: Sequence[DimerConfiguration]):
    """Signed dimer sum: sum of sign(D) * weight(D) over the given matchings."""
    total = Fraction(0)
    for d in matchings:
        total += matching_sign(graph, orientation, d) * d.weight(graph)
    return total

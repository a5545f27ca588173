"""Bipartite dimer models on the torus: twisted Kasteleyn matrices and spectral data."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateSlice,
    DimerError,
    MapError,
    NotBipartite,
    NotGenusOne,
    OddVertexCount,
    UnequalColorClasses,
)
from .graph import WeightedGraph, find_perfect_matching
from .kasteleyn import Orientation, arf, construct_kasteleyn, is_kasteleyn, quadratic_form
from .laurent import LaurentPoly2, newton_polygon
from .pfaffian import matching_sign, permutation_sign
from .surface import CombinatorialMap


class DegeneratePolynomial(DimerError):
    pass


@dataclass(frozen=True)
class TorusDimerModel:
    """A bipartite map on the torus with per-edge homology windings.

    ``windings[p] = (hx, hy)`` are the signed crossings of edge ``p``,
    traversed from its white to its black endpoint, with the two transverse
    curves; they become the exponents of ``z`` and ``w``.  ``orientation``
    optionally pins the Kasteleyn orientation (otherwise one is constructed).
    """

    cmap: CombinatorialMap
    coloring: tuple
    windings: tuple
    orientation: Optional[Orientation] = None
    _whites: tuple = field(init=False, repr=False, compare=False)
    _blacks: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = self.cmap.graph
        colors = tuple(_color(c) for c in self.coloring)
        object.__setattr__(self, "coloring", colors)
        object.__setattr__(self, "windings", tuple((int(a), int(b)) for a, b in self.windings))
        if self.orientation is not None:
            object.__setattr__(self, "orientation", Orientation(self.orientation))
        if len(colors) != g.vertex_count:
            raise ValueError("one colour per vertex required")
        if len(self.windings) != g.edge_count:
            raise ValueError("one winding per edge required")
        if self.cmap.genus != 1:
            raise NotGenusOne(f"map has genus {self.cmap.genus}")
        for e in g.edges:
            if colors[e.u] == colors[e.v]:
                raise NotBipartite(f"edge {e.id} joins two {colors[e.u]} vertices")
        whites = tuple(i for i, c in enumerate(colors) if c == "white")
        blacks = tuple(i for i, c in enumerate(colors) if c == "black")
        if len(whites) != len(blacks):
            raise UnequalColorClasses(f"{len(whites)} white vs {len(blacks)} black vertices")
        object.__setattr__(self, "_whites", whites)
        object.__setattr__(self, "_blacks", blacks)
        for i, face in enumerate(self.cmap.faces):
            if self.face_winding(face) != (0, 0):
                raise MapError(f"windings do not close up around face {i}")

    @property
    def graph(self) -> WeightedGraph:
        return self.cmap.graph

    @property
    def whites(self) -> tuple:
        return self._whites

    @property
    def blacks(self) -> tuple:
        return self._blacks

    def dart_winding(self, d: int) -> tuple[int, int]:
        hx, hy = self.windings[d >> 1]
        if self.coloring[self.cmap.tail(d)] == "white":
            return hx, hy
        return -hx, -hy

    def face_winding(self, darts) -> tuple[int, int]:
        sx = sy = 0
        for d in darts:
            a, b = self.dart_winding(d)
            sx += a
            sy += b
        return sx, sy

    def kasteleyn_orientation(self) -> Orientation:
        if self.orientation is not None:
            return self.orientation
        return construct_kasteleyn(self.cmap)

    def white_to_black_sign(self, k: Sequence[bool], p: int) -> int:
        e = self.graph.edges[p]
        white_is_u = self.coloring[e.u] == "white"
        return 1 if k[p] == white_is_u else -1


def _color(c) -> str:
    if isinstance(c, str):
        if c not in ("black", "white"):
            raise ValueError(f"unknown colour {c!r}")
        return c
    return "black" if c else "white"


def twisted_matrix(model: TorusDimerModel, orientation=None) -> list[list[LaurentPoly2]]:
    """M(z, w): rows are white vertices, columns black vertices (index order)."""
    k = model.kasteleyn_orientation() if orientation is None else orientation
    wi = {v: i for i, v in enumerate(model.whites)}
    bi = {v: i for i, v in enumerate(model.blacks)}
    n = len(model.whites)
    m = [[LaurentPoly2() for _ in range(n)] for _ in range(n)]
    for p, e in enumerate(model.graph.edges):
        w, b = (e.u, e.v) if model.coloring[e.u] == "white" else (e.v, e.u)
        hx, hy = model.windings[p]
        m[wi[w]][bi[b]] = m[wi[w]][bi[b]] + LaurentPoly2.monomial(model.white_to_black_sign(k, p) * e.weight, hx, hy)
    return m


def numeric_twisted_matrix(model: TorusDimerModel, z: complex, w: complex, orientation=None) -> np.ndarray:
    k = model.kasteleyn_orientation() if orientation is None else orientation
    wi = {v: i for i, v in enumerate(model.whites)}
    bi = {v: i for i, v in enumerate(model.blacks)}
    n = len(model.whites)
    m = np.zeros((n, n), dtype=complex)
    for p, e in enumerate(model.graph.edges):
        white, black = (e.u, e.v) if model.coloring[e.u] == "white" else (e.v, e.u)
        hx, hy = model.windings[p]
        m[wi[white], bi[black]] += model.white_to_black_sign(k, p) * float(e.weight) * z ** hx * w ** hy
    return m


def laurent_determinant(matrix: Sequence[Sequence[LaurentPoly2]]) -> LaurentPoly2:
    """Determinant by Laplace expansion along rows, memoized on the used-column set."""
    n = len(matrix)
    nonzero = [[j for j in range(n) if not matrix[i][j].is_zero()] for i in range(n)]

    @lru_cache(maxsize=None)
    def minor(row: int, used: int) -> LaurentPoly2:
        if row == n:
            return LaurentPoly2.constant(1)
        total = LaurentPoly2()
        for j in nonzero[row]:
            if used >> j & 1:
                continue
            # (-1)^(position of j among the still-free columns)
            sign = -1 if bin(used & ((1 << j) - 1)).count("1") % 2 != j % 2 else 1
            sub = minor(row + 1, used | (1 << j))
            if not sub.is_zero():
                total = total + matrix[row][j] * sub * sign
        return total

    return minor(0, 0)


def characteristic_polynomial(model: TorusDimerModel, canonical: bool = True, orientation=None) -> LaurentPoly2:
    """det M(z, w); canonicalized up to +-z^a w^b unless ``canonical`` is false."""
    p = laurent_determinant(twisted_matrix(model, orientation))
    return p.canonical() if canonical else p


def _bipartite_pfaffian_sign(model: TorusDimerModel) -> int:
    # Pf(A^K) = sign * det(M_wb) where M_wb is the white x black block
    k = len(model.whites)
    return permutation_sign(model.blacks + model.whites) * (-1) ** (k * (k - 1) // 2) * (-1) ** k


class EvaluationSigns(NamedTuple):
    signs: dict  # (theta, tau) -> +-1
    arf: dict
    values: dict  # (theta, tau) -> P((-1)^theta, (-1)^tau)


def charpoly_signs(model: TorusDimerModel) -> EvaluationSigns:
    """Signs s such that Z = 1/2 sum s[t] P((-1)^theta, (-1)^tau).

    Substituting z = -1 (w = -1) flips the Kasteleyn orientation along the
    edges with odd x (y) winding, which steps through the four Kasteleyn
    classes; each class contributes with its Arf sign relative to one
    reference matching.
    """
    cmap = model.cmap
    if model.graph.vertex_count % 2:
        raise OddVertexCount("odd number of vertices")
    k = model.kasteleyn_orientation()
    poly = characteristic_polynomial(model, canonical=False, orientation=k)
    d0 = find_perfect_matching(model.graph)
    odd_x = [p for p, (hx, _) in enumerate(model.windings) if hx % 2]
    odd_y = [p for p, (_, hy) in enumerate(model.windings) if hy % 2]
    s_bip = _bipartite_pfaffian_sign(model)
    signs, arfs, values, forms = {}, {}, {}, set()
    for theta in (0, 1):
        for tau in (0, 1):
            kt = k.flipped((odd_x if theta else []) + (odd_y if tau else []))
            if not is_kasteleyn(cmap, kt):
                raise MapError("winding flips broke the Kasteleyn condition")
            values[(theta, tau)] = poly.evaluate_exact((-1) ** theta, (-1) ** tau) if model.graph.exact else poly((-1) ** theta, (-1) ** tau).real
            if d0 is None:
                continue
            q = quadratic_form(cmap, kt, d0)
            forms.add(q.basis_values)
            a = arf(q)
            arfs[(theta, tau)] = a
            signs[(theta, tau)] = (-1) ** a * matching_sign(model.graph, kt, d0) * s_bip
    if d0 is not None and len(forms) != 4:
        raise MapError("windings do not span the homology of the torus")
    return EvaluationSigns(signs, arfs, values)


def z_from_charpoly(model: TorusDimerModel):
    """Partition function from the four evaluations P(+-1, +-1)."""
    data = charpoly_signs(model)
    if not data.signs:
        return Fraction(0)
    total = sum(data.signs[t] * data.values[t] for t in sorted(data.values))
    return total / 2


def enlarge(model: TorusDimerModel, n: int) -> TorusDimerModel:
    """Glue n x n copies of the fundamental domain and wrap up again.

    Vertex ``v`` of copy ``(a, b)`` gets index ``(b * n + a) * V + v``;
    ``a`` advances with the y-winding (crossings of the vertical curve) and
    ``b`` with the x-winding.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return model
    g = model.graph
    nv, ne = g.vertex_count, g.edge_count

    def copy_index(a, b):
        return b * n + a

    uv_wind = []
    for p, e in enumerate(g.edges):
        hx, hy = model.windings[p]
        uv_wind.append((hx, hy) if model.coloring[e.u] == "white" else (-hx, -hy))

    edges, windings, bits = [], [], []
    base_k = model.orientation
    for b in range(n):
        for a in range(n):
            c = copy_index(a, b)
            for p, e in enumerate(g.edges):
                hx, hy = uv_wind[p]
                a2, b2 = a + hy, b + hx
                u_new = c * nv + e.u
                v_new = copy_index(a2 % n, b2 % n) * nv + e.v
                edges.append((c * ne + p, u_new, v_new, e.weight))
                wx, wy = b2 // n, a2 // n
                windings.append((wx, wy) if model.coloring[e.u] == "white" else (-wx, -wy))
                if base_k is not None:
                    bits.append(base_k[p])
    graph = WeightedGraph(nv * n * n, tuple(edges))
    rotation = [None] * (nv * n * n)
    for b in range(n):
        for a in range(n):
            c = copy_index(a, b)
            for v in range(nv):
                rot = []
                for d in model.cmap.rotation[v]:
                    p, s = d >> 1, d & 1
                    if s == 0:
                        src = c
                    else:
                        hx, hy = uv_wind[p]
                        src = copy_index((a - hy) % n, (b - hx) % n)
                    rot.append(2 * (src * ne + p) + s)
                rotation[c * nv + v] = rot
    coloring = model.coloring * (n * n)
    orientation = Orientation(bits) if base_k is not None else None
    return TorusDimerModel(CombinatorialMap(graph, rotation), coloring, tuple(windings), orientation)


def charpoly_enlarged(poly: LaurentPoly2, n: int, z: complex, w: complex) -> complex:
    """prod over u^n = z, v^n = w of P(u, v)."""
    if n < 1:
        raise ValueError("n must be positive")
    z0 = cmath.exp(cmath.log(z) / n)
    w0 = cmath.exp(cmath.log(w) / n)
    out = 1 + 0j
    for j in range(n):
        u = z0 * cmath.exp(2j * math.pi * j / n)
        for k in range(n):
            v = w0 * cmath.exp(2j * math.pi * k / n)
            out *= complex(poly(u, v))
    return out


class ProbeResult(NamedTuple):
    points: list  # every located (z, w) on the torus
    loci: list  # one representative (z, w) per connected cluster
    skipped: list  # angles whose slice P(z, .) vanished identically

    @property
    def locus_count(self) -> int:
        return len(self.loci)


def _slice_roots(poly: LaurentPoly2, z: complex):
    _, coeffs = poly.w_coefficients(z)
    arr = np.array(coeffs[::-1], dtype=complex)
    scale = max(poly.max_abs_coefficient(), 1.0) * max(abs(z), 1 / abs(z)) ** max(abs(m) for m, _ in poly.support)
    if np.all(np.abs(arr) <= 1e-13 * scale):
        raise DegenerateSlice(f"P(z, .) vanishes identically at z = {z}")
    arr[np.abs(arr) <= 1e-15 * scale] = 0
    return np.roots(arr)


def torus_zero_probe(poly: LaurentPoly2, r1: float = 1.0, r2: float = 1.0, grid: int = 720, tol: float = 1e-6) -> ProbeResult:
    """Locate the zeros of P on the torus |z| = r1, |w| = r2.

    Each of ``grid`` slices z = r1 e^{i phi} is solved for w by companion
    eigenvalues.  Roots within ``tol`` of the circle |w| = r2 are kept, and
    wherever the number of roots inside that circle changes between
    neighbouring slices the crossing angle is refined by bisection.
    """
    if not newton_polygon(poly).nondegenerate:
        raise DegeneratePolynomial("Newton polygon has zero area")
    points, skipped = [], []
    counts = []
    for k in range(grid):
        phi = 2 * math.pi * k / grid
        z = r1 * cmath.exp(1j * phi)
        try:
            roots = _slice_roots(poly, z)
        except DegenerateSlice:
            skipped.append(phi)
            counts.append(None)
            continue
        counts.append(int(np.sum(np.abs(roots) < r2)))
        for w in roots:
            if abs(abs(w) - r2) < tol:
                points.append((phi, complex(w)))
    for k in range(grid):
        c0, c1 = counts[k], counts[(k + 1) % grid]
        if c0 is None or c1 is None or c0 == c1:
            continue
        lo = 2 * math.pi * k / grid
        hi = lo + 2 * math.pi / grid
        for _ in range(60):
            mid = (lo + hi) / 2
            cm = int(np.sum(np.abs(_slice_roots(poly, r1 * cmath.exp(1j * mid))) < r2))
            if cm == c0:
                lo = mid
            else:
                hi = mid
        phi = (lo + hi) / 2
        roots = _slice_roots(poly, r1 * cmath.exp(1j * phi))
        w = min(roots, key=lambda x: abs(abs(x) - r2))
        if abs(abs(w) - r2) < tol:
            points.append((phi % (2 * math.pi), complex(w)))
    located = [(r1 * cmath.exp(1j * phi), w) for phi, w in points]
    loci = _cluster(located, poly, radius=4 * math.pi / grid * max(r1, r2, 1.0))
    return ProbeResult(located, loci, skipped)


def _cluster(points, poly, radius):
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i):
            zi, wi = points[i]
            zj, wj = points[j]
            if abs(zi - zj) < radius and abs(wi - wj) < radius:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i, pt in enumerate(points):
        groups.setdefault(find(i), []).append(pt)
    reps = [min(g, key=lambda pt: abs(poly(*pt))) for g in groups.values()]
    return sorted(reps, key=lambda pt: (round(cmath.phase(pt[0]), 9), round(cmath.phase(pt[1]), 9)))

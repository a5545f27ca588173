"""Kasteleyn orientations, their quadratic forms, and the Arf-signed Pfaffian sum."""
from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import OddVertexCount, SingularGram
from .graph import DimerConfiguration, find_perfect_matching
from .pfaffian import kasteleyn_matrix, matching_sign, pfaffian
from .surface import CombinatorialMap, OrientedCycle


class Orientation(tuple):
    """One direction per edge position: ``True`` means the edge runs u -> v."""

    def __new__(cls, bits: Iterable):
        return super().__new__(cls, (bool(b) for b in bits))

    @classmethod
    def toward_higher(cls, graph) -> "Orientation":
        g = getattr(graph, "graph", graph)
        return cls(e.u < e.v for e in g.edges)

    def flipped(self, positions: Iterable[int]) -> "Orientation":
        bits = list(self)
        for p in positions:
            bits[p] = not bits[p]
        return Orientation(bits)

    def flip_vertex(self, graph, v: int) -> "Orientation":
        g = getattr(graph, "graph", graph)
        return self.flipped(g.incident(v))

    def dart_agrees(self, d: int) -> bool:
        return self[d >> 1] == (d & 1 == 0)


def n_K(orientation: Sequence[bool], cycle) -> int:
    """Number of darts of ``cycle`` running against the orientation."""
    darts = cycle.darts if isinstance(cycle, OrientedCycle) else cycle
    return sum(orientation[d >> 1] != (d & 1 == 0) for d in darts)


def construct_kasteleyn(cmap: CombinatorialMap) -> Orientation:
    """Kasteleyn orientation by peeling a spanning tree of the dual graph.

    Edges off the dual tree point toward the higher vertex index; each tree
    edge is then fixed, leaves first, to make its child face odd.  The root
    face comes out odd because the vertex count is even.
    """
    if cmap.graph.vertex_count % 2:
        raise OddVertexCount("a Kasteleyn orientation needs an even number of vertices")
    bits = list(Orientation.toward_higher(cmap))
    nf = len(cmap.faces)
    parent_dart: list[Optional[int]] = [None] * nf
    order = [0]
    seen = [False] * nf
    seen[0] = True
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for d in cmap.faces[f]:
            h = cmap.face_of[d ^ 1]
            if not seen[h]:
                seen[h] = True
                parent_dart[h] = d ^ 1
                order.append(h)
                queue.append(h)
    for f in reversed(order[1:]):
        dp = parent_dart[f]
        p = dp >> 1
        wrong = sum(bits[d >> 1] != (d & 1 == 0) for d in cmap.faces[f] if d >> 1 != p)
        # dart dp agrees with K iff bits[p] == forward(dp); make the face total odd
        want_disagree = wrong % 2 == 0
        forward = dp & 1 == 0
        bits[p] = forward != want_disagree
    k = Orientation(bits)
    bad = kasteleyn_violations(cmap, k)
    assert not bad, f"faces {bad} even after peeling"
    return k


def kasteleyn_violations(cmap: CombinatorialMap, orientation: Sequence[bool]) -> list[int]:
    return [i for i, f in enumerate(cmap.faces) if n_K(orientation, f) % 2 == 0]


class KasteleynCheck(NamedTuple):
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def is_kasteleyn(cmap: CombinatorialMap, orientation: Sequence[bool]) -> KasteleynCheck:
    bad = kasteleyn_violations(cmap, orientation)
    return KasteleynCheck(not bad, bad)


def class_representatives(cmap: CombinatorialMap, k0: Orientation) -> list[Orientation]:
    """One Kasteleyn orientation per equivalence class, indexed by cocycle subsets.

    Representative ``i`` flips ``k0`` along the cocycles whose bit is set in ``i``.
    """
    cocycles = cmap.cocycle_basis
    reps = []
    for mask in range(1 << len(cocycles)):
        flip = set()
        for j, coc in enumerate(cocycles):
            if mask >> j & 1:
                flip ^= coc
        reps.append(Orientation(k0).flipped(flip))
    return reps


def ell_D(cmap: CombinatorialMap, dimers: DimerConfiguration, cycle: OrientedCycle) -> int:
    """Vertices of ``cycle`` whose dimer leaves on the left of the cycle."""
    g = cmap.graph
    positions = {g.position(eid) for eid in dimers}
    return sum((d >> 1) in positions for d in cmap.left_darts(cycle))


@dataclass(frozen=True)
class QuadraticFormTable:
    """A Z/2 quadratic form given by its values on a basis and the intersection Gram matrix."""

    basis_values: tuple
    gram: tuple

    def __post_init__(self):
        n = len(self.basis_values)
        object.__setattr__(self, "basis_values", tuple(int(x) % 2 for x in self.basis_values))
        object.__setattr__(self, "gram", tuple(tuple(int(x) % 2 for x in row) for row in self.gram))
        if len(self.gram) != n or any(len(r) != n for r in self.gram):
            raise ValueError("gram must be square and match the basis")
        for i in range(n):
            if self.gram[i][i]:
                raise ValueError("gram must have zero diagonal")
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram must be symmetric")

    @property
    def dimension(self) -> int:
        return len(self.basis_values)

    def dot(self, x: Sequence[int], y: Sequence[int]) -> int:
        n = self.dimension
        return sum(x[i] * y[j] * self.gram[i][j] for i in range(n) for j in range(n)) % 2

    def __call__(self, x: Sequence[int]) -> int:
        n = self.dimension
        val = sum(x[i] * self.basis_values[i] for i in range(n))
        val += sum(x[i] * x[j] * self.gram[i][j] for i in range(n) for j in range(i + 1, n))
        return val % 2


def quadratic_form(cmap: CombinatorialMap, orientation: Sequence[bool], d0: DimerConfiguration) -> QuadraticFormTable:
    values = [(n_K(orientation, c) + ell_D(cmap, d0, c) + 1) % 2 for c in cmap.homology_basis]
    return QuadraticFormTable(tuple(values), cmap.gram)


def arf(q: QuadraticFormTable) -> int:
    """Arf invariant via symplectic reduction to hyperbolic pairs."""
    n = q.dimension
    vecs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    total = 0
    while vecs:
        a = vecs.pop(0)
        idx = next((i for i, b in enumerate(vecs) if q.dot(a, b)), None)
        if idx is None:
            raise SingularGram("intersection form is degenerate")
        b = vecs.pop(idx)
        total ^= q(a) & q(b)
        rest = []
        for v in vecs:
            sb, sa = q.dot(v, b), q.dot(v, a)
            rest.append(tuple((v[i] + sb * a[i] + sa * b[i]) % 2 for i in range(n)))
        vecs = rest
    return total


def all_quadratic_forms(gram) -> list[QuadraticFormTable]:
    n = len(gram)
    return [QuadraticFormTable(vals, gram) for vals in product((0, 1), repeat=n)]


def standard_symplectic_gram(g: int) -> tuple:
    n = 2 * g
    rows = [[0] * n for _ in range(n)]
    for i in range(g):
        rows[2 * i][2 * i + 1] = rows[2 * i + 1][2 * i] = 1
    return tuple(tuple(r) for r in rows)


class ClassTerm(NamedTuple):
    orientation: Orientation
    form: QuadraticFormTable
    arf: int
    sign_d0: int
    pfaffian: object

    @property
    def signed_pfaffian(self):
        """eps^K(D0) * Pf(A^K); unchanged by vertex flips of K."""
        return self.sign_d0 * self.pfaffian


def _class_term(cmap, k, d0) -> ClassTerm:
    q = quadratic_form(cmap, k, d0)
    return ClassTerm(k, q, arf(q), matching_sign(cmap.graph, k, d0), pfaffian(kasteleyn_matrix(cmap, k)))


def class_terms(cmap: CombinatorialMap, d0: Optional[DimerConfiguration] = None, k0=None, jobs: int = 1) -> list[ClassTerm]:
    """Per-class data for the Arf-signed Pfaffian sum, in representative order."""
    if cmap.graph.vertex_count % 2:
        raise OddVertexCount("odd number of vertices")
    if d0 is None:
        d0 = find_perfect_matching(cmap.graph)
        if d0 is None:
            return []
    if k0 is None:
        k0 = construct_kasteleyn(cmap)
    reps = class_representatives(cmap, k0)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda k: _class_term(cmap, k, d0), reps))
    return [_class_term(cmap, k, d0) for k in reps]


def partition_function(cmap: CombinatorialMap, jobs: int = 1):
    """Dimer partition function as the Arf-signed sum of 2^(2g) Pfaffians."""
    terms = class_terms(cmap, jobs=jobs)
    if not terms:
        return Fraction(0)
    total = Fraction(0) if cmap.graph.exact else 0.0
    for t in terms:
        total += (-1) ** t.arf * t.signed_pfaffian
    return total / 2 ** cmap.genus

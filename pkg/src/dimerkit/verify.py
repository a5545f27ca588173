"""Cross-checks on built-in fixtures: brute force vs. Pfaffians vs. closed forms.

Each check returns ``(passed, detail)``; ``run_all`` times them in order and
wraps the results in :class:`Check`, whose verdict includes the time budget.
"""
from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .free_energy import free_energy_report
from .graph import brute_force_Z, enumerate_matchings, find_perfect_matching
from .kasteleyn import (
    all_quadratic_forms, arf, class_terms, construct_kasteleyn, partition_function, standard_symplectic_gram,
)
from .laurent import LaurentPoly2
from .lattices import (
    bipartite_square_torus, closed_form_toric_P, closed_form_Z_square, genus2_fixture, hex_torus, k33_torus,
    random_planar_map, square_planar, square_torus,
)
from .pfaffian import SkewMatrix, determinant, kasteleyn_matrix, pfaffian, pfaffian_expansion
from .toric import (
    characteristic_polynomial, charpoly_enlarged, enlarge, numeric_twisted_matrix, torus_zero_probe,
)

CATALAN = 0.915965594177219015054603514932384110774
DEFAULT_SEED = 0


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.budget

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.budget:g}s)"


def _timed(number, name, budget, fn, *args):
    t0 = time.perf_counter()
    try:
        passed, detail = fn(*args)
    except Exception as exc:  # a crash is a failure of the check, not of the runner
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(number, name, passed, detail, time.perf_counter() - t0, budget)


def _planar_counts():
    expected = {(4, 3): 11, (2, 2): 2, (4, 4): 36, (6, 6): 6728, (8, 8): 12988816}
    got = {k: partition_function(square_planar(*k)) for k in expected}
    bad = {k: v for k, v in got.items() if v != expected[k] or Fraction(v).denominator != 1}
    return not bad, "all exact" if not bad else f"mismatch {bad}"


def _closed_form():
    worst = 0.0
    for m in (2, 4, 6, 8):
        for n in range(1, 9):
            exact = partition_function(square_planar(m, n))
            if Fraction(exact).denominator != 1:
                return False, f"non-integer count at {m}x{n}"
            worst = max(worst, abs(closed_form_Z_square(m, n) - exact) / exact)
    return worst <= 1e-6, f"max relative error {worst:.2e}"


def _random_planar(seed):
    for s in range(seed, seed + 25):
        cmap = random_planar_map(s)
        pf, bf = partition_function(cmap), brute_force_Z(cmap.graph)
        if pf != bf:
            return False, f"seed {s}: pfaffian {pf} vs brute {bf}"
    return True, "25 maps agree exactly"


def genus_one_fixtures():
    return [
        ("square_torus(2,2)", square_torus(2, 2)),
        ("square_torus(4,4)", square_torus(4, 4)),
        ("square_torus(4,4,2,3)", square_torus(4, 4, 2, 3)),
        ("hex(1,1,1)", hex_torus(1, 1, 1).cmap),
        ("hex(2,3,5)", hex_torus(2, 3, 5).cmap),
        ("enlarge(hex,2)", enlarge(hex_torus(1, 1, 1), 2).cmap),
        ("bipartite_square(1,1)", bipartite_square_torus(1, 1).cmap),
        ("k33", k33_torus()),
    ]


def _genus_one():
    out = []
    for name, cmap in genus_one_fixtures():
        if cmap.genus != 1:
            return False, f"{name} has genus {cmap.genus}"
        pf, bf = partition_function(cmap), brute_force_Z(cmap.graph)
        if pf != bf:
            return False, f"{name}: pfaffian {pf} vs brute {bf}"
        out.append(str(bf))
    if out[-1] != "6":
        return False, "K33 count is not 6"
    return True, "Z = " + ", ".join(out)


def _genus_two():
    cmap = genus2_fixture()
    terms = class_terms(cmap)
    pf, bf = partition_function(cmap), brute_force_Z(cmap.graph)
    ok = cmap.genus == 2 and cmap.graph.vertex_count <= 16 and len(terms) == 16 and pf == bf
    return ok, f"genus {cmap.genus}, {len(terms)} terms, Z = {pf} vs brute {bf}"


def _arf_identity():
    for g in (1, 2):
        gram = standard_symplectic_gram(g)
        forms = all_quadratic_forms(gram)
        arfs = [arf(q) for q in forms]
        for alpha in product((0, 1), repeat=2 * g):
            total = sum(Fraction((-1) ** (a + q(alpha))) for q, a in zip(forms, arfs)) / 2 ** g
            if total != 1:
                return False, f"g={g}, alpha={alpha}: sum {total}"
    return True, "holds for every form and class, g = 1, 2"


def reference_bipartite_square(x, y) -> LaurentPoly2:
    x2, y2 = Fraction(x) ** 2, Fraction(y) ** 2
    return LaurentPoly2({(0, 0): 2 * (x2 + y2), (1, 0): y2, (-1, 0): y2, (0, 1): x2, (0, -1): x2})


def _charpolys():
    for a, b, c in ((1, 1, 1), (2, 3, 5), (7, 2, 3)):
        want = LaurentPoly2({(0, 0): a, (1, 0): b, (0, 1): c})
        if characteristic_polynomial(hex_torus(a, b, c)) != want:
            return False, f"hex({a},{b},{c}) mismatch"
    for x, y in ((1, 1), (2, 3)):
        got = characteristic_polynomial(bipartite_square_torus(x, y))
        if got != reference_bipartite_square(x, y).canonical():
            return False, f"bipartite square ({x},{y}) mismatch"
        raw = characteristic_polynomial(bipartite_square_torus(x, y), canonical=False)
        if raw != reference_bipartite_square(x, y):
            return False, f"bipartite square ({x},{y}) raw form differs"
    for m, n in ((2, 2), (4, 4), (4, 6), (6, 8)):
        if closed_form_toric_P(1, 1, m, n) != 0 or closed_form_toric_P(1, 1, m, n, reading="sum") != 0:
            return False, f"P11 nonzero at {m}x{n}"
    zeros = [t.pfaffian for t in class_terms(square_torus(4, 4))].count(0)
    if zeros != 1:
        return False, f"{zeros} vanishing class pfaffians on the 4x4 torus"
    return True, "hex and bipartite square exact; P11 = 0"


def _block_diagonal(seed):
    rng = random.Random(seed)
    worst = 0.0
    for model in (hex_torus(1, 1, 1), bipartite_square_torus(1, 1)):
        poly = characteristic_polynomial(model, canonical=False)
        for n in (2, 3):
            big = enlarge(model, n)
            for _ in range(10):
                z = cmath.exp(2j * math.pi * rng.random())
                w = cmath.exp(2j * math.pi * rng.random())
                product_form = charpoly_enlarged(poly, n, z, w)
                direct = np.linalg.det(numeric_twisted_matrix(big, z, w))
                worst = max(worst, abs(product_form - direct) / max(abs(direct), 1e-300))
    return worst <= 1e-9, f"max relative error {worst:.2e}"


def _catalan():
    poly = characteristic_polynomial(bipartite_square_torus(1, 1))
    rep = free_energy_report(poly)
    target = 4 * CATALAN / math.pi
    per_site = rep.value / 4
    ok = abs(rep.value - target) <= 1e-3 and abs(per_site - CATALAN / math.pi) <= 1e-3
    return ok, f"F = {rep.value:.9f} (4G/pi = {target:.9f}), per site {per_site:.9f}, n = {rep.n}"


def finite_size_hex(ns=(2, 3)):
    h = hex_torus(1, 1, 1)
    return [math.log(brute_force_Z(enlarge(h, n).graph)) / n ** 2 for n in ns]


def _finite_size():
    seq = finite_size_hex()
    rep = free_energy_report(LaurentPoly2({(0, 0): 1, (1, 0): 1, (0, 1): 1}))
    levels = [v for _, v in rep.history if v is not None]
    stable = len(levels) >= 2 and abs(levels[-1] - levels[-2]) <= 1e-4
    finite = all(math.isfinite(v) for v in seq)
    increasing = all(a < b for a, b in zip(seq, seq[1:]))
    below = all(v < rep.value for v in seq)
    detail = (f"(1/n^2) log Z = {', '.join(f'{v:.6f}' for v in seq)}; F = {rep.value:.9f}; "
              f"finite={finite} increasing={increasing} below={below} stable={stable}")
    return finite and increasing and below and stable, detail


def _probe(seed):
    hexp = LaurentPoly2({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    res = torus_zero_probe(hexp)
    targets = [(cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)),
               (cmath.exp(-2j * math.pi / 3), cmath.exp(2j * math.pi / 3))]
    if res.locus_count != 2:
        return False, f"hex: {res.locus_count} loci"
    for tz, tw in targets:
        if not any(abs(z - tz) <= 1e-6 and abs(w - tw) <= 1e-6 for z, w in res.loci):
            return False, f"hex: no locus near {tz:.6f}, {tw:.6f}"
    sq = characteristic_polynomial(bipartite_square_torus(1, 1))
    res = torus_zero_probe(sq)
    if res.locus_count != 1:
        return False, f"bipartite square: {res.locus_count} loci"
    (z, w), = res.loci
    if abs(z + 1) > 1e-6 or abs(w + 1) > 1e-6:
        return False, f"bipartite square locus at {z}, {w}"
    rng = random.Random(seed)
    worst = 0
    for poly in (hexp, sq):
        for _ in range(20):
            r1, r2 = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
            worst = max(worst, torus_zero_probe(poly, r1, r2).locus_count)
    return worst <= 2, f"unit torus loci 2 and 1 as expected; max over random tori {worst}"


def random_skew(rng, size, lo=-5, hi=5):
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            v = Fraction(rng.randint(lo, hi))
            rows[i][j], rows[j][i] = v, -v
    return SkewMatrix(rows)


def _pfaffian_algebra(seed):
    rng = random.Random(seed)
    for _ in range(100):
        a = random_skew(rng, rng.randint(2, 12))
        if pfaffian(a) ** 2 != determinant(a.entries):
            return False, "Pf^2 != det"
    for _ in range(50):
        a = random_skew(rng, rng.randint(2, 8))
        b = [[Fraction(rng.randint(-3, 3)) for _ in range(a.size)] for _ in range(a.size)]
        if pfaffian(a.congruent(b)) != determinant(b) * pfaffian(a):
            return False, "Pf(BAB^T) != det(B) Pf(A)"
    for s in range(seed, seed + 25):
        cmap = random_planar_map(s)
        k = construct_kasteleyn(cmap)
        if pfaffian(kasteleyn_matrix(cmap, k)) != pfaffian_expansion(cmap.graph, k, enumerate_matchings(cmap.graph)):
            return False, f"expansion mismatch on seed {s}"
    return True, "100 squares, 50 congruences, 25 expansions"


def homology_resolved(cmap):
    """Per class: (eps(D0) Pf, sum over alpha of (-1)^q(alpha) Z_alpha)."""
    g = cmap.graph
    d0 = find_perfect_matching(g)
    z_alpha: dict = {}
    for d in enumerate_matchings(g):
        alpha = cmap.homology_class({g.position(e) for e in d ^ d0})
        z_alpha[alpha] = z_alpha.get(alpha, 0) + d.weight(g)
    out = []
    for t in class_terms(cmap, d0=d0):
        rhs = sum((-1) ** t.form(alpha) * z for alpha, z in z_alpha.items())
        out.append((t.signed_pfaffian, rhs))
    return out


def _homology_resolved():
    for name, cmap in (("square_torus(2,2)", square_torus(2, 2)), ("hex(1,1,1)", hex_torus(1, 1, 1).cmap),
                       ("hex(2,3,5)", hex_torus(2, 3, 5).cmap)):
        for lhs, rhs in homology_resolved(cmap):
            if lhs != rhs:
                return False, f"{name}: {lhs} vs {rhs}"
    return True, "every class matches on all fixtures"


def run_all(seed: int = DEFAULT_SEED) -> list[Check]:
    specs = [
        (1, "exact planar counts", 5, _planar_counts),
        (2, "closed-form agreement", 5, _closed_form),
        (3, "brute force, genus 0", 30, _random_planar, seed),
        (4, "brute force, genus 1", 60, _genus_one),
        (5, "brute force, genus 2", 30, _genus_two),
        (6, "Arf identity", 1, _arf_identity),
        (7, "characteristic polynomials", 1, _charpolys),
        (8, "block diagonalization", 10, _block_diagonal, seed),
        (9, "free energy vs Catalan", 60, _catalan),
        (10, "finite-size consistency", 60, _finite_size),
        (11, "zero probe", 30, _probe, seed),
        (12, "pfaffian algebra", 30, _pfaffian_algebra, seed),
        (13, "homology-resolved pfaffian", 10, _homology_resolved),
    ]
    return [_timed(num, name, budget, fn, *args) for num, name, budget, fn, *args in specs]


CHECKS = {
    1: _planar_counts, 2: _closed_form, 3: _random_planar, 4: _genus_one, 5: _genus_two, 6: _arf_identity,
    7: _charpolys, 8: _block_diagonal, 9: _catalan, 10: _finite_size, 11: _probe, 12: _pfaffian_algebra,
    13: _homology_resolved,
}

"""Command-line interface: ``dimerkit <subcommand> ...``."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import io
from .errors import DimerError
from .free_energy import FAMILIES, free_energy_report
from .graph import brute_force_Z, enumerate_matchings
from .kasteleyn import construct_kasteleyn, partition_function
from .lattices import (
    bipartite_square_torus, genus2_fixture, hex_torus, k33_torus, random_planar_map, square_planar, square_torus,
    square_torus_model,
)
from .pfaffian import kasteleyn_matrix
from .surface import CombinatorialMap
from .toric import characteristic_polynomial, torus_zero_probe
from .verify import DEFAULT_SEED, run_all

GENERATORS = {
    "square-planar": (square_planar, "m n [x y]"),
    "square-torus": (square_torus, "m n [x y]"),
    "square-torus-model": (square_torus_model, "m n [x y]"),
    "hex": (hex_torus, "[a b c]"),
    "bipartite-square": (bipartite_square_torus, "[x y]"),
    "k33": (k33_torus, ""),
    "genus2": (genus2_fixture, ""),
    "random-planar": (None, "(uses --seed)"),
}


def fmt(x) -> str:
    """Exact values as integers or p/q, floats to 9 significant digits."""
    if isinstance(x, int) or isinstance(x, Fraction):
        return io.format_number(Fraction(x))
    if isinstance(x, complex):
        return f"{x.real:.9g}{x.imag:+.9g}j"
    return f"{x:.9g}"


class Output:
    def __init__(self, porcelain: bool, stream=None):
        self.porcelain = porcelain
        self.stream = stream or sys.stdout

    def emit(self, key: str, human: str, value=None):
        if self.porcelain:
            print(f"{key}={human if value is None else value}", file=self.stream)
        else:
            print(human, file=self.stream)


def _param(token: str):
    try:
        return int(token)
    except ValueError:
        return Fraction(token)


def _read_doc(path):
    if path in (None, "-"):
        return io.loads(sys.stdin.read())
    return io.read(path)


def cmd_gen(args, out):
    if args.family == "random-planar":
        obj = random_planar_map(args.seed)
    else:
        fn, _ = GENERATORS[args.family]
        try:
            obj = fn(*[_param(p) for p in args.params])
        except DimerError:
            raise
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad parameters for {args.family}: {exc}") from None
    text = io.dumps(obj)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_count(args, out):
    doc = _read_doc(args.file)
    unit = doc.graph.with_weights([1] * doc.graph.edge_count)
    if doc.rotation is not None:
        cmap = CombinatorialMap(unit, doc.rotation)
        out.emit("genus", f"genus {cmap.genus}", cmap.genus)
        n = partition_function(cmap, jobs=args.jobs)
    else:
        n = len(enumerate_matchings(unit, cap=args.cap))
    out.emit("count", fmt(n))
    return 0


def cmd_z(args, out):
    doc = _read_doc(args.file)
    values = []
    if args.method in ("pfaffian", "both"):
        values.append(("pfaffian", partition_function(doc.cmap(), jobs=args.jobs)))
    if args.method in ("brute", "both"):
        values.append(("brute", brute_force_Z(doc.graph, cap=args.cap)))
    if out.porcelain:
        for k, v in values:
            out.emit(k, fmt(v))
    else:
        print("  ".join(fmt(v) for _, v in values))
    return 0


def cmd_orient(args, out):
    doc = _read_doc(args.file)
    cmap = doc.cmap()
    k = construct_kasteleyn(cmap)
    for e, bit in zip(cmap.graph.edges, k):
        print(f"dir {e.id} {'u-to-v' if bit else 'v-to-u'}")
    if args.matrix_out:
        with open(args.matrix_out, "w", encoding="utf-8") as fh:
            for i, j, v in kasteleyn_matrix(cmap, k).triplets():
                fh.write(f"{i} {j} {fmt(v)}\n")
    return 0


def _graded(triples):
    return sorted(triples, key=lambda t: (t[1] + t[2], t[2], t[1]))


def cmd_charpoly(args, out):
    poly = characteristic_polynomial(_read_doc(args.file).model(), canonical=not args.raw)
    for c, m, n in _graded(poly.triples()):
        print(f"{fmt(c)} {m} {n}")
    return 0


def cmd_free_energy(args, out):
    poly = characteristic_polynomial(_read_doc(args.file).model())
    rep = free_energy_report(poly, args.tol, ceiling=args.ceiling)
    out.emit("value", fmt(rep.value))
    if args.per_site:
        out.emit("per_site", fmt(rep.value / args.per_site))
    out.emit("n", f"n {rep.n}", rep.n)
    out.emit("diverging", "diverging " + (" ".join(f"{a}{b}" for a, b in rep.diverging) or "none"),
             ",".join(f"{a}{b}" for a, b in rep.diverging))
    if out.porcelain:
        for n, vals in rep.table.items():
            for f in FAMILIES:
                print(f"family_{f[0]}{f[1]}_{n}={fmt(vals[f])}")
    else:
        print("n " + " ".join(f"{a}{b}".rjust(16) for a, b in FAMILIES))
        for n, vals in rep.table.items():
            print(f"{n} " + " ".join(fmt(vals[f]).rjust(16) for f in FAMILIES))
    return 0


def cmd_probe(args, out):
    poly = characteristic_polynomial(_read_doc(args.file).model())
    res = torus_zero_probe(poly, args.r1, args.r2, args.grid, args.tol)
    out.emit("loci", f"loci {res.locus_count}", res.locus_count)
    for i, (z, w) in enumerate(res.loci):
        out.emit(f"locus_{i}", f"{fmt(z)} {fmt(w)}")
    if res.skipped:
        out.emit("skipped", f"skipped {len(res.skipped)} degenerate slices", len(res.skipped))
    return 0


def cmd_verify(args, out):
    checks = run_all(args.seed)
    for c in checks:
        if out.porcelain:
            print(f"criterion_{c.number}={'pass' if c.ok else 'fail'}")
        else:
            print(c.line())
    return 0 if all(c.ok for c in checks) else 1


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dimerkit", description="Dimer partition functions on surface graphs.")
    p.add_argument("--porcelain", action="store_true", help="key=value output")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1, help="worker cap for per-class Pfaffians")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a built-in fixture")
    g.add_argument("family", choices=sorted(GENERATORS))
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--output")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    for name, helptext in (("count", "number of dimer configurations"), ("z", "partition function"),
                           ("orient", "Kasteleyn orientation"), ("charpoly", "characteristic polynomial"),
                           ("free-energy", "free energy per fundamental domain"), ("probe", "unit-torus zeros")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("file", nargs="?", help="input file (default: standard input)")
        if name in ("count", "z"):
            s.add_argument("--cap", type=int, default=36, help="vertex cap for brute force")
        if name == "z":
            s.add_argument("--method", choices=("pfaffian", "brute", "both"), default="pfaffian")
        if name == "orient":
            s.add_argument("--matrix-out")
        if name == "charpoly":
            s.add_argument("--raw", action="store_true", help="skip canonicalization")
        if name == "free-energy":
            s.add_argument("--tol", type=float, default=1e-6)
            s.add_argument("--per-site", type=int)
            s.add_argument("--ceiling", type=int, default=1 << 12)
        if name == "probe":
            s.add_argument("--r1", type=float, default=1.0)
            s.add_argument("--r2", type=float, default=1.0)
            s.add_argument("--grid", type=int, default=720)
            s.add_argument("--tol", type=float, default=1e-6)

    v = sub.add_parser("verify", help="run the cross-check suite")
    v.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return p


COMMANDS = {
    "gen": cmd_gen, "count": cmd_count, "z": cmd_z, "orient": cmd_orient, "charpoly": cmd_charpoly,
    "free-energy": cmd_free_energy, "probe": cmd_probe, "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.porcelain)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DimerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

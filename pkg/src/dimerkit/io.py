"""Text format for graphs, embeddings, colourings, windings and orientations.

::

    dimer-graph v1
    vertices 4
    edge 0 0 1 1
    ...
    rot 0 0+ 3- 5+
    color 0 white
    wind 3 0 1
    dir 0 u-to-v

``rot`` lists the darts leaving a vertex counterclockwise, ``d+`` being the
u -> v half of edge ``d``.  Windings are given for the white -> black
direction.  Everything after ``edge`` lines is optional, but ``rot``,
``color`` and ``wind`` lines must be complete when present.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DimerError, ParseError
from .graph import Edge, WeightedGraph
from .kasteleyn import Orientation
from .surface import CombinatorialMap
from .toric import TorusDimerModel

HEADER = "dimer-graph v1"


@dataclass
class GraphDocument:
    graph: WeightedGraph
    rotation: Optional[list] = None  # per vertex, darts as 2 * position + side
    coloring: Optional[tuple] = None
    windings: Optional[tuple] = None  # per edge position
    orientation: Optional[Orientation] = None

    @classmethod
    def from_object(cls, obj, orientation=None) -> "GraphDocument":
        if isinstance(obj, TorusDimerModel):
            doc = cls(obj.cmap.graph, [list(r) for r in obj.cmap.rotation], obj.coloring, obj.windings, obj.orientation)
        elif isinstance(obj, CombinatorialMap):
            doc = cls(obj.graph, [list(r) for r in obj.rotation])
        elif isinstance(obj, WeightedGraph):
            doc = cls(obj)
        else:
            raise TypeError(f"cannot serialize {type(obj).__name__}")
        if orientation is not None:
            doc.orientation = Orientation(orientation)
        return doc

    def cmap(self) -> CombinatorialMap:
        if self.rotation is None:
            raise ParseError("the document has no rot lines")
        return CombinatorialMap(self.graph, self.rotation)

    def model(self) -> TorusDimerModel:
        if self.coloring is None or self.windings is None:
            raise ParseError("a torus model needs color and wind lines")
        return TorusDimerModel(self.cmap(), self.coloring, self.windings, self.orientation)


def format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _dart_token(graph: WeightedGraph, d: int) -> str:
    return f"{graph.edges[d >> 1].id}{'-' if d & 1 else '+'}"


def dumps(obj, orientation=None) -> str:
    doc = obj if isinstance(obj, GraphDocument) else GraphDocument.from_object(obj, orientation)
    g = doc.graph
    lines = [HEADER, f"vertices {g.vertex_count}"]
    for e in g.edges:
        lines.append(f"edge {e.id} {e.u} {e.v} {format_number(e.weight)}")
    if doc.rotation is not None:
        for v, rot in enumerate(doc.rotation):
            lines.append(" ".join([f"rot {v}"] + [_dart_token(g, d) for d in rot]))
    if doc.coloring is not None:
        for v, c in enumerate(doc.coloring):
            lines.append(f"color {v} {c}")
    if doc.windings is not None:
        for e, (hx, hy) in zip(g.edges, doc.windings):
            lines.append(f"wind {e.id} {hx} {hy}")
    if doc.orientation is not None:
        for e, bit in zip(g.edges, doc.orientation):
            lines.append(f"dir {e.id} {'u-to-v' if bit else 'v-to-u'}")
    return "\n".join(lines) + "\n"


def _parse_weight(token: str, lineno: int) -> Fraction:
    try:
        w = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"line {lineno}: bad weight {token!r}") from None
    if w <= 0:
        raise ParseError(f"line {lineno}: weights must be positive")
    return w


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {token!r}") from None


def loads(text: str) -> GraphDocument:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows or " ".join(rows[0][1]) != HEADER:
        raise ParseError(f"missing header {HEADER!r}")
    if len(rows) < 2 or rows[1][1][0] != "vertices" or len(rows[1][1]) != 2:
        raise ParseError("second line must be 'vertices N'")
    n = _int(rows[1][1][1], rows[1][0])
    if n < 0:
        raise ParseError("negative vertex count")

    edges: list[Edge] = []
    seen_ids: dict = {}
    rot: dict = {}
    color: dict = {}
    wind: dict = {}
    dirs: dict = {}
    for lineno, tok in rows[2:]:
        kind = tok[0]
        if kind == "edge":
            if rot or color or wind or dirs:
                raise ParseError(f"line {lineno}: edge lines must precede the others")
            if len(tok) != 5:
                raise ParseError(f"line {lineno}: expected 'edge id u v weight'")
            eid, u, v = (_int(t, lineno) for t in tok[1:4])
            if eid in seen_ids:
                raise ParseError(f"line {lineno}: duplicate edge id {eid}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"line {lineno}: endpoint out of range")
            if u == v:
                raise ParseError(f"line {lineno}: loops are not allowed")
            seen_ids[eid] = len(edges)
            edges.append(Edge(eid, u, v, _parse_weight(tok[4], lineno)))
        elif kind == "rot":
            v = _vertex(tok, n, rot, lineno)
            darts = []
            for t in tok[2:]:
                t = t.replace("−", "-")
                if len(t) < 2 or t[-1] not in "+-":
                    raise ParseError(f"line {lineno}: bad dart {t!r}")
                eid = _int(t[:-1], lineno)
                if eid not in seen_ids:
                    raise ParseError(f"line {lineno}: unknown edge {eid}")
                darts.append(2 * seen_ids[eid] + (t[-1] == "-"))
            rot[v] = darts
        elif kind == "color":
            v = _vertex(tok, n, color, lineno)
            if len(tok) != 3 or tok[2] not in ("black", "white"):
                raise ParseError(f"line {lineno}: expected 'color v black|white'")
            color[v] = tok[2]
        elif kind in ("wind", "dir"):
            target = wind if kind == "wind" else dirs
            eid = _int(tok[1], lineno) if len(tok) > 1 else None
            if eid not in seen_ids:
                raise ParseError(f"line {lineno}: unknown edge {eid}")
            p = seen_ids[eid]
            if p in target:
                raise ParseError(f"line {lineno}: repeated {kind} for edge {eid}")
            if kind == "wind":
                if len(tok) != 4:
                    raise ParseError(f"line {lineno}: expected 'wind id hx hy'")
                target[p] = (_int(tok[2], lineno), _int(tok[3], lineno))
            else:
                if len(tok) != 3 or tok[2] not in ("u-to-v", "v-to-u"):
                    raise ParseError(f"line {lineno}: expected 'dir id u-to-v|v-to-u'")
                target[p] = tok[2] == "u-to-v"
        else:
            raise ParseError(f"line {lineno}: unknown record {kind!r}")

    try:
        graph = WeightedGraph(n, tuple(edges))
    except DimerError as exc:
        raise ParseError(str(exc)) from None
    m = len(edges)
    return GraphDocument(
        graph,
        [rot[v] for v in range(n)] if _complete(rot, n, "rot") else None,
        tuple(color[v] for v in range(n)) if _complete(color, n, "color") else None,
        tuple(wind[p] for p in range(m)) if _complete(wind, m, "wind") else None,
        Orientation(dirs[p] for p in range(m)) if _complete(dirs, m, "dir") else None,
    )


def _vertex(tok, n, table, lineno) -> int:
    if len(tok) < 2:
        raise ParseError(f"line {lineno}: missing vertex")
    v = _int(tok[1], lineno)
    if not 0 <= v < n:
        raise ParseError(f"line {lineno}: vertex {v} out of range")
    if v in table:
        raise ParseError(f"line {lineno}: repeated {tok[0]} for vertex {v}")
    return v


def _complete(table: dict, size: int, kind: str) -> bool:
    if not table:
        return False
    if len(table) != size:
        raise ParseError(f"{kind} lines cover {len(table)} of {size} items")
    return True


def read(path) -> GraphDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(obj, path, orientation=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, orientation))

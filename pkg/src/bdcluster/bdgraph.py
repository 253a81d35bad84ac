"""Directed BD graph of a pair of triples and its alternating-path pieces.

Vertices are two copies of [1, n-1] (upper and lower).  Inclined edges
run downward from the row data (upper i -> lower map_r(i)) and upward
from the column data (lower map_c(k) -> upper k).  Horizontal edges pair
i with n-i inside each part, one edge per direction; for even n a single
loop at n/2 survives per part.

Alternation plus edge directions leave every edge with at most one
admissible predecessor and successor, so the decomposition into maximal
alternating paths and cycles is unique.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bd import BDPair


@dataclass(frozen=True)
class Edge:
    src: tuple[str, int]
    dst: tuple[str, int]
    kind: str  # "inclined" | "horizontal" | "loop"


@dataclass(frozen=True)
class AlternatingPath:
    edges: tuple[Edge, ...]

    def vertices(self) -> list[tuple[str, int]]:
        return [self.edges[0].src] + [e.dst for e in self.edges]

    def label(self) -> str:
        """Vertex word, lower-part vertices marked with a dash suffix."""
        return " ".join(f"{i}-" if part == "l" else str(i)
                        for part, i in self.vertices())

    def horizontal_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.kind != "inclined"]


@dataclass(frozen=True)
class PathDecomposition:
    paths: tuple[AlternatingPath, ...]
    cycles: tuple[AlternatingPath, ...]

    @property
    def aperiodic(self) -> bool:
        return not self.cycles


class BDGraph:
    def __init__(self, pair: BDPair):
        self.pair = pair
        n = pair.n
        edges: list[Edge] = []
        for part in ("u", "l"):
            for i in range(1, n):
                j = n - i
                if i == j:
                    edges.append(Edge((part, i), (part, i), "loop"))
                else:
                    edges.append(Edge((part, i), (part, j), "horizontal"))
        for i in sorted(pair.rows.gamma1):
            edges.append(Edge(("u", i), ("l", pair.rows.map[i]), "inclined"))
        for k in sorted(pair.cols.gamma1):
            edges.append(Edge(("l", pair.cols.map[k]), ("u", k), "inclined"))
        self.edges = edges
        self.n = n

    def vertices(self):
        return [(p, i) for p in ("u", "l") for i in range(1, self.n)]

    def _successor(self, e: Edge) -> Edge | None:
        """The unique alternating continuation of e, if any."""
        n = self.n
        pair = self.pair
        if e.kind == "inclined":
            part, v = e.dst
            if v == n - v:
                return Edge((part, v), (part, v), "loop")
            return Edge((part, v), (part, n - v), "horizontal")
        part, v = e.dst
        if part == "u":
            if v in pair.rows.gamma1:
                return Edge(("u", v), ("l", pair.rows.map[v]), "inclined")
        else:
            inv = pair.cols.inverse_map()
            if v in inv:
                return Edge(("l", v), ("u", inv[v]), "inclined")
        return None

    def _predecessor(self, e: Edge) -> Edge | None:
        n = self.n
        pair = self.pair
        if e.kind == "inclined":
            part, v = e.src
            if v == n - v:
                return Edge((part, v), (part, v), "loop")
            return Edge((part, n - v), (part, v), "horizontal")
        part, v = e.src
        if part == "u":
            if v in pair.cols.gamma1:
                return Edge(("l", pair.cols.map[v]), ("u", v), "inclined")
        else:
            inv = pair.rows.inverse_map()
            if v in inv:
                return Edge(("u", inv[v]), ("l", v), "inclined")
        return None

    def decompose(self) -> PathDecomposition:
        remaining = set(self.edges)
        paths, cycles = [], []
        # deterministic order: iterate edges as constructed
        for e in self.edges:
            if e not in remaining:
                continue
            # walk backwards to the start, or detect a cycle
            chain = [e]
            seen = {e}
            is_cycle = False
            cur = e
            while True:
                p = self._predecessor(cur)
                if p is None or p not in remaining:
                    break
                if p in seen:
                    is_cycle = True
                    break
                chain.insert(0, p)
                seen.add(p)
                cur = p
            if not is_cycle:
                cur = chain[-1]
                while True:
                    s = self._successor(cur)
                    if s is None or s not in remaining or s in seen:
                        break
                    chain.append(s)
                    seen.add(s)
                    cur = s
            piece = AlternatingPath(tuple(chain))
            for edge in chain:
                remaining.discard(edge)
            (cycles if is_cycle else paths).append(piece)
        return PathDecomposition(tuple(paths), tuple(cycles))

    def path_through(self, e: Edge) -> AlternatingPath:
        for piece in self.decompose().paths + self.decompose().cycles:
            if e in piece.edges:
                return piece
        raise KeyError(e)

    def to_dot(self) -> str:
        def name(v):
            return f"{v[0]}{v[1]}"

        lines = ["digraph bd {"]
        for v in self.vertices():
            lines.append(f'  {name(v)};')
        for e in self.edges:
            lines.append(f'  {name(e.src)} -> {name(e.dst)} [type={e.kind}];')
        lines.append("}")
        return "\n".join(lines)


def decompose(pair: BDPair) -> PathDecomposition:
    return BDGraph(pair).decompose()


def is_aperiodic(pair: BDPair) -> bool:
    return decompose(pair).aperiodic


class NotAperiodic(ValueError):
    pass


def require_aperiodic(pair: BDPair):
    dec = decompose(pair)
    if not dec.aperiodic:
        raise NotAperiodic(
            "pair is periodic; alternating cycles: "
            + "; ".join(c.label() for c in dec.cycles))
    return dec

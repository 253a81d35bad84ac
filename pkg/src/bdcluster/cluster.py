"""Quivers on the (i, j) grid, y-variables, mutation, symbolic regularity.

The base quiver has frozen first row and column and the three standard
arrow families; the exotic quiver unfreezes the interiors of the runs
and threads extra paths through column n (row data) and row n (column
data), with the direction pattern depending on whether the isometry
preserves or reverses each component.  Opposite arrow pairs cancel and
arrows between two frozen vertices are dropped; the dummy (1,1) keeps
its arrows, matching the GL_n reading where f_11 = det Z is a genuine
frozen variable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .bd import BDPair
from .bdgraph import NotAperiodic, require_aperiodic
from .blocks import all_seed_functions
from .linalg import Mat
from .poly import Poly, poly_matrix_vars

Vertex = tuple[int, int]


@dataclass(frozen=True)
class Quiver:
    n: int
    frozen: frozenset[Vertex]
    arrows: tuple[tuple[Vertex, Vertex, int], ...]  # (src, dst, multiplicity)

    def vertices(self) -> list[Vertex]:
        return [(i, j) for i in range(1, self.n + 1) for j in range(1, self.n + 1)]

    def mutable(self) -> list[Vertex]:
        return [v for v in self.vertices() if v not in self.frozen]

    def arrow_counter(self) -> Counter:
        return Counter({(s, d): m for s, d, m in self.arrows})

    def out_of(self, v: Vertex):
        return [(d, m) for s, d, m in self.arrows if s == v]

    def into(self, v: Vertex):
        return [(s, m) for s, d, m in self.arrows if d == v]

    def exchange_matrix(self):
        """b[u][v] = #(u -> v) - #(v -> u), rows all vertices, columns the
        mutable ones, both in row-major (i, j) order."""
        verts = self.vertices()
        mut = self.mutable()
        cnt = self.arrow_counter()
        return [[cnt.get((u, v), 0) - cnt.get((v, u), 0) for v in mut] for u in verts]


def _normalize(n, frozen, counter: Counter) -> Quiver:
    cnt = Counter()
    for (s, d), m in counter.items():
        if m == 0 or s == d:
            continue
        cnt[(s, d)] += m
    for (s, d) in [k for k in cnt]:
        if s < d or (s, d) not in cnt:
            continue
        back = cnt.get((d, s), 0)
        if back:
            m = min(cnt[(s, d)], back)
            cnt[(s, d)] -= m
            cnt[(d, s)] -= m
    cnt = Counter({k: m for k, m in cnt.items() if m > 0})
    cnt = Counter({(s, d): m for (s, d), m in cnt.items()
                   if not (s in frozen and d in frozen)})
    arrows = tuple(sorted((s, d, m) for (s, d), m in cnt.items()))
    return Quiver(n, frozenset(frozen), arrows)


def standard_quiver(n: int) -> Quiver:
    """Frozen first row and column; arrows (i,j)->(i,j-1), (i,j)->(i-1,j),
    (i,j)->(i+1,j+1) inside the grid."""
    frozen = {(i, 1) for i in range(1, n + 1)} | {(1, j) for j in range(1, n + 1)}
    cnt = Counter()
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for (a, b) in ((i, j - 1), (i - 1, j), (i + 1, j + 1)):
                if 1 <= a <= n and 1 <= b <= n:
                    cnt[((i, j), (a, b))] += 1
    return _normalize(n, frozen, cnt)


def frozen_vertices(pair: BDPair) -> frozenset[Vertex]:
    n = pair.n
    frozen = {(1, 1)}
    for k, _ in pair.x_row_runs().intervals:
        frozen.add((k, 1))
    for p, _ in pair.y_col_runs().intervals:
        frozen.add((1, p))
    return frozenset(frozen)


def _path_arrows(cnt: Counter, path: list[Vertex]):
    for s, d in zip(path, path[1:]):
        cnt[(s, d)] += 1


def exotic_quiver(pair: BDPair) -> Quiver:
    """The quiver of the pair; requires aperiodicity."""
    require_aperiodic(pair)
    n = pair.n
    frozen = set(frozen_vertices(pair))
    # start from the drawn standard quiver: its frozen-frozen arrows are
    # already gone and unfreezing does not resurrect them, the added paths do
    cnt = Counter(standard_quiver(n).arrow_counter())

    g_r = pair.rows.map
    for k, m in pair.x_row_runs().intervals:
        if k == m:
            continue
        comp = (k, m - 1)
        if pair.rows.orientation(comp) == "preserved":
            _path_arrows(cnt, [(r, 1) for r in range(m, k - 1, -1)])
            path = []
            for r in range(k, m):
                path += [(g_r[r], n), (r + 1, 1)]
            path.append((g_r[m - 1] + 1, n))
            _path_arrows(cnt, path)
        else:
            _path_arrows(cnt, [(k + 1, 1), (k, 1)])
            path = []
            for r in range(m - 1, k - 1, -1):
                path += [(g_r[r], n), (r + 1, 1)]
            path.append((g_r[k] + 1, n))
            _path_arrows(cnt, path)

    g_c_inv = pair.cols.inverse_map()
    for p, q in pair.y_col_runs().intervals:
        if p == q:
            continue
        comp = (p, q - 1)
        # orientation of (gamma_c)^* on the gamma2 component mirrors that of
        # gamma_c on the corresponding gamma1 component
        src_comp = pair.cols.component_of(g_c_inv[p])
        orient = pair.cols.orientation(src_comp)
        if orient == "preserved":
            _path_arrows(cnt, [(1, c) for c in range(q, p - 1, -1)])
            path = []
            for c in range(p, q):
                path += [(n, g_c_inv[c]), (1, c + 1)]
            path.append((n, g_c_inv[q - 1] + 1))
            _path_arrows(cnt, path)
        else:
            _path_arrows(cnt, [(1, p + 1), (1, p)])
            path = []
            for c in range(q - 1, p - 1, -1):
                path += [(n, g_c_inv[c]), (1, c + 1)]
            path.append((n, g_c_inv[p] + 1))
            _path_arrows(cnt, path)

    return _normalize(n, frozen, cnt)


@dataclass
class ClusterSeed:
    pair: BDPair
    quiver: Quiver
    functions: dict[Vertex, object] = field(default_factory=dict)

    @staticmethod
    def initial(pair: BDPair) -> "ClusterSeed":
        quiver = exotic_quiver(pair)
        funcs = dict(all_seed_functions(pair))
        funcs[(1, 1)] = _constant_one()
        return ClusterSeed(pair, quiver, funcs)

    def value(self, v: Vertex, Z: Mat):
        return self.functions[v](Z)

    def y_variable(self, v: Vertex, Z: Mat):
        if v in self.quiver.frozen:
            raise ValueError(f"{v} is frozen")
        num = Fraction(1)
        for u, m in self.quiver.out_of(v):
            num = num * self.value(u, Z) ** m
        den = Fraction(1)
        for w, m in self.quiver.into(v):
            den = den * self.value(w, Z) ** m
        if den == 0:
            raise ZeroDivisionError("y-variable denominator vanished")
        return num / den

    def mutate(self, v: Vertex) -> "ClusterSeed":
        if v in self.quiver.frozen:
            raise ValueError(f"{v} is frozen")
        cnt = self.quiver.arrow_counter()
        outs = [(d, m) for (s, d), m in cnt.items() if s == v]
        ins = [(s, m) for (s, d), m in cnt.items() if d == v]
        new = Counter(cnt)
        for s, m1 in ins:
            for d, m2 in outs:
                new[(s, d)] += m1 * m2
        for d, m in outs:
            del new[(v, d)]
            new[(d, v)] += m
        for s, m in ins:
            del new[(s, v)]
            new[(v, s)] += m
        quiver = _normalize(self.quiver.n, self.quiver.frozen, new)
        funcs = dict(self.functions)
        funcs[v] = _exchange_function(self.functions, outs, ins, self.functions[v])
        return ClusterSeed(self.pair, quiver, funcs)


def _constant_one():
    class _One:
        def __call__(self, Z):
            one = Z.get(0, 0) - Z.get(0, 0) + 1
            return one if not isinstance(Z.get(0, 0), Poly) else \
                Poly.const(Z.get(0, 0).nvars, 1)
    return _One()


def _exchange_function(functions, outs, ins, old):
    def f(Z):
        a = None
        for u, m in outs:
            t = functions[u](Z) ** m
            a = t if a is None else a * t
        b = None
        for w, m in ins:
            t = functions[w](Z) ** m
            b = t if b is None else b * t
        denom = old(Z)
        if isinstance(denom, Poly):
            return (a + b).exact_div(denom)
        return (a + b) / denom
    return f


def symbolic_seed_functions(pair: BDPair):
    """Seed functions as exact polynomials in the n^2 entries of Z."""
    n = pair.n
    Z = poly_matrix_vars(n)
    funcs = all_seed_functions(pair)
    out = {}
    for key, f in funcs.items():
        out[key] = f(Z)
    out[(1, 1)] = _det_poly(Z)
    return out


def _det_poly(Z):
    from .linalg import det
    return det(Z)


@dataclass
class RegularityVerdict:
    vertex: Vertex
    divisible: bool
    quotient_terms: int


def regularity_check(pair: BDPair, v: Vertex) -> RegularityVerdict:
    """Exchange numerator of v divided symbolically by f_v.

    The division is exact polynomial division over the n^2 variables of
    Z (GL_n reading: the dummy function is det Z); intended for n <= 3.
    """
    from .poly import NotDivisible

    quiver = exotic_quiver(pair)
    if v in quiver.frozen:
        raise ValueError(f"{v} is frozen")
    polys = symbolic_seed_functions(pair)
    num = None
    for u, m in quiver.out_of(v):
        t = polys[u] ** m
        num = t if num is None else num * t
    other = None
    for w, m in quiver.into(v):
        t = polys[w] ** m
        other = t if other is None else other * t
    total = num + other
    try:
        q = total.exact_div(polys[v])
        return RegularityVerdict(v, True, len(q.terms))
    except NotDivisible:
        return RegularityVerdict(v, False, 0)


def quiver_to_dot(q: Quiver) -> str:
    lines = ["digraph quiver {"]
    for v in q.vertices():
        shape = "box" if v in q.frozen else "ellipse"
        lines.append(f'  "{v[0]},{v[1]}" [shape={shape}];')
    for s, d, m in q.arrows:
        lines.append(f'  "{s[0]},{s[1]}" -> "{d[0]},{d[1]}" [label={m}];')
    lines.append("}")
    return "\n".join(lines)


def quiver_to_json(q: Quiver) -> dict:
    return {
        "n": q.n,
        "vertex_order": "row-major (i, j)",
        "frozen": sorted(map(list, q.frozen)),
        "arrows": [[list(s), list(d), m] for s, d, m in q.arrows],
        "exchange_matrix": q.exchange_matrix(),
        "mutable": [list(v) for v in q.mutable()],
    }

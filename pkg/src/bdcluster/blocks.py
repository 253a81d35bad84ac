"""Blocks, glued matrices, and the seed functions f_ij.

Every directed horizontal edge of the BD graph carves a primal block out
of X (upper part) or Y (lower part) and a dual block out of the
conjugated cofactor matrix.  A maximal alternating path glues these
blocks into two square matrices: consecutive blocks share the rows (or
columns) that the row (column) BD triple identifies, with primal glued
to primal where the triple preserves component orientation and primal
glued to dual where it reverses.  The seed function f_ij is the trailing
principal minor of the glued matrix anchored at the diagonal entry
holding x_ij (i > j) or y_ij (i < j), restricted to X = Y = Z; f_ii is
the plain trailing minor of Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bd import BDPair, RunPartition
from .bdgraph import AlternatingPath, BDGraph, Edge
from .dual import Dual2
from .linalg import Mat, NonGeneric, det, dual_matrix, inverse

PRIMAL = {"u": "X", "l": "Y"}
DUAL = {"u": "Xd", "l": "Yd"}


@dataclass(frozen=True)
class BlockSpec:
    kind: str                 # X | Xd | Y | Yd
    rows: tuple[int, int]     # 1-based inclusive
    cols: tuple[int, int]
    exit: tuple[int, int]
    entrance: tuple[int, int]
    row_runs: RunPartition
    col_runs: RunPartition

    @property
    def nrows(self):
        return self.rows[1] - self.rows[0] + 1

    @property
    def ncols(self):
        return self.cols[1] - self.cols[0] + 1


def block_for_edge(pair: BDPair, edge: Edge, source: str) -> BlockSpec:
    """The minimal block of `source` holding the defining (sub/super)diagonal
    of a directed horizontal edge i -> n-i."""
    n = pair.n
    part, i = edge.src
    if edge.kind == "inclined":
        raise ValueError("blocks belong to horizontal edges")
    if part == "u":
        if source == "X":
            rr, cr = pair.x_row_runs(), pair.x_col_runs()
            rows = (rr.run_of(n - i + 1)[0], n)
            cols = (1, cr.run_of(i)[1])
            return BlockSpec("X", rows, cols, (n - i + 1, 1), (n, i), rr, cr)
        if source == "Xd":
            rr, cr = pair.x_row_runs().dual(), pair.x_col_runs().dual()
            rows = (rr.run_of(i + 1)[0], n)
            cols = (1, cr.run_of(n - i)[1])
            return BlockSpec("Xd", rows, cols, (i + 1, 1), (n, n - i), rr, cr)
        raise ValueError(f"upper edges carve X or Xd, not {source}")
    if source == "Y":
        rr, cr = pair.y_row_runs(), pair.y_col_runs()
        rows = (1, rr.run_of(i)[1])
        cols = (cr.run_of(n - i + 1)[0], n)
        return BlockSpec("Y", rows, cols, (1, n - i + 1), (i, n), rr, cr)
    if source == "Yd":
        rr, cr = pair.y_row_runs().dual(), pair.y_col_runs().dual()
        rows = (1, rr.run_of(n - i)[1])
        cols = (cr.run_of(i + 1)[0], n)
        return BlockSpec("Yd", rows, cols, (1, i + 1), (n - i, n), rr, cr)
    raise ValueError(f"lower edges carve Y or Yd, not {source}")


@dataclass(frozen=True)
class PlacedBlock:
    spec: BlockSpec
    edge_index: int           # position among the path's horizontal edges
    row_off: int
    col_off: int

    def template_pos(self, r, c):
        return (r - self.spec.rows[0] + 1 + self.row_off,
                c - self.spec.cols[0] + 1 + self.col_off)

    def rect(self):
        r1, c1 = self.template_pos(self.spec.rows[0], self.spec.cols[0])
        r2, c2 = self.template_pos(self.spec.rows[1], self.spec.cols[1])
        return r1, c1, r2, c2


class GluedMatrix:
    """A square template assembled from blocks along an alternating path."""

    def __init__(self, pair: BDPair, path: AlternatingPath, blocks: list[PlacedBlock]):
        self.pair = pair
        self.path = path
        self.blocks = blocks
        rects = [b.rect() for b in blocks]
        rmin = min(r[0] for r in rects)
        cmin = min(r[1] for r in rects)
        self.blocks = [PlacedBlock(b.spec, b.edge_index,
                                   b.row_off - rmin + 1, b.col_off - cmin + 1)
                       for b in blocks]
        rects = [b.rect() for b in self.blocks]
        self.N = max(r[2] for r in rects)
        if self.N != max(r[3] for r in rects):
            raise AssertionError("glued template is not square")
        self.embedding: dict[tuple[int, int], tuple[str, int, int]] = {}
        for b in self.blocks:
            for r in range(b.spec.rows[0], b.spec.rows[1] + 1):
                for c in range(b.spec.cols[0], b.spec.cols[1] + 1):
                    pos = b.template_pos(r, c)
                    if pos in self.embedding:
                        raise AssertionError(f"blocks overlap at {pos}")
                    self.embedding[pos] = (b.spec.kind, r, c)
        self._check_geometry()

    def _check_geometry(self):
        first, last = self.blocks[0], self.blocks[-1]
        if first.template_pos(*first.spec.entrance) != (self.N, self.N):
            raise AssertionError("entrance of the first block must sit at (N, N)")
        if last.template_pos(*last.spec.exit) != (1, 1):
            raise AssertionError("exit of the last block must sit at (1, 1)")
        for b in self.blocks:
            for pt in (b.spec.exit, b.spec.entrance):
                r, c = b.template_pos(*pt)
                if r != c:
                    raise AssertionError("defining diagonal left the main diagonal")

    def block_of_edge(self, edge_index: int) -> PlacedBlock:
        for b in self.blocks:
            if b.edge_index == edge_index:
                return b
        raise KeyError(edge_index)

    def materialize(self, sources: dict[str, Mat], start: int = 1) -> Mat:
        """Fill template rows/cols start..N from the source matrices."""
        size = self.N - start + 1
        zero = _zero_of(sources)
        rows = [[zero] * size for _ in range(size)]
        for (R, C), (kind, r, c) in self.embedding.items():
            if R >= start and C >= start:
                rows[R - start][C - start] = sources[kind].get(r - 1, c - 1)
        return Mat(rows)


def _zero_of(sources):
    sample = next(iter(sources.values())).get(0, 0)
    return sample - sample


def _diag_sources(Z: Mat) -> dict[str, Mat]:
    Zd = dual_matrix(Z)
    return {"X": Z, "Y": Z, "Xd": Zd, "Yd": Zd}


def _xy_sources(X: Mat, Y: Mat) -> dict[str, Mat]:
    return {"X": X, "Y": Y, "Xd": dual_matrix(X), "Yd": dual_matrix(Y)}


def glued_matrices(pair: BDPair, path: AlternatingPath):
    """The two matrices glued along a maximal alternating path.

    Returns (A, B, primal_in_a) where primal_in_a[t] says whether the
    primal block of the t-th horizontal edge landed in A.
    """
    horiz = path.horizontal_edges()
    if not horiz:
        raise ValueError("path carries no horizontal edge")
    inclined = [e for e in path.edges if e.kind == "inclined"]

    primal_in_a = [True]
    gluings = []  # (mode, orientation) per consecutive pair of blocks
    for t, inc in enumerate(inclined):
        if inc.src[0] == "u":        # downward: row-to-row via the row triple
            comp = pair.rows.component_of(inc.src[1])
            orient = pair.rows.orientation(comp)
            mode = "rows"
        else:                        # upward: column-to-column via the column triple
            comp = pair.cols.component_of(inc.dst[1])
            orient = pair.cols.orientation(comp)
            mode = "cols"
        gluings.append((mode, orient))
        primal_in_a.append(primal_in_a[-1] == (orient == "preserved"))

    def build(start_primal: bool) -> GluedMatrix:
        is_primal = start_primal
        spec0 = block_for_edge(pair, horiz[0],
                               (PRIMAL if is_primal else DUAL)[horiz[0].src[0]])
        placed = [PlacedBlock(spec0, 0, 0, 0)]
        for t, (mode, orient) in enumerate(gluings):
            is_primal = is_primal == (orient == "preserved")
            q = block_for_edge(pair, horiz[t + 1],
                               (PRIMAL if is_primal else DUAL)[horiz[t + 1].src[0]])
            p = placed[-1]
            if mode == "rows":
                p_run = p.spec.row_runs.run_of(p.spec.rows[0])
                q_run = q.row_runs.run_of(q.rows[1])
                if p_run[1] - p_run[0] != q_run[1] - q_run[0]:
                    raise AssertionError("glued row runs differ in length")
                row_off = p.row_off + (p_run[0] - p.spec.rows[0]) - (q_run[0] - q.rows[0])
                col_off = p.col_off - (q.cols[1] - q.cols[0] + 1)
            else:
                p_run = p.spec.col_runs.run_of(p.spec.cols[0])
                q_run = q.col_runs.run_of(q.cols[1])
                if p_run[1] - p_run[0] != q_run[1] - q_run[0]:
                    raise AssertionError("glued column runs differ in length")
                col_off = p.col_off + (p_run[0] - p.spec.cols[0]) - (q_run[0] - q.cols[0])
                row_off = p.row_off - (q.rows[1] - q.rows[0] + 1)
            placed.append(PlacedBlock(q, t + 1, row_off, col_off))
        return GluedMatrix(pair, path, placed)

    return build(True), build(False), primal_in_a


class _PathIndex:
    """Per-pair cache of the path decomposition and glued matrices."""

    def __init__(self, pair: BDPair):
        self.pair = pair
        self.graph = BDGraph(pair)
        dec = self.graph.decompose()
        self.pieces = dec.paths + dec.cycles
        self._glued: dict[int, tuple] = {}

    def piece_of(self, edge: Edge):
        for idx, piece in enumerate(self.pieces):
            for h_index, e in enumerate(piece.horizontal_edges()):
                if e == edge:
                    return idx, h_index
        raise KeyError(edge)

    def glued(self, piece_index: int):
        if piece_index not in self._glued:
            self._glued[piece_index] = glued_matrices(self.pair, self.pieces[piece_index])
        return self._glued[piece_index]


_INDEX_CACHE: dict = {}


def _index(pair: BDPair) -> _PathIndex:
    if pair not in _INDEX_CACHE:
        _INDEX_CACHE[pair] = _PathIndex(pair)
    return _INDEX_CACHE[pair]


@dataclass(frozen=True)
class SubordinateSet:
    x_exits: tuple[int, ...]   # rows k of subordinate X-exit points (k, 1)
    y_exits: tuple[int, ...]   # columns m of subordinate Y-exit points (1, m)


class SeedFunction:
    """f_ij: trailing principal minor of the glued matrix from its anchor."""

    def __init__(self, pair: BDPair, i: int, j: int):
        self.pair = pair
        self.i, self.j = i, j
        n = pair.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError("indices out of range")
        if i == j:
            self.host = None
            self.anchor = i
            self.degree = n - i + 1
            return
        idx = _index(pair)
        d = i - j
        edge = (Edge(("u", n - d), ("u", d), "horizontal") if d > 0
                else Edge(("l", n + d), ("l", -d), "horizontal"))
        if 2 * d == n:
            edge = Edge(("u", d), ("u", d), "loop")
        elif 2 * d == -n:
            edge = Edge(("l", -d), ("l", -d), "loop")
        piece_index, h_index = idx.piece_of(edge)
        a, b, primal_in_a = idx.glued(piece_index)
        self.host = a if primal_in_a[h_index] else b
        self.other = b if primal_in_a[h_index] else a
        self.block = self.host.block_of_edge(h_index)
        self.h_index = h_index
        r, c = self.block.template_pos(i, j)
        if r != c:
            raise AssertionError("anchor fell off the main diagonal")
        self.anchor = r
        self.degree = self.host.N - r + 1

    def eval_xy(self, X: Mat, Y: Mat):
        if self.host is None:
            return det(X.trailing(self.i - 1)) if self.i > 1 else det(X)
        return det(self.host.materialize(_xy_sources(X, Y), start=self.anchor))

    def __call__(self, Z: Mat):
        if self.host is None:
            return det(Z.trailing(self.i - 1))
        return det(self.host.materialize(_diag_sources(Z), start=self.anchor))

    def eval_with_sources(self, sources: dict[str, Mat]):
        if self.host is None:
            return det(sources["X"].trailing(self.i - 1))
        return det(self.host.materialize(sources, start=self.anchor))

    def grad_z(self, Z: Mat) -> Mat:
        """Gradient as a matrix G with G[b][a] = df/dz_ab (0-based), via the
        adjugate of the trailing template and the chain rule through the
        cofactor conjugation; exact and much faster than n^2 dual sweeps."""
        n = self.pair.n
        zero = Fraction(0) if not isinstance(Z.get(0, 0), Dual2) else Dual2(0)
        G = [[zero] * n for _ in range(n)]
        if self.host is None:
            T = Z.trailing(self.i - 1)
            dT = det(T)
            Tinv = inverse(T)
            for rr in range(T.nrows):
                for cc in range(T.nrows):
                    G[self.i - 1 + cc][self.i - 1 + rr] = dT * Tinv.get(cc, rr)
            return Mat(G)
        T = self.host.materialize(_diag_sources(Z), start=self.anchor)
        dT = det(T)
        Tinv = inverse(T)
        detZ = det(Z)
        Zinv = inverse(Z)
        start = self.anchor
        for (R, C), (kind, r, c) in self.host.embedding.items():
            if R < start or C < start:
                continue
            w = dT * Tinv.get(C - start, R - start)
            if w == 0:
                continue
            if kind in ("X", "Y"):
                G[c - 1][r - 1] = G[c - 1][r - 1] + w
            else:
                # dagger cell: chain through Zd = W Cof(Z) W^-1
                rho_r, rho_c = n - r, n - c          # 0-based mirrors of r-1, c-1
                sgn = 1 if (r + c) % 2 == 0 else -1
                for a in range(n):
                    za = Zinv.get(rho_c, a)
                    for b in range(n):
                        term = Zinv.get(b, a) * Zinv.get(rho_c, rho_r) - \
                            za * Zinv.get(b, rho_r)
                        if term != 0:
                            G[b][a] = G[b][a] + w * detZ * (sgn * term)
        return Mat(G)


def seed_function(pair: BDPair, i: int, j: int) -> SeedFunction:
    return SeedFunction(pair, i, j)


def all_seed_functions(pair: BDPair) -> dict[tuple[int, int], SeedFunction]:
    n = pair.n
    return {(i, j): SeedFunction(pair, i, j)
            for i in range(1, n + 1) for j in range(1, n + 1) if (i, j) != (1, 1)}


def subordinate_exits(pair: BDPair, i: int, j: int) -> SubordinateSet:
    """Exit points of earlier blocks whose representative in L(i,j) sits on
    the diagonal below or to the right of the block of (i, j)."""
    if i == j:
        return SubordinateSet((), ())
    f = SeedFunction(pair, i, j)
    host = f.host
    r1, c1, r2, c2 = f.block.rect()
    xs, ys = [], []
    for b in host.blocks:
        if b.edge_index == f.h_index:
            continue
        q, q2 = b.template_pos(*b.spec.exit)
        assert q == q2
        if q <= min(r2, c2):
            continue
        primal = _primal_spec_of(pair, host.path, b.edge_index)
        if primal.kind == "X":
            xs.append(primal.exit[0])
        else:
            ys.append(primal.exit[1])
    if abs(len(xs) - len(ys)) > 1:
        raise AssertionError("subordinate exit counts may differ by at most one")
    return SubordinateSet(tuple(sorted(xs)), tuple(sorted(ys)))


def _primal_spec_of(pair, path, edge_index) -> BlockSpec:
    e = path.horizontal_edges()[edge_index]
    return block_for_edge(pair, e, PRIMAL[e.src[0]])


def minor_F(U: Mat, i: int, j: int):
    """Trailing minor of U with upper left corner at (i, j), 1-based."""
    n = U.nrows
    size = n + 1 - max(i, j)
    rows = list(range(i - 1, i - 1 + size))
    cols = list(range(j - 1, j - 1 + size))
    return det(U.submatrix(rows, cols))


def t_factor(pair: BDPair, d: int, U: Mat):
    """Product of the frozen minors attached to the subordinate exit set of
    any (i, j) with i - j = d; depends only on d."""
    if d == 0:
        return Fraction(1)
    i, j = (d + 1, 1) if d > 0 else (1, 1 - d)
    sub = subordinate_exits(pair, i, j)
    out = Fraction(1)
    for k in sub.x_exits:
        out = out * minor_F(U, k, 1)
    for m in sub.y_exits:
        out = out * minor_F(U, 1, m)
    return out


# ---------------------------------------------------------------------------
# perturbed trailing minors for reversed components


def _anchor_data(pair: BDPair, i: int, dagger: bool):
    """Template, anchor and first-row source row for M or M-dagger of (i, 1)."""
    f = SeedFunction(pair, i, 1)
    if not dagger:
        return f.host, f.anchor, i, f.block
    n = pair.n
    idag = n + 2 - i
    host = f.other
    block = host.block_of_edge(f.h_index)
    r, c = block.template_pos(idag, 1)
    assert r == c, "dual anchor off the diagonal"
    return host, r, idag, block


def perturbed_minor(pair: BDPair, i: int, j: int, k: int, Z: Mat, dagger: bool):
    """det M(j,k) (primal) or det M-dagger(j,k) of the matrices attached to
    (i, 1); both are defined on the locus X = Y = Z."""
    comp = pair.rows.component_of(i - 1)
    if pair.rows.orientation(comp) != "reversed":
        raise ValueError("perturbed minors require a reversed component")
    a, b = comp
    s, t = (i - 1) - a, b - (i - 1)
    if not (0 <= j <= s and 0 <= k <= max(t - 1, 0)):
        raise ValueError(f"(j, k) = ({j}, {k}) outside the admissible range")
    host, p, src_row, block = _anchor_data(pair, i, dagger)
    sources = _diag_sources(Z)
    M = host.materialize(sources, start=p)
    if (j, k) == (0, 0):
        return det(M)
    top_src = src_row - j if not dagger else src_row - k - 1
    if not block.spec.rows[0] <= top_src <= block.spec.rows[1]:
        raise ValueError("perturbation row leaves the block")
    src = sources[block.spec.kind]
    top = []
    for C in range(p, host.N + 1):
        cell = host.embedding.get((p, C))
        if cell is not None and cell[0] == block.spec.kind and cell[1] == src_row:
            top.append(src.get(top_src - 1, cell[2] - 1))
        else:
            if cell is not None and cell[1] == src_row:
                raise AssertionError("anchor row crosses another block")
            top.append(Fraction(0))
    rows = [top] + [list(r) for r in M.rows]
    # primal: delete row k+1 of M itself; dagger: delete row j+1 of the
    # prepended matrix (its first row is the added segment).
    del rows[(k + 1) if not dagger else j]
    return det(Mat(rows))


def seed_report(pair: BDPair) -> list[dict]:
    """Machine-readable description of every seed function."""
    from .cluster import frozen_vertices

    frozen = frozen_vertices(pair)
    out = []
    n = pair.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i, j) == (1, 1):
                continue
            f = SeedFunction(pair, i, j)
            sub = subordinate_exits(pair, i, j)
            entry = {
                "i": i, "j": j,
                "degree": f.degree,
                "anchor": f.anchor,
                "frozen": [i, j] in [list(v) for v in frozen] or (i, j) in frozen,
                "subordinate_x_exits": list(sub.x_exits),
                "subordinate_y_exits": list(sub.y_exits),
            }
            if f.host is None:
                entry["blocks"] = [{"source": "Z", "rows": [i, n], "cols": [i, n]}]
            else:
                entry["blocks"] = [{
                    "source": b.spec.kind,
                    "rows": list(b.spec.rows),
                    "cols": list(b.spec.cols),
                    "exit": list(b.spec.exit),
                    "entrance": list(b.spec.entrance),
                } for b in f.host.blocks]
            out.append(entry)
    return out

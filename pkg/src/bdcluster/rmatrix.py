"""R-matrix operators attached to BD triples and the induced brackets.

The triple's isometry acts on gl_n componentwise: the sl-block of a
connected component of gamma1 is translated onto the image block when
the orientation is preserved and twisted by E -> -(w0 J) E^T (w0 J)^-1
when it is reversed; everything orthogonal to the component blocks dies.
The Cartan leg is a skew operator S on traceless diagonals solving
S(1-gamma) h = (1+gamma) h / 2 on the span of the gamma1 coweights, and

    R_plus = (1/2 + S) pi_0  +  sum_k gamma^k pi_>  -  sum_{k>=1} gamma*^k pi_<

with the trace direction pinned to 1/2 so that R_plus + R_plus^* = id on
all of gl_n.

Bracket convention.  All brackets here are evaluated as

    {f, g} = < L_op(X grad f), X grad g > - < R_op(grad f X), grad g X >

the sign and slot placement being pinned by the half-integer bracket
table of log-entries against log-minors and by the S-difference formula
for pairs of minors (see the verification suite).  The slot order that
makes a given theorem true is discovered, not assumed: build_bracket
takes order="rows-cols" (row triple on the left slot) or "cols-rows".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bd import BDPair, BDTriple
from .dual import Dual2, grad
from .linalg import Mat, w0_signed, w0_signed_inv


def _component_blocks(triple: BDTriple):
    """(source block, target block, reversed?) per component, 1-based closed."""
    out = []
    for a, b in triple.components():
        src = (a, b + 1)
        images = [triple.map[i] for i in range(a, b + 1)]
        tgt = (min(images), max(images) + 1)
        out.append((src, tgt, triple.orientation((a, b)) == "reversed"))
    return out


def _extract_block(m: Mat, blk):
    a, b = blk
    idx = list(range(a - 1, b))
    return m.submatrix(idx, idx)


def _project_block_traceless(sub: Mat) -> Mat:
    p = sub.nrows
    tr = sub.trace()
    shift = tr * Fraction(1, p)
    rows = [[sub.get(i, j) - shift if i == j else sub.get(i, j) for j in range(p)]
            for i in range(p)]
    return Mat(rows)


def _twist(sub: Mat) -> Mat:
    """E -> -(w0 J) E^T (w0 J)^-1 inside a block; sends e_i to e_(p-i)."""
    p = sub.nrows
    one = _ring_one(sub)
    w = w0_signed(p, one, one - one)
    winv = w0_signed_inv(p, one, one - one)
    return -(w * sub.transpose() * winv)


def _ring_one(m: Mat):
    x = m.get(0, 0)
    return Dual2(1) if isinstance(x, Dual2) else Fraction(1)


def _place_block(n, sub: Mat, blk, zero) -> Mat:
    out = [[zero] * n for _ in range(n)]
    a, _ = blk
    for i in range(sub.nrows):
        for j in range(sub.nrows):
            out[a - 1 + i][a - 1 + j] = sub.get(i, j)
    return Mat(out)


def gamma_apply(triple: BDTriple, eta: Mat, star: bool = False) -> Mat:
    """The Lie-algebra map gamma (or its trace-form adjoint gamma*)."""
    n = triple.n
    zero = eta.get(0, 0) - eta.get(0, 0)
    total = Mat.zeros(n, zero=zero)
    for src, tgt, rev in _component_blocks(triple):
        frm, to = (tgt, src) if star else (src, tgt)
        sub = _project_block_traceless(_extract_block(eta, frm))
        total = total + _place_block(n, _twist(sub) if rev else sub, to, zero)
    return total


def bgamma_apply(triple: BDTriple, N: Mat, star: bool = False) -> Mat:
    """Group-level lift exp(gamma(log N)) on unitriangular matrices.

    Interval blocks are multiplicatively saturated, so the lift copies
    each component block (twisting to (w0 J) (N_b^T)^-1 (w0 J)^-1 when
    the orientation is reversed) into the image block of the identity.
    """
    n = triple.n
    one = _ring_one(N)
    zero = one - one
    out = Mat.identity(n, one=one, zero=zero)
    from .linalg import inverse
    for src, tgt, rev in _component_blocks(triple):
        frm, to = (tgt, src) if star else (src, tgt)
        sub = _extract_block(N, frm)
        if rev:
            p = sub.nrows
            w = w0_signed(p, one, zero)
            winv = w0_signed_inv(p, one, zero)
            sub = w * inverse(sub.transpose()) * winv
        a, _ = to
        for i in range(sub.nrows):
            for j in range(sub.nrows):
                if i != j:
                    out.rows[a - 1 + i][a - 1 + j] = sub.get(i, j)
    return out


# ---------------------------------------------------------------------------
# Cartan component


def _h_basis(n):
    """h_a = E_aa - E_(a+1)(a+1) as diagonal vectors, a = 1..n-1."""
    out = []
    for a in range(1, n):
        v = [Fraction(0)] * n
        v[a - 1], v[a] = Fraction(1), Fraction(-1)
        out.append(v)
    return out


def _gram(n):
    basis = _h_basis(n)
    return [[sum(x * y for x, y in zip(basis[a], basis[b])) for b in range(n - 1)]
            for a in range(n - 1)]


def _solve_linear(rows, rhs):
    """Exact solve; returns (particular with free vars zero, nullspace basis).

    Raises ArithmeticError if inconsistent.
    """
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    nrows, ncols = len(m), (len(rows[0]) if rows else 0)
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            raise ArithmeticError("inconsistent linear system")
    sol = [Fraction(0)] * ncols
    for k, c in enumerate(piv_cols):
        sol[c] = m[k][ncols]
    null = []
    free = [c for c in range(ncols) if c not in piv_cols]
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for k, c in enumerate(piv_cols):
            v[c] = -m[k][fc]
        null.append(v)
    return sol, null


@dataclass
class CartanOp:
    """Skew operator S on the traceless diagonal subalgebra, h-basis matrix."""

    n: int
    s_matrix: list[list[Fraction]]     # S h_a = sum_c s_matrix[c][a] h_c
    nullspace: list[list[Fraction]]    # free skew directions, sigma-coordinates

    def apply_diag(self, diag):
        """S applied to a traceless diagonal vector (length n)."""
        coords = _diag_to_h_coords(self.n, diag)
        out_h = [sum(self.s_matrix[c][a] * coords[a] for a in range(self.n - 1))
                 for c in range(self.n - 1)]
        basis = _h_basis(self.n)
        return [sum(out_h[c] * basis[c][k] for c in range(self.n - 1))
                for k in range(self.n)]

    def pairing(self, a: int, b: int):
        """s_ab = < S pi_0 E_aa, pi_0 E_bb >, 1-based diagonal indices."""
        n = self.n
        ea = [Fraction(int(k == a - 1)) - Fraction(1, n) for k in range(n)]
        eb = [Fraction(int(k == b - 1)) - Fraction(1, n) for k in range(n)]
        return sum(x * y for x, y in zip(self.apply_diag(ea), eb))


def _diag_to_h_coords(n, diag):
    """Coordinates of a traceless diagonal in the h-basis (exact)."""
    coords = []
    acc = diag[0] - diag[0]
    for a in range(n - 1):
        acc = acc + diag[a]
        coords.append(acc)
    # partial sums: diag = sum coords[a] * h_(a+1) requires coords[a] = sum_{k<=a} diag[k]
    return coords


def solve_cartan(triple: BDTriple) -> CartanOp:
    """Particular exact solution of S(1-gamma) = (1+gamma)/2 on the gamma1
    coweights, skew w.r.t. the trace form, free parameters zeroed."""
    n = triple.n
    r = n - 1
    basis = _h_basis(n)
    gram = _gram(n)
    unknowns = [(a, b) for a in range(r) for b in range(a + 1, r)]
    uidx = {ab: k for k, ab in enumerate(unknowns)}

    def sigma_row(vec_coords, beta):
        """Row of coefficients of sigma(vec, h_beta) in the unknowns."""
        row = [Fraction(0)] * len(unknowns)
        for a in range(r):
            ca = vec_coords[a]
            if ca == 0:
                continue
            if a < beta:
                row[uidx[(a, beta)]] += ca
            elif a > beta:
                row[uidx[(beta, a)]] -= ca
        return row

    rows, rhs = [], []
    for alpha in sorted(triple.gamma1):
        galpha = triple.map[alpha]
        vec = [Fraction(0)] * r
        vec[alpha - 1] += 1
        vec[galpha - 1] -= 1          # (1 - gamma) h_alpha in h-coordinates
        for beta in range(r):
            rows.append(sigma_row(vec, beta))
            rhs.append(Fraction(1, 2) * (gram[alpha - 1][beta] + gram[galpha - 1][beta]))
    if not rows:
        sol = [Fraction(0)] * len(unknowns)
        null = [[Fraction(int(i == k)) for i in range(len(unknowns))]
                for k in range(len(unknowns))]
    else:
        sol, null = _solve_linear(rows, rhs)

    return CartanOp(n, _sigma_to_matrix(n, sol, unknowns), null)


def _sigma_to_matrix(n, sigma_coords, unknowns):
    """Recover the h-basis matrix of S from the skew form sigma."""
    r = n - 1
    sigma = [[Fraction(0)] * r for _ in range(r)]
    for (a, b), v in zip(unknowns, sigma_coords):
        sigma[a][b] = v
        sigma[b][a] = -v
    from .linalg import Mat, inverse
    G = Mat(_gram(n))
    # sigma_ab = <S h_a, h_b> = (G M)[b][a] for S h_a = sum_c M[c][a] h_c
    M = inverse(G) * Mat(sigma).transpose()
    return [list(row) for row in M.rows]


def cartan_with_sigma(triple: BDTriple, base: CartanOp, weights) -> CartanOp:
    """Another valid solution: base sigma plus a nullspace combination."""
    n = triple.n
    r = n - 1
    unknowns = [(a, b) for a in range(r) for b in range(a + 1, r)]
    G = Mat(_gram(n))
    from .linalg import inverse
    sigma = (G * Mat(base.s_matrix)).transpose()
    coords = [sigma.get(a, b) for (a, b) in unknowns]
    for w, v in zip(weights, base.nullspace):
        coords = [c + w * x for c, x in zip(coords, v)]
    return CartanOp(n, _sigma_to_matrix(n, coords, unknowns), base.nullspace)


# ---------------------------------------------------------------------------
# the R_+ operators


@dataclass
class ROp:
    """eta -> R0(diag part) + sum gamma^k(strictly upper) - sum gamma*^k(strictly lower)."""

    triple: BDTriple
    cartan: CartanOp
    full: bool       # False: standard companion (gamma legs replaced by pi_>)

    def __call__(self, eta: Mat) -> Mat:
        n = self.triple.n
        zero = eta.get(0, 0) - eta.get(0, 0)
        upper = Mat([[eta.get(i, j) if j > i else zero for j in range(n)]
                     for i in range(n)])
        lower = Mat([[eta.get(i, j) if j < i else zero for j in range(n)]
                     for i in range(n)])
        out = upper.copy()
        if self.full:
            term = upper
            for _ in range(n):
                term = gamma_apply(self.triple, term)
                if _mat_is_zero(term):
                    break
                out = out + term
            term = lower
            for _ in range(n):
                term = gamma_apply(self.triple, term, star=True)
                if _mat_is_zero(term):
                    break
                out = out - term
        # Cartan part: (1/2 + S) on the traceless diagonal, 1/2 on the trace
        diag = [eta.get(i, i) for i in range(n)]
        tr = sum(diag, zero)
        shift = tr * Fraction(1, n)
        traceless = [x - shift for x in diag]
        s_part = self.cartan.apply_diag(traceless)
        for i in range(n):
            out.rows[i][i] = out.rows[i][i] + Fraction(1, 2) * traceless[i] \
                + s_part[i] + Fraction(1, 2) * shift
        return out

    def operator_matrix(self) -> Mat:
        """Matrix of the operator on gl_n in the E_ab basis (row-major)."""
        n = self.triple.n
        cols = []
        for a in range(n):
            for b in range(n):
                e = Mat.zeros(n)
                e.rows[a][b] = Fraction(1)
                v = self(e)
                cols.append([v.get(i, j) for i in range(n) for j in range(n)])
        return Mat(cols).transpose()


def _mat_is_zero(m: Mat) -> bool:
    return all(m.get(i, j) == 0 for i in range(m.nrows) for j in range(m.ncols))


def trace_pairing(a: Mat, b: Mat):
    n = a.nrows
    s = a.get(0, 0) - a.get(0, 0)
    for i in range(n):
        for j in range(n):
            s = s + a.get(i, j) * b.get(j, i)
    return s


@dataclass
class BracketSpec:
    """left_op acts on X*grad(f) (row slot), right_op on grad(f)*X."""

    left_op: ROp
    right_op: ROp


def standard_zero_op(n: int) -> ROp:
    return ROp(BDTriple.empty(n), solve_cartan(BDTriple.empty(n)), full=False)


def build_bracket(pair: BDPair, kind: str = "exotic", order: str = "rows-cols",
                  cartans: tuple[CartanOp, CartanOp] | None = None) -> BracketSpec:
    """Bracket of the pair; kind 'exotic' uses the full gamma legs, kind
    'standard-companion' the plain triangular projections with the same
    Cartan components."""
    if kind not in ("exotic", "standard-companion"):
        raise ValueError(kind)
    c_rows = cartans[0] if cartans else solve_cartan(pair.rows)
    c_cols = cartans[1] if cartans else solve_cartan(pair.cols)
    full = kind == "exotic"
    op_rows = ROp(pair.rows, c_rows, full)
    op_cols = ROp(pair.cols, c_cols, full)
    if order == "rows-cols":
        return BracketSpec(left_op=op_rows, right_op=op_cols)
    if order == "cols-rows":
        return BracketSpec(left_op=op_cols, right_op=op_rows)
    raise ValueError(order)


def _gradients(f, X: Mat):
    g = getattr(f, "grad_z", None)
    gf = g(X) if g is not None else grad(f, X)
    return X * gf, gf * X


def bracket(spec: BracketSpec, f, g, X: Mat):
    """Exact Poisson bracket of two scalar functions at X."""
    lf, rf = _gradients(f, X)
    lg, rg = _gradients(g, X)
    return bracket_from_gradients(spec, (lf, rf), (lg, rg))


def bracket_from_gradients(spec: BracketSpec, grads_f, grads_g):
    lf, rf = grads_f
    lg, rg = grads_g
    return trace_pairing(spec.left_op(lf), lg) - trace_pairing(spec.right_op(rf), rg)


def bracket_of_logs(spec: BracketSpec, f, g, X: Mat):
    """{log f, log g} = {f, g} / (f g); zero denominators are the caller's
    genericity problem."""
    fx, gx = f(X), g(X)
    if fx == 0 or gx == 0:
        raise ZeroDivisionError("log-bracket at a zero of f or g")
    return bracket(spec, f, g, X) / (fx * gx)


def coordinate_function(i: int, j: int):
    """u_ij as a scalar function with a closed-form gradient (1-based)."""

    class _Coord:
        def __call__(self, X: Mat):
            return X.get(i - 1, j - 1)

        def grad_z(self, X: Mat):
            n = X.nrows
            zero = X.get(0, 0) - X.get(0, 0)
            g = Mat.zeros(n, zero=zero)
            g.rows[j - 1][i - 1] = zero + 1
            return g

    return _Coord()

"""The rational map h(U) = H_r(U) * U * H_c(U) and its seaweed inverse.

Pipeline: Gauss-decompose U, split off the block-diagonal unipotent
factors living on the run blocks of the two triples, push them through
the per-block opposite factorizations against fixed Weyl representatives
and iterate the group lift of the isometry until it dies (it always
does, by nilpotency).  Everything is exact and works verbatim over dual
numbers, which is how gradients of f o h are produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bd import BDPair, BDTriple, RunPartition, runs_from_subset
from .dual import Dual2
from .linalg import (Mat, NonGeneric, factor_b_nm, factor_np_b, gauss,
                     inverse, lower_upper_parts)
from .rmatrix import bgamma_apply


def _one_zero(m: Mat):
    x = m.get(0, 0)
    one = Dual2(1) if isinstance(x, Dual2) else Fraction(1)
    return one, one - one


def elementary_reflection(n: int, i: int, one, zero) -> Mat:
    """Identity with the block ((0,-1),(1,0)) at rows/cols i, i+1 (1-based)."""
    m = Mat.identity(n, one=one, zero=zero)
    m.rows[i - 1][i - 1] = zero
    m.rows[i][i] = zero
    m.rows[i - 1][i] = -one
    m.rows[i][i - 1] = one
    return m


def weyl_representative(n: int, runs: RunPartition, like: Mat | None = None) -> Mat:
    """Longest-element representative of the run subgroup, assembled from
    elementary reflections along the standard reduced word per block."""
    one, zero = _one_zero(like) if like is not None else (Fraction(1), Fraction(0))
    w = Mat.identity(n, one=one, zero=zero)
    for a, b in runs.intervals:
        for top in range(b - 1, a - 1, -1):
            for i in range(a, top + 1):
                w = w * elementary_reflection(n, i, one, zero)
    return w


def block_diagonal_part(m: Mat, runs: RunPartition) -> Mat:
    """Restriction of m to the run blocks, identity elsewhere."""
    one, zero = _one_zero(m)
    out = Mat.identity(m.nrows, one=one, zero=zero)
    for a, b in runs.intervals:
        for i in range(a - 1, b):
            for j in range(a - 1, b):
                if i != j:
                    out.rows[i][j] = m.get(i, j)
    return out


def leading_unipotent_factor(u_minus: Mat, runs: RunPartition):
    """u_minus = V * util with V supported on the run blocks and util in the
    complementary factorization cell.

    The run block [k, m] of V is obtained from the reduced-word
    refactorization of u_minus: first split off the factor A carried by
    the leading m x m subgroup (the condition is that the lower-left
    m x m corner of A^-1 u_minus is upper triangular, an LU computation
    on the corner of u_minus^-1), then V's block is the L-factor of
    A[k..m, 1..m-k+1].  This is a rational map; vanishing corner minors
    raise NonGeneric, except that inputs already supported on the run
    blocks split off exactly (util = 1).
    """
    n = u_minus.nrows
    one, zero = _one_zero(u_minus)
    V = Mat.identity(n, one=one, zero=zero)
    restricted = block_diagonal_part(u_minus, runs)
    uinv = None
    for k, m in runs.intervals:
        if k == m:
            continue
        try:
            if m == n:
                A = u_minus.submatrix(range(m), range(m))
            else:
                if uinv is None:
                    uinv = inverse(u_minus)
                corner = uinv.submatrix(range(n - m, n), range(m))
                A = gauss(inverse(corner))[0]
            sub = A.submatrix(range(k - 1, m), range(m - k + 1))
            block = gauss(sub)[0]
        except NonGeneric:
            if u_minus == restricted:
                block = u_minus.submatrix(range(k - 1, m), range(k - 1, m))
            else:
                raise
        for i in range(m - k + 1):
            for j in range(m - k + 1):
                if i != j:
                    V.rows[k - 1 + i][k - 1 + j] = block.get(i, j)
    return V, inverse(V) * u_minus


def trailing_unipotent_factor(u_plus: Mat, runs: RunPartition):
    """u_plus = util * V, the transposed split."""
    Vt, _ = leading_unipotent_factor(u_plus.transpose(), runs)
    V = Vt.transpose()
    return u_plus * inverse(V), V


def bar_v(V: Mat, W: Mat, runs: RunPartition, side: str) -> Mat:
    """Blockwise opposite factor: (V W)_+ for side='plus' (lower V), or
    (W V)_- for side='minus' (upper V)."""
    one, zero = _one_zero(V)
    out = Mat.identity(V.nrows, one=one, zero=zero)
    prod = V * W if side == "plus" else W * V
    for a, b in runs.intervals:
        if a == b:
            continue
        idx = list(range(a - 1, b))
        sub = prod.submatrix(idx, idx)
        try:
            part = factor_np_b(sub)[0] if side == "plus" else factor_b_nm(sub)[1]
        except NonGeneric as e:
            raise NonGeneric(e.stage, f"opposite factor failed on run block [{a},{b}]")
        for i in range(b - a + 1):
            for j in range(b - a + 1):
                if i != j:
                    out.rows[a - 1 + i][a - 1 + j] = part.get(i, j)
    return out


@dataclass
class HPair:
    h_r: Mat
    h_c: Mat
    image: Mat
    bar_v_r: Mat
    bar_v_c: Mat


def _iterate_lift(triple: BDTriple, seed: Mat, star: bool) -> Mat:
    """... lift^2(seed) * lift(seed) with lift = bgamma (or its adjoint)."""
    n = triple.n
    one, zero = _one_zero(seed)
    out = Mat.identity(n, one=one, zero=zero)
    term = seed
    for _ in range(n + 1):
        term = bgamma_apply(triple, term, star=star)
        if term == Mat.identity(n, one=one, zero=zero):
            break
        out = term * out
    return out


def h_r_factor(triple_r: BDTriple, U: Mat) -> tuple[Mat, Mat]:
    """(H_r(U), bar V_r(U)); depends only on the lower Gauss factor of U."""
    runs = runs_from_subset(triple_r.n, triple_r.gamma1)
    u_minus, _, _ = gauss(U)
    V, _ = leading_unipotent_factor(u_minus, runs)
    W = weyl_representative(triple_r.n, runs, like=U)
    barv = bar_v(V, W, runs, side="plus")
    return _iterate_lift(triple_r, barv, star=False), barv


def h_c_factor(triple_c: BDTriple, U: Mat) -> tuple[Mat, Mat]:
    """(H_c(U), bar V_c(U)); depends only on the upper Gauss factor of U."""
    runs = runs_from_subset(triple_c.n, triple_c.gamma2)
    _, _, u_plus = gauss(U)
    _, V = trailing_unipotent_factor(u_plus, runs)
    W = weyl_representative(triple_c.n, runs, like=U)
    barv = bar_v(V, W, runs, side="minus")
    return _iterate_lift(triple_c, barv, star=True), barv


def h_maps(pair: BDPair, U: Mat) -> HPair:
    h_r, barv_r = h_r_factor(pair.rows, U)
    h_c, barv_c = h_c_factor(pair.cols, U)
    return HPair(h_r, h_c, h_r * U * h_c, barv_r, barv_c)


def h_apply(pair: BDPair, U: Mat) -> Mat:
    return h_maps(pair, U).image


def invert_hr_seaweed(triple_r: BDTriple, Z: Mat) -> Mat:
    """Inverse of U -> H_r(U) U on the seaweed: U = lift(bar Z_+)^(-1) Z with
    bar Z_+ = (Z_- W)_+."""
    n = triple_r.n
    runs = runs_from_subset(n, triple_r.gamma1)
    z_minus, _ = lower_upper_parts(Z)
    W = weyl_representative(n, runs, like=Z)
    bar_z_plus, _ = factor_np_b(z_minus * W)
    H = bgamma_apply(triple_r, bar_z_plus, star=False)
    return inverse(H) * Z


def commutation_t_factor(triple_r: BDTriple, reduced: BDTriple, V: Mat) -> Mat:
    """The factor T(V) of V = T(V) K(V) with T supported on the reduced
    triple's run blocks and K in the one-parameter family the removed root
    leaves behind.  V is first projected to the run blocks of triple_r."""
    n = triple_r.n
    runs = runs_from_subset(n, triple_r.gamma1)
    proj = block_diagonal_part(V, runs)
    removed = triple_r.gamma1 - reduced.gamma1
    if len(removed) != 1:
        raise ValueError("reduced triple must drop exactly one root")
    alpha = next(iter(removed))
    a, b = triple_r.component_of(alpha)
    one, zero = _one_zero(V)
    out = proj.copy()
    lo, hi = a - 1, b        # 0-based inclusive index range of the block
    if alpha == b:
        # strip the last block column: A = [[A1, 0], [0, 1]] * [[1, xi^T], [0, 1]]
        for i in range(lo, hi):
            out.rows[i][hi] = zero
    elif alpha == a:
        # strip the first block row: A = [[1, 0], [0, A2]] * [[1, xi], [0, 1]]
        for j in range(lo + 1, hi + 1):
            out.rows[lo][j] = zero
    else:
        raise ValueError("removed root must be an endpoint")
    return out

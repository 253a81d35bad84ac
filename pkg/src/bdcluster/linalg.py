"""Exact dense matrices over Q, dual numbers, or polynomials.

Everything here is exact: no floats, no tolerances.  Matrices are small
(desk scale), so the algorithms favour clarity and genericity over
asymptotics: Bareiss for determinants over a domain, plain elimination
with invertible pivots over local rings (dual numbers).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .dual import Dual2


class NonGeneric(Exception):
    """A required principal minor vanished (stage index is 1-based)."""

    def __init__(self, stage, message=""):
        self.stage = stage
        super().__init__(message or f"non-generic input at stage {stage}")


def _is_invertible(x) -> bool:
    if isinstance(x, Dual2):
        return x.val != 0
    if isinstance(x, Fraction) or isinstance(x, int):
        return x != 0
    inv = getattr(x, "is_unit", None)
    return inv() if inv is not None else x != 0


class Mat:
    """Dense matrix; entries live in whatever ring supports +,-,*,/."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged rows")

    @staticmethod
    def identity(n, one=Fraction(1), zero=Fraction(0)):
        return Mat([[one if i == j else zero for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(n, m=None, zero=Fraction(0)):
        m = n if m is None else m
        return Mat([[zero] * m for _ in range(n)])

    def get(self, i, j):
        return self.rows[i][j]

    def with_entry(self, i, j, value) -> "Mat":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return Mat(rows)

    def copy(self) -> "Mat":
        return Mat(self.rows)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.nrows == other.nrows and self.ncols == other.ncols and \
            all(self.rows[i][j] == other.rows[i][j]
                for i in range(self.nrows) for j in range(self.ncols))

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def __repr__(self):
        body = "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Mat(\n{body}\n)"

    def __add__(self, other):
        return Mat([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Mat([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return Mat([[_dot(r, c) for c in cols] for r in self.rows])
        return Mat([[a * other for a in r] for r in self.rows])

    def __rmul__(self, scalar):
        return Mat([[scalar * a for a in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return Mat([list(c) for c in zip(*self.rows)])

    def submatrix(self, row_idx, col_idx) -> "Mat":
        return Mat([[self.rows[i][j] for j in col_idx] for i in row_idx])

    def trailing(self, k) -> "Mat":
        """Trailing principal submatrix in rows and columns k.. (0-based)."""
        idx = list(range(k, self.nrows))
        return self.submatrix(idx, idx)

    def minor(self, i, j):
        idx_r = [r for r in range(self.nrows) if r != i]
        idx_c = [c for c in range(self.ncols) if c != j]
        return det(self.submatrix(idx_r, idx_c))

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), _zero_like(self.rows[0][0]))

    def is_upper_triangular(self, strict=False):
        lim = 1 if strict else 0
        return all(self.rows[i][j] == 0
                   for i in range(self.nrows) for j in range(self.ncols) if j < i + lim)

    def is_lower_triangular(self, strict=False):
        return self.transpose().is_upper_triangular(strict=strict)

    def is_unitriangular(self, upper=True):
        tri = self.is_upper_triangular() if upper else self.is_lower_triangular()
        return tri and all(self.rows[i][i] == 1 for i in range(self.nrows))


def _dot(r, c):
    it = iter(zip(r, c))
    a, b = next(it)
    s = a * b
    for a, b in it:
        s = s + a * b
    return s


def _zero_like(x):
    return x - x


def _one_like(x):
    if isinstance(x, Dual2):
        return Dual2(1)
    if isinstance(x, Fraction) or isinstance(x, int):
        return Fraction(1)
    return x.one()


def det(m: Mat):
    """Exact determinant; algorithm picked per entry ring."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    if m.nrows == 0:
        return Fraction(1)
    sample = m.rows[0][0]
    if isinstance(sample, Dual2) or any(
            isinstance(m.rows[i][j], Dual2) for i in range(m.nrows) for j in range(m.ncols)):
        return _det_local(m)
    if isinstance(sample, (Fraction, int)):
        return _det_bareiss(m, lambda a, b: a / b)
    # polynomial entries: Bareiss with exact division
    return _det_bareiss(m, lambda a, b: a.exact_div(b))


def _det_bareiss(m: Mat, div):
    a = [list(r) for r in m.rows]
    n = len(a)
    sign = 1
    prev = _one_like(a[0][0])
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return _zero_like(prev)
        pk = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = div(pk * a[i][j] - a[i][k] * a[k][j], prev)
            a[i][k] = _zero_like(pk)
        prev = pk
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def _det_local(m: Mat):
    """Elimination over a local ring: pivots need an invertible entry.

    Falls back to a Laplace step when a column has nonzero but
    non-invertible entries only (nilpotent column), which cannot happen
    at generic sample points.
    """
    a = [list(r) for r in m.rows]
    n = len(a)
    acc = Dual2(1) if any(isinstance(x, Dual2) for r in a for x in r) else Fraction(1)
    sign = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if _is_invertible(a[i][k]):
                piv = i
                break
        if piv is None:
            if all(a[i][k] == 0 for i in range(k, n)):
                return _zero_like(acc)
            return acc * _det_laplace_rest(a, k, sign)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        acc = acc * pk
        for i in range(k + 1, n):
            if a[i][k] == 0:
                continue
            f = a[i][k] / pk
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return acc if sign == 1 else -acc


def _det_laplace_rest(a, k, sign):
    sub = Mat([row[k:] for row in a[k:]])
    d = _det_laplace(sub)
    return d if sign == 1 else -d


def _det_laplace(m: Mat):
    n = m.nrows
    if n == 1:
        return m.rows[0][0]
    s = _zero_like(m.rows[0][0])
    for i in range(n):
        x = m.rows[i][0]
        if x == 0:
            continue
        idx_r = [r for r in range(n) if r != i]
        cof = _det_laplace(m.submatrix(idx_r, list(range(1, n))))
        term = x * cof
        s = s + term if i % 2 == 0 else s - term
    return s


def det_cofactor(m: Mat):
    """Plain cofactor expansion; independent cross-check for det()."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    return _det_laplace(m) if m.nrows else Fraction(1)


def gauss(m: Mat):
    """Gauss decomposition m = L*D*V.

    L is lower unitriangular, D diagonal, V upper unitriangular.  Raises
    NonGeneric(k) if the k-th leading principal minor vanishes (pivots
    must be invertible; no row exchanges are allowed here).
    """
    if not m.is_square:
        raise ValueError("gauss of a non-square matrix")
    n = m.nrows
    a = [list(r) for r in m.rows]
    one = _one_like(a[0][0]) if n else Fraction(1)
    zero = _zero_like(a[0][0]) if n else Fraction(0)
    L = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        if not _is_invertible(a[k][k]):
            raise NonGeneric(k + 1)
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            L[i][k] = f
            if f == 0:
                continue
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    D = [[a[i][i] if i == j else zero for j in range(n)] for i in range(n)]
    V = [[a[i][j] / a[i][i] if j >= i else zero for j in range(n)] for i in range(n)]
    return Mat(L), Mat(D), Mat(V)


def _flip(m: Mat) -> Mat:
    return Mat([list(reversed(r)) for r in reversed(m.rows)])


def factor_np_b(m: Mat):
    """Factor m = N+ * B- with N+ upper unitriangular, B- lower triangular.

    Needs all trailing principal minors invertible; NonGeneric(k) names
    the failing trailing stage.
    """
    try:
        L, D, V = gauss(_flip(m))
    except NonGeneric as e:
        raise NonGeneric(e.stage) from None
    return _flip(L), _flip(D * V)


def factor_b_nm(m: Mat):
    """Factor m = B+ * N- with B+ upper triangular, N- lower unitriangular."""
    try:
        L, D, V = gauss(_flip(m))
    except NonGeneric as e:
        raise NonGeneric(e.stage) from None
    return _flip(L * D), _flip(V)


def lower_upper_parts(m: Mat):
    """m = m_- * m_{0,+} with m_- lower unitriangular (Gauss regrouped)."""
    L, D, V = gauss(m)
    return L, D * V


def inverse(m: Mat) -> Mat:
    """Exact inverse by Gauss-Jordan with invertible pivots."""
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    a = [list(r) for r in m.rows]
    one = _one_like(a[0][0])
    zero = _zero_like(a[0][0])
    b = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if _is_invertible(a[i][k])), None)
        if piv is None:
            raise NonGeneric(k + 1, "matrix not invertible over its ring")
        a[k], a[piv] = a[piv], a[k]
        b[k], b[piv] = b[piv], b[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        b[k] = [x / p for x in b[k]]
        for i in range(n):
            if i == k or a[i][k] == 0:
                continue
            f = a[i][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            b[i] = [x - f * y for x, y in zip(b[i], b[k])]
    return Mat(b)


def cofactor_matrix(m: Mat) -> Mat:
    """Cof(m)[i][j] = (-1)^(i+j) * minor(i,j); equals det(m) * (m^-1)^T."""
    n = m.nrows
    try:
        d = det(m)
        if _is_invertible(d):
            return inverse(m).transpose() * d
    except NonGeneric:
        pass
    rows = [[m.minor(i, j) if (i + j) % 2 == 0 else -m.minor(i, j) for j in range(n)]
            for i in range(n)]
    return Mat(rows)


def w0_signed(n, one=Fraction(1), zero=Fraction(0)):
    """The monomial matrix w0*J, J = diag((-1)^i), w0 the order reversal."""
    m = Mat.zeros(n, zero=zero)
    for j in range(n):
        m.rows[n - 1 - j][j] = one if (j + 1) % 2 == 0 else -one
    return m


def w0_signed_inv(n, one=Fraction(1), zero=Fraction(0)):
    m = Mat.zeros(n, zero=zero)
    for a in range(n):
        m.rows[a][n - 1 - a] = one if (a + 1) % 2 == 0 else -one
    return m


def dual_matrix(m: Mat) -> Mat:
    """Conjugate of the cofactor matrix by w0*J.

    For |m| = 1 this realizes Jacobi's complementary-minor correspondence
    with all signs absorbed by the conjugation.
    """
    if not m.is_square:
        raise ValueError("dual of a non-square matrix")
    n = m.nrows
    d = det(m)
    if isinstance(d, (Fraction, Dual2)) and not _is_invertible(d):
        raise NonGeneric(n, "singular input has no dual")
    one = _one_like(m.rows[0][0])
    zero = _zero_like(m.rows[0][0])
    w = w0_signed(n, one, zero)
    winv = w0_signed_inv(n, one, zero)
    return w * cofactor_matrix(m) * winv


def unipotent_log(m: Mat) -> Mat:
    """log of a unipotent matrix (finite series in the nilpotent part)."""
    n = m.nrows
    N = m - Mat.identity(n, one=_one_like(m.rows[0][0]), zero=_zero_like(m.rows[0][0]))
    out = Mat.zeros(n, zero=_zero_like(m.rows[0][0]))
    term = Mat.identity(n, one=_one_like(m.rows[0][0]), zero=_zero_like(m.rows[0][0]))
    for k in range(1, n + 1):
        term = term * N
        coeff = Fraction((-1) ** (k + 1), k)
        out = out + term * coeff
    return out


def nilpotent_exp(m: Mat) -> Mat:
    n = m.nrows
    out = Mat.identity(n, one=_one_like(m.rows[0][0]), zero=_zero_like(m.rows[0][0]))
    term = out
    for k in range(1, n + 1):
        term = term * m * Fraction(1, k)
        out = out + term
    return out


def mat_to_strings(m: Mat):
    return [[str(x) for x in row] for row in m.rows]


def mat_from_strings(rows) -> Mat:
    return Mat([[Fraction(s) for s in row] for row in rows])


def save_matrix(m: Mat, path):
    with open(path, "w") as fh:
        json.dump(mat_to_strings(m), fh)


def load_matrix(path) -> Mat:
    with open(path) as fh:
        return mat_from_strings(json.load(fh))

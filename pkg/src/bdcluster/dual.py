"""Truncated dual numbers with two infinitesimal directions.

Elements have the form  v + a*ea + b*eb + m*ea*eb  with ea^2 = eb^2 = 0.
One direction suffices for exact first derivatives of polynomial matrix
functions; the second direction (and the mixed term) is what nested
bracket evaluations need for exact second derivatives.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into Dual2")


class Dual2:
    __slots__ = ("val", "da", "db", "dab")

    def __init__(self, val, da=0, db=0, dab=0):
        self.val = _frac(val)
        self.da = _frac(da)
        self.db = _frac(db)
        self.dab = _frac(dab)

    @staticmethod
    def lift(x) -> "Dual2":
        return x if isinstance(x, Dual2) else Dual2(_frac(x))

    @staticmethod
    def eps(direction: int) -> "Dual2":
        # direction 0 -> ea, direction 1 -> eb
        return Dual2(0, 1, 0, 0) if direction == 0 else Dual2(0, 0, 1, 0)

    def d(self, direction: int):
        """Coefficient of ea (resp. eb), keeping the other direction's content."""
        if direction == 0:
            return Dual2(self.da, 0, self.dab, 0)
        return Dual2(self.db, self.dab, 0, 0)

    def __add__(self, other):
        o = Dual2.lift(other)
        return Dual2(self.val + o.val, self.da + o.da, self.db + o.db, self.dab + o.dab)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.val, -self.da, -self.db, -self.dab)

    def __sub__(self, other):
        return self + (-Dual2.lift(other))

    def __rsub__(self, other):
        return Dual2.lift(other) + (-self)

    def __mul__(self, other):
        o = Dual2.lift(other)
        return Dual2(
            self.val * o.val,
            self.val * o.da + self.da * o.val,
            self.val * o.db + self.db * o.val,
            self.val * o.dab + self.dab * o.val + self.da * o.db + self.db * o.da,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Dual2":
        if self.val == 0:
            raise ZeroDivisionError("dual number with zero value part is not invertible")
        w = 1 / self.val
        w2 = w * w
        return Dual2(w, -self.da * w2, -self.db * w2,
                     2 * self.da * self.db * w2 * w - self.dab * w2)

    def __truediv__(self, other):
        return self * Dual2.lift(other).inverse()

    def __rtruediv__(self, other):
        return Dual2.lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Dual2(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = Dual2.lift(other) if isinstance(other, (Dual2, int, Fraction)) else None
        if o is None:
            return NotImplemented
        return (self.val, self.da, self.db, self.dab) == (o.val, o.da, o.db, o.dab)

    def __hash__(self):
        return hash((self.val, self.da, self.db, self.dab))

    def __repr__(self):
        return f"Dual2({self.val}, {self.da}, {self.db}, {self.dab})"


def grad(f, X, direction: int = 0):
    """Gradient of a scalar function of a matrix via the trace pairing.

    Returns G with tr(G*A) = d/dt f(X + t*A), i.e. G[b][a] = df/dx_ab,
    computed by n^2 single-direction dual evaluations.  Entries of X may
    already carry content in the other dual direction; the returned
    entries then keep it (needed for second derivatives).
    """
    from .linalg import Mat

    n = X.nrows
    pure = all(not isinstance(X.get(i, j), Dual2) for i in range(n) for j in range(X.ncols))
    rows = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            bumped = X.with_entry(a, b, Dual2.lift(X.get(a, b)) + Dual2.eps(direction))
            v = Dual2.lift(f(bumped)).d(direction)
            rows[b][a] = v.val if pure else v
    return Mat(rows)

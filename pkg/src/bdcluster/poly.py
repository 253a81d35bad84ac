"""Sparse multivariate polynomials over Q with exact division.

Monomials are exponent tuples over a fixed variable list; zero
coefficients are never stored.  Division is long division by a single
divisor under lex order, which detects non-divisibility exactly.
"""

from __future__ import annotations

from fractions import Fraction


class NotDivisible(Exception):
    pass


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(mono)] = c

    @staticmethod
    def const(nvars: int, c) -> "Poly":
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    def one(self) -> "Poly":
        return Poly.const(self.nvars, 1)

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and set(self.terms) == {(0,) * self.nvars}

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        raise TypeError(f"cannot mix Poly with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for mono, c in o.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def lead(self):
        """Lex-leading (monomial, coefficient)."""
        mono = max(self.terms)
        return mono, self.terms[mono]

    def exact_div(self, divisor: "Poly") -> "Poly":
        """Quotient self/divisor; raises NotDivisible on nonzero remainder."""
        divisor = self._coerce(divisor)
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = Poly(self.nvars, dict(self.terms))
        quo = {}
        dm, dc = divisor.lead()
        while rem:
            rm, rc = rem.lead()
            qm = tuple(a - b for a, b in zip(rm, dm))
            if any(e < 0 for e in qm):
                raise NotDivisible("leading monomial not divisible")
            qc = rc / dc
            quo[qm] = quo.get(qm, Fraction(0)) + qc
            rem = rem - Poly(self.nvars, {qm: qc}) * divisor
        return Poly(self.nvars, quo)

    def __truediv__(self, other):
        return self.exact_div(self._coerce(other))

    def evaluate(self, values):
        """Substitute Fractions (or any ring elements) for the variables."""
        total = None
        for mono, c in self.terms.items():
            term = c
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = term * values[i]
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, reverse=True):
            c = self.terms[mono]
            vars_part = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(mono) if e)
            bits.append(f"{c}" + (f"*{vars_part}" if vars_part else ""))
        return " + ".join(bits)


def poly_matrix_vars(n: int):
    """An n*n matrix of fresh variables z_ij, lex-ordered by (row, col)."""
    from .linalg import Mat

    nv = n * n
    # variable i*n+j carries z_{i+1,j+1}; exponent tuples compare lex with
    # z11 of highest precedence, matching the (row, col) order.
    rows = [[Poly.var(nv, i * n + j) for j in range(n)] for i in range(n)]
    return Mat(rows)

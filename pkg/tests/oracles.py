"""Independent reference computations used only by the tests.

Nothing here calls the package's arithmetic: expansions go through sympy
and ideal membership is decided by exact Gaussian elimination on the
monomial basis of a fixed degree.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def symbols(n):
    return sympy.symbols(f"x1:{n + 1}")


def to_sympy(p):
    xs = symbols(p.n)
    expr = sympy.Integer(0)
    for exps, c in p.terms:
        term = sympy.Integer(c)
        for x, k in zip(xs, exps):
            term *= x**k
        expr += term
    return sympy.expand(expr)


def sympy_terms(expr, n):
    """Exponent -> coefficient dict of an expanded sympy expression."""
    xs = symbols(n)
    poly = sympy.Poly(sympy.expand(expr), *xs)
    return {tuple(m): int(c) for m, c in poly.terms() if c != 0}


def expand_forms(forms, n):
    xs = symbols(n)
    expr = sympy.Integer(1)
    for f in forms:
        expr *= sum(c * x for c, x in zip(f, xs))
    return sympy_terms(expr, n)


def monomials(n, d):
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


def basic_invariants_sympy(family, n):
    xs = symbols(n)
    sq = [x**2 for x in xs]

    def e(vals, k):
        return sum(sympy.Mul(*c) for c in itertools.combinations(vals, k))

    if family == "A":
        return [e(xs, k) for k in range(1, n + 1)]
    if family in ("B", "C"):
        return [e(sq, k) for k in range(1, n + 1)]
    return [e(sq, k) for k in range(1, n)] + [sympy.Mul(*xs)]


class IdealSlice:
    """Row-echelon basis of the degree-``d`` part of the invariant ideal."""

    def __init__(self, family, n, d):
        self.n, self.d = n, d
        self.basis = monomials(n, d)
        self.index = {e: i for i, e in enumerate(self.basis)}
        xs = symbols(n)
        rows = []
        for F in basic_invariants_sympy(family, n):
            deg = sympy.Poly(F, *xs).total_degree()
            if deg > d:
                continue
            for mono in monomials(n, d - deg):
                g = F * sympy.Mul(*[x**k for x, k in zip(xs, mono)])
                rows.append(self._vector(sympy_terms(g, n)))
        self.pivots = []  # (pivot column, row) in insertion order
        for r in rows:
            r = self._reduce(r)
            col = next((i for i, v in enumerate(r) if v), None)
            if col is not None:
                inv = 1 / r[col]
                self.pivots.append((col, [v * inv for v in r]))

    def _vector(self, terms):
        v = [Fraction(0)] * len(self.basis)
        for e, c in terms.items():
            v[self.index[e]] += c
        return v

    def _reduce(self, v):
        v = list(v)
        for col, row in self.pivots:
            if v[col]:
                f = v[col]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    @property
    def rank(self):
        return len(self.pivots)

    def contains(self, terms):
        return not any(self._reduce(self._vector(terms)))

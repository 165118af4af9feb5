"""Exact sparse multivariate polynomials with integer coefficients.

A polynomial in ``n`` variables is a mapping from exponent tuples to nonzero
Python ints.  Terms are kept in graded lexicographic order (highest total
degree first, ties broken lexicographically, largest first), so two equal
polynomials have identical term tuples and hash alike.

Example (n = 2)::

    x1^2 - x2^2   ->  {(2, 0): 1, (0, 2): -1}

Besides ring arithmetic the module provides the two pairings used for
universality certificates: the inner product making monomials orthonormal,
and the derivative pairing ``(f, g) -> (d_f g)(0)`` under which
``<x^a, x^b> = a! [a == b]``.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]
LinearForm = tuple[int, ...]


def _grlex_key(exps: Exponent) -> tuple:
    return (sum(exps), exps)


class Polynomial:
    """Immutable polynomial over the integers in a fixed number of variables."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Exponent, int] | None = None):
        if n < 0:
            raise ValueError(f"variable count must be non-negative, got {n}")
        clean: dict[Exponent, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(
                    f"monomial {exps} has length {len(exps)}, expected {n}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if coeff:
                clean[exps] = clean.get(exps, 0) + int(coeff)
        ordered = sorted(
            ((e, c) for e, c in clean.items() if c), key=lambda t: _grlex_key(t[0]), reverse=True
        )
        self.n = n
        self._terms: tuple[tuple[Exponent, int], ...] = tuple(ordered)
        self._hash: int | None = None

    @classmethod
    def _from_dict(cls, n: int, terms: dict[Exponent, int]) -> "Polynomial":
        # Trusted fast path: keys already valid, zeros may be present.
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = tuple(
            sorted(
                ((e, c) for e, c in terms.items() if c),
                key=lambda t: _grlex_key(t[0]),
                reverse=True,
            )
        )
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n)

    @classmethod
    def constant(cls, n: int, value: int) -> "Polynomial":
        return cls(n, {(0,) * n: value})

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls.constant(n, 1)

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        """The variable ``x_{i+1}`` (``i`` is 0-based)."""
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for n={n}")
        exps = [0] * n
        exps[i] = 1
        return cls(n, {tuple(exps): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    @classmethod
    def linear(cls, form: Sequence[int]) -> "Polynomial":
        """The linear form ``sum c_i x_i``."""
        n = len(form)
        terms = {}
        for i, c in enumerate(form):
            if c:
                exps = [0] * n
                exps[i] = 1
                terms[tuple(exps)] = int(c)
        return cls._from_dict(n, terms)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Exponent, int], ...]:
        return self._terms

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.as_dict().get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return sum(self._terms[0][0])

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self._terms}) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict[Exponent, int]] = {}
        for e, c in self._terms:
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial._from_dict(self.n, t) for d, t in sorted(parts.items())}

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponent, int]]:
        return iter(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self._terms))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_n(self, other)
            return other
        if isinstance(other, int):
            return Polynomial.constant(self.n, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        return poly_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._from_dict(self.n, {e: -c for e, c in self._terms})

    def __sub__(self, other) -> "Polynomial":
        return poly_add(self, -self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return poly_add(self._coerce(other), -self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, int):
            return Polynomial._from_dict(self.n, {e: c * other for e, c in self._terms})
        return poly_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = Polynomial.one(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, *values):
        """Evaluate at a point (any ring that supports + and *)."""
        if len(values) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(values)}")
        total = 0
        for e, c in self._terms:
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    # -- text / json --------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self._terms):
            factors = [
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            ]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if idx == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial(n={self.n}, {self.to_text()!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "exps": list(e)} for e, c in self._terms]

    @classmethod
    def from_json(cls, n: int, records: Iterable[Mapping]) -> "Polynomial":
        terms: dict[Exponent, int] = {}
        for rec in records:
            e = tuple(int(k) for k in rec["exps"])
            terms[e] = terms.get(e, 0) + int(rec["coeff"])
        return cls(n, terms)

    @classmethod
    def from_text(cls, n: int, text: str) -> "Polynomial":
        return parse_polynomial(n, text)


_TERM_RE = re.compile(r"([+-]?)\s*([^+-]+)")


def parse_polynomial(n: int, text: str) -> Polynomial:
    """Parse the canonical text form produced by :meth:`Polynomial.to_text`."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero(n)
    terms: dict[Exponent, int] = {}
    pos = 0
    compact = text.replace(" ", "")
    for match in _TERM_RE.finditer(compact):
        if match.start() != pos:
            raise ValueError(f"cannot parse polynomial text {text!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coeff = 1
        exps = [0] * n
        for factor in match.group(2).split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
            if not m:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            i = int(m.group(1)) - 1
            if not 0 <= i < n:
                raise ValueError(f"variable x{i + 1} out of range for n={n}")
            exps[i] += int(m.group(2) or 1)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + sign * coeff
    if pos != len(compact):
        raise ValueError(f"cannot parse polynomial text {text!r}")
    return Polynomial(n, terms)


def dumps(p: Polynomial) -> str:
    return json.dumps(p.to_json())


def _check_n(p: Polynomial, q: Polynomial) -> None:
    if p.n != q.n:
        raise ValueError(f"variable-count mismatch: {p.n} vs {q.n}")


@lru_cache(maxsize=None)
def factorial(k: int) -> int:
    return math.factorial(k)


def multi_factorial(exps: Exponent) -> int:
    out = 1
    for k in exps:
        out *= factorial(k)
    return out


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_n(p, q)
    out = dict(p.terms)
    for e, c in q.terms:
        out[e] = out.get(e, 0) + c
    return Polynomial._from_dict(p.n, out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_n(p, q)
    out: dict[Exponent, int] = {}
    for ea, ca in p.terms:
        for eb, cb in q.terms:
            e = tuple(a + b for a, b in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return Polynomial._from_dict(p.n, out)


def expand_linear_product(forms: Sequence[Sequence[int]], n: int | None = None) -> Polynomial:
    """Expand ``prod_k (sum_i forms[k][i] x_i)``.

    ``n`` is only needed for the empty product, which is the constant 1.
    """
    if not forms:
        if n is None:
            raise ValueError("empty product needs an explicit variable count")
        return Polynomial.one(n)
    width = len(forms[0])
    if n is not None and n != width:
        raise ValueError(f"forms have length {width}, expected {n}")
    if any(len(f) != width for f in forms):
        raise ValueError("linear forms have mismatched lengths")
    acc: dict[Exponent, int] = {(0,) * width: 1}
    for form in forms:
        nxt: dict[Exponent, int] = {}
        support = [(i, int(c)) for i, c in enumerate(form) if c]
        for e, c in acc.items():
            for i, a in support:
                e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                nxt[e2] = nxt.get(e2, 0) + c * a
        acc = {e: c for e, c in nxt.items() if c}
    return Polynomial._from_dict(width, acc)


def substitute_squares(p: Polynomial) -> Polynomial:
    """Replace every ``x_i`` by ``x_i^2``."""
    return Polynomial._from_dict(p.n, {tuple(2 * k for k in e): c for e, c in p.terms})


def multiply_by_all_vars(p: Polynomial) -> Polynomial:
    """Multiply by ``x_1 x_2 ... x_n``."""
    return Polynomial._from_dict(p.n, {tuple(k + 1 for k in e): c for e, c in p.terms})


def monomial_inner_product(p: Polynomial, q: Polynomial) -> int:
    """Inner product for which the monomials form an orthonormal basis."""
    _check_n(p, q)
    if len(q) < len(p):
        p, q = q, p
    qd = q.as_dict()
    return sum(c * qd.get(e, 0) for e, c in p.terms)


def apply_diff_operator(f: Polynomial, g: Polynomial) -> Polynomial:
    """Apply the constant-coefficient operator ``f(d/dx_1, ..., d/dx_n)`` to ``g``."""
    _check_n(f, g)
    out: dict[Exponent, int] = {}
    for ea, ca in f.terms:
        for eb, cb in g.terms:
            if any(a > b for a, b in zip(ea, eb)):
                continue
            scale = 1
            for a, b in zip(ea, eb):
                # b! / (b - a)!
                scale *= factorial(b) // factorial(b - a)
            e = tuple(b - a for a, b in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb * scale
    return Polynomial._from_dict(g.n, out)


def derivative_pairing(f: Polynomial, g: Polynomial) -> int:
    """``(d_f g)(0)``; on monomials ``x^a, x^b`` this is ``a! [a == b]``."""
    _check_n(f, g)
    gd = g.as_dict()
    return sum(c * gd.get(e, 0) * multi_factorial(e) for e, c in f.terms)


def permute_variables(p: Polynomial, perm: Sequence[int], signs: Sequence[int] | None = None) -> Polynomial:
    """Substitute ``x_i -> signs[i] * x_{perm[i]}`` (0-based ``perm``)."""
    n = p.n
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of range({n})")
    out: dict[Exponent, int] = {}
    for e, c in p.terms:
        new = [0] * n
        sign = 1
        for i, k in enumerate(e):
            new[perm[i]] += k
            if signs is not None and signs[i] < 0 and k % 2:
                sign = -sign
        key = tuple(new)
        out[key] = out.get(key, 0) + sign * c
    return Polynomial._from_dict(n, out)


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def antisymmetrize(p: Polynomial) -> Polynomial:
    """``sum over sigma in S_n of sgn(sigma) * (sigma . p)``."""
    out: dict[Exponent, int] = {}
    for perm in itertools.permutations(range(p.n)):
        s = permutation_sign(perm)
        for e, c in permute_variables(p, perm).terms:
            out[e] = out.get(e, 0) + s * c
    return Polynomial._from_dict(p.n, out)


def vandermonde(n: int) -> Polynomial:
    """``prod_{i<j} (x_i - x_j)``."""
    forms = []
    for i in range(n):
        for j in range(i + 1, n):
            f = [0] * n
            f[i], f[j] = 1, -1
            forms.append(tuple(f))
    return expand_linear_product(forms, n)


def elementary_symmetric(variables: Sequence[Polynomial], k: int, n: int) -> Polynomial:
    out = Polynomial.zero(n)
    for combo in itertools.combinations(variables, k):
        term = Polynomial.one(n)
        for v in combo:
            term = term * v
        out = out + term
    return out


def monomials_of_degree(n: int, d: int) -> Iterator[Exponent]:
    """All exponent tuples of length ``n`` summing to ``d``."""
    if n == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest

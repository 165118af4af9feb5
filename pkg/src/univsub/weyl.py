"""Classical root systems, Weyl group actions and the invariant ideal.

Coordinates are the standard orthonormal ones: for U(n), Sp(n), SO(2n) and
SO(2n+1) the symmetric algebra of the dual Cartan subalgebra is
``Z[x_1, ..., x_n]`` and the Weyl group acts by signed permutations.
Membership of a polynomial ``f`` in the ideal generated by positive-degree
invariants is decided by applying ``f`` as a differential operator to the
product of the positive roots: ``f`` lies in the ideal iff the result is 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .polyalg import (
    LinearForm,
    Polynomial,
    apply_diff_operator,
    derivative_pairing,
    elementary_symmetric,
    expand_linear_product,
    factorial,
    multiply_by_all_vars,
    permutation_sign,
    permute_variables,
    substitute_squares,
    vandermonde,
)


class Family(str, enum.Enum):
    UNITARY = "A"
    ODD_ORTHOGONAL = "B"
    SYMPLECTIC = "C"
    EVEN_ORTHOGONAL = "D"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown family {value!r}; expected one of A, B, C, D") from None


@dataclass(frozen=True)
class GroupType:
    family: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if self.n < 1:
            raise ValueError(f"rank parameter must be >= 1, got {self.n}")
        if self.family is Family.EVEN_ORTHOGONAL and self.n < 2:
            raise ValueError("SO(2n) needs n >= 2")

    def to_json(self) -> dict:
        return {"group": self.family.value, "n": self.n}


@dataclass(frozen=True)
class RootSystemSpec:
    group: GroupType
    positive_roots: tuple[LinearForm, ...]
    m: int
    weyl_order: int
    degrees: tuple[int, ...]
    basic_invariants: tuple[Polynomial, ...]

    @property
    def n(self) -> int:
        return self.group.n


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation ``x_i -> signs[i] * x_{permutation[i]}`` (0-based)."""

    permutation: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"{self.permutation} is not a permutation")
        if len(self.signs) != len(self.permutation) or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad sign vector {self.signs}")

    @property
    def n(self) -> int:
        return len(self.permutation)

    def sign(self) -> int:
        """Determinant of the signed permutation matrix."""
        s = permutation_sign(self.permutation)
        for t in self.signs:
            s *= t
        return s

    def check_family(self, group: GroupType) -> None:
        if self.n != group.n:
            raise ValueError(f"element acts on {self.n} variables, group on {group.n}")
        neg = sum(1 for s in self.signs if s < 0)
        if group.family is Family.UNITARY and neg:
            raise ValueError("type A Weyl elements carry no sign changes")
        if group.family is Family.EVEN_ORTHOGONAL and neg % 2:
            raise ValueError("type D Weyl elements change an even number of signs")


def _unit(n: int, i: int, scale: int = 1) -> LinearForm:
    v = [0] * n
    v[i] = scale
    return tuple(v)


def _positive_roots(group: GroupType) -> tuple[LinearForm, ...]:
    n, fam = group.n, group.family
    roots: list[LinearForm] = []
    for i in range(n):
        for j in range(i + 1, n):
            minus = [0] * n
            minus[i], minus[j] = 1, -1
            roots.append(tuple(minus))
            if fam is not Family.UNITARY:
                plus = [0] * n
                plus[i], plus[j] = 1, 1
                roots.append(tuple(plus))
    if fam is Family.SYMPLECTIC:
        roots.extend(_unit(n, i, 2) for i in range(n))
    elif fam is Family.ODD_ORTHOGONAL:
        roots.extend(_unit(n, i) for i in range(n))
    return tuple(roots)


@lru_cache(maxsize=None)
def make_root_system(group: GroupType) -> RootSystemSpec:
    n, fam = group.n, group.family
    xs = [Polynomial.var(n, i) for i in range(n)]
    squares = [x * x for x in xs]
    if fam is Family.UNITARY:
        order = factorial(n)
        degrees = tuple(range(1, n + 1))
        invariants = [elementary_symmetric(xs, k, n) for k in range(1, n + 1)]
    elif fam in (Family.SYMPLECTIC, Family.ODD_ORTHOGONAL):
        order = 2**n * factorial(n)
        degrees = tuple(2 * k for k in range(1, n + 1))
        invariants = [elementary_symmetric(squares, k, n) for k in range(1, n + 1)]
    else:
        order = 2 ** (n - 1) * factorial(n)
        degrees = tuple(2 * k for k in range(1, n)) + (n,)
        invariants = [elementary_symmetric(squares, k, n) for k in range(1, n)]
        invariants.append(multiply_by_all_vars(Polynomial.one(n)))
    roots = _positive_roots(group)
    return RootSystemSpec(
        group=group,
        positive_roots=roots,
        m=len(roots),
        weyl_order=order,
        degrees=degrees,
        basic_invariants=tuple(invariants),
    )


def root_system(family: Family | str, n: int) -> RootSystemSpec:
    return make_root_system(GroupType(Family.parse(family), n))


def closed_form_harmonic(group: GroupType) -> Polynomial:
    """Product of positive roots written through the Vandermonde polynomial."""
    n, fam = group.n, group.family
    if fam is Family.UNITARY:
        return vandermonde(n)
    sq = substitute_squares(vandermonde(n))
    if fam is Family.EVEN_ORTHOGONAL:
        return sq
    out = multiply_by_all_vars(sq)
    if fam is Family.SYMPLECTIC:
        out = out * 2**n
    return out


@lru_cache(maxsize=None)
def _fundamental_harmonic(group: GroupType) -> Polynomial:
    spec = make_root_system(group)
    f0 = expand_linear_product(spec.positive_roots, spec.n)
    if f0 != closed_form_harmonic(group):
        raise RuntimeError(f"root product disagrees with closed form for {group}")
    return f0


def fundamental_harmonic(spec: RootSystemSpec) -> Polynomial:
    """Product of all positive roots (the top-degree harmonic polynomial)."""
    return _fundamental_harmonic(spec.group)


def weyl_act(w: WeylElement, p: Polynomial) -> Polynomial:
    if w.n != p.n:
        raise ValueError(f"element acts on {w.n} variables, polynomial has {p.n}")
    return permute_variables(p, w.permutation, w.signs)


def generators(group: GroupType) -> list[WeylElement]:
    """Simple reflections: adjacent transpositions plus one family-specific reflection."""
    n = group.n
    ident = tuple(range(n))
    plus = (1,) * n
    gens = []
    for i in range(n - 1):
        perm = list(ident)
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        gens.append(WeylElement(tuple(perm), plus))
    fam = group.family
    if fam in (Family.SYMPLECTIC, Family.ODD_ORTHOGONAL):
        gens.append(WeylElement(ident, plus[:-1] + (-1,)))
    elif fam is Family.EVEN_ORTHOGONAL:
        # reflection in x_{n-1} + x_n
        perm = list(ident)
        perm[-2], perm[-1] = perm[-1], perm[-2]
        gens.append(WeylElement(tuple(perm), plus[:-2] + (-1, -1)))
    return gens


def is_invariant(p: Polynomial, group: GroupType) -> bool:
    return all(weyl_act(w, p) == p for w in generators(group))


def is_skew(p: Polynomial, group: GroupType) -> bool:
    return all(weyl_act(w, p) == p * w.sign() for w in generators(group))


def ideal_membership(f: Polynomial, spec: RootSystemSpec) -> bool:
    """Decide whether ``f`` lies in the ideal generated by the basic invariants.

    The ideal is graded, so each homogeneous component is tested on its own.
    For the component of degree ``m`` the differential test reduces to the
    scalar pairing with the fundamental harmonic; both routes are evaluated
    and must agree.
    """
    if f.n != spec.n:
        raise ValueError(f"polynomial has {f.n} variables, root system has {spec.n}")
    f0 = fundamental_harmonic(spec)
    for deg, part in f.homogeneous_components().items():
        if deg > spec.m:
            continue
        derived = apply_diff_operator(part, f0)
        if deg == spec.m:
            scalar = derivative_pairing(part, f0)
            if derived.is_zero() != (scalar == 0) or (not derived.is_zero() and derived.terms[0][1] != scalar):
                raise RuntimeError("differential and pairing membership tests disagree")
        if not derived.is_zero():
            return False
    return True


def harmonic_dimensions(spec: RootSystemSpec) -> list[int]:
    """Coefficients of ``prod_i (1 + t + ... + t^(d_i - 1))``, degrees 0..m."""
    coeffs = [1]
    for d in spec.degrees:
        nxt = [0] * (len(coeffs) + d - 1)
        for i, c in enumerate(coeffs):
            for k in range(d):
                nxt[i + k] += c
        coeffs = nxt
    return coeffs


def basic_invariant_annihilates(spec: RootSystemSpec) -> list[bool]:
    """For each basic invariant ``F``, whether ``d_F`` kills the fundamental harmonic."""
    f0 = fundamental_harmonic(spec)
    return [apply_diff_operator(F, f0).is_zero() for F in spec.basic_invariants]


def parse_group(data: dict | Sequence) -> GroupType:
    if isinstance(data, dict):
        return GroupType(Family.parse(data["group"]), int(data["n"]))
    fam, n = data
    return GroupType(Family.parse(fam), int(n))

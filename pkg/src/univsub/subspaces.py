"""Torus-invariant subspaces presented by the weights of a complement.

A subspace ``V`` containing the torus-fixed vectors is described only by
the characters ``chi_1, ..., chi_d`` of a complementary torus-invariant
subspace.  From these we form the characteristic polynomial (their
product), the characteristic number at optimal dimension, and a one-sided
universality verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polyalg import LinearForm, Polynomial, expand_linear_product, monomial_inner_product
from .weyl import GroupType, RootSystemSpec, fundamental_harmonic, ideal_membership, make_root_system, parse_group


class DegreeMismatch(ValueError):
    """Characteristic number requested away from optimal dimension."""


class NoExtension(ValueError):
    """No remaining weight keeps the characteristic polynomial outside the ideal."""


class Verdict(str, enum.Enum):
    UNIVERSAL_CERTIFIED = "UniversalCertified"
    INCONCLUSIVE = "Inconclusive"
    UNIVERSAL_IFF = "UniversalIff"


@dataclass(frozen=True)
class WeightMultiset:
    group: GroupType
    weights: tuple[LinearForm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ws = tuple(tuple(int(c) for c in w) for w in self.weights)
        for w in ws:
            if len(w) != self.group.n:
                raise ValueError(f"weight {w} has length {len(w)}, expected {self.group.n}")
            if not any(w):
                raise ValueError("zero weight: the complement must carry no torus-fixed vectors")
        object.__setattr__(self, "weights", ws)

    @property
    def degree(self) -> int:
        return len(self.weights)

    @property
    def spec(self) -> RootSystemSpec:
        return make_root_system(self.group)

    def to_json(self) -> dict:
        return {**self.group.to_json(), "weights": [list(w) for w in self.weights]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightMultiset":
        return cls(parse_group(data), tuple(tuple(w) for w in data.get("weights", [])))


@dataclass(frozen=True)
class UniversalityVerdict:
    f_V: Polynomial
    degree: int
    m: int
    in_ideal: bool
    characteristic_number: Fraction | None
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "f_V": self.f_V.to_text(),
            "degree": self.degree,
            "m": self.m,
            "in_ideal": self.in_ideal,
            "C_V": None if self.characteristic_number is None else str(self.characteristic_number),
            "verdict": self.verdict.value,
        }


def characteristic_polynomial(ws: WeightMultiset) -> Polynomial:
    """Product of the complement's weights, in the listed orientation."""
    return expand_linear_product(ws.weights, ws.group.n)


def characteristic_number_of(f: Polynomial, spec: RootSystemSpec) -> Fraction:
    f0 = fundamental_harmonic(spec)
    return Fraction(monomial_inner_product(f, f0) * spec.weyl_order, monomial_inner_product(f0, f0))


def characteristic_number(ws: WeightMultiset) -> Fraction:
    spec = ws.spec
    if ws.degree != spec.m:
        raise DegreeMismatch(f"complement has {ws.degree} weights, optimal dimension needs {spec.m}")
    return characteristic_number_of(characteristic_polynomial(ws), spec)


def universality_verdict(ws: WeightMultiset) -> UniversalityVerdict:
    spec = ws.spec
    f = characteristic_polynomial(ws)
    number = None
    if ws.degree > spec.m:
        # every homogeneous polynomial above the top harmonic degree is in the ideal
        in_ideal = True
    else:
        in_ideal = ideal_membership(f, spec)
        if ws.degree == spec.m:
            number = characteristic_number_of(f, spec)
            if (number != 0) == in_ideal:
                raise RuntimeError("characteristic number disagrees with ideal membership")
    verdict = Verdict.INCONCLUSIVE if in_ideal else Verdict.UNIVERSAL_CERTIFIED
    return UniversalityVerdict(f, ws.degree, spec.m, in_ideal, number, verdict)


def shrink(v_weights: WeightMultiset, complement: WeightMultiset) -> WeightMultiset:
    """Grow the complement to optimal dimension while staying outside the ideal.

    Weights of ``V`` are moved one at a time into the complement; at each
    step the candidates are scanned in lexicographic order of coefficient
    vectors and the first one whose product stays outside the ideal is
    taken.
    """
    if v_weights.group != complement.group:
        raise ValueError("weight multisets belong to different groups")
    spec = complement.spec
    f = characteristic_polynomial(complement)
    if complement.degree > spec.m or ideal_membership(f, spec):
        raise ValueError("the starting characteristic polynomial already lies in the ideal")
    chosen = list(complement.weights)
    pool = list(v_weights.weights)
    while len(chosen) < spec.m:
        for cand in sorted(set(pool)):
            g = f * Polynomial.linear(cand)
            if not ideal_membership(g, spec):
                f = g
                chosen.append(cand)
                pool.remove(cand)
                break
        else:
            raise NoExtension(
                f"no weight extends the degree-{len(chosen)} certificate; "
                "the remaining weights of V may fail to span the dual Cartan algebra"
            )
    return WeightMultiset(complement.group, tuple(chosen))


def weights_from_roots(spec: RootSystemSpec) -> WeightMultiset:
    """Complement of a Cartan subalgebra in the adjoint representation."""
    return WeightMultiset(spec.group, spec.positive_roots)


def as_multiset(group: GroupType, weights: Sequence[Sequence[int]]) -> WeightMultiset:
    return WeightMultiset(group, tuple(tuple(w) for w in weights))

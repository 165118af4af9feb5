"""Cross-module consistency checks run by ``univsub selftest``."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable

from .patterns import (
    BITRIANGULAR_4,
    all_simple_patterns,
    pattern_characteristic_number,
    simple_characteristic_number,
    upper_triangular,
    validate,
)
from .polyalg import Polynomial, apply_diff_operator, derivative_pairing, monomial_inner_product, monomials_of_degree
from .subspaces import characteristic_number, weights_from_roots
from .weyl import (
    Family,
    RootSystemSpec,
    closed_form_harmonic,
    fundamental_harmonic,
    is_skew,
    root_system,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _specs(n_max: int) -> list[RootSystemSpec]:
    out = []
    for fam in Family:
        for n in range(1, n_max + 1):
            if fam is Family.EVEN_ORTHOGONAL and n < 2:
                continue
            out.append(root_system(fam, n))
    return out


def _label(spec: RootSystemSpec) -> str:
    return f"{spec.group.family.value}{spec.n}"


def _random_homogeneous(n: int, d: int, rng: random.Random) -> Polynomial:
    return Polynomial(n, {e: rng.randint(-3, 3) for e in monomials_of_degree(n, d)})


def run_checks(n_max: int = 3, seed: int = 0, harmonic: Callable[[RootSystemSpec], Polynomial] | None = None) -> list[Check]:
    """Evaluate every check; ``harmonic`` replaces the fundamental harmonic (fault injection)."""
    f0_of = harmonic or fundamental_harmonic
    rng = random.Random(seed)
    specs = _specs(n_max)
    checks: list[Check] = []

    def add(name, ok, detail=""):
        checks.append(Check(name, bool(ok), detail))

    for spec in specs:
        add(
            f"degrees {_label(spec)}",
            math.prod(spec.degrees) == spec.weyl_order and sum(d - 1 for d in spec.degrees) == spec.m,
            f"degrees={spec.degrees} |W|={spec.weyl_order} m={spec.m}",
        )
    for spec in specs:
        f0 = f0_of(spec)
        add(f"closed form {_label(spec)}", f0 == closed_form_harmonic(spec.group))
        add(f"skew {_label(spec)}", is_skew(f0, spec.group))
        add(
            f"harmonic {_label(spec)}",
            all(apply_diff_operator(F, f0).is_zero() for F in spec.basic_invariants),
        )
        number = characteristic_number(weights_from_roots(spec))
        add(f"C(roots)=|W| {_label(spec)}", number == spec.weyl_order, f"C={number}")
        ok = True
        p0, b0 = monomial_inner_product(f0, f0), derivative_pairing(f0, f0)
        for _ in range(10):
            f = _random_homogeneous(spec.n, spec.m, rng)
            if monomial_inner_product(f, f0) * b0 != derivative_pairing(f, f0) * p0:
                ok = False
        add(f"functional agreement {_label(spec)}", ok)
    for n in range(2, max(n_max, 3) + 1):
        c = pattern_characteristic_number(upper_triangular(n))
        add(f"Schur C_I0 n={n}", c == math.factorial(n), f"C={c}")
    for n in range(2, min(n_max, 4) + 1):
        ok = all(
            pattern_characteristic_number(p) == simple_characteristic_number(p) for p in all_simple_patterns(n)
        )
        add(f"simple fast path n={n}", ok)
    c = pattern_characteristic_number(validate(4, BITRIANGULAR_4))
    add("bitriangular n=4 C_I=-12", c == -12, f"C={c}")
    return checks


def corrupted_harmonic(spec: RootSystemSpec) -> Polynomial:
    """A deliberately wrong fundamental harmonic for negative-control runs."""
    bump = Polynomial.monomial((spec.m,) + (0,) * (spec.n - 1))
    return fundamental_harmonic(spec) + bump


def format_table(checks: list[Check]) -> str:
    width = max(len(c.name) for c in checks)
    lines = [f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL'}  {c.detail}".rstrip() for c in checks]
    passed = sum(c.passed for c in checks)
    lines.append(f"{passed}/{len(checks)} checks passed")
    return "\n".join(lines)

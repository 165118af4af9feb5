import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import IdealSlice, expand_forms, monomials
from univsub.polyalg import Polynomial, antisymmetrize, apply_diff_operator, derivative_pairing, monomial_inner_product
from univsub.weyl import (
    Family,
    GroupType,
    WeylElement,
    closed_form_harmonic,
    fundamental_harmonic,
    harmonic_dimensions,
    ideal_membership,
    is_invariant,
    is_skew,
    make_root_system,
    parse_group,
    root_system,
    weyl_act,
)

ALL_SPECS = [(f, n) for f in "ABCD" for n in range(1, 7) if not (f == "D" and n < 2)]


def test_group_type_validation():
    with pytest.raises(ValueError):
        GroupType(Family.EVEN_ORTHOGONAL, 1)
    with pytest.raises(ValueError):
        GroupType("A", 0)
    with pytest.raises(ValueError):
        GroupType("E", 3)
    assert parse_group({"group": "c", "n": 2}) == GroupType(Family.SYMPLECTIC, 2)
    assert GroupType("B", 3).to_json() == {"group": "B", "n": 3}


@pytest.mark.parametrize(
    "fam,n,m,order,degrees",
    [
        ("A", 3, 3, 6, (1, 2, 3)),
        ("C", 2, 4, 8, (2, 4)),
        ("D", 2, 2, 4, (2, 2)),
        ("B", 3, 9, 48, (2, 4, 6)),
        ("D", 4, 12, 192, (2, 4, 6, 4)),
    ],
)
def test_make_root_system_examples(fam, n, m, order, degrees):
    spec = root_system(fam, n)
    assert spec.m == m == len(spec.positive_roots)
    assert spec.weyl_order == order
    assert spec.degrees == degrees


@pytest.mark.parametrize("fam,n", ALL_SPECS)
def test_positive_root_counts(fam, n):
    m = {"A": n * (n - 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1)}[fam]
    spec = root_system(fam, n)
    assert spec.m == m
    assert math.prod(spec.degrees) == spec.weyl_order
    assert sum(d - 1 for d in spec.degrees) == spec.m
    assert [F.degree() for F in spec.basic_invariants] == list(spec.degrees)


def test_fundamental_harmonic_examples():
    assert fundamental_harmonic(root_system("A", 2)) == Polynomial.linear((1, -1))
    assert fundamental_harmonic(root_system("C", 1)) == Polynomial.linear((2,))
    expected = expand_forms([(1, -1), (1, 1), (1, 0), (0, 1)], 2)
    assert fundamental_harmonic(root_system("B", 2)).as_dict() == expected
    assert expected == {(3, 1): 1, (1, 3): -1}


@pytest.mark.parametrize("fam,n", [s for s in ALL_SPECS if s[1] <= 4])
def test_fundamental_harmonic_matches_sympy_and_closed_form(fam, n):
    spec = root_system(fam, n)
    f0 = fundamental_harmonic(spec)
    assert f0.as_dict() == expand_forms(spec.positive_roots, n)
    assert f0 == closed_form_harmonic(spec.group)


def test_weyl_act_examples():
    swap = WeylElement((1, 0), (1, 1))
    assert weyl_act(swap, Polynomial.linear((1, -1))) == Polynomial.linear((-1, 1))
    p = Polynomial(3, {(2, 1, 0): 4, (0, 0, 3): -1})
    assert weyl_act(WeylElement((0, 1, 2), (1, 1, 1)), p) == p
    flip = WeylElement((0,), (-1,))
    f0 = fundamental_harmonic(root_system("C", 1))
    assert weyl_act(flip, f0) == -f0 == f0 * flip.sign()


def test_weyl_element_family_checks():
    WeylElement((1, 0), (-1, -1)).check_family(GroupType("D", 2))
    with pytest.raises(ValueError):
        WeylElement((0, 1), (-1, 1)).check_family(GroupType("D", 2))
    with pytest.raises(ValueError):
        WeylElement((0, 1), (-1, 1)).check_family(GroupType("A", 2))
    with pytest.raises(ValueError):
        WeylElement((0, 0), (1, 1))


def test_invariance_examples():
    x1, x2 = Polynomial.var(2, 0), Polynomial.var(2, 1)
    assert is_invariant(x1 * x2, GroupType("A", 2))
    assert not is_invariant(x1, GroupType("A", 2))
    assert is_skew(fundamental_harmonic(root_system("A", 3)), GroupType("A", 3))
    assert is_skew(Polynomial.var(1, 0), GroupType("B", 1))


@pytest.mark.parametrize("fam,n", ALL_SPECS)
def test_basic_invariants_are_invariant_and_f0_skew(fam, n):
    spec = root_system(fam, n)
    assert all(is_invariant(F, spec.group) for F in spec.basic_invariants)
    assert is_skew(fundamental_harmonic(spec), spec.group)


def _signed_permutations(fam, n):
    signs = [(1,) * n] if fam == "A" else list(itertools.product((1, -1), repeat=n))
    if fam == "D":
        signs = [s for s in signs if math.prod(s) == 1]
    return signs


@given(st.data())
def test_skew_under_random_group_elements(data):
    fam = data.draw(st.sampled_from("ABCD"))
    n = data.draw(st.integers(2, 4))
    perm = tuple(data.draw(st.permutations(range(n))))
    signs = data.draw(st.sampled_from(_signed_permutations(fam, n)))
    w = WeylElement(perm, signs)
    w.check_family(GroupType(fam, n))
    spec = root_system(fam, n)
    assert weyl_act(w, fundamental_harmonic(spec)) == fundamental_harmonic(spec) * w.sign()
    for F in spec.basic_invariants:
        assert weyl_act(w, F) == F


def test_group_orders_by_enumeration():
    for fam, n in [("A", 3), ("B", 3), ("C", 2), ("D", 3), ("D", 4)]:
        count = math.factorial(n) * len(_signed_permutations(fam, n))
        assert count == root_system(fam, n).weyl_order


def test_ideal_membership_examples():
    spec = root_system("A", 2)
    assert ideal_membership(Polynomial.linear((1, 1)), spec)
    for fam, n in [("A", 3), ("B", 2), ("C", 3), ("D", 3)]:
        s = root_system(fam, n)
        assert not ideal_membership(fundamental_harmonic(s), s)
    # (x1 - x2)^2 = e1^2 - 4 e2 sits above the top harmonic degree
    sq = Polynomial.linear((1, -1)) ** 2
    assert IdealSlice("A", 2, 2).contains(sq.as_dict())
    assert ideal_membership(sq, spec)
    assert not ideal_membership(Polynomial.linear((1, -1)), spec)


def test_ideal_membership_rejects_wrong_n():
    with pytest.raises(ValueError):
        ideal_membership(Polynomial.one(3), root_system("A", 2))


def test_ideal_membership_splits_components():
    spec = root_system("A", 3)
    e1 = Polynomial.linear((1, 1, 1))
    f0 = fundamental_harmonic(spec)
    assert ideal_membership(e1 + e1 * e1 * e1, spec)
    assert not ideal_membership(e1 + f0, spec)
    # above the top degree everything is in the ideal
    assert ideal_membership(Polynomial.monomial((4, 0, 0)), spec)


@pytest.mark.parametrize("fam,n", [(f, n) for f in "ABCD" for n in (2, 3) ])
def test_ideal_membership_against_linear_algebra_in_low_degree(fam, n):
    spec = root_system(fam, n)
    rng = random.Random(hash((fam, n)) & 0xFFFF)
    for d in range(0, min(spec.m, 6) + 1):
        oracle = IdealSlice(fam, n, d)
        for _ in range(8):
            f = Polynomial(n, {e: rng.randint(-2, 2) for e in monomials(n, d) if rng.random() < 0.6})
            if rng.random() < 0.5 and oracle.pivots:
                # a random ideal member: combination of reduced basis rows
                terms = {}
                for col, row in rng.sample(oracle.pivots, min(3, len(oracle.pivots))):
                    k = rng.randint(1, 3)
                    for e, v in zip(oracle.basis, row):
                        terms[e] = terms.get(e, 0) + k * v
                den = math.lcm(*[t.denominator for t in terms.values()]) if terms else 1
                f = Polynomial(n, {e: int(v * den) for e, v in terms.items()})
            assert ideal_membership(f, spec) == oracle.contains(f.as_dict())


@pytest.mark.parametrize(
    "fam,n,dims",
    [("A", 2, [1, 1]), ("A", 3, [1, 2, 2, 1]), ("C", 2, [1, 2, 2, 2, 1]), ("D", 2, [1, 2, 1])],
)
def test_harmonic_dimensions(fam, n, dims):
    assert harmonic_dimensions(root_system(fam, n)) == dims


@pytest.mark.parametrize("fam,n", [s for s in ALL_SPECS if s[1] <= 3])
def test_harmonic_dimensions_match_ideal_codimension(fam, n):
    spec = root_system(fam, n)
    dims = harmonic_dimensions(spec)
    assert len(dims) == spec.m + 1 and dims[-1] == 1
    assert sum(dims) == spec.weyl_order
    for d in range(min(spec.m, 5) + 1):
        oracle = IdealSlice(fam, n, d)
        assert len(oracle.basis) - oracle.rank == dims[d]


@pytest.mark.parametrize("fam,n", [s for s in ALL_SPECS if s[1] <= 4])
def test_basic_invariants_annihilate_f0(fam, n):
    spec = root_system(fam, n)
    f0 = fundamental_harmonic(spec)
    for F in spec.basic_invariants:
        assert apply_diff_operator(F, f0).is_zero()
        assert ideal_membership(F, spec)


@pytest.mark.parametrize("fam,n", [(f, n) for f in "ABCD" for n in (2, 3)])
def test_degree_m_functionals_are_proportional(fam, n):
    spec = root_system(fam, n)
    f0 = fundamental_harmonic(spec)
    p0, b0 = monomial_inner_product(f0, f0), derivative_pairing(f0, f0)
    rng = random.Random(7)
    for _ in range(100):
        f = Polynomial(n, {e: rng.randint(-3, 3) for e in monomials(n, spec.m)})
        assert monomial_inner_product(f, f0) * b0 == derivative_pairing(f, f0) * p0


def test_skew_polynomials_are_multiples_of_f0():
    rng = random.Random(3)
    for n in (2, 3, 4):
        spec = root_system("A", n)
        f0 = fundamental_harmonic(spec)
        for _ in range(10):
            f = Polynomial(n, {e: rng.randint(-3, 3) for e in monomials(n, spec.m)})
            skew = antisymmetrize(f)
            assert is_skew(skew, spec.group)
            ratio = monomial_inner_product(skew, f0) // monomial_inner_product(f0, f0)
            assert skew == f0 * ratio

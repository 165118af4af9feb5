import numpy as np
import pytest

from univsub import flagsearch as fs
from univsub.patterns import BITRIANGULAR_4, CYCLIC_3, all_simple_patterns, upper_triangular, validate

I3 = upper_triangular(3)
CYC = validate(3, CYCLIC_3)


def twist(k, g):
    """Right-multiply by a restart-dependent diagonal phase (a torus element)."""
    rng = np.random.default_rng(10_000 + k)
    return g @ np.diag(np.exp(2j * np.pi * rng.random(g.shape[0])))


def _assert_solution(sol, problem):
    n = problem.n
    g = sol.conjugator
    assert np.linalg.norm(g.conj().T @ g - np.eye(n), 2) <= fs.UNITARY_TOL
    B = g.conj().T @ problem.A @ g
    assert np.allclose(B, sol.transformed)
    for i, j in problem.pattern.pairs:
        assert abs(B[i - 1, j - 1]) <= problem.tolerance
    assert sol.residual <= problem.tolerance


def test_problem_validation():
    with pytest.raises(ValueError):
        fs.FlagProblem(np.eye(2), I3)
    with pytest.raises(ValueError):
        fs.FlagProblem(np.full((3, 3), np.nan), I3)
    with pytest.raises(ValueError):
        fs.FlagProblem(np.eye(3), I3, tolerance=0)
    with pytest.raises(ValueError):
        fs.FlagProblem(np.eye(3), I3, restarts=0)
    assert fs.FlagProblem(np.eye(3), I3).restart_count == 1200


def test_tangent_basis_is_skew_hermitian_and_independent():
    for n in (2, 3, 4):
        basis = fs.tangent_basis(n)
        assert basis.shape == (n * (n - 1), n, n)
        assert np.allclose(basis + basis.conj().transpose(0, 2, 1), 0)
        flat = np.concatenate([basis.real.reshape(len(basis), -1), basis.imag.reshape(len(basis), -1)], axis=1)
        assert np.linalg.matrix_rank(flat) == n * (n - 1)


def test_haar_unitary_is_unitary():
    rng = np.random.default_rng(0)
    for n in (2, 3, 5):
        U = fs.haar_unitary(n, rng)
        assert np.allclose(U.conj().T @ U, np.eye(n))


def test_identity_when_already_in_pattern():
    A = np.triu(fs.random_matrix(3, 4)).T  # lower triangular: zero above the diagonal
    sol = fs.find_flag(fs.FlagProblem(A, I3, restarts=4))
    assert sol.restart == 0
    assert np.allclose(sol.conjugator, np.eye(3))


@pytest.mark.parametrize("pattern", [I3, CYC], ids=["upper", "cyclic"])
def test_find_flag_random(pattern):
    for seed in range(5):
        problem = fs.FlagProblem(fs.random_matrix(3, seed), pattern, restarts=64)
        sol = fs.find_flag(problem)
        assert sol is not None
        _assert_solution(sol, problem)


def test_every_simple_pattern_has_a_flag():
    for k, pattern in enumerate(all_simple_patterns(3)):
        for seed in range(20):
            problem = fs.FlagProblem(fs.random_matrix(3, 100 * k + seed), pattern, restarts=64)
            sol = fs.find_flag(problem)
            assert sol is not None, (pattern, seed)
            _assert_solution(sol, problem)


def test_diagonal_two_by_two_has_two_flags():
    problem = fs.FlagProblem(np.diag([1.0, 2.0]), upper_triangular(2), restarts=100)
    census = fs.collect_flags(problem)
    assert census.stable and census.count == 2
    diags = sorted(tuple(np.round(np.real(s.signature), 8)) for s in census.representatives)
    assert diags == [(1.0, 2.0), (2.0, 1.0)]


def test_count_schur_n3():
    problem = fs.FlagProblem(fs.random_matrix(3, 7), I3, restarts=300)
    census = fs.collect_flags(problem)
    assert census.stable and census.count == 6
    for sol in census.representatives:
        _assert_solution(sol, problem)
        assert fs.transversality_check(sol, I3)
    sigs = np.array([s.signature for s in census.representatives])
    eig = np.sort_complex(np.linalg.eigvals(problem.A))
    for row in sigs:
        assert np.allclose(np.sort_complex(row), eig, atol=1e-8)


def test_count_is_twist_invariant():
    problem = fs.FlagProblem(fs.random_matrix(3, 8), CYC, restarts=300)
    plain = fs.collect_flags(problem)
    twisted = fs.collect_flags(problem, transform=twist)
    assert plain.count == twisted.count == 6


def test_results_do_not_depend_on_jobs_or_batch():
    problem = fs.FlagProblem(fs.random_matrix(3, 9), I3, restarts=60)
    a = fs.solve_restarts(problem, 0, 60, batch=256)
    b = fs.solve_restarts(problem, 0, 60, batch=7)
    c = fs.solve_restarts(problem, 0, 60, jobs=2, batch=16)
    for other in (b, c):
        assert [s.restart for s in other] == [s.restart for s in a]
        for x, y in zip(a, other):
            assert np.allclose(x.conjugator, y.conjugator, atol=1e-12)


def test_unstable_count(monkeypatch):
    calls = iter(range(1, 100))
    monkeypatch.setattr(fs, "distinct_classes", lambda sols, tol=fs.SIGNATURE_TOL: [None] * next(calls))
    problem = fs.FlagProblem(np.diag([1.0, 2.0]), upper_triangular(2), restarts=4)
    with pytest.raises(fs.UnstableCount) as info:
        fs.count_flags(problem)
    assert info.value.restarts == [4, 8, 16]


def test_signature_equivalence():
    assert fs.same_signature((1 + 1j, 2), (1 + 1j + 1e-8, 2))
    assert not fs.same_signature((1, 2), (2, 1))


def test_tangent_map_zero_matrix():
    M = fs.tangent_map_matrix(np.zeros((3, 3)), I3)
    assert M.shape == (6, 6) and not M.any()


def test_tangent_map_two_by_two_closed_form():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, b, c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        v = np.array([[a, 0], [c, b]])
        assert fs.tangent_determinant(v, upper_triangular(2)) == pytest.approx(abs(a - b) ** 2)


def test_tangent_map_linear_in_commutator():
    rng = np.random.default_rng(2)
    V = fs.sample_pattern_matrices(I3, 1, rng)[0]
    M = fs.tangent_map_matrix(V, I3)
    coeffs = rng.standard_normal(6)
    X = np.tensordot(coeffs, fs.tangent_basis(3), axes=1)
    C = V @ X - X @ V
    entries = np.array([C[i - 1, j - 1] for i, j in I3.pairs])
    expected = np.empty(6)
    expected[0::2], expected[1::2] = entries.real, entries.imag
    assert np.allclose(M @ coeffs, expected)


def test_tangent_map_rejects_nonzero_pattern_entries():
    with pytest.raises(fs.PatternViolation):
        fs.tangent_map_matrix(np.ones((3, 3)), I3)


def test_sign_scans():
    assert fs.tangent_sign_scan(I3, 500).sign_constant
    bt = fs.tangent_sign_scan(validate(4, BITRIANGULAR_4), 500)
    assert bt.sign_constant and bt.negative == 500
    cyc = fs.tangent_sign_scan(CYC, 500)
    assert not cyc.sign_constant
    assert cyc.to_json()["samples"] == 500


def test_transversality():
    problem = fs.FlagProblem(np.eye(3), I3, restarts=2)
    sol = fs.find_flag(problem)
    assert not fs.transversality_check(sol, I3)


def test_matrix_json_roundtrip():
    A = fs.random_matrix(3, 5)
    assert np.array_equal(fs.matrix_from_json(fs._matrix_to_json(A)), A)
    assert np.array_equal(fs.matrix_from_json([[1, 0], [0, 2.5]]), np.diag([1, 2.5]).astype(complex))


def test_expected_count():
    assert fs.expected_count(validate(4, BITRIANGULAR_4)) == 12
    assert fs.expected_count(CYC) is None

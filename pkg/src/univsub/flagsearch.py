"""Numerical search for unitary flags sending a matrix into a zero pattern.

Given ``A`` and a pattern ``I``, we look for unitary ``g`` with
``(g* A g)_{ij} = 0`` for every ``(i, j)`` in ``I``.  The unknowns live on the
flag manifold U(n)/T, which has real dimension ``2m`` with
``m = n(n-1)/2``: exactly the number of real equations.  Each restart runs
Gauss-Newton in the tangent directions ``E_ij - E_ji`` and
``i(E_ij + E_ji)`` (``i < j``), retracting with the matrix exponential and
controlling the step by Armijo backtracking.  Many restarts run as one
batched numpy computation.

Flags are compared through the ordered diagonal of ``g* A g``, which torus
conjugation leaves fixed.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .patterns import ZeroPattern, is_bitriangular

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240607
DEFAULT_TOLERANCE = 1e-10
SIGNATURE_TOL = 1e-6
UNITARY_TOL = 1e-12
ZERO_DET = 1e-12
TRANSVERSAL_DET = 1e-9


class UnstableCount(RuntimeError):
    def __init__(self, counts: Sequence[int], restarts: Sequence[int]):
        self.counts = list(counts)
        self.restarts = list(restarts)
        super().__init__(
            "UnstableCount: flag count kept changing under doubling "
            + ", ".join(f"{r} restarts -> {c}" for r, c in zip(restarts, counts))
        )


class PatternViolation(ValueError):
    pass


@dataclass(frozen=True)
class FlagProblem:
    A: np.ndarray
    pattern: ZeroPattern
    tolerance: float = DEFAULT_TOLERANCE
    restarts: int | None = None
    rng_seed: int = DEFAULT_SEED

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"matrix must be square, got shape {A.shape}")
        if A.shape[0] != self.pattern.n:
            raise ValueError(f"matrix is {A.shape[0]}x{A.shape[0]}, pattern is for n={self.pattern.n}")
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix has non-finite entries")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.restarts is not None and self.restarts < 1:
            raise ValueError("restarts must be positive")
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def restart_count(self) -> int:
        return self.restarts if self.restarts is not None else 200 * math.factorial(self.n)


@dataclass(frozen=True)
class FlagSolution:
    conjugator: np.ndarray
    residual: float
    signature: tuple[complex, ...]
    transformed: np.ndarray = field(repr=False)
    restart: int = -1

    def to_json(self) -> dict:
        return {
            "restart": self.restart,
            "residual": self.residual,
            "signature": [[z.real, z.imag] for z in self.signature],
            "conjugator": _matrix_to_json(self.conjugator),
        }


@dataclass
class FlagCensus:
    """All converged restarts of a doubling run and the class counts per stage."""

    solutions: list[FlagSolution]
    representatives: list[FlagSolution]
    stage_restarts: list[int]
    stage_counts: list[int]
    stable: bool

    @property
    def count(self) -> int:
        return self.stage_counts[-1]


@dataclass(frozen=True)
class SignScanReport:
    pattern: ZeroPattern
    sample_count: int
    positive: int
    negative: int
    zero: int
    seed: int

    @property
    def sign_constant(self) -> bool:
        return not (self.positive and self.negative)

    def to_json(self) -> dict:
        return {
            "samples": self.sample_count,
            "positive": self.positive,
            "negative": self.negative,
            "zero": self.zero,
            "sign_constant": self.sign_constant,
            "seed": self.seed,
        }


# -- geometry -------------------------------------------------------------


def tangent_basis(n: int) -> np.ndarray:
    """Real basis of the off-diagonal skew-Hermitian matrices, shape ``(2m, n, n)``."""
    mats = []
    for i in range(n):
        for j in range(i + 1, n):
            a = np.zeros((n, n), dtype=complex)
            a[i, j], a[j, i] = 1, -1
            b = np.zeros((n, n), dtype=complex)
            b[i, j] = b[j, i] = 1j
            mats.extend((a, b))
    return np.array(mats).reshape(-1, n, n)


def _pattern_index(pattern: ZeroPattern) -> tuple[np.ndarray, np.ndarray]:
    rows = np.array([i - 1 for i, _ in pattern.pairs], dtype=int)
    cols = np.array([j - 1 for _, j in pattern.pairs], dtype=int)
    return rows, cols


def _expm_skew(X: np.ndarray) -> np.ndarray:
    """Exponential of a stack of skew-Hermitian matrices via ``eigh``."""
    w, V = np.linalg.eigh(-1j * X)
    return (V * np.exp(1j * w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _unitarize(G: np.ndarray) -> np.ndarray:
    U, _, Vh = np.linalg.svd(G)
    return U @ Vh


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed & (2**64 - 1), index])


def initial_guess(n: int, seed: int, index: int) -> np.ndarray:
    """Restart 0 starts at the identity; the rest at Haar-random unitaries."""
    if index == 0:
        return np.eye(n, dtype=complex)
    return haar_unitary(n, restart_rng(seed, index))


def _residuals(A, G, rows, cols):
    B = np.conj(np.swapaxes(G, -1, -2)) @ A @ G
    r = B[:, rows, cols]
    return B, r, np.sum(np.abs(r) ** 2, axis=1)


def _gauss_newton(A, G, rows, cols, basis, tol, max_iter=80, max_halvings=30):
    """Run batched Gauss-Newton from the unitaries ``G``; returns final ``G`` and residual norms."""
    G = G.copy()
    B, r, res2 = _residuals(A, G, rows, cols)
    target = (1e-3 * tol) ** 2
    active = np.isfinite(res2) & (res2 > target)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        Bi, ri, r2 = B[idx], r[idx], res2[idx]
        # d/dt (e^{-tX} B e^{tX}) at t=0 is [B, X]
        comm = Bi[:, None] @ basis[None] - basis[None] @ Bi[:, None]
        Jc = comm[:, :, rows, cols]
        J = np.concatenate([Jc.real, Jc.imag], axis=2).transpose(0, 2, 1)
        rr = np.concatenate([ri.real, ri.imag], axis=1)
        try:
            step = -np.einsum("bij,bj->bi", np.linalg.pinv(J, rcond=1e-12), rr)
        except np.linalg.LinAlgError:
            active[idx] = False
            break
        X = np.einsum("bk,kij->bij", step, basis)
        t = np.ones(idx.size)
        pending = np.ones(idx.size, dtype=bool)
        newG = G[idx].copy()
        newB, newr, newres = Bi.copy(), ri.copy(), r2.copy()
        for _h in range(max_halvings):
            p = np.nonzero(pending)[0]
            if p.size == 0:
                break
            Gt = G[idx[p]] @ _expm_skew(t[p, None, None] * X[p])
            Bt, rt, r2t = _residuals(A, Gt, rows, cols)
            ok = np.isfinite(r2t) & (r2t <= (1 - 2e-4 * t[p]) * r2[p])
            acc = p[ok]
            newG[acc], newB[acc], newr[acc], newres[acc] = Gt[ok], Bt[ok], rt[ok], r2t[ok]
            pending[acc] = False
            t[p[~ok]] *= 0.5
        stalled = idx[pending]
        moved = idx[~pending]
        G[moved], B[moved], r[moved], res2[moved] = (
            newG[~pending], newB[~pending], newr[~pending], newres[~pending]
        )
        active[stalled] = False
        active[moved] = np.isfinite(res2[moved]) & (res2[moved] > target)
    return G, np.sqrt(res2)


def _solve_range(args) -> list[FlagSolution]:
    A, pairs, n, tol, seed, start, stop, transform = args
    pattern = ZeroPattern(n, pairs)
    rows, cols = _pattern_index(pattern)
    basis = tangent_basis(n)
    G0 = np.array([initial_guess(n, seed, k) for k in range(start, stop)]).reshape(-1, n, n)
    if transform is not None:
        G0 = np.array([transform(k, g) for k, g in zip(range(start, stop), G0)]).reshape(-1, n, n)
    if not rows.size:
        G = G0
    else:
        G, _ = _gauss_newton(A, G0, rows, cols, basis, tol)
    G = _unitarize(G)
    out = []
    for k, g in zip(range(start, stop), G):
        if not np.all(np.isfinite(g)):
            continue
        B = np.conj(g.T) @ A @ g
        res = float(np.sqrt(np.sum(np.abs(B[rows, cols]) ** 2))) if rows.size else 0.0
        if res <= tol and np.linalg.norm(np.conj(g.T) @ g - np.eye(n), 2) <= UNITARY_TOL:
            out.append(FlagSolution(g, res, tuple(complex(z) for z in np.diag(B)), B, k))
    return out


def solve_restarts(
    problem: FlagProblem,
    start: int,
    stop: int,
    jobs: int = 1,
    batch: int = 256,
    transform: Callable[[int, np.ndarray], np.ndarray] | None = None,
) -> list[FlagSolution]:
    """Converged solutions from restarts ``start <= k < stop``, ordered by ``k``.

    Results depend only on the seed and the restart indices, not on ``jobs``
    or ``batch``.
    """
    tasks = [
        (problem.A, problem.pattern.pairs, problem.n, problem.tolerance, problem.rng_seed, s, min(s + batch, stop), transform)
        for s in range(start, stop, batch)
    ]
    if jobs <= 1 or len(tasks) == 1:
        parts = map(_solve_range, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        parts = list(pool.map(_solve_range, tasks))
        pool.shutdown()
    return [s for part in parts for s in part]


def find_flag(problem: FlagProblem, batch: int = 64) -> FlagSolution | None:
    """First restart (in index order) that reaches the residual tolerance."""
    total = problem.restart_count
    for s in range(0, total, batch):
        sols = solve_restarts(problem, s, min(s + batch, total), batch=batch)
        if sols:
            return sols[0]
    return None


def same_signature(a: Sequence[complex], b: Sequence[complex], tol: float = SIGNATURE_TOL) -> bool:
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def distinct_classes(solutions: Sequence[FlagSolution], tol: float = SIGNATURE_TOL) -> list[FlagSolution]:
    reps: list[FlagSolution] = []
    for s in solutions:
        if not any(same_signature(s.signature, r.signature, tol) for r in reps):
            reps.append(s)
    return reps


def collect_flags(
    problem: FlagProblem,
    jobs: int = 1,
    transform: Callable[[int, np.ndarray], np.ndarray] | None = None,
) -> FlagCensus:
    """Count flag classes with ``R`` restarts, then ``2R``; if those differ, ``4R``.

    The count is stable when a doubling leaves it unchanged.
    """
    R = problem.restart_count
    sols = solve_restarts(problem, 0, R, jobs=jobs, transform=transform)
    stages, counts = [R], [len(distinct_classes(sols))]
    stable = False
    while len(stages) < 3:
        lo = stages[-1]
        sols += solve_restarts(problem, lo, 2 * lo, jobs=jobs, transform=transform)
        stages.append(2 * lo)
        counts.append(len(distinct_classes(sols)))
        log.debug("restarts %d -> %d classes", stages[-1], counts[-1])
        if counts[-1] == counts[-2]:
            stable = True
            break
    return FlagCensus(sols, distinct_classes(sols), stages, counts, stable)


def count_flags(problem: FlagProblem, jobs: int = 1) -> int:
    """Number of distinct flags (mod torus) sending ``A`` into the pattern."""
    census = collect_flags(problem, jobs=jobs)
    if not census.stable:
        raise UnstableCount(census.stage_counts, census.stage_restarts)
    return census.count


# -- linearization at a point of the pattern subspace -----------------------


def _tangent_maps(V: np.ndarray, pattern: ZeroPattern) -> np.ndarray:
    n = pattern.n
    rows, cols = _pattern_index(pattern)
    basis = tangent_basis(n)
    comm = V[:, None] @ basis[None] - basis[None] @ V[:, None]
    entries = comm[:, :, rows, cols]  # (s, 2m basis, m pairs)
    s, k, m = entries.shape
    M = np.empty((s, 2 * m, k))
    M[:, 0::2, :] = entries.real.transpose(0, 2, 1)
    M[:, 1::2, :] = entries.imag.transpose(0, 2, 1)
    return M


def tangent_map_matrix(v: np.ndarray, pattern: ZeroPattern) -> np.ndarray:
    """Real matrix of ``X -> P_W([v, X])`` from the tangent basis to the pattern slots.

    Columns follow :func:`tangent_basis`; rows are ``(Re, Im)`` of the
    pattern entries in sorted pair order.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (pattern.n, pattern.n):
        raise ValueError(f"expected a {pattern.n}x{pattern.n} matrix")
    rows, cols = _pattern_index(pattern)
    scale = max(1.0, float(np.abs(v).max(initial=0.0)))
    if rows.size and np.abs(v[rows, cols]).max() > 1e-12 * scale:
        raise PatternViolation("matrix has nonzero entries on the pattern")
    return _tangent_maps(v[None], pattern)[0]


def tangent_determinant(v: np.ndarray, pattern: ZeroPattern) -> float:
    M = tangent_map_matrix(v, pattern)
    return float(np.linalg.det(M)) if M.size else 1.0


def sample_pattern_matrices(pattern: ZeroPattern, samples: int, rng: np.random.Generator) -> np.ndarray:
    n = pattern.n
    V = (rng.standard_normal((samples, n, n)) + 1j * rng.standard_normal((samples, n, n))) / np.sqrt(2)
    rows, cols = _pattern_index(pattern)
    V[:, rows, cols] = 0
    return V


def tangent_sign_scan(pattern: ZeroPattern, samples: int = 1000, seed: int = DEFAULT_SEED) -> SignScanReport:
    """Census of determinant signs over random matrices vanishing on the pattern."""
    if samples < 1:
        raise ValueError("need at least one sample")
    V = sample_pattern_matrices(pattern, samples, np.random.default_rng(seed))
    M = _tangent_maps(V, pattern)
    dets = np.linalg.det(M) if M.shape[1] else np.ones(samples)
    zero = np.abs(dets) < ZERO_DET
    pos = int(np.sum((dets > 0) & ~zero))
    neg = int(np.sum((dets < 0) & ~zero))
    return SignScanReport(pattern, samples, pos, neg, int(zero.sum()), seed)


def transversality_check(solution: FlagSolution, pattern: ZeroPattern) -> bool:
    v = np.array(solution.transformed, dtype=complex)
    rows, cols = _pattern_index(pattern)
    v[rows, cols] = 0
    return abs(tangent_determinant(v, pattern)) > TRANSVERSAL_DET


# -- io ---------------------------------------------------------------------


def _matrix_to_json(M: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data: Sequence) -> np.ndarray:
    rows = []
    for row in data:
        vals = []
        for z in row:
            if isinstance(z, (int, float)):
                vals.append(complex(z))
            else:
                re, im = z
                vals.append(complex(float(re), float(im)))
        rows.append(vals)
    return np.array(rows, dtype=complex)


def random_matrix(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def census_report(census: FlagCensus, scan: SignScanReport | None = None) -> dict:
    out = {
        "solutions": [s.to_json() for s in census.representatives],
        "converged_restarts": len(census.solutions),
        "distinct_count": census.count,
        "stage_restarts": census.stage_restarts,
        "stage_counts": census.stage_counts,
        "stable": census.stable,
    }
    if scan is not None:
        out["sign_scan"] = scan.to_json()
    return out


def expected_count(pattern: ZeroPattern) -> int | None:
    """Predicted flag count when the pattern is bitriangular, else ``None``."""
    from .patterns import pattern_characteristic_number

    if not is_bitriangular(pattern):
        return None
    return abs(pattern_characteristic_number(pattern))

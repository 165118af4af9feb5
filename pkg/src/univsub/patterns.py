"""Zero patterns of square matrices and their universality certificates.

An ``n x n`` zero pattern is a set of ``n(n-1)/2`` off-diagonal positions
``(i, j)`` (1-based) forced to vanish.  Its polynomial is
``prod_{(i,j) in I} (x_i - x_j)`` and its characteristic number is the
monomial inner product of that polynomial with the Vandermonde polynomial.
The subspace of matrices vanishing on the pattern is universal for
U(n), Sp(n), SO(2n) and, via an odd pattern on ``n + 1`` block indices,
SO(2n+1) whenever the characteristic number is nonzero.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .polyalg import Polynomial, expand_linear_product, factorial, monomial_inner_product, vandermonde
from .subspaces import Verdict, WeightMultiset, universality_verdict
from .weyl import Family, GroupType

Pair = tuple[int, int]

DEFAULT_BOUND = 5


class PatternError(ValueError):
    """Base class for malformed pattern input."""

    name = "PatternError"

    def __str__(self) -> str:
        return f"{self.name}: {super().__str__()}"


class WrongCardinality(PatternError):
    name = "WrongCardinality"


class DiagonalPair(PatternError):
    name = "DiagonalPair"


class DuplicatePair(PatternError):
    name = "DuplicatePair"


class IndexOutOfRange(PatternError):
    name = "IndexOutOfRange"


class OddColumnViolation(PatternError):
    name = "OddColumnViolation"


class FamilyMismatch(PatternError):
    name = "FamilyMismatch"


class BoundExceeded(ValueError):
    def __init__(self, n: int, bound: int, count: int):
        self.n, self.bound, self.count = n, bound, count
        super().__init__(f"BoundExceeded: n={n} exceeds bound {bound}; would enumerate {count} patterns")


def _check_pairs(size: int, raw: Iterable[Sequence[int]]) -> tuple[Pair, ...]:
    pairs = [tuple(int(v) for v in p) for p in raw]
    for p in pairs:
        if len(p) != 2:
            raise PatternError(f"pair {p} does not have two entries")
        i, j = p
        if not (1 <= i <= size and 1 <= j <= size):
            raise IndexOutOfRange(f"pair {p} outside 1..{size}")
        if i == j:
            raise DiagonalPair(f"pair {p} lies on the diagonal")
    if len(set(pairs)) != len(pairs):
        dup = next(p for p in pairs if pairs.count(p) > 1)
        raise DuplicatePair(f"pair {dup} listed more than once")
    expected = size * (size - 1) // 2
    if len(pairs) != expected:
        raise WrongCardinality(f"{len(pairs)} pairs given, an {size}x{size} pattern needs {expected}")
    return tuple(sorted(pairs))


@dataclass(frozen=True)
class ZeroPattern:
    n: int
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PatternError(f"pattern size must be >= 1, got {self.n}")
        object.__setattr__(self, "pairs", _check_pairs(self.n, self.pairs))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self._pair_set

    @property
    def _pair_set(self) -> frozenset:
        return frozenset(self.pairs)

    def bitmask(self) -> int:
        index = slot_index(self.n)
        return sum(1 << index[p] for p in self.pairs)

    @classmethod
    def from_bitmask(cls, n: int, mask: int) -> "ZeroPattern":
        slots_ = slots(n)
        return cls(n, tuple(slots_[k] for k in range(len(slots_)) if mask >> k & 1))

    def reversed(self) -> "ZeroPattern":
        return ZeroPattern(self.n, tuple((j, i) for i, j in self.pairs))

    def relabeled(self, perm: Sequence[int]) -> "ZeroPattern":
        """Apply ``i -> perm[i-1]`` to both coordinates (``perm`` 1-based values)."""
        return ZeroPattern(self.n, tuple((perm[i - 1], perm[j - 1]) for i, j in self.pairs))

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs]}


@dataclass(frozen=True)
class OddPattern:
    """Pattern on ``n + 1`` block indices for SO(2n+1); block ``n + 1`` is 1x1."""

    n: int
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        if self.n < 1:
            raise PatternError(f"rank must be >= 1, got {self.n}")
        pairs = _check_pairs(self.n + 1, self.pairs)
        last = self.n + 1
        s = set(pairs)
        for i in range(1, last):
            if ((i, last) in s) == ((last, i) in s):
                raise OddColumnViolation(f"exactly one of ({i},{last}) and ({last},{i}) must be present")
        object.__setattr__(self, "pairs", pairs)

    def inner(self) -> ZeroPattern:
        """The pairs with both indices at most ``n``."""
        return ZeroPattern(self.n, tuple(p for p in self.pairs if max(p) <= self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "odd": True, "pairs": [list(p) for p in self.pairs]}


def validate(n: int, pairs: Iterable[Sequence[int]]) -> ZeroPattern:
    return ZeroPattern(n, tuple(tuple(p) for p in pairs))


def pattern_from_json(data: dict) -> ZeroPattern | OddPattern:
    if "n" not in data or "pairs" not in data:
        raise PatternError("pattern JSON needs 'n' and 'pairs'")
    pairs = tuple(tuple(p) for p in data["pairs"])
    if data.get("odd"):
        return OddPattern(int(data["n"]), pairs)
    return ZeroPattern(int(data["n"]), pairs)


@lru_cache(maxsize=None)
def slots(n: int) -> tuple[Pair, ...]:
    """Ordered off-diagonal positions in lexicographic order; bit k of a mask is slot k."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


@lru_cache(maxsize=None)
def slot_index(n: int) -> dict:
    return {p: k for k, p in enumerate(slots(n))}


def upper_triangular(n: int) -> ZeroPattern:
    return ZeroPattern(n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def is_simple(pattern: ZeroPattern) -> bool:
    s = set(pattern.pairs)
    return all(((i, j) in s) != ((j, i) in s) for i in range(1, pattern.n + 1) for j in range(i + 1, pattern.n + 1))


def is_bitriangular(pattern: ZeroPattern) -> bool:
    """(i0, j0) in I and (j0 - i0)(i0 - j0 + j - i) > 0 force (i, j) in I."""
    s = set(pattern.pairs)
    for i0, j0 in pattern.pairs:
        for i, j in slots(pattern.n):
            if (j0 - i0) * (i0 - j0 + j - i) > 0 and (i, j) not in s:
                return False
    return True


def pattern_forms(pattern: ZeroPattern) -> list[tuple[int, ...]]:
    forms = []
    for i, j in pattern.pairs:
        f = [0] * pattern.n
        f[i - 1], f[j - 1] = 1, -1
        forms.append(tuple(f))
    return forms


def pattern_polynomial(pattern: ZeroPattern) -> Polynomial:
    return expand_linear_product(pattern_forms(pattern), pattern.n)


@lru_cache(maxsize=None)
def _vandermonde(n: int) -> Polynomial:
    return vandermonde(n)


def pattern_characteristic_number(pattern: ZeroPattern) -> int:
    return monomial_inner_product(pattern_polynomial(pattern), _vandermonde(pattern.n))


def simple_characteristic_number(pattern: ZeroPattern) -> int:
    """Sign-counting shortcut for simple patterns: ``(-1)^{#lower pairs} n!``."""
    if not is_simple(pattern):
        raise ValueError("shortcut applies to simple patterns only")
    reversed_pairs = sum(1 for i, j in pattern.pairs if i > j)
    return (-1) ** reversed_pairs * factorial(pattern.n)


def family_multiplier(family: Family, n: int) -> int:
    family = Family.parse(family)
    if family is Family.UNITARY:
        return 1
    if family is Family.EVEN_ORTHOGONAL:
        return 2 ** (n - 1)
    return 2**n


def complement_weights(pattern: ZeroPattern | OddPattern, family: Family | str) -> WeightMultiset:
    """Torus weights of the entries forced to vanish (plus diagonal parts for Sp and SO(odd))."""
    family = Family.parse(family)
    if family is Family.ODD_ORTHOGONAL:
        if not isinstance(pattern, OddPattern):
            raise FamilyMismatch("SO(2n+1) needs an odd pattern")
        inner = pattern.inner()
    else:
        if not isinstance(pattern, ZeroPattern):
            raise FamilyMismatch(f"family {family.value} needs an ordinary zero pattern")
        inner = pattern
    n = inner.n
    try:
        group = GroupType(family, n)
    except ValueError as exc:
        raise FamilyMismatch(str(exc)) from None
    weights = []
    for i, j in inner.pairs:
        minus = [0] * n
        minus[i - 1], minus[j - 1] = 1, -1
        weights.append(tuple(minus))
        if family is not Family.UNITARY:
            plus = [0] * n
            plus[i - 1], plus[j - 1] = 1, 1
            weights.append(tuple(plus))
    if family in (Family.SYMPLECTIC, Family.ODD_ORTHOGONAL):
        scale = 2 if family is Family.SYMPLECTIC else 1
        for i in range(n):
            w = [0] * n
            w[i] = scale
            weights.append(tuple(w))
    return WeightMultiset(group, tuple(weights))


@dataclass(frozen=True)
class PatternCertificate:
    pattern: ZeroPattern | OddPattern
    family: Family
    lambda_I: Polynomial
    C_I: int
    C_V: int
    verdict: Verdict
    predicted_flag_count: int | None = None

    @property
    def zero_pattern(self) -> ZeroPattern:
        return self.pattern.inner() if isinstance(self.pattern, OddPattern) else self.pattern

    def to_json(self) -> dict:
        out = {
            "pattern": self.pattern.to_json(),
            "family": self.family.value,
            "lambda_I": self.lambda_I.to_text(),
            "C_I": str(self.C_I),
            "C_V": str(self.C_V),
            "verdict": self.verdict.value,
        }
        if self.predicted_flag_count is not None:
            out["flag_count"] = self.predicted_flag_count
        return out


def certify(pattern: ZeroPattern | OddPattern, family: Family | str, full_check: bool = True) -> PatternCertificate:
    """Certificate for the subspace of matrices vanishing on ``pattern``.

    With ``full_check`` the verdict goes through the general weight-multiset
    machinery (ideal membership and the characteristic number), and the
    result is cross-checked against the family scaling of ``C_I``.  Without
    it, the verdict is read off ``C_I`` directly, which is what batch
    enumeration uses.
    """
    family = Family.parse(family)
    ws = complement_weights(pattern, family)
    inner = pattern.inner() if isinstance(pattern, OddPattern) else pattern
    lam = pattern_polynomial(inner)
    c_i = monomial_inner_product(lam, _vandermonde(inner.n))
    c_v = family_multiplier(family, inner.n) * c_i
    if is_simple(inner) and simple_characteristic_number(inner) != c_i:
        raise RuntimeError("simple-pattern shortcut disagrees with inner product")
    if full_check:
        v = universality_verdict(ws)
        if v.characteristic_number != c_v:
            raise RuntimeError(f"C_V={v.characteristic_number} but family scaling gives {c_v}")
        verdict = v.verdict
    else:
        verdict = Verdict.UNIVERSAL_CERTIFIED if c_i else Verdict.INCONCLUSIVE
    flags = None
    if family is Family.UNITARY and is_bitriangular(inner):
        verdict = Verdict.UNIVERSAL_IFF
        flags = abs(c_i)
    return PatternCertificate(pattern, family, lam, c_i, c_v, verdict, flags)


# -- enumeration ------------------------------------------------------------


def _unrank_combination(rank: int, k: int) -> int:
    """Bitmask of the ``rank``-th ``k``-subset in increasing numeric order."""
    mask = 0
    for size in range(k, 0, -1):
        c = size - 1
        while math.comb(c + 1, size) <= rank:
            c += 1
        rank -= math.comb(c, size)
        mask |= 1 << c
    return mask


def _next_same_popcount(v: int) -> int:
    c = v & -v
    r = v + c
    return (((r ^ v) >> 2) // c) | r


def _masks(total_bits: int, k: int, start_rank: int, count: int) -> Iterator[int]:
    if k == 0:
        if start_rank == 0 and count:
            yield 0
        return
    v = _unrank_combination(start_rank, k)
    for _ in range(count):
        yield v
        v = _next_same_popcount(v)


def pattern_count(size: int) -> int:
    return math.comb(size * (size - 1), size * (size - 1) // 2)


def _odd_ok(pattern: ZeroPattern) -> bool:
    last = pattern.n
    s = set(pattern.pairs)
    return all(((i, last) in s) != ((last, i) in s) for i in range(1, last))


def _accept(pattern: ZeroPattern, family: Family, filt: str) -> bool:
    if family is Family.ODD_ORTHOGONAL and not _odd_ok(pattern):
        return False
    if filt == "simple":
        return is_simple(pattern)
    if filt == "bitriangular":
        return is_bitriangular(pattern)
    return True


def _lift(pattern: ZeroPattern, family: Family) -> ZeroPattern | OddPattern:
    if family is Family.ODD_ORTHOGONAL:
        return OddPattern(pattern.n - 1, pattern.pairs)
    return pattern


def _certify_chunk(args) -> list[tuple[int, PatternCertificate]]:
    size, family, filt, start, count = args
    family = Family.parse(family)
    out = []
    k = size * (size - 1) // 2
    for mask in _masks(size * (size - 1), k, start, count):
        pat = ZeroPattern.from_bitmask(size, mask)
        if _accept(pat, family, filt):
            out.append((mask, certify(_lift(pat, family), family, full_check=False)))
    return out


def _simple_masks(size: int) -> list[int]:
    index = slot_index(size)
    upper = [(i, j) for i in range(1, size + 1) for j in range(i + 1, size + 1)]
    masks = []
    for bits in range(1 << len(upper)):
        mask = 0
        for b, (i, j) in enumerate(upper):
            mask |= 1 << index[(j, i) if bits >> b & 1 else (i, j)]
        masks.append(mask)
    return sorted(masks)


def enumerate_patterns(
    n: int,
    family: Family | str = Family.UNITARY,
    filt: str = "none",
    bound: int = DEFAULT_BOUND,
    force: bool = False,
    jobs: int = 1,
    chunk: int = 4096,
) -> Iterator[tuple[int, PatternCertificate]]:
    """Yield ``(bitmask, certificate)`` for every pattern, ordered by bitmask.

    ``n`` is the rank of the group; SO(2n+1) patterns live on ``n + 1``
    block indices and only those meeting the odd-column condition are kept.
    """
    family = Family.parse(family)
    if filt not in ("none", "simple", "bitriangular"):
        raise ValueError(f"unknown filter {filt!r}")
    size = n + 1 if family is Family.ODD_ORTHOGONAL else n
    if n > bound and not force:
        projected = 2 ** (size * (size - 1) // 2) if filt == "simple" else pattern_count(size)
        raise BoundExceeded(n, bound, projected)
    if filt == "simple":
        for mask in _simple_masks(size):
            pat = ZeroPattern.from_bitmask(size, mask)
            if _accept(pat, family, filt):
                yield mask, certify(_lift(pat, family), family, full_check=False)
        return
    total = pattern_count(size)
    tasks = [(size, family.value, filt, s, min(chunk, total - s)) for s in range(0, total, chunk)]
    if jobs <= 1:
        for t in tasks:
            yield from _certify_chunk(t)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_certify_chunk, tasks):
            yield from part


def summary_csv(rows: Iterable[tuple[int, PatternCertificate]]) -> tuple[str, dict]:
    """CSV text with columns bitmask, simple, bitriangular, C_I, verdict, plus aggregate counts."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bitmask", "simple", "bitriangular", "C_I", "verdict"])
    counts = {"total": 0, "simple": 0, "bitriangular": 0, "zero_C_I": 0}
    for mask, cert in rows:
        inner = cert.zero_pattern
        simple, bitri = is_simple(inner), is_bitriangular(inner)
        writer.writerow([mask, int(simple), int(bitri), cert.C_I, cert.verdict.value])
        counts["total"] += 1
        counts["simple"] += simple
        counts["bitriangular"] += bitri
        counts["zero_C_I"] += cert.C_I == 0
    return buf.getvalue(), counts


def all_simple_patterns(n: int) -> Iterator[ZeroPattern]:
    upper = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for flips in itertools.product((False, True), repeat=len(upper)):
        yield ZeroPattern(n, tuple((j, i) if f else (i, j) for f, (i, j) in zip(flips, upper)))


CYCLIC_3 = ((1, 3), (2, 1), (3, 2))
BITRIANGULAR_4 = ((1, 3), (1, 4), (2, 4), (3, 1), (4, 1), (4, 2))

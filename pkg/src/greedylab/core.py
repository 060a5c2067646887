"""Sparse vectors, index sets, projections and greedy sets.

Indices are positive Python ints of arbitrary size (some constructions place
coordinates far beyond 2**64); coefficients are real doubles.
"""

from __future__ import annotations

import bisect
import itertools
import math
import operator
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

__all__ = [
    "SparseVector",
    "IndexSet",
    "GreedyOutcome",
    "InsufficientSupport",
    "BruteForceCapExceeded",
    "precedes",
    "project",
    "partial_sum",
    "greedy_set",
    "greedy_residual",
    "indicator",
    "sign_pattern",
    "sigma_tilde",
]


class InsufficientSupport(ValueError):
    """Raised when a greedy set of size m is requested from a shorter support."""


class BruteForceCapExceeded(ValueError):
    """Raised when an exhaustive search would exceed its configured cap."""


def _as_index(n) -> int:
    n = operator.index(n)
    if n < 1:
        raise ValueError(f"indices are positive integers, got {n}")
    return n


class IndexSet(tuple):
    """Finite set of positive integers stored as a strictly increasing tuple."""

    __slots__ = ()

    def __new__(cls, elements: Iterable[int] = ()):
        if isinstance(elements, IndexSet):
            return elements
        return super().__new__(cls, sorted({_as_index(e) for e in elements}))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IndexSet":
        """The integers lo, lo+1, ..., hi (empty when hi < lo)."""
        return cls(range(lo, hi + 1))

    def __contains__(self, n) -> bool:
        i = bisect.bisect_left(self, n)
        return i < len(self) and self[i] == n

    def count_upto(self, v: int) -> int:
        """Number of elements <= v."""
        return bisect.bisect_right(self, v)

    def __repr__(self):
        return f"IndexSet({list(self)!r})"


def precedes(A: Sequence[int], B: Sequence[int]) -> bool:
    """A < B in the set sense: max A < min B, vacuously true if either is empty."""
    if len(A) == 0 or len(B) == 0:
        return True
    return A[-1] < B[0]


class SparseVector:
    """Finitely supported real sequence indexed by positive integers.

    Zero coefficients are never stored and entries are kept sorted by index,
    so two equal vectors always iterate (and are summed by the norms) in the
    same order.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        cleaned = {}
        for n, c in entries:
            n = _as_index(n)
            c = float(c)
            if not math.isfinite(c):
                raise ValueError(f"coefficient at {n} is not finite")
            if c != 0.0:
                cleaned[n] = c
            else:
                cleaned.pop(n, None)
        self._entries = dict(sorted(cleaned.items()))

    def coefficient(self, n: int) -> float:
        return self._entries.get(n, 0.0)

    __getitem__ = coefficient

    @property
    def support(self) -> IndexSet:
        return IndexSet(self._entries)

    def items(self):
        return self._entries.items()

    def values(self):
        return self._entries.values()

    def max_index(self) -> int:
        """Largest index in the support, 0 for the zero vector."""
        return next(reversed(self._entries), 0)

    def __len__(self):
        return len(self._entries)

    def __bool__(self):
        return bool(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __add__(self, other: "SparseVector") -> "SparseVector":
        out = dict(self._entries)
        for n, c in other.items():
            out[n] = out.get(n, 0.0) + c
        return SparseVector(out)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + (-other)

    def __neg__(self) -> "SparseVector":
        return SparseVector((n, -c) for n, c in self.items())

    def __mul__(self, scalar: float) -> "SparseVector":
        scalar = float(scalar)
        return SparseVector((n, scalar * c) for n, c in self.items())

    __rmul__ = __mul__

    def __repr__(self):
        if len(self) > 8:
            return f"SparseVector(<{len(self)} entries>)"
        return f"SparseVector({self._entries!r})"


@dataclass(frozen=True)
class GreedyOutcome:
    greedy_set: IndexSet
    threshold: float
    tie_broken: bool


def project(x: SparseVector, A) -> SparseVector:
    """P_A x. ``A`` may be any container supporting ``in``."""
    return SparseVector((n, c) for n, c in x.items() if n in A)


def partial_sum(x: SparseVector, m: int) -> SparseVector:
    """S_m x, the projection onto {1, ..., m}."""
    return SparseVector((n, c) for n, c in x.items() if n <= m)


def _without(x: SparseVector, A) -> SparseVector:
    return SparseVector((n, c) for n, c in x.items() if n not in A)


def greedy_set(x: SparseVector, m: int, pad: bool = False) -> GreedyOutcome:
    """Lambda_m(x): m indices of largest coefficient modulus.

    Ties at the threshold go to the smaller index. With ``pad`` the set is
    completed by the smallest indices outside the support when m exceeds the
    support size.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    ranked = sorted(x.items(), key=lambda item: (-abs(item[1]), item[0]))
    if m > len(ranked) and not pad:
        raise InsufficientSupport(
            f"insufficient support: m={m} but |support|={len(ranked)}")
    if m == 0:
        return GreedyOutcome(IndexSet(), math.inf, False)
    chosen = [n for n, _ in ranked[:m]]
    if m <= len(ranked):
        threshold = abs(ranked[m - 1][1])
        tie = m < len(ranked) and abs(ranked[m][1]) == threshold
        return GreedyOutcome(IndexSet(chosen), threshold, tie)
    # zero-padding: every unused index has modulus 0, so the fill is a tie
    n = 1
    while len(chosen) < m:
        if n not in x._entries:
            chosen.append(n)
        n += 1
    return GreedyOutcome(IndexSet(chosen), 0.0, True)


def greedy_residual(x: SparseVector, m: int, norm, pad: bool = False) -> float:
    """||x - G_m(x)|| under ``norm``."""
    lam = greedy_set(x, m, pad=pad).greedy_set
    return norm(_without(x, lam))


def sign_pattern(A: Sequence[int], signs=None) -> dict[int, int]:
    """Normalise ``signs`` to a {index: +-1} map with domain exactly A.

    ``signs`` may be None (all plus), a mapping, or a sequence aligned with A.
    """
    A = IndexSet(A)
    if signs is None:
        return {n: 1 for n in A}
    if isinstance(signs, Mapping):
        if set(signs) != set(A):
            raise ValueError("sign pattern domain does not match the index set")
        pattern = {n: signs[n] for n in A}
    else:
        signs = list(signs)
        if len(signs) != len(A):
            raise ValueError("sign pattern domain does not match the index set")
        pattern = dict(zip(A, signs))
    for n, s in pattern.items():
        if s not in (1, -1):
            raise ValueError(f"sign at {n} must be +1 or -1, got {s}")
    return pattern


def indicator(A: Sequence[int], signs=None) -> SparseVector:
    """1_{eps, A}."""
    return SparseVector(sign_pattern(A, signs))


def sigma_tilde(x: SparseVector, m: int, norm, cap: int = 20) -> tuple[float, IndexSet]:
    """Best projection error min ||x - P_A x|| over A in supp(x), |A| <= m.

    Minimisers are compared by (value, |A|, A) so the reported set is the
    smallest, then lexicographically first, among optimal ones.
    """
    support = list(x.support)
    if len(support) > cap:
        raise BruteForceCapExceeded(
            f"brute-force cap exceeded: |support|={len(support)} > {cap}")
    best_value, best_set = norm(x), IndexSet()
    for size in range(1, min(m, len(support)) + 1):
        for A in itertools.combinations(support, size):
            value = norm(_without(x, set(A)))
            if value < best_value:
                best_value, best_set = value, IndexSet(A)
    return best_value, best_set

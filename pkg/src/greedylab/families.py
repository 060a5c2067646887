"""Gap sequences, the families of shifted partial-sum sets they generate,
hereditary closures, covers and sliding witnesses.

A gap sequence (a_n) has partial sums b_n = a_1 + ... + a_n; its family holds
the empty set and every F_{j,l} = j + {b_1, ..., b_l} with j >= 0, l >= 1.
Every rule below has closed-form b_n and an exact inverse, so all arithmetic
stays in Python ints and works for indices far past 2**64.
"""

from __future__ import annotations

import bisect
import functools
import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .core import BruteForceCapExceeded, IndexSet

__all__ = [
    "GapSequence",
    "GapSet",
    "Family",
    "PFWitness",
    "CoverResult",
    "f_set",
    "member",
    "pf_member",
    "construct_cover",
    "cover_leftover",
    "covering_search",
    "sliding_witness",
    "min_cardinality",
]

RULES = ("constant", "periodic", "identity", "fourth-power")


def iroot4(n: int) -> int:
    """floor(n ** (1/4)) for n >= 0, exact for arbitrarily large ints."""
    return math.isqrt(math.isqrt(n))


@dataclass(frozen=True)
class GapSequence:
    """A named rule for the gap sequence (a_n).

    ``values`` holds d for the constant rule and one period for the periodic
    rule; it is empty for the other rules.
    """

    rule: str
    values: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown gap rule {self.rule!r}; expected one of {RULES}")
        if self.rule == "constant" and len(self.values) != 1:
            raise ValueError("constant rule takes exactly one value")
        if self.rule == "periodic" and not self.values:
            raise ValueError("periodic rule needs a nonempty period")
        if any(int(v) != v or v < 1 for v in self.values):
            raise ValueError("gaps must be positive integers")

    @classmethod
    def constant(cls, d: int = 1) -> "GapSequence":
        return cls("constant", (int(d),))

    @classmethod
    def periodic(cls, period: Sequence[int]) -> "GapSequence":
        return cls("periodic", tuple(int(v) for v in period))

    @classmethod
    def identity(cls) -> "GapSequence":
        return cls("identity")

    @classmethod
    def fourth_power(cls) -> "GapSequence":
        """a_n = 2 when n is a fourth power, 1 otherwise."""
        return cls("fourth-power")

    # -- serialisation ---------------------------------------------------
    def to_dict(self) -> dict:
        return {"rule": self.rule, "values": list(self.values)}

    @classmethod
    def from_dict(cls, data: dict) -> "GapSequence":
        return cls(data["rule"], tuple(data.get("values", ())))

    @classmethod
    def parse(cls, text: str) -> "GapSequence":
        """Parse 'identity', 'fourth-power', 'constant:3' or 'periodic:1,2,1'."""
        name, _, arg = text.strip().partition(":")
        if name == "constant":
            return cls.constant(int(arg or 1))
        if name == "periodic":
            return cls.periodic([int(v) for v in arg.split(",") if v.strip()])
        return cls(name)

    def describe(self) -> str:
        if self.rule == "constant":
            return f"a_n = {self.values[0]}"
        if self.rule == "periodic":
            return "a_n periodic " + ",".join(map(str, self.values))
        if self.rule == "identity":
            return "a_n = n"
        return "a_n = 2 iff n is a fourth power, else 1"

    # -- the sequence ----------------------------------------------------
    @property
    def _period(self) -> tuple[int, ...]:
        return self.values

    @functools.cached_property
    def _prefix(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self._period, initial=0))

    @property
    def bound(self) -> int | None:
        """max a_n, or None for unbounded rules."""
        if self.rule in ("constant", "periodic"):
            return max(self.values)
        if self.rule == "fourth-power":
            return 2
        return None

    def a(self, n: int) -> int:
        if n < 1:
            raise ValueError("a_n is defined for n >= 1")
        if self.rule in ("constant", "periodic"):
            return self._period[(n - 1) % len(self._period)]
        if self.rule == "identity":
            return n
        return 2 if iroot4(n) ** 4 == n else 1

    def b(self, n: int) -> int:
        """Partial sum b_n (b_0 = 0)."""
        if n < 0:
            raise ValueError("b_n is defined for n >= 0")
        if self.rule in ("constant", "periodic"):
            q, r = divmod(n, len(self._period))
            return q * self._prefix[-1] + self._prefix[r]
        if self.rule == "identity":
            return n * (n + 1) // 2
        return n + iroot4(n)

    def index_floor(self, v: int) -> int:
        """Largest n >= 0 with b_n <= v."""
        if v < self.b(1):
            return 0
        if self.rule in ("constant", "periodic"):
            q, r = divmod(v, self._prefix[-1])
            return q * len(self._period) + bisect.bisect_right(self._prefix, r) - 1
        if self.rule == "identity":
            return (math.isqrt(8 * v + 1) - 1) // 2
        n = v - iroot4(v)
        while self.b(n + 1) <= v:
            n += 1
        while self.b(n) > v:
            n -= 1
        return n

    def partial_sum_index(self, v: int) -> int:
        """n >= 1 with b_n == v, or 0 when v is not a partial sum."""
        n = self.index_floor(v)
        return n if n >= 1 and self.b(n) == v else 0

    def marked_count(self, m: int) -> int:
        """|{1 <= n <= m : a_n >= 2}|."""
        if m <= 0:
            return 0
        if self.rule in ("constant", "periodic"):
            flags = [v >= 2 for v in self._period]
            q, r = divmod(m, len(flags))
            return q * sum(flags) + sum(flags[:r])
        if self.rule == "identity":
            return m - 1
        return iroot4(m)

    def marked_indices(self, limit: int) -> list[int]:
        """All n <= limit with a_n >= 2, increasing."""
        if self.rule == "fourth-power":
            return [k ** 4 for k in range(1, iroot4(limit) + 1)]
        if self.rule == "identity":
            return list(range(2, limit + 1))
        return [n for n in range(1, limit + 1) if self.a(n) >= 2]

    def gap_points(self, limit: int) -> list[int]:
        """Positive integers <= limit that are not partial sums, increasing."""
        points = []
        for n in self.marked_indices(self.index_floor(limit) + 1):
            lo, hi = self.b(n - 1) + 1, min(self.b(n) - 1, limit)
            points.extend(range(lo, hi + 1))
        return points

    def first_index_above(self, threshold: int, start: int, horizon: int) -> int | None:
        """Smallest i >= start with a_i > threshold, scanning at most ``horizon``
        indices for rules without a closed form; None if not found."""
        if threshold < 1:
            return start
        if self.rule == "identity":
            return max(start, threshold + 1)
        if self.bound is not None and threshold >= self.bound:
            return None
        if self.rule == "fourth-power":
            k = iroot4(start - 1) + 1 if start > 1 else 1
            return k ** 4
        for i in range(start, start + min(horizon, len(self._period) + 1)):
            if self.a(i) > threshold:
                return i
        return None


class GapSet(Sequence):
    """The set j + {b_1, ..., b_l}, stored implicitly."""

    __slots__ = ("gap", "j", "ell")

    def __init__(self, gap: GapSequence, j: int, ell: int):
        if j < 0 or ell < 0:
            raise ValueError("need j >= 0 and l >= 0")
        self.gap, self.j, self.ell = gap, j, ell

    def __len__(self):
        return self.ell

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(self.ell))]
        if i < 0:
            i += self.ell
        if not 0 <= i < self.ell:
            raise IndexError("GapSet index out of range")
        return self.j + self.gap.b(i + 1)

    def __iter__(self):
        return (self.j + self.gap.b(n) for n in range(1, self.ell + 1))

    def __contains__(self, v) -> bool:
        n = self.gap.partial_sum_index(v - self.j) if v > self.j else 0
        return 1 <= n <= self.ell

    def count_upto(self, v: int) -> int:
        """Number of elements <= v."""
        if v <= self.j:
            return 0
        return min(self.ell, self.gap.index_floor(v - self.j))

    def to_index_set(self) -> IndexSet:
        return IndexSet(self)

    def __eq__(self, other):
        if isinstance(other, GapSet):
            return (self.gap, self.j, self.ell) == (other.gap, other.j, other.ell)
        return NotImplemented

    def __hash__(self):
        return hash((self.gap, self.j, self.ell))

    def __repr__(self):
        return f"GapSet({self.gap.describe()!r}, j={self.j}, l={self.ell})"


@dataclass(frozen=True)
class Family:
    """A family of finite sets: gap-sequence family, initial segments, or all
    finite sets. The empty set is always a member."""

    kind: str
    gap: GapSequence | None = None

    def __post_init__(self):
        if self.kind not in ("gap", "initial", "all"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if (self.kind == "gap") != (self.gap is not None):
            raise ValueError("a gap family needs exactly one gap sequence")

    includes_empty = True

    @classmethod
    def from_gap(cls, gap: GapSequence) -> "Family":
        return cls("gap", gap)

    @classmethod
    def initial_segments(cls) -> "Family":
        return cls("initial")

    @classmethod
    def all_finite(cls) -> "Family":
        return cls("all")

    def describe(self) -> str:
        if self.kind == "gap":
            return f"F({self.gap.describe()})"
        return {"initial": "initial segments", "all": "all finite sets"}[self.kind]

    def containing_sets(self, A: Sequence[int]) -> list:
        """Minimal members F with A a subset of F, one per admissible shift.

        Any member containing A contains one of these with the same minimum,
        so disjointness and min-F side conditions can be tested on them alone.
        """
        A = IndexSet(A)
        if not A:
            return [IndexSet()]
        if self.kind == "all":
            return [A]
        if self.kind == "initial":
            return [IndexSet.interval(1, A[-1])]
        return [GapSet(self.gap, w.j, w.ell) for w in _gap_witnesses(self.gap, A)]


class PFWitness(NamedTuple):
    """S is a subset of F_{j,l}; ``positions`` lists n with s = j + b_n."""

    j: int
    ell: int
    positions: tuple[int, ...]


def f_set(gap: GapSequence, j: int, ell: int) -> GapSet:
    """F_{j,l} = j + {b_1, ..., b_l}."""
    return GapSet(gap, j, ell)


def member(F: Family, S: Sequence[int]) -> bool:
    """True iff S is itself a member of F (the empty set always is)."""
    S = IndexSet(S)
    if not S:
        return True
    if F.kind == "all":
        return True
    if F.kind == "initial":
        return S[0] == 1 and S[-1] == len(S)
    g = F.gap
    j = S[0] - g.b(1)
    return j >= 0 and all(s - j == g.b(n) for n, s in enumerate(S, start=1))


def _gap_witnesses(gap: GapSequence, S: IndexSet, anchor_limit: int = 10 ** 6):
    s0 = S[0]
    anchors = gap.index_floor(s0)
    if anchors > anchor_limit:
        raise BruteForceCapExceeded(
            f"brute-force cap exceeded: {anchors} anchors > {anchor_limit}")
    for i1 in range(1, anchors + 1):
        j = s0 - gap.b(i1)
        positions = []
        for s in S:
            n = gap.partial_sum_index(s - j)
            if not n:
                break
            positions.append(n)
        else:
            yield PFWitness(j, positions[-1], tuple(positions))


def pf_member(F: Family, S: Sequence[int], anchor_limit: int = 10 ** 6) -> PFWitness | None:
    """Witness that S lies in the hereditary closure PF, or None.

    For gap families every anchor i with b_i <= min S fixes a shift
    j = min S - b_i; S fits that shift iff each s - j is a partial sum.
    For the other kinds the witness uses j = 0 and l = max S.
    """
    S = IndexSet(S)
    if not S:
        return PFWitness(0, 0, ())
    if F.kind in ("initial", "all"):
        return PFWitness(0, S[-1], tuple(S))
    return next(_gap_witnesses(F.gap, S, anchor_limit), None)


def construct_cover(gap: GapSequence, B: Sequence[int]) -> list[GapSet]:
    """The M shifted copies of F_{0, max B_2} that leave at most M-1 points
    of B uncovered, where M bounds the gaps and B_2 = {n in B : n >= M}."""
    M = gap.bound
    if M is None:
        raise ValueError("construct_cover needs a bounded gap sequence")
    B = IndexSet(B)
    if not B:
        raise ValueError("B must be nonempty")
    B2 = [n for n in B if n >= M]
    if len(B2) <= 1:
        # any M members do: |B| <= M already
        return [GapSet(gap, i, 1) for i in range(M)]
    base = B2[0] - gap.a(1)
    return [GapSet(gap, base + i, B2[-1]) for i in range(M)]


def cover_leftover(B: Sequence[int], sets) -> int:
    """|B minus the union of ``sets``|."""
    return sum(1 for n in B if not any(n in S for S in sets))


class CoverResult(NamedTuple):
    verdict: str  # "covered" | "refuted" | "inconclusive"
    sets: tuple
    leftover: int
    evaluated: int


def _cover_candidates(F: Family, B: IndexSet):
    if F.kind == "all":
        return [(B, frozenset(B))]
    if F.kind == "initial":
        S = IndexSet.interval(1, B[-1])
        return [(S, frozenset(B))]
    g, top = F.gap, B[-1]
    seen = {}
    for j in range(0, top - g.b(1) + 1):
        S = GapSet(g, j, g.index_floor(top - j))
        covered = frozenset(n for n in B if n in S)
        if covered and covered not in seen:
            seen[covered] = S
    ranked = sorted(seen.items(), key=lambda kv: -len(kv[0]))
    return [(S, covered) for covered, S in ranked]


def covering_search(F: Family, B: Sequence[int], N: int, budget: int = 10 ** 5) -> CoverResult:
    """Look for N members of F leaving at most N points of B uncovered.

    Each shift j contributes its largest member inside [1, max B]; larger
    members add only points beyond B, so refutation over these candidates
    is exact. A greedy pass runs first, then exhaustive search over
    N-combinations until ``budget`` combinations have been tried. Repeated
    sets are allowed.
    """
    B = IndexSet(B)
    if len(B) <= N:
        return CoverResult("covered", (), len(B), 0)
    candidates = _cover_candidates(F, B)
    target = set(B)

    chosen, covered = [], set()
    for _ in range(N):
        best = max(candidates, key=lambda c: len(c[1] - covered), default=None)
        if best is None:
            break
        chosen.append(best[0])
        covered |= best[1]
    if len(target - covered) <= N:
        return CoverResult("covered", tuple(chosen), len(target - covered), 1)

    k = min(N, len(candidates))
    evaluated = 1
    for combo in itertools.combinations(candidates, k):
        if evaluated >= budget:
            return CoverResult("inconclusive", (), len(target - covered), evaluated)
        evaluated += 1
        union = set().union(*(c[1] for c in combo))
        if len(target) - len(union) <= N:
            return CoverResult("covered", tuple(c[0] for c in combo),
                               len(target) - len(union), evaluated)
    best_left = len(target - covered)
    return CoverResult("refuted", (), best_left, evaluated)


def sliding_witness(F: Family, M: int, N: int):
    """A member with at least M elements meeting {1..M} in at most N points,
    or None when the family has none."""
    if F.kind == "gap":
        return GapSet(F.gap, M, M)
    if F.kind == "all":
        return IndexSet.interval(M + 1, 2 * M + 1)
    # every initial segment with >= M elements contains {1..M}
    return IndexSet.interval(1, M) if M <= N else None


def min_cardinality(F: Family) -> int:
    """Smallest size of a nonempty member; 1 for every implemented kind."""
    return 1

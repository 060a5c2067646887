"""Parameter builders for the three counterexample norms.

Each "choose sufficiently large" step resolves to the minimal qualifying
value, so a builder is a deterministic function of its inputs. Outputs are
frozen and serialisable to JSON (large integers are stored as hex strings;
decimal conversion of ints this size is capped by the interpreter).
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import IndexSet
from .families import GapSequence

__all__ = [
    "ConstructionError",
    "BlockConstruction",
    "TailConstruction",
    "DensityConstruction",
    "build_block_construction",
    "build_tail_construction",
    "build_density_construction",
    "tail_excess",
    "save_construction",
    "load_construction",
]

DEFAULT_HORIZON = 10 ** 6


class ConstructionError(ValueError):
    pass


def _hex_list(values):
    return [hex(v) for v in values]


def _int_list(values):
    return tuple(int(v, 0) if isinstance(v, str) else int(v) for v in values)


@dataclass(frozen=True)
class BlockConstruction:
    """Indices n_0 < n_1 < ... < n_K where the gap sequence jumps, and blocks
    A_k = {c_{k,1} < ... < c_{k,k}} parked inside those jumps.

    The block seminorm weights c_{k,j} by (k(k-1)/2 + j)^(-1/q), 1/p + 1/q = 1.
    """

    gap: GapSequence
    depth: int
    n: tuple[int, ...]
    p: float = 4 / 3

    @property
    def q(self) -> float:
        return 1.0 / (1.0 - 1.0 / self.p)

    @functools.cached_property
    def sums(self) -> tuple[tuple[int, int], ...]:
        """(b(n_k), b(n_k + 1)) for k = 0..K; one big multiplication per level."""
        g = self.gap
        out = []
        for nk in self.n:
            bk = g.b(nk)
            out.append((bk, bk + g.a(nk + 1)))
        return tuple(out)

    @functools.cached_property
    def blocks(self) -> tuple[tuple[int, int], ...]:
        """(min A_k, max A_k) for k = 1..K."""
        out = []
        for k in range(1, self.depth + 1):
            lo = self.sums[k][0] + self.sums[k - 1][1] + k + 1
            out.append((lo, lo + k - 1))
        return tuple(out)

    def block(self, k: int) -> IndexSet:
        lo, hi = self.blocks[k - 1]
        return IndexSet(range(lo, hi + 1))

    def union_of_blocks(self, s: int) -> IndexSet:
        """D_s = A_1 u ... u A_s."""
        return IndexSet(i for k in range(1, s + 1) for i in self.block(k))

    @functools.cached_property
    def weights(self) -> dict[int, float]:
        exponent = -(1.0 - 1.0 / self.p)
        out = {}
        for k, (lo, _) in enumerate(self.blocks, start=1):
            for j in range(1, k + 1):
                out[lo + j - 1] = (k * (k - 1) // 2 + j) ** exponent
        return out

    @functools.cached_property
    def limit(self) -> int:
        """Largest index whose norm contribution is fixed by the built levels.

        The next block would start above b(n_K + 1) + b(n_{K+1}) + K + 1, and
        n_{K+1} > n_K.
        """
        return 2 * self.sums[-1][1] + self.depth + 1

    def hits(self, j: int, ell: int) -> list[int]:
        """|F_{j,l} n A_k| for k = 1..K, counted without listing F_{j,l}."""
        g = self.gap
        counts = []
        for lo, hi in self.blocks:
            upper = min(ell, g.index_floor(hi - j)) if hi > j else 0
            lower = min(ell, g.index_floor(lo - 1 - j)) if lo - 1 > j else 0
            counts.append(max(0, upper - lower))
        return counts

    def verify(self) -> list[str]:
        """Re-check every defining inequality; returns the violations."""
        g, n, problems = self.gap, self.n, []
        if len(n) != self.depth + 1 or n[0] != 1:
            problems.append("need n_0 = 1 and K+1 recursion indices")
        if not 1 < self.p < 2:
            problems.append("need 1 < p < 2")
        if 1 / self.p - (1 - 1 / self.p) > 0.5 + 1e-12:
            problems.append("need 1/p - 1/q <= 1/2")
        if problems:
            return problems
        for k in range(1, self.depth + 1):
            if n[k] <= n[k - 1]:
                problems.append(f"n_{k} not increasing")
            (bk, bk1), prev1 = self.sums[k], self.sums[k - 1][1]
            big = 2 * k ** 6 + prev1
            if not g.a(n[k] + 1) > big:
                problems.append(f"a_(n_{k}+1) too small")
            if not bk1 - bk > big:
                problems.append(f"gap after b_(n_{k}) too small")
            lo, hi = self.blocks[k - 1]
            if hi - lo + 1 != k:
                problems.append(f"|A_{k}| != {k}")
            if not (bk + prev1 + k < lo and hi < bk1):
                problems.append(f"A_{k} not separated")
        return problems

    def to_dict(self) -> dict:
        return {"kind": "blocks", "gap": self.gap.to_dict(), "depth": self.depth,
                "p": self.p, "n": _hex_list(self.n)}


def build_block_construction(gap: GapSequence, depth: int, p: float = 4 / 3,
                             horizon: int = DEFAULT_HORIZON) -> BlockConstruction:
    """Pick n_k minimal with a_(n_k+1) > 2k^6 + b_(n_{k-1}+1), k = 1..depth."""
    if not 1 < p < 2:
        raise ConstructionError("need 1 < p < 2")
    if 1 / p - (1 - 1 / p) > 0.5 + 1e-12:
        raise ConstructionError("need 1/p - 1/q <= 1/2")
    n = [1]
    for k in range(1, depth + 1):
        threshold = 2 * k ** 6 + gap.b(n[-1] + 1)
        i = gap.first_index_above(threshold, n[-1] + 2, horizon)
        if i is None:
            raise ConstructionError(
                "gap sequence not unbounded enough within horizon "
                f"(level {k} needs a gap above {threshold})")
        n.append(i - 1)
    return BlockConstruction(gap, depth, tuple(n), p)


def tail_excess(gap: GapSequence, n: int) -> int:
    """|F_{1,n} minus (a_1 + {1..n})|, the points of F_{1,n} past a_1 + n."""
    inside = min(n, gap.index_floor(gap.a(1) + n - 1))
    return n - inside


@dataclass(frozen=True)
class TailConstruction:
    """Exponents p_1 > ... > p_J > 1 with cut points n_j: the j-th seminorm
    is the l_{p_j} norm of the coordinates past a_1 + n_j."""

    gap: GapSequence
    p: tuple[float, ...]
    k: tuple[int, ...]
    n: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.n)

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(tail_excess(self.gap, n) for n in self.n)

    @property
    def limit(self) -> int:
        # the next cut point exceeds max F_{1,n_J} = 1 + b(n_J)
        return self.gap.a(1) + self.gap.b(self.n[-1]) + 2

    def verify(self) -> list[str]:
        problems = []
        if any(p <= 1 for p in self.p) or any(
                x <= y for x, y in zip(self.p, self.p[1:])):
            problems.append("p sequence must strictly decrease and stay above 1")
        for j in range(len(self.n)):
            if tail_excess(self.gap, self.n[j]) < self.k[j]:
                problems.append(f"m_{j + 1} < k_{j + 1}")
            if j == 0:
                if self.k[0] <= 1 or self.n[0] <= 1:
                    problems.append("need k_1 > 1 and n_1 > 1")
                continue
            kj = self.k[j]
            if not kj ** (1 / self.p[j]) > (j + 1) * kj ** (1 / self.p[j - 1]):
                problems.append(f"k_{j + 1} fails the exponent gap")
            if self.k[j] <= self.k[j - 1]:
                problems.append(f"k_{j + 1} not increasing")
            if self.n[j] <= 1 + self.gap.b(self.n[j - 1]):
                problems.append(f"n_{j + 1} <= max F_(1,n_{j})")
        return problems

    def to_dict(self) -> dict:
        return {"kind": "tails", "gap": self.gap.to_dict(), "p": list(self.p),
                "k": _hex_list(self.k), "n": _hex_list(self.n)}


def _minimal_k(j: int, p_new: float, p_old: float, floor: int) -> int:
    """Smallest integer k > floor with k^(1/p_new) > j * k^(1/p_old)."""
    def ok(k):
        return k ** (1 / p_new) > j * k ** (1 / p_old)

    exponent = 1 / p_new - 1 / p_old
    k = max(floor + 1, int(j ** (1 / exponent)) - 2)
    while not ok(k):
        k += 1
    while k - 1 > floor and ok(k - 1):
        k -= 1
    return k


def _scan_excess(gap: GapSequence, start: int, k: int, horizon: int) -> int:
    for n in range(start, start + horizon):
        if tail_excess(gap, n) >= k:
            return n
    raise ConstructionError(
        f"no n in [{start}, {start + horizon}) has |F_(1,n) - (a_1+I_n)| >= {k}; "
        "the gap sequence needs infinitely many a_n >= 2 within horizon")


def build_tail_construction(gap: GapSequence, p_seq=(2.0, 1.35, 1.02), depth: int | None = None,
                            horizon: int = DEFAULT_HORIZON) -> TailConstruction:
    """Minimal k_j, then minimal n_j, level by level; k_1 = 2."""
    p_seq = tuple(float(p) for p in p_seq)
    if any(p <= 1 for p in p_seq) or any(x <= y for x, y in zip(p_seq, p_seq[1:])):
        raise ConstructionError("p sequence must strictly decrease and stay above 1")
    depth = len(p_seq) if depth is None else depth
    if not 1 <= depth <= len(p_seq):
        raise ConstructionError("depth must be between 1 and len(p_seq)")
    ks, ns = [2], [_scan_excess(gap, 2, 2, horizon)]
    for j in range(2, depth + 1):
        k = _minimal_k(j, p_seq[j - 1], p_seq[j - 2], ks[-1])
        ks.append(k)
        ns.append(_scan_excess(gap, gap.b(ns[-1]) + 2, k, horizon))
    return TailConstruction(gap, p_seq[:depth], tuple(ks), tuple(ns))


@dataclass(frozen=True)
class DensityConstruction:
    """A bounded gap sequence whose marked terms (a_n >= 2) satisfy
    |{n <= m : a_n >= 2}| <= alpha * m^(1/4) up to ``horizon``."""

    gap: GapSequence
    alpha: float
    horizon: int

    @property
    def M(self) -> int:
        return self.gap.bound

    @property
    def M1(self) -> int:
        return max(self.M, math.ceil(self.alpha))

    def to_dict(self) -> dict:
        return {"kind": "density", "gap": self.gap.to_dict(), "alpha": self.alpha,
                "horizon": self.horizon}


def density_violation(gap: GapSequence, alpha: float, horizon: int) -> int | None:
    """First m <= horizon breaking the fourth-root density cap, else None.

    The count only rises at marked indices while the cap keeps growing, so
    those are the only places to check. Comparison is exact: count^4 vs
    alpha^4 * m with alpha as a fraction.
    """
    a4 = Fraction(alpha) ** 4
    for count, m in enumerate(gap.marked_indices(horizon), start=1):
        if count ** 4 > a4 * m:
            return m
    return None


def build_density_construction(gap: GapSequence, alpha: float = 1.0,
                               horizon: int = 10 ** 5) -> DensityConstruction:
    if gap.bound is None:
        raise ConstructionError("the density construction needs a bounded gap sequence")
    if alpha <= 0:
        raise ConstructionError("alpha must be positive")
    bad = density_violation(gap, alpha, horizon)
    if bad is not None:
        raise ConstructionError(f"density cap violated at m={bad}")
    return DensityConstruction(gap, float(alpha), horizon)


def save_construction(c, path) -> None:
    Path(path).write_text(json.dumps(c.to_dict(), indent=2, sort_keys=True) + "\n")


def load_construction(path):
    """Read a construction file and re-verify it."""
    data = json.loads(Path(path).read_text())
    kind = data.get("kind")
    gap = GapSequence.from_dict(data["gap"])
    if kind == "blocks":
        c = BlockConstruction(gap, int(data["depth"]), _int_list(data["n"]), float(data["p"]))
        problems = c.verify()
    elif kind == "tails":
        c = TailConstruction(gap, tuple(float(p) for p in data["p"]),
                             _int_list(data["k"]), _int_list(data["n"]))
        problems = c.verify()
    elif kind == "density":
        c = build_density_construction(gap, float(data["alpha"]), int(data["horizon"]))
        problems = []
    else:
        raise ConstructionError(f"unknown construction kind {kind!r}")
    if problems:
        raise ConstructionError("invalid construction file: " + "; ".join(problems))
    return c

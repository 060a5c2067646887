"""Norm oracles on finitely supported vectors.

Every oracle is an immutable callable returning the exact (double) norm of a
SparseVector. Besides the classical l_p norms there are four max-of-seminorm
constructions:

* ``kt``       max of l_2 and the sup of |sum_{n<=m} x_n / sqrt(n)|;
* ``blocks``   adds a weighted l_1 seminorm over far-separated blocks;
* ``tails``    max of l_inf and l_{p_j} norms of successively later tails;
* ``density``  l_inf, sparse-block l_2, windowed square-root sums and
               l_2 over the gaps of shifted partial-sum sets.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from .core import SparseVector

__all__ = [
    "NormOracle",
    "ConstructionDepthExceeded",
    "inv_sqrt",
    "eval_lp",
    "eval_linf",
    "eval_kt",
    "eval_block_norm",
    "block_norm_parts",
    "eval_tail_norm",
    "eval_density_norm",
    "density_branches",
    "sparse_block_branch",
    "lp_norm",
    "linf_norm",
    "kt_norm",
    "block_norm",
    "tail_norm",
    "density_norm",
    "make_norm",
]


class ConstructionDepthExceeded(ValueError):
    """The vector reaches indices whose norm depends on unbuilt levels."""


@dataclass(frozen=True)
class NormOracle:
    name: str
    evaluate: Callable[[SparseVector], float] = field(repr=False, compare=False)
    p_convexity: float = 1.0
    construction: object = field(default=None, repr=False)

    def __call__(self, x: SparseVector) -> float:
        return self.evaluate(x)


def inv_sqrt(n: int) -> float:
    """1/sqrt(n) as a double; indices past the float range underflow to 0."""
    if n.bit_length() < 1000:
        return 1.0 / math.sqrt(n)
    return math.exp(-0.5 * math.log(n))


def eval_lp(x: SparseVector, p: float) -> float:
    if p <= 0:
        raise ValueError("p must be positive")
    if not x:
        return 0.0
    return math.fsum(abs(c) ** p for c in x.values()) ** (1.0 / p)


def eval_linf(x: SparseVector) -> float:
    return max((abs(c) for c in x.values()), default=0.0)


def _l2(x: SparseVector) -> float:
    return math.sqrt(math.fsum(c * c for c in x.values()))


def _max_weighted_prefix(items) -> float:
    """sup_m |sum_{n<=m} c_n / sqrt(n)| over (n, c) pairs in increasing n."""
    best = running = 0.0
    for n, c in items:
        running += c * inv_sqrt(n)
        best = max(best, abs(running))
    return best


def eval_kt(x: SparseVector) -> float:
    return max(_l2(x), _max_weighted_prefix(x.items()))


# -- separated blocks --------------------------------------------------------

def block_norm_parts(x: SparseVector, c) -> tuple[float, float, float]:
    """(weighted block seminorm, prefix seminorm, l_2) under construction c."""
    if x.max_index() > c.limit:
        raise ConstructionDepthExceeded(
            "construction depth exceeded: support reaches past the built blocks")
    weights = c.weights
    circ = math.fsum(abs(v) * weights[n] for n, v in x.items() if n in weights)
    return circ, _max_weighted_prefix(x.items()), _l2(x)


def eval_block_norm(x: SparseVector, c) -> float:
    return max(block_norm_parts(x, c))


# -- l_p tails ---------------------------------------------------------------

def eval_tail_norm(x: SparseVector, c) -> float:
    if x.max_index() > c.limit:
        raise ConstructionDepthExceeded(
            "construction depth exceeded: support reaches an unbuilt tail")
    best = eval_linf(x)
    a1 = c.gap.a(1)
    for p, n in zip(c.p, c.n):
        tail = [abs(v) ** p for i, v in x.items() if i > a1 + n]
        if tail:
            best = max(best, math.fsum(tail) ** (1.0 / p))
    return best


# -- gap density -------------------------------------------------------------

def sparse_block_branch(x: SparseVector) -> float:
    """sup of ||P_A x||_2 over A with |A|**2 < min A.

    For a fixed size k only min A > k**2 binds, so the k largest moduli among
    indices above k**2 are optimal.
    """
    items = list(x.items())
    best = 0.0
    for k in range(1, len(items) + 1):
        eligible = [abs(v) for n, v in items if n > k * k]
        if len(eligible) < k:
            break
        top = heapq.nlargest(k, eligible)
        best = max(best, math.sqrt(math.fsum(v * v for v in top)))
    return best


def _window_branch(x: SparseVector) -> float:
    # window m covers m*m + 1 .. m*m + m; windows are pairwise disjoint
    windows = defaultdict(list)
    for s, v in x.items():
        m = math.isqrt(s - 1)
        if m >= 1 and s - m * m <= m:
            windows[m].append((s - m * m, v))
    return max((_max_weighted_prefix(pairs) for pairs in windows.values()), default=0.0)


def _gap_branch(x: SparseVector, gap) -> float:
    # the seminorm for (j, l) grows with l and saturates at j + G, G the
    # non-partial-sums; so the sup is max_j ||x restricted to j + G||_2
    if not x:
        return 0.0
    G = gap.gap_points(x.max_index())
    if not G:
        return 0.0
    sums = defaultdict(list)
    for s, v in x.items():
        for g in G:
            if g > s:
                break
            sums[s - g].append(v * v)
    return math.sqrt(max(math.fsum(vals) for vals in sums.values())) if sums else 0.0


def density_branches(x: SparseVector, c) -> tuple[float, float, float, float]:
    return (eval_linf(x), sparse_block_branch(x), _window_branch(x), _gap_branch(x, c.gap))


def eval_density_norm(x: SparseVector, c) -> float:
    return max(density_branches(x, c))


# -- factories -----------------------------------------------------------------

def lp_norm(p: float) -> NormOracle:
    p = float(p)
    name = "linf" if math.isinf(p) else f"l{p:g}"
    if math.isinf(p):
        return linf_norm()
    return NormOracle(name, lambda x: eval_lp(x, p), p_convexity=min(1.0, p))


def linf_norm() -> NormOracle:
    return NormOracle("linf", eval_linf)


def kt_norm() -> NormOracle:
    return NormOracle("kt", eval_kt)


def block_norm(c) -> NormOracle:
    return NormOracle("blocks", lambda x: eval_block_norm(x, c), construction=c)


def tail_norm(c) -> NormOracle:
    return NormOracle("tails", lambda x: eval_tail_norm(x, c), construction=c)


def density_norm(c) -> NormOracle:
    return NormOracle("density", lambda x: eval_density_norm(x, c), construction=c)


def make_norm(name: str, construction=None) -> NormOracle:
    """Resolve 'l1', 'l2', 'l0.5', 'linf', 'kt', or a construction-backed
    name ('blocks', 'tails', 'density') given the matching construction."""
    if name == "linf":
        return linf_norm()
    if name == "kt":
        return kt_norm()
    if name.startswith("l"):
        try:
            return lp_norm(float(name[1:]))
        except ValueError:
            pass
    factories = {"blocks": block_norm, "tails": tail_norm, "density": density_norm}
    if name in factories:
        if construction is None:
            raise ValueError(f"norm {name!r} needs a construction")
        return factories[name](construction)
    raise ValueError(f"unknown norm {name!r}")

"""Witness-carrying lower bounds for greedy-type constants.

All estimators return a ConstantEstimate whose witness can be replayed
through ``replay`` to reproduce the value. Nothing here certifies an upper
bound: the value is the largest ratio seen.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .core import (
    IndexSet,
    SparseVector,
    greedy_set,
    indicator,
    precedes,
)
from .families import Family, pf_member

__all__ = [
    "CONSTRAINTS",
    "ConstantEstimate",
    "RatioCheck",
    "ratio",
    "democracy_ratio",
    "admissible_pair",
    "best_signs",
    "estimate_superdemocracy",
    "estimate_suppression_qg",
    "check_f_almost_greedy_ratio",
    "check_f_spg_ratio",
    "check_f_mpg_ratio",
    "spg_admissible",
    "mpg_admissible",
    "truncation_qg_check",
    "emptyset_ag_chain",
    "emptyset_spg_chain",
    "emptyset_mpg_chain",
    "replay",
]

CONSTRAINTS = (
    "none",
    "disjoint",
    "conservative",
    "strong-disjoint",
    "strong-disjoint-conservative",
    "minimum-disjoint-conservative",
)
_NEEDS_FAMILY = {"strong-disjoint", "strong-disjoint-conservative", "minimum-disjoint-conservative"}


def ratio(num: float, den: float) -> float:
    """num/den with 0/0 = 1 and x/0 = inf."""
    if den == 0:
        return 1.0 if num == 0 else math.inf
    return num / den


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    witness: dict | None
    mode: str
    budget_used: int
    flags: tuple = field(default=())


class RatioCheck(NamedTuple):
    ratio: float
    admissible: bool
    greedy_set: IndexSet


def democracy_ratio(A, eps, B, delta, norm) -> float:
    """||1_{eps,A}|| / ||1_{delta,B}||, requiring |A| <= |B|."""
    A, B = IndexSet(A), IndexSet(B)
    if len(A) > len(B):
        raise ValueError("democracy ratio needs |A| <= |B|")
    return ratio(norm(indicator(A, eps)), norm(indicator(B, delta)))


def admissible_pair(A, B, constraint: str, family: Family | None = None) -> bool:
    """Side conditions of the (super)democracy-type constants.

    For the plain kinds a family, when given, restricts A to its hereditary
    closure. For the strong kinds it supplies the member F containing A.
    """
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    A, B = IndexSet(A), IndexSet(B)
    if len(A) > len(B):
        return False
    if constraint in _NEEDS_FAMILY:
        if family is None:
            raise ValueError(f"constraint {constraint!r} needs a family")
        if not A:
            return True
        if constraint == "strong-disjoint-conservative" and not precedes(A, B):
            return False
        for F in family.containing_sets(A):
            if any(b in F for b in B):
                continue
            if constraint == "minimum-disjoint-conservative" and B and not F[0] < B[0]:
                continue
            return True
        return False
    if family is not None and pf_member(family, A) is None:
        return False
    if constraint == "disjoint":
        return not set(A) & set(B)
    if constraint == "conservative":
        return precedes(A, B)
    return True


def best_signs(S: IndexSet, norm, maximize: bool, rng: random.Random | None = None,
               restarts: int = 3, max_passes: int = 20) -> tuple[float, tuple[int, ...]]:
    """Coordinate ascent (or descent) on signs for ||1_{eps,S}||.

    Starts from all plus, then from ``restarts - 1`` random patterns. Each
    pass flips single coordinates while that strictly improves.
    """
    S = IndexSet(S)
    if not S:
        return 0.0, ()
    better = (lambda a, b: a > b) if maximize else (lambda a, b: a < b)
    starts = [[1] * len(S)]
    if rng is not None:
        starts += [[rng.choice((1, -1)) for _ in S] for _ in range(restarts - 1)]
    best_val, best_eps = None, None
    for eps in starts:
        val = norm(indicator(S, eps))
        for _ in range(max_passes):
            improved = False
            for i in range(len(S)):
                eps[i] = -eps[i]
                trial = norm(indicator(S, eps))
                if better(trial, val):
                    val, improved = trial, True
                else:
                    eps[i] = -eps[i]
            if not improved:
                break
        if best_val is None or better(val, best_val):
            best_val, best_eps = val, tuple(eps)
    return best_val, best_eps


def _all_signs(S: IndexSet):
    return itertools.product((1, -1), repeat=len(S))


def _extreme_sign_norm(S, norm, maximize, signed):
    # exact: every sign pattern
    if not signed or not S:
        return norm(indicator(S)), (1,) * len(S)
    pick = max if maximize else min
    vals = [(norm(indicator(S, e)), e) for e in _all_signs(S)]
    target = pick(v for v, _ in vals)
    return next((v, e) for v, e in vals if v == target)


def _democracy_witness(A, eps, B, delta, value, extra=None):
    w = {"kind": "democracy", "A": list(A), "eps": list(eps), "B": list(B),
         "delta": list(delta), "value": value}
    if extra:
        w.update(extra)
    return w


def estimate_superdemocracy(norm, size_cap: int, constraint: str = "none", family: Family | None = None,
                            mode: str = "random", signed: bool = True, seed: int = 0,
                            budget: int = 1000, max_index: int | None = None,
                            candidates=None) -> ConstantEstimate:
    """Lower bound for sup ||1_{eps,A}|| / ||1_{delta,B}|| over admissible pairs.

    mode ``exact`` enumerates every A, B inside {1..max_index} with
    |A| <= |B| <= size_cap (and every sign pattern when ``signed``);
    ``structured`` scores the given candidate (A, B) pairs;
    ``random`` draws ``budget`` seeded pairs. The last two search signs by
    coordinate ascent.
    """
    if constraint not in CONSTRAINTS:
        raise ValueError(f"unknown constraint {constraint!r}")
    if constraint in _NEEDS_FAMILY and family is None:
        raise ValueError(f"constraint {constraint!r} needs a family")
    rng = random.Random(seed)
    best, used = 0.0, 0
    witness = None
    flags = set()

    if mode == "exact":
        if max_index is None:
            raise ValueError("exact mode needs max_index")
        universe = range(1, max_index + 1)
        sets = [IndexSet(c) for k in range(0, size_cap + 1)
                for c in itertools.combinations(universe, k)]
        hi = {A: _extreme_sign_norm(A, norm, True, signed) for A in sets}
        lo = {B: _extreme_sign_norm(B, norm, False, signed) for B in sets if B}
        for B in lo:
            for A in sets:
                if not admissible_pair(A, B, constraint, family):
                    continue
                used += 1
                r = ratio(hi[A][0], lo[B][0])
                if witness is None or r > best:
                    best = r
                    witness = _democracy_witness(A, hi[A][1], B, lo[B][1], r)
    elif mode in ("structured", "random"):
        if mode == "structured":
            pairs = list(candidates or ())
        else:
            if max_index is None:
                raise ValueError("random mode needs max_index")
            pairs = []
            for _ in range(budget):
                nb = rng.randint(1, min(size_cap, max_index))
                na = rng.randint(1, nb)
                pairs.append((rng.sample(range(1, max_index + 1), na),
                              rng.sample(range(1, max_index + 1), nb)))
        for A, B in pairs:
            A, B = IndexSet(A), IndexSet(B)
            if not B or not admissible_pair(A, B, constraint, family):
                continue
            used += 1
            if signed:
                num, eps = best_signs(A, norm, True, rng)
                den, delta = best_signs(B, norm, False, rng)
            else:
                num, eps = norm(indicator(A)), (1,) * len(A)
                den, delta = norm(indicator(B)), (1,) * len(B)
            r = ratio(num, den)
            if witness is None or r > best:
                best = r
                witness = _democracy_witness(A, eps, B, delta, r)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if math.isinf(best):
        flags.add("zero-denominator")
    return ConstantEstimate(best, witness, mode, used, tuple(sorted(flags)))


def _structured_vectors(dim: int, rng: random.Random, budget: int):
    yield SparseVector({n: 1.0 for n in range(1, dim + 1)})
    yield SparseVector({n: 1.0 / n for n in range(1, dim + 1)})
    yield SparseVector({n: n ** -0.5 for n in range(1, dim + 1)})
    yield SparseVector({n: (-1) ** n * n ** -0.5 for n in range(1, dim + 1)})
    yield SparseVector({n: (-1) ** n / n for n in range(1, dim + 1)})
    for _ in range(budget):
        k = rng.randint(1, dim)
        support = rng.sample(range(1, dim + 1), k)
        kind = rng.random()
        if kind < 0.3:
            yield SparseVector({n: rng.choice((1.0, -1.0)) for n in support})
        elif kind < 0.6:
            yield SparseVector({n: rng.choice((1.0, -1.0)) * rng.choice((1.0, 0.5, 0.25)) for n in support})
        else:
            yield SparseVector({n: rng.gauss(0.0, 1.0) for n in support})


def estimate_suppression_qg(norm, dim: int = 32, budget: int = 200, seed: int = 0,
                            vectors=None) -> ConstantEstimate:
    """max over sampled x and every m >= 0 of ||x - G_m(x)|| / ||x||.

    m = 0 is included (G_0 = 0), so the estimate is at least 1.
    """
    rng = random.Random(seed)
    source = vectors if vectors is not None else _structured_vectors(dim, rng, budget)
    best, witness, used = 0.0, None, 0
    for x in source:
        total = norm(x)
        ranked = [n for n, _ in sorted(x.items(), key=lambda it: (-abs(it[1]), it[0]))]
        for m in range(0, len(ranked) + 1):
            used += 1
            residual = SparseVector((n, c) for n, c in x.items() if n not in set(ranked[:m]))
            r = ratio(norm(residual), total)
            if witness is None or r > best:
                best = r
                witness = {"kind": "suppression", "x": dict(x.items()), "m": m, "value": r}
    return ConstantEstimate(best, witness, "structured" if vectors is None else "given", used)


def _check_size(F, m):
    if len(F) > m:
        raise ValueError("|F| must not exceed m")


def _greedy(x, m):
    return greedy_set(x, m, pad=True).greedy_set


def check_f_almost_greedy_ratio(x: SparseVector, m: int, F, norm) -> float:
    """||x - G_m(x)|| / ||x - P_F(x)||, |F| <= m."""
    F = IndexSet(F)
    _check_size(F, m)
    lam = set(_greedy(x, m))
    num = norm(SparseVector((n, c) for n, c in x.items() if n not in lam))
    den = norm(SparseVector((n, c) for n, c in x.items() if n not in F))
    return ratio(num, den)


def spg_admissible(F, lam) -> bool:
    """F minus Lambda lies entirely before Lambda minus F."""
    F, lam = IndexSet(F), IndexSet(lam)
    return precedes(IndexSet(set(F) - set(lam)), IndexSet(set(lam) - set(F)))


def mpg_admissible(F, lam) -> bool:
    """F is empty or min F <= every element of Lambda."""
    F, lam = IndexSet(F), IndexSet(lam)
    return not F or not lam or F[0] <= lam[0]


def check_f_spg_ratio(x: SparseVector, m: int, F, norm) -> RatioCheck:
    F = IndexSet(F)
    _check_size(F, m)
    lam = _greedy(x, m)
    return RatioCheck(check_f_almost_greedy_ratio(x, m, F, norm), spg_admissible(F, lam), lam)


def check_f_mpg_ratio(x: SparseVector, m: int, F, norm) -> RatioCheck:
    F = IndexSet(F)
    _check_size(F, m)
    lam = _greedy(x, m)
    return RatioCheck(check_f_almost_greedy_ratio(x, m, F, norm), mpg_admissible(F, lam), lam)


def truncation_qg_check(x: SparseVector, m: int, norm) -> float:
    """min_{Lambda_m} |x_n| * ||1_{sign(x), Lambda_m}|| / ||x||."""
    outcome = greedy_set(x, m)
    lam = outcome.greedy_set
    signs = [1 if x[n] > 0 else -1 for n in lam]
    return ratio(outcome.threshold * norm(indicator(lam, signs)), norm(x))


# -- empty-set relations --------------------------------------------------------
#
# Each chain replays the argument that adding the empty set to a family costs
# only a bounded factor. Given x, m and a smallest member G, it returns the
# left side ||x - G_m(x)|| and the bound obtained from the derived instance,
# so the inequality can be checked sample by sample. Unit vectors have norm 1
# and |x_n| <= ||x|| for every implemented oracle.

class ChainResult(NamedTuple):
    lhs: float
    bound: float
    derived_ratio: float
    derived_admissible: bool


def _without(x, A):
    A = set(A)
    return SparseVector((n, c) for n, c in x.items() if n not in A)


def emptyset_ag_chain(x: SparseVector, m: int, G, norm, p: float = 1.0) -> ChainResult:
    G = IndexSet(G)
    lhs = norm(_without(x, _greedy(x, m)))
    scale = (1 + len(G)) ** (1 / p) * norm(x)
    if m <= len(G):
        return ChainResult(lhs, scale, math.nan, True)
    r = check_f_almost_greedy_ratio(x, m, G, norm)
    return ChainResult(lhs, r * scale, r, True)


def emptyset_spg_chain(x: SparseVector, m: int, G, norm, p: float = 1.0) -> ChainResult:
    G = IndexSet(G)
    lam = _greedy(x, m)
    lhs = norm(_without(x, lam))
    top = G[-1]
    if m <= 2 * top:
        return ChainResult(lhs, (1 + 2 * top) ** (1 / p) * norm(x), math.nan, True)
    lam1 = [n for n in lam if n <= top]
    lam2 = IndexSet(n for n in lam if n > top)
    y = _without(x, lam1)
    r = ratio(norm(_without(y, lam2)), norm(_without(y, G)))
    bound = r * ((1 + len(G)) * (1 + top)) ** (1 / p) * norm(x)
    return ChainResult(lhs, bound, r, spg_admissible(G, lam2))


def emptyset_mpg_chain(x: SparseVector, m: int, G, norm, p: float = 1.0) -> ChainResult:
    G = IndexSet(G)
    lam = _greedy(x, m)
    lhs = norm(_without(x, lam))
    if m <= len(G):
        return ChainResult(lhs, (1 + len(G)) ** (1 / p) * norm(x), math.nan, True)
    s = G[0]
    y = SparseVector((n, c) for n, c in x.items() if n >= s)
    kept = [n for n in lam if n >= s]
    # extend to a greedy set of y of size m inside [s, inf)
    rest = sorted(((n, c) for n, c in y.items() if n not in set(kept)),
                  key=lambda it: (-abs(it[1]), it[0]))
    M = kept + [n for n, _ in rest[: m - len(kept)]]
    n = s
    while len(M) < m:
        if n not in y and n not in M:
            M.append(n)
        n += 1
    M = IndexSet(M)
    r = ratio(norm(_without(y, M)), norm(_without(y, G)))
    inner = r ** p * (1 + len(G)) * s if not math.isinf(r) else math.inf
    bound = (inner + 2 * (s - 1)) ** (1 / p) * norm(x)
    return ChainResult(lhs, bound, r, mpg_admissible(G, M))


def replay(witness: dict, norm) -> float:
    """Recompute the ratio a witness records."""
    kind = witness["kind"]
    if kind == "democracy":
        return democracy_ratio(witness["A"], witness["eps"], witness["B"], witness["delta"], norm)
    if kind == "suppression":
        x = SparseVector(witness["x"])
        return ratio(norm(_without(x, _greedy(x, witness["m"]))), norm(x))
    raise ValueError(f"unknown witness kind {kind!r}")

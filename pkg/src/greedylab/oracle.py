"""Slow reference implementations used to validate the fast paths.

Each function enumerates its search space outright and refuses inputs above
a hard cap instead of truncating.
"""

from __future__ import annotations

import itertools
import math

from .core import BruteForceCapExceeded, IndexSet, SparseVector, indicator

__all__ = [
    "bf_sigma_tilde",
    "bf_partial_sums",
    "bf_pf_member",
    "bf_branch2",
    "bf_gap_branch",
    "bf_superdemocracy",
]


def _cap(size, cap, what):
    if size > cap:
        raise BruteForceCapExceeded(f"brute-force cap exceeded: {what} {size} > {cap}")


def bf_sigma_tilde(x: SparseVector, m: int, norm, cap: int = 20) -> tuple[float, IndexSet]:
    """Minimum of ||x - P_A x|| over A in supp(x), |A| <= m, by bitmask.

    Ties resolve to the smallest |A|, then the lexicographically first A.
    """
    support = sorted(x)
    _cap(len(support), cap, "|support|")
    best = None
    for mask in range(1 << len(support)):
        chosen = [support[i] for i in range(len(support)) if mask >> i & 1]
        if len(chosen) > m:
            continue
        residual = SparseVector({n: x[n] for n in support if n not in chosen})
        key = (norm(residual), len(chosen), chosen)
        if best is None or key < best:
            best = key
    return best[0], IndexSet(best[2])


def bf_partial_sums(gap, limit: int) -> list[int]:
    """b_1 < b_2 < ... up to ``limit``, summing a_n term by term."""
    out, total, n = [], 0, 1
    while True:
        total += gap.a(n)
        if total > limit:
            return out
        out.append(total)
        n += 1


def bf_pf_member(gap, S, cap: int = 200) -> bool:
    """Is S inside some j + {b_1..b_l}? Tries every j <= max S against the
    largest l with b_l <= 2 max S (the sets grow with l)."""
    S = IndexSet(S)
    if not S:
        return True
    _cap(S[-1], cap, "max S")
    sums = set(bf_partial_sums(gap, 2 * S[-1]))
    return any(all(s - j in sums for s in S) for j in range(0, S[-1] + 1))


def bf_branch2(x: SparseVector, cap: int = 12) -> float:
    """sup ||P_A x||_2 over nonempty A in supp(x) with |A|^2 < min A."""
    support = sorted(x)
    _cap(len(support), cap, "|support|")
    best = 0.0
    for k in range(1, len(support) + 1):
        for A in itertools.combinations(support, k):
            if k * k < A[0]:
                best = max(best, math.sqrt(math.fsum(x[n] ** 2 for n in A)))
    return best


def bf_gap_branch(x: SparseVector, gap, cap: int = 400) -> float:
    """sup over (j, l) of the l_2 norm of x on {j+1..j+b_l} minus F_{j,l},
    with l grown until j + b_l reaches max supp(x)."""
    if not x:
        return 0.0
    top = x.max_index()
    _cap(top, cap, "max index")
    sums = bf_partial_sums(gap, top + gap.a(1) + 2 * top)
    best = 0.0
    for j in range(0, top):
        for ell in range(1, len(sums) + 1):
            F = {j + b for b in sums[:ell]}
            window = [n for n in range(j + 1, j + sums[ell - 1] + 1) if n not in F]
            best = max(best, math.sqrt(math.fsum(x[n] ** 2 for n in window)))
            if j + sums[ell - 1] >= top:
                break
    return best


def _members_containing(kind, gap, A, limit):
    """Every family member containing A, listed up to elements <= limit."""
    if kind == "all":
        yield set(A)
        return
    if kind == "initial":
        yield set(range(1, A[-1] + 1))
        return
    sums = bf_partial_sums(gap, limit)
    for j in range(0, A[-1]):
        for ell in range(1, len(sums) + 1):
            F = {j + b for b in sums[:ell]}
            if all(a in F for a in A):
                yield F
                break


def _bf_admissible(A, B, constraint, family):
    if len(A) > len(B):
        return False
    if constraint in ("none", "disjoint", "conservative"):
        if family is not None and A:
            if not any(True for _ in _members_containing(family.kind, family.gap, A, 2 * A[-1] + 2)):
                return False
        if constraint == "disjoint":
            return not set(A) & set(B)
        if constraint == "conservative":
            return not A or not B or max(A) < min(B)
        return True
    if not A:
        return True
    if constraint == "strong-disjoint-conservative" and B and not max(A) < min(B):
        return False
    limit = 2 * max(A[-1], B[-1] if B else 0) + 2
    for F in _members_containing(family.kind, family.gap, A, limit):
        if F & set(B):
            continue
        if constraint == "minimum-disjoint-conservative" and B and not min(F) < min(B):
            continue
        return True
    return False


def bf_superdemocracy(norm, size_cap: int, max_index: int, constraint: str = "none",
                      family=None, signed: bool = True, cap: int = 12) -> float:
    """sup over every admissible A, B in {1..max_index} and every sign
    pattern of ||1_{eps,A}|| / ||1_{delta,B}||."""
    _cap(max_index, cap, "max index")
    universe = range(1, max_index + 1)
    sets = [tuple(c) for k in range(size_cap + 1) for c in itertools.combinations(universe, k)]
    best = 0.0
    for B in sets:
        if not B:
            continue
        for A in sets:
            if not _bf_admissible(A, B, constraint, family):
                continue
            eps_all = itertools.product((1, -1), repeat=len(A)) if signed else [(1,) * len(A)]
            for eps in eps_all:
                num = norm(indicator(A, eps))
                delta_all = itertools.product((1, -1), repeat=len(B)) if signed else [(1,) * len(B)]
                for delta in delta_all:
                    den = norm(indicator(B, delta))
                    r = (1.0 if num == 0 else math.inf) if den == 0 else num / den
                    best = max(best, r)
    return best

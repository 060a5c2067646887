"""Named experiments. Each one samples instances with a seeded RNG, measures
the quantities a bound speaks about, and records pass/fail checks."""

from __future__ import annotations

import itertools
import math
import random
from typing import Callable

from . import constants as K
from .config import ConfigError, ExperimentConfig
from .constructions import (
    BlockConstruction,
    ConstructionError,
    DensityConstruction,
    TailConstruction,
    build_block_construction,
    build_density_construction,
    build_tail_construction,
    load_construction,
    tail_excess,
)
from .core import (
    IndexSet,
    SparseVector,
    greedy_residual,
    greedy_set,
    indicator,
    sigma_tilde,
)
from .families import (
    Family,
    GapSequence,
    construct_cover,
    cover_leftover,
    f_set,
    pf_member,
    sliding_witness,
)
from .norms import (
    block_norm,
    block_norm_parts,
    density_branches,
    density_norm,
    make_norm,
    sparse_block_branch,
    tail_norm,
)
from .oracle import (
    bf_branch2,
    bf_gap_branch,
    bf_pf_member,
    bf_sigma_tilde,
    bf_superdemocracy,
)
from .report import Report, make_check

REL_TOL = 1e-9


class _Entry:
    def __init__(self, func, columns, defaults):
        self.func, self.columns, self.defaults = func, tuple(columns), defaults


EXPERIMENTS: dict[str, _Entry] = {}

USES_CONSTRUCTION = {
    "pf-closure-audit", "thm43-democracy-window", "thm43-nondemocracy",
    "thm43-conditionality", "thm43-claim-NA", "lemma58-blowup", "lemma510-bounds",
}


def _register(name: str, columns, **defaults):
    def wrap(func: Callable):
        EXPERIMENTS[name] = _Entry(func, columns, {"seed": 0, **defaults})
        return func
    return wrap


def resolve(cfg: ExperimentConfig) -> dict:
    """Experiment defaults overlaid with the explicitly configured values."""
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg.experiment!r}; "
                          f"choose from {', '.join(sorted(EXPERIMENTS))}")
    entry = EXPERIMENTS[cfg.experiment]
    settings = dict(entry.defaults)
    settings.update(cfg.explicit())
    settings.pop("out", None)
    if settings.get("construction") and cfg.experiment not in USES_CONSTRUCTION:
        raise ConfigError(f"experiment {cfg.experiment!r} does not take a construction file")
    return settings


def run_experiment(cfg: ExperimentConfig, construction=None) -> Report:
    settings = resolve(cfg)
    entry = EXPERIMENTS[cfg.experiment]
    report = Report(cfg.experiment, {k: _echo(v) for k, v in sorted(settings.items())}, entry.columns)
    entry.func(settings, report, construction)
    return report


def _echo(value):
    return list(value) if isinstance(value, tuple) else value


# -- helpers -------------------------------------------------------------------

def _gap(settings) -> GapSequence:
    try:
        return GapSequence.parse(settings["gap"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad gap rule {settings.get('gap')!r}: {exc}") from None


def _construction(settings, given, kind, build):
    if given is None and settings.get("construction"):
        try:
            given = load_construction(settings["construction"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load construction: {exc}") from None
    if given is not None:
        if not isinstance(given, kind):
            raise ConfigError(f"experiment needs a {kind.__name__}, got {type(given).__name__}")
        return given
    try:
        return build()
    except ConstructionError as exc:
        raise ConfigError(str(exc)) from None


def _blocks(settings, given, depth=None):
    depth = settings["depth"] if depth is None else depth
    return _construction(settings, given, BlockConstruction,
                         lambda: build_block_construction(_gap(settings), depth,
                                                          horizon=settings.get("horizon") or 10 ** 6))


def _signs(rng, n):
    return [rng.choice((1, -1)) for _ in range(n)]


def _within(value, lo, hi):
    return lo * (1 - REL_TOL) <= value <= hi * (1 + REL_TOL)


def _pf_sample(rng, c: BlockConstruction, size_cap: int, targeted: bool):
    """A subset of some F_{j,l}, with its witness shift.

    Targeted samples place one element inside a random block and pick the
    remaining positions near it, so blocks are actually touched.
    """
    g = c.gap
    if targeted and c.depth:
        k = rng.randint(1, c.depth)
        lo, hi = c.blocks[k - 1]
        target = rng.randint(lo, hi)
        i0 = min(rng.randint(1, 400), g.index_floor(target))
        j = target - g.b(i0)
        ell = i0 + rng.randint(0, 400)
        others = rng.sample(range(1, ell + 1), min(ell, rng.randint(0, size_cap - 1)))
        positions = sorted(set(others) | {i0})
    else:
        j = rng.choice((0, rng.randint(0, 5), rng.randint(0, 60)))
        ell = rng.randint(1, 80)
        size = min(ell, rng.randint(1, size_cap))
        if rng.random() < 0.3:
            positions = range(1, size + 1)
        else:
            positions = sorted(rng.sample(range(1, ell + 1), size))
    return IndexSet(j + g.b(p) for p in positions), j, ell


# -- covering and sliding ------------------------------------------------------

@_register("covering-audit", ("sample", "gap", "M", "B_size", "leftover", "bound", "pass"),
           budget=1000, dim=500, size_cap=5, gap=None)
def covering_audit(s, report: Report, _):
    rng = random.Random(s["seed"])
    fixed = _gap(s) if s.get("gap") else None
    if fixed is not None and fixed.bound is None:
        raise ConfigError("covering-audit needs a bounded gap sequence")
    worst = -math.inf
    for i in range(s["budget"]):
        if fixed is None:
            M = rng.randint(1, s["size_cap"])
            period = [rng.randint(1, M) for _ in range(rng.randint(1, 4))]
            period[rng.randrange(len(period))] = M
            g = GapSequence.periodic(period)
        else:
            g = fixed
        M = g.bound
        while True:
            B = IndexSet(rng.sample(range(1, s["dim"] + 1), rng.randint(2, 40)))
            if sum(1 for n in B if n >= M) >= 2:
                break
        left = cover_leftover(B, construct_cover(g, B))
        worst = max(worst, left - (M - 1))
        report.rows.append({"sample": i, "gap": g.describe(), "M": M, "B_size": len(B),
                            "leftover": left, "bound": M - 1, "pass": left <= M - 1})
    report.add(make_check("cover-leftover-excess", worst, 0, "<=",
                          "M shifted partial-sum sets leave at most M-1 points of B"))


@_register("sliding-audit", ("M", "witness_min", "size", "hits", "pass"), dim=10000, gap="identity")
def sliding_audit(s, report: Report, _):
    fam = Family.from_gap(_gap(s))
    worst_hits, worst_size = 0, math.inf
    for M in range(1, s["dim"] + 1):
        w = sliding_witness(fam, M, 0)
        hits = w.count_upto(M)
        worst_hits = max(worst_hits, hits)
        worst_size = min(worst_size, len(w) - M)
        report.rows.append({"M": M, "witness_min": w[0], "size": len(w), "hits": hits,
                            "pass": hits == 0 and len(w) >= M})
    report.add(make_check("gap-witness-hits", worst_hits, 0, "<=",
                          "F_{M,M} has no element in {1..M}: the gap family is 0-sliding"))
    report.add(make_check("gap-witness-size-excess", worst_size, 0, ">=",
                          "sliding witness has at least M elements"))
    w_all = sliding_witness(Family.all_finite(), 7, 0)
    report.add(make_check("all-sets-witness-hits", w_all.count_upto(7), 0, "<=",
                          "all finite sets are 0-sliding"))
    none_found = sliding_witness(Family.initial_segments(), 5, 3) is None
    report.add(make_check("initial-segments-not-3-sliding-at-5", int(none_found), 1, "==",
                          "every initial segment of size >= 5 contains {1..5}"))


# -- hereditary closure --------------------------------------------------------

@_register("pf-closure-audit", ("norm", "pairs", "estimate", "cap", "pass"),
           gap="identity", depth=4, budget=200, size_cap=24)
def pf_closure_audit(s, report: Report, given):
    c = _blocks(s, given)
    rng = random.Random(s["seed"])
    fam = Family.from_gap(c.gap)
    unrecognised, checked = 0, 0
    # low members against far sets of the same size
    pairs = [(list(f_set(c.gap, 0, r)), list(range(1000, 1000 + r))) for r in (2, 4, 8)]
    for i in range(s["budget"]):
        A, _, _ = _pf_sample(rng, c, s["size_cap"], targeted=i % 2 == 0)
        if A[-1] <= 400:
            checked += 1
            unrecognised += pf_member(fam, A) is None
        top = max(4 * len(A), 200)
        B = rng.sample(range(1, top + 1), len(A) + rng.randint(0, 8))
        pairs.append((A, B))
    report.add(make_check("pf-samples-unrecognised", unrecognised, 0, "<=",
                          "subsets of family members lie in the hereditary closure"))
    caps = {"blocks": 4.0, "kt": 2.0, "l2": 1.0}
    for name, cap in caps.items():
        norm = block_norm(c) if name == "blocks" else make_norm(name)
        est = K.estimate_superdemocracy(norm, s["size_cap"], mode="structured",
                                        candidates=pairs, seed=s["seed"])
        report.rows.append({"norm": name, "pairs": est.budget_used, "estimate": est.value,
                            "cap": cap, "pass": est.value <= cap * (1 + REL_TOL)})
        report.witnesses.append({"norm": name, "witness": est.witness})
        report.add(make_check(f"pf-superdemocracy-{name}", est.value, cap, "<=",
                              "closure-superdemocracy: ||1_{eps,A}|| <= C ||1_{delta,B}|| for A in PF",
                              tol=cap * REL_TOL))


# -- KT window -----------------------------------------------------------------

@_register("kt-democracy", ("sample", "size", "max_index", "ratio", "lower", "upper", "pass"),
           budget=200, dim=4096, size_cap=256)
def kt_democracy(s, report: Report, _):
    rng = random.Random(s["seed"])
    norm = make_norm("kt")
    cap = min(s["size_cap"], s["dim"])
    samples = [list(range(1, k + 1)) for k in (1, 4, 16, 64, cap)]
    signs = [None] * len(samples)
    samples.append(list(range(1, cap + 1)))
    signs.append([(-1) ** n for n in range(1, cap + 1)])
    while len(samples) < s["budget"]:
        A = rng.sample(range(1, s["dim"] + 1), rng.randint(1, cap))
        samples.append(A)
        signs.append(_signs(rng, len(A)))
    lo_seen, hi_seen = math.inf, 0.0
    for i, (A, eps) in enumerate(zip(samples, signs)):
        A = IndexSet(A)
        if eps is not None:
            eps = dict(zip(sorted(A), eps)) if len(eps) == len(A) else None
        r = norm(indicator(A, eps)) / math.sqrt(len(A))
        lo_seen, hi_seen = min(lo_seen, r), max(hi_seen, r)
        report.rows.append({"sample": i, "size": len(A), "max_index": A[-1], "ratio": r,
                            "lower": 1.0, "upper": 2.0, "pass": _within(r, 1.0, 2.0)})
    anchor = "||1_{eps,A}|| / |A|^(1/2) lies in [1, 2] since sum_{k<=m} k^(-1/2) <= 2 m^(1/2)"
    report.add(make_check("kt-ratio-min", lo_seen, 1.0, ">=", anchor, tol=REL_TOL))
    report.add(make_check("kt-ratio-max", hi_seen, 2.0, "<=", anchor, tol=2 * REL_TOL))
    est = K.estimate_superdemocracy(norm, 16, mode="random", budget=40, seed=s["seed"],
                                    max_index=s["dim"])
    report.witnesses.append({"kt-superdemocracy": est.witness})
    report.add(make_check("kt-superdemocracy-estimate", est.value, 2.0, "<=",
                          "superdemocracy constant of the KT norm is at most 2", tol=2 * REL_TOL))


# -- separated-blocks norm -------------------------------------------------------

@_register("thm43-democracy-window", ("sample", "kind", "size", "ratio", "lower", "upper", "pass"),
           gap="identity", depth=6, budget=200, size_cap=64)
def block_democracy_window(s, report: Report, given):
    c = _blocks(s, given)
    norm = block_norm(c)
    rng = random.Random(s["seed"])
    pf_lo, pf_hi, any_lo = math.inf, 0.0, math.inf
    for i in range(s["budget"]):
        A, _, _ = _pf_sample(rng, c, s["size_cap"], targeted=i % 2 == 0)
        eps = _signs(rng, len(A))
        value = norm(indicator(A, eps))
        if i % 10 == 0:
            value = max(value, K.best_signs(A, norm, True, rng, restarts=1)[0])
        r = value / math.sqrt(len(A))
        pf_lo, pf_hi = min(pf_lo, r), max(pf_hi, r)
        report.rows.append({"sample": i, "kind": "pf", "size": len(A), "ratio": r,
                            "lower": 1.0, "upper": 4.0, "pass": _within(r, 1.0, 4.0)})
    for i in range(s["budget"]):
        choice = i % 3
        if choice == 0:
            s_max = rng.randint(1, c.depth)
            A = set(c.union_of_blocks(s_max)) if c.depth else set()
            A |= set(rng.sample(range(1, 2000), rng.randint(0, 8)))
        elif choice == 1:
            A = set(rng.sample(range(1, 3000), rng.randint(1, s["size_cap"])))
        else:
            k = rng.randint(1, c.depth)
            A = set(rng.sample(list(c.block(k)), rng.randint(1, k)))
            A |= set(rng.sample(range(1, 100), rng.randint(0, 4)))
        A = IndexSet(A) if A else IndexSet([1])
        value = norm(indicator(A, _signs(rng, len(A))))
        if i % 10 == 0:
            value = min(value, K.best_signs(A, norm, False, rng, restarts=1)[0])
        r = value / math.sqrt(len(A))
        any_lo = min(any_lo, r)
        report.rows.append({"sample": i, "kind": "any", "size": len(A), "ratio": r,
                            "lower": 1.0, "upper": math.inf, "pass": r >= 1.0 - REL_TOL})
    report.add(make_check("pf-ratio-min", pf_lo, 1.0, ">=",
                          "||1_{eps,A}|| >= |A|^(1/2) for every A", tol=REL_TOL))
    report.add(make_check("pf-ratio-max", pf_hi, 4.0, "<=",
                          "||1_{eps,A}|| <= 4 |A|^(1/2) for A in the hereditary closure",
                          tol=4 * REL_TOL))
    report.add(make_check("any-ratio-min", any_lo, 1.0, ">=",
                          "||1_{eps,A}|| >= |A|^(1/2) for every A", tol=REL_TOL))


def triangular_level(m: int) -> int:
    """max k with k(k+1)/2 <= m."""
    return (math.isqrt(8 * m + 1) - 1) // 2


@_register("thm43-nondemocracy", ("m", "norm_Bm", "norm_Em", "ratio", "floor", "pass"),
           gap="identity", m_values=(32, 64, 128, 256), depth=None)
def block_nondemocracy(s, report: Report, given):
    ms = list(s["m_values"])
    need = triangular_level(max(ms))
    c = _blocks(s, given, depth=s["depth"] if s["depth"] is not None else need)
    if c.depth < need:
        raise ConfigError(f"construction depth {c.depth} below the needed {need}")
    norm = block_norm(c)
    p = c.p
    ratios = []
    for m in ms:
        level = triangular_level(m)
        D = c.union_of_blocks(level)
        pad, n = [], 1
        while len(D) + len(pad) < m:
            if n not in D:
                pad.append(n)
            n += 1
        Bm = IndexSet(list(D) + pad)
        Em = IndexSet(c.gap.b(i) for i in range(1, m + 1))
        nb, ne = norm(indicator(Bm)), norm(indicator(Em))
        r = nb / ne
        floor = m ** 0.25 / 24
        ratios.append(r)
        circ = block_norm_parts(indicator(D), c)[0]
        report.rows.append({"m": m, "s": level, "norm_Bm": nb, "norm_Em": ne, "ratio": r,
                            "floor": floor, "pass": r >= floor})
        report.add(make_check(f"ratio-floor-m{m}", r, floor, ">=",
                              "||1_{B_m}|| / ||1_{E_m}|| grows like m^(1/p - 1/2)"))
        report.add(make_check(f"block-seminorm-D_s-m{m}", circ, 0.5 * len(D) ** (1 / p), ">=",
                              "||1_{D_s}||_blocks = sum_{j<=|D_s|} j^(-1/q) >= |D_s|^(1/p) / 2"))
        report.add(make_check(f"block-seminorm-vs-m-m{m}", circ, m ** (1 / p) / 6, ">=",
                              "||1_{D_s}||_blocks >= m^(1/p) / 6"))
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    report.add(make_check("ratio-strictly-increasing", int(increasing), 1, "==",
                          "the ratio series is unbounded, so no democracy constant exists"))


@_register("thm43-conditionality", ("m", "norm_z", "norm_u", "ratio", "floor", "u_blocks",
                                    "blocks_cap", "pass"),
           gap="identity", depth=6, m_values=(16, 64, 256))
def block_conditionality(s, report: Report, given):
    c = _blocks(s, given)
    norm = block_norm(c)
    cap = 1 / math.sqrt(c.gap.b(2)) + sum((k + 1) / (math.sqrt(2) * k ** 3)
                                          for k in range(1, c.depth + 1))
    for m in s["m_values"]:
        z = SparseVector({j: j ** -0.5 for j in range(1, m + 1)})
        u = SparseVector({j: (-1) ** j * j ** -0.5 for j in range(1, m + 1)})
        nz, nu = norm(z), norm(u)
        harmonic = math.fsum(1 / j for j in range(1, m + 1))
        floor = 0.5 * math.sqrt(harmonic)
        u_circ = block_norm_parts(u, c)[0]
        r = nz / nu
        report.rows.append({"m": m, "norm_z": nz, "norm_u": nu, "ratio": r, "floor": floor,
                            "u_blocks": u_circ, "blocks_cap": cap,
                            "pass": r >= floor and u_circ <= cap})
        report.add(make_check(f"sign-flip-ratio-m{m}", r, floor, ">=",
                              "||sum e_j/j^(1/2)|| / ||sum (-1)^j e_j/j^(1/2)|| >= H_m^(1/2)/2"))
        report.add(make_check(f"alternating-block-seminorm-m{m}", u_circ, cap, "<=",
                              "block seminorm of the alternating vector <= 1/b_2^(1/2) + "
                              "sum_k (k+1)/(2^(1/2) k^3)"))


@_register("thm43-claim-NA", ("sample", "k", "j", "ell", "blocks_hit", "pass"),
           gap="identity", depth=6, budget=1000)
def block_claim(s, report: Report, given):
    c = _blocks(s, given)
    g = c.gap
    rng = random.Random(s["seed"])
    worst = 0
    top_index = c.n[-1] + 2
    for i in range(s["budget"]):
        k = rng.randint(1, c.depth)
        lo, hi = c.blocks[k - 1]
        target = rng.randint(lo, hi)
        floor_i = g.index_floor(target)
        i0 = floor_i if rng.random() < 0.3 else rng.randint(1, min(floor_i, 10 ** 6))
        j = target - g.b(i0)
        ell = i0 + rng.randint(0, 1000) if rng.random() < 0.5 else rng.randint(i0, max(i0, top_index))
        hit = sum(1 for h in c.hits(j, ell) if h)
        worst = max(worst, hit)
        report.rows.append({"sample": i, "k": k, "j": j, "ell": ell, "blocks_hit": hit,
                            "pass": hit <= 1})
    report.add(make_check("blocks-met-by-member", worst, 1, "<=",
                          "every set in the hereditary closure meets at most one block"))
    # explicit sets: brute-force membership against the counted hits
    mismatches, explicit_worst = 0, 0
    block_sets = [set(c.block(k)) for k in range(1, c.depth + 1)]
    for _ in range(200):
        j, ell = rng.randint(0, 40), rng.randint(1, 300)
        F = list(f_set(g, j, ell))
        A = set(rng.sample(F, rng.randint(1, len(F))))
        A |= {n for n in F if any(n in b for b in block_sets)}
        direct = sum(1 for b in block_sets if A & b)
        counted = sum(1 for h in c.hits(j, ell) if h)
        mismatches += direct != counted
        explicit_worst = max(explicit_worst, direct)
    report.add(make_check("explicit-count-mismatches", mismatches, 0, "<=",
                          "implicit block counting agrees with direct intersection"))
    report.add(make_check("explicit-blocks-met", explicit_worst, 1, "<=",
                          "every set in the hereditary closure meets at most one block"))


# -- tails -------------------------------------------------------------------

@_register("lemma58-blowup", ("j", "p_j", "k_j", "n_j", "m_j", "quantity", "floor", "tail_norm",
                              "mpg_ratio", "admissible", "pass"),
           gap="identity", depth=3, horizon=10 ** 6)
def tail_blowup(s, report: Report, given):
    c = _construction(s, given, TailConstruction,
                      lambda: build_tail_construction(_gap(s), depth=s["depth"], horizon=s["horizon"]))
    norm = tail_norm(c)
    g = c.gap
    a1 = g.a(1)
    problems = c.verify()
    report.add(make_check("construction-invariant-violations", len(problems), 0, "<=",
                          "k_j, n_j satisfy the three recursive conditions"))
    for idx in range(len(c.n)):
        j = idx + 1
        n_j, p_j = c.n[idx], c.p[idx]
        m_j = tail_excess(g, n_j)
        F = f_set(g, 1, n_j).to_index_set()
        window = IndexSet.interval(a1 + 1, a1 + n_j)
        excess = IndexSet(set(F) - set(window))
        tail_value = norm(indicator(excess))
        row = {"j": j, "p_j": p_j, "k_j": c.k[idx], "n_j": n_j, "m_j": m_j,
               "tail_norm": tail_value}
        report.add(make_check(f"excess-norm-j{j}", tail_value, m_j ** (1 / p_j), ">=",
                              "||1_{F_{1,n_j} minus (a_1+I_{n_j})}|| >= m_j^(1/p_j)",
                              tol=REL_TOL * m_j))
        if j == 1:
            report.rows.append({**row, "quantity": "", "floor": "", "mpg_ratio": "",
                                "admissible": "", "pass": m_j >= c.k[idx]})
            continue
        quantity = m_j ** (1 / p_j - 1 / c.p[idx - 1])
        x = indicator(IndexSet(set(window) | set(excess)))
        check = K.check_f_mpg_ratio(x, n_j, F, norm)
        row.update({"quantity": quantity, "floor": j, "mpg_ratio": check.ratio,
                    "admissible": check.admissible,
                    "pass": quantity > j and check.admissible and check.ratio > j})
        report.rows.append(row)
        report.add(make_check(f"blowup-quantity-j{j}", quantity, j, ">",
                              "m_j^(1/p_j - 1/p_{j-1}) > j, so no fixed constant survives"))
        report.add(make_check(f"instance-ratio-j{j}", check.ratio, quantity, ">=",
                              "the instance ratio is at least m_j^(1/p_j - 1/p_{j-1})",
                              tol=REL_TOL * quantity))
        report.add(make_check(f"instance-admissible-j{j}", int(check.admissible), 1, "==",
                              "min F_{1,n_j} = 1 + a_1 is at most every greedy index"))


# -- gap density -------------------------------------------------------------

@_register("lemma510-bounds", ("part", "label", "size", "value", "bound", "pass"),
           gap="fourth-power", alpha=1.0, horizon=10 ** 5, budget=200, dim=4096, size_cap=64,
           m_values=(16, 64, 256))
def density_bounds(s, report: Report, given):
    c = _construction(s, given, DensityConstruction,
                      lambda: build_density_construction(_gap(s), s["alpha"], s["horizon"]))
    norm = density_norm(c)
    rng = random.Random(s["seed"])
    lo_excess, hi_excess = math.inf, -math.inf
    for i in range(s["budget"]):
        size = rng.randint(4, s["size_cap"])
        kind = i % 4
        if kind == 0:
            A = rng.sample(range(1, s["dim"] + 1), size)
        elif kind == 1:
            start = rng.randint(1, s["dim"] - size)
            A = range(start, start + size)
        elif kind == 2:
            m = rng.randint(2, 60)
            A = [m * m + n for n in range(1, min(m, size) + 1)] + rng.sample(range(1, 50), 4)
        else:
            A = rng.sample(range(1, 4 * size), size)
        A = IndexSet(A)
        value = norm(indicator(A, _signs(rng, len(A))))
        if i % 4 == 3:
            value = min(value, K.best_signs(A, norm, False, rng, restarts=1)[0])
        floor, ceiling = 0.5 * len(A) ** 0.25, 2 * math.sqrt(len(A))
        lo_excess = min(lo_excess, value / floor)
        hi_excess = max(hi_excess, value / ceiling)
        report.rows.append({"part": "a", "label": f"sample-{i}", "size": len(A), "value": value,
                            "bound": floor, "pass": value >= floor * (1 - REL_TOL)})
    report.add(make_check("signed-indicator-floor", lo_excess, 1.0, ">=",
                          "||1_{eps,A}|| >= |A|^(1/4) / 2 when |A| >= 4", tol=REL_TOL))
    report.add(make_check("signed-indicator-ceiling", hi_excess, 1.0, "<=",
                          "||1_{eps,A}|| <= 2 |A|^(1/2)", tol=REL_TOL))
    series = []
    for m0 in s["m_values"]:
        start = IndexSet.interval(1, m0)
        shifted = IndexSet.interval(m0 * m0 + 1, m0 * m0 + m0)
        r = norm(indicator(start)) / norm(indicator(shifted))
        bound = 2 * c.M1 * m0 ** -0.25
        series.append(r)
        report.rows.append({"part": "b", "label": f"m0-{m0}", "size": m0, "value": r,
                            "bound": bound, "pass": r <= bound})
        report.add(make_check(f"window-ratio-m0-{m0}", r, bound, "<=",
                              "||1_{I_m0}|| / ||1_{m0^2+I_m0}|| <= 2 M_1 m0^(-1/4)"))
    decreasing = all(b < a for a, b in zip(series, series[1:]))
    report.add(make_check("window-ratio-decreasing", int(decreasing), 1, "==",
                          "the window ratio tends to 0, so no democracy constant exists"))


# -- definition ordering -------------------------------------------------------

@_register("definition-ordering", ("sample", "m", "F_size", "spg", "mpg", "F_in_greedy", "pass"),
           gap="periodic:1,2", budget=1000, dim=30)
def definition_ordering(s, report: Report, _):
    g = _gap(s)
    rng = random.Random(s["seed"])
    violations, case_contained, case_min = 0, 0, 0
    for i in range(s["budget"]):
        support = rng.sample(range(1, s["dim"] + 1), rng.randint(1, 12))
        x = SparseVector({n: rng.choice((1.0, -1.0, 0.5, 2.0, rng.uniform(-3, 3))) for n in support})
        m = rng.randint(1, len(x))
        lam = greedy_set(x, m).greedy_set
        if rng.random() < 0.15:
            F = IndexSet()
        else:
            F = f_set(g, rng.randint(0, s["dim"]), rng.randint(1, m)).to_index_set()
        spg = K.spg_admissible(F, lam)
        mpg = K.mpg_admissible(F, lam)
        inside = set(F) <= set(lam)
        bad = spg and not (mpg or inside)
        violations += bad
        if spg and F:
            case_contained += inside
            case_min += not inside
        report.rows.append({"sample": i, "m": m, "F_size": len(F), "spg": spg, "mpg": mpg,
                            "F_in_greedy": inside, "pass": not bad})
    anchor = "F minus Lambda < Lambda minus F forces F inside Lambda or min F <= Lambda"
    report.add(make_check("containment-violations", violations, 0, "<=", anchor))
    report.add(make_check("case-F-inside-greedy-exercised", case_contained, 1, ">=", anchor))
    report.add(make_check("case-min-F-exercised", case_min, 1, ">=", anchor))


# -- empty-set relations ---------------------------------------------------------

@_register("appendix-emptyset", ("norm", "relation", "instances", "worst_lhs_over_bound", "pass"),
           gap="identity", budget=300, dim=24, norm=None)
def emptyset_relations(s, report: Report, _):
    g = _gap(s)
    a1 = g.a(1)
    names = [s["norm"]] if s.get("norm") else ["l1", "l2", "kt", "l0.5"]
    chains = {"ag": K.emptyset_ag_chain, "spg": K.emptyset_spg_chain, "mpg": K.emptyset_mpg_chain}
    for name in names:
        norm = make_norm(name)
        p = norm.p_convexity
        rng = random.Random(s["seed"])
        worst = {key: 0.0 for key in chains}
        inadmissible = 0
        best_f, best_empty = 0.0, 0.0
        for _ in range(s["budget"]):
            support = rng.sample(range(1, s["dim"] + 1), rng.randint(1, 10))
            x = SparseVector({n: rng.choice((1.0, -1.0, rng.gauss(0, 1))) for n in support})
            m = rng.randint(0, len(x))
            G = IndexSet([rng.randint(a1, s["dim"])])
            for key, chain in chains.items():
                res = chain(x, m, G, norm, p)
                worst[key] = max(worst[key], K.ratio(res.lhs, res.bound))
                inadmissible += not res.derived_admissible
            best_empty = max(best_empty, K.check_f_almost_greedy_ratio(x, m, (), norm))
            if m >= 1:
                best_f = max(best_f, K.check_f_almost_greedy_ratio(x, m, G, norm))
                j = rng.randint(0, s["dim"])
                F = f_set(g, j, rng.randint(1, m)).to_index_set()
                best_f = max(best_f, K.check_f_almost_greedy_ratio(x, m, F, norm))
        for key in chains:
            ok = worst[key] <= 1 + REL_TOL
            report.rows.append({"norm": name, "relation": key, "instances": s["budget"],
                                "worst_lhs_over_bound": worst[key], "pass": ok})
            report.add(make_check(f"{key}-chain-{name}", worst[key], 1.0, "<=",
                                  "adding the empty set costs only a bounded factor", tol=REL_TOL))
        report.add(make_check(f"derived-instances-inadmissible-{name}", inadmissible, 0, "<=",
                              "the derived instance satisfies the side condition"))
        factor = (1 + 1) ** (1 / p)
        report.add(make_check(f"aggregate-with-empty-{name}", max(best_f, best_empty),
                              factor * max(1.0, best_f), "<=",
                              "F-with-empty constant <= (1 + min F)^(1/p) x F constant",
                              tol=REL_TOL))


# -- oracle agreement ----------------------------------------------------------

def crosscheck_sigma(rng, count):
    mismatches = 0
    norms = [make_norm(n) for n in ("l1", "l2", "kt", "l0.5")]
    for i in range(count):
        support = rng.sample(range(1, 40), rng.randint(0, 12))
        x = SparseVector({n: rng.choice((1.0, -1.0, 0.5, rng.gauss(0, 1))) for n in support})
        m = rng.randint(0, len(x))
        norm = norms[i % len(norms)]
        mismatches += sigma_tilde(x, m, norm) != bf_sigma_tilde(x, m, norm)
    return mismatches


def crosscheck_pf(max_s=60, rules=("constant:1", "constant:2", "identity")):
    """All S in {1..max_s} with |S| <= 3, and all subsets of {1..12}."""
    mismatches, total = 0, 0
    for rule in rules:
        g = GapSequence.parse(rule)
        fam = Family.from_gap(g)
        sets = itertools.chain(
            (S for r in (1, 2, 3) for S in itertools.combinations(range(1, max_s + 1), r)),
            (S for r in range(4, 13) for S in itertools.combinations(range(1, 13), r)))
        for S in sets:
            total += 1
            mismatches += (pf_member(fam, S) is not None) != bf_pf_member(g, S)
        mismatches += (pf_member(fam, ()) is None) or not bf_pf_member(g, ())
    return mismatches, total


def crosscheck_branch2(rng, count):
    mismatches = 0
    for _ in range(count):
        support = rng.sample(range(1, 200), rng.randint(1, 12))
        x = SparseVector({n: rng.gauss(0, 1) for n in support})
        mismatches += sparse_block_branch(x) != bf_branch2(x)
    return mismatches


def crosscheck_gap_branch(rng, count):
    dens = build_density_construction(GapSequence.fourth_power(), 1.0, 1000)
    mismatches = 0
    for _ in range(count):
        support = rng.sample(range(1, 80), rng.randint(1, 10))
        x = SparseVector({n: rng.gauss(0, 1) for n in support})
        mismatches += density_branches(x, dens)[3] != bf_gap_branch(x, dens.gap)
    return mismatches


def crosscheck_superdemocracy(size_cap=3, max_index=6):
    mismatches, total = 0, 0
    fam = Family.from_gap(GapSequence.constant(2))
    for name in ("l1", "kt"):
        norm = make_norm(name)
        for constraint in K.CONSTRAINTS:
            for family in (None, fam):
                if constraint in ("strong-disjoint", "strong-disjoint-conservative",
                                  "minimum-disjoint-conservative") and family is None:
                    continue
                est = K.estimate_superdemocracy(norm, size_cap, constraint, family, mode="exact",
                                                max_index=max_index)
                ref = bf_superdemocracy(norm, size_cap, max_index, constraint, family)
                total += 1
                mismatches += est.value != ref
                mismatches += abs(K.replay(est.witness, norm) - est.value) > 1e-9 * max(1, est.value)
    return mismatches, total


def crosscheck_lp_optimality(rng, count):
    """greedy_residual vs sigma_tilde under l_1, l_2, l_4; returns the
    number of instances that are neither identical nor within 1e-12."""
    bad = 0
    norms = [make_norm(n) for n in ("l1", "l2", "l4")]
    for i in range(count):
        support = rng.sample(range(1, 60), rng.randint(1, 10))
        x = SparseVector({n: rng.choice((1.0, -1.0, rng.gauss(0, 1))) for n in support})
        m = rng.randint(0, len(x))
        norm = norms[i % 3]
        a = greedy_residual(x, m, norm)
        b = sigma_tilde(x, m, norm)[0]
        if a != b and abs(a - b) > 1e-12 * max(abs(a), abs(b)):
            bad += 1
    return bad


@_register("oracle-crosscheck", ("part", "instances", "mismatches", "pass"),
           budget=1000, size_cap=3, dim=6)
def oracle_crosscheck(s, report: Report, _):
    rng = random.Random(s["seed"])
    n = s["budget"]
    parts = []
    parts.append(("sigma-tilde", n, crosscheck_sigma(rng, n)))
    mism, total = crosscheck_pf()
    parts.append(("pf-membership", total, mism))
    parts.append(("sparse-block-branch", n, crosscheck_branch2(rng, n)))
    parts.append(("gap-branch", n // 4, crosscheck_gap_branch(rng, n // 4)))
    mism, total = crosscheck_superdemocracy(s["size_cap"], s["dim"])
    parts.append(("superdemocracy-exact", total, mism))
    parts.append(("lp-greedy-optimality", n, crosscheck_lp_optimality(rng, n)))
    for name, count, mism in parts:
        report.rows.append({"part": name, "instances": count, "mismatches": mism, "pass": mism == 0})
        report.add(make_check(f"{name}-mismatches", mism, 0, "<=",
                              "fast path and brute-force reference agree exactly"))

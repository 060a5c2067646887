import pytest

from greedylab.constructions import (
    BlockConstruction,
    ConstructionError,
    build_block_construction,
    build_density_construction,
    build_tail_construction,
    density_violation,
    load_construction,
    save_construction,
    tail_excess,
)
from greedylab.families import GapSequence, f_set

IDENTITY = GapSequence.identity()


def _scan_block_indices(gap, depth):
    # term-by-term scan of a_(n+1) > 2k^6 + b_(n_{k-1}+1)
    n = [1]
    for k in range(1, depth + 1):
        threshold = 2 * k ** 6 + sum(gap.a(i) for i in range(1, n[-1] + 2))
        i = n[-1] + 2
        while gap.a(i) <= threshold:
            i += 1
        n.append(i - 1)
    return n


def test_block_indices_match_direct_scan():
    for depth in (1, 2, 3):
        c = build_block_construction(IDENTITY, depth)
        assert list(c.n) == _scan_block_indices(IDENTITY, depth)
    assert build_block_construction(IDENTITY, 2).n == (1, 5, 149)


def test_block_construction_invariants():
    c = build_block_construction(IDENTITY, 6)
    assert c.verify() == []
    g = c.gap
    for k in range(1, c.depth + 1):
        lo, hi = c.blocks[k - 1]
        assert hi - lo + 1 == k
        assert g.b(c.n[k]) + g.b(c.n[k - 1] + 1) + k < lo and hi < g.b(c.n[k] + 1)
        assert g.b(c.n[k] + 1) - g.b(c.n[k]) > 2 * k ** 6 + g.b(c.n[k - 1] + 1)
    assert c.q == pytest.approx(4.0)


def test_block_construction_edge_cases():
    empty = build_block_construction(IDENTITY, 0)
    assert empty.n == (1,) and empty.blocks == () and empty.verify() == []
    with pytest.raises(ConstructionError):
        build_block_construction(GapSequence.constant(3), 1, horizon=10 ** 4)
    with pytest.raises(ConstructionError):
        build_block_construction(IDENTITY, 1, p=2.5)


def test_block_construction_detects_tampering():
    c = build_block_construction(IDENTITY, 3)
    bad = BlockConstruction(c.gap, c.depth, (1, 4) + c.n[2:], c.p)
    assert bad.verify()


def test_block_hits_match_explicit_intersection():
    c = build_block_construction(IDENTITY, 4)
    blocks = [set(c.block(k)) for k in range(1, c.depth + 1)]
    for j in range(0, 60):
        for ell in (1, 5, 30, 200):
            F = set(f_set(IDENTITY, j, ell))
            assert c.hits(j, ell) == [len(F & b) for b in blocks]
    lo, _ = c.blocks[-1]
    j = lo - IDENTITY.b(7)
    assert sum(1 for h in c.hits(j, 10 ** 6) if h) == 1


def _tail_excess_direct(gap, n):
    a1 = gap.a(1)
    total, F = 0, []
    for i in range(1, n + 1):
        total += gap.a(i)
        F.append(1 + total)
    return sum(1 for s in F if not a1 + 1 <= s <= a1 + n)


def test_tail_excess_matches_direct_count():
    for rule in ("identity", "periodic:1,2", "constant:2"):
        g = GapSequence.parse(rule)
        for n in range(1, 80):
            assert tail_excess(g, n) == _tail_excess_direct(g, n)


def _minimal_k(j, p_new, p_old, floor):
    k = floor + 1
    while not k ** (1 / p_new) > j * k ** (1 / p_old):
        k += 1
    return k


def test_tail_construction_matches_independent_scan():
    c = build_tail_construction(IDENTITY)
    p = (2.0, 1.35, 1.02)
    ks = [2, _minimal_k(2, p[1], p[0], 2)]
    ks.append(_minimal_k(3, p[2], p[1], ks[1]))
    assert c.k == tuple(ks) == (2, 18, 98)
    ns, start = [], 2
    for k in ks:
        n = start
        while _tail_excess_direct(IDENTITY, n) < k:
            n += 1
        ns.append(n)
        start = 1 + IDENTITY.b(n) + 1
    assert c.n == tuple(ns) == (4, 24, 302)
    assert c.verify() == []
    for j in (1, 2):
        assert c.m[j] ** (1 / p[j] - 1 / p[j - 1]) > j + 1


def test_tail_construction_errors():
    with pytest.raises(ConstructionError):
        build_tail_construction(GapSequence.constant(1), horizon=10 ** 4)
    with pytest.raises(ConstructionError, match="p sequence must strictly decrease"):
        build_tail_construction(IDENTITY, p_seq=(1.5, 1.5))
    with pytest.raises(ConstructionError):
        build_tail_construction(IDENTITY, p_seq=(2.0, 1.0))


def test_tail_construction_is_deterministic():
    assert build_tail_construction(IDENTITY) == build_tail_construction(IDENTITY)


def test_density_construction_examples():
    c = build_density_construction(GapSequence.fourth_power(), 1.0, 10 ** 5)
    assert c.M == 2 and c.M1 == 2
    assert build_density_construction(GapSequence.constant(1), 1.0, 1000).M == 1
    with pytest.raises(ConstructionError, match="m=2"):
        build_density_construction(GapSequence.constant(2), 1.0, 1000)
    with pytest.raises(ConstructionError):
        build_density_construction(IDENTITY, 1.0, 1000)


def test_density_violation_matches_direct_count():
    for rule, alpha in (("constant:2", 1.0), ("periodic:1,1,1,2", 1.0), ("fourth-power", 1.0),
                        ("periodic:1,1,1,1,1,1,1,2", 2.0)):
        g = GapSequence.parse(rule)
        first, count = None, 0
        for m in range(1, 3000):
            count += g.a(m) >= 2
            if count > alpha * m ** 0.25 and first is None:
                first = m
        assert density_violation(g, alpha, 2999) == first


@pytest.mark.parametrize("build", [
    lambda: build_block_construction(IDENTITY, 5),
    lambda: build_tail_construction(IDENTITY),
    lambda: build_density_construction(GapSequence.fourth_power(), 1.0, 10 ** 4),
])
def test_save_and_load_round_trip(tmp_path, build):
    c = build()
    path = tmp_path / "c.json"
    save_construction(c, path)
    assert load_construction(path) == c


def test_load_rejects_invalid_file(tmp_path):
    c = build_block_construction(IDENTITY, 2)
    path = tmp_path / "c.json"
    save_construction(BlockConstruction(c.gap, 2, (1, 3, 149), c.p), path)
    with pytest.raises(ConstructionError, match="invalid construction"):
        load_construction(path)

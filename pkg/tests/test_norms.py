import math
import random

import pytest

from greedylab.constructions import (
    build_block_construction,
    build_density_construction,
    build_tail_construction,
)
from greedylab.core import IndexSet, SparseVector, indicator
from greedylab.families import GapSequence
from greedylab.norms import (
    ConstructionDepthExceeded,
    block_norm,
    block_norm_parts,
    density_branches,
    density_norm,
    make_norm,
    sparse_block_branch,
    tail_norm,
)
from greedylab.oracle import bf_branch2, bf_gap_branch

BLOCKS = build_block_construction(GapSequence.identity(), 4)
TAILS = build_tail_construction(GapSequence.identity())
DENSITY = build_density_construction(GapSequence.fourth_power(), 1.0, 10 ** 4)


def _oracles():
    return [make_norm(n) for n in ("l1", "l2", "l4", "l0.5", "linf", "kt")] + [
        block_norm(BLOCKS), tail_norm(TAILS), density_norm(DENSITY)]


def _random_vector(rng, top=300, size=10):
    support = rng.sample(range(1, top), rng.randint(1, size))
    return SparseVector({n: rng.gauss(0, 1) for n in support})


def test_lp_examples():
    assert make_norm("l2")(SparseVector({1: 3, 2: 4})) == 5
    assert make_norm("l0.5")(SparseVector({1: 1, 2: 1})) == 4
    assert make_norm("linf")(SparseVector({7: -2})) == 2
    assert make_norm("l0.5").p_convexity == 0.5
    assert make_norm("l2").p_convexity == 1.0


def test_kt_examples():
    kt = make_norm("kt")
    assert kt(SparseVector({1: 1})) == 1
    expected = 1 + 2 ** -0.5 + 3 ** -0.5 + 0.5
    assert kt(indicator([1, 2, 3, 4])) == pytest.approx(expected, rel=1e-15)
    assert kt(indicator([1, 2, 3, 4])) == pytest.approx(2.78445, abs=1e-5)


def test_unknown_norm_and_missing_construction():
    with pytest.raises(ValueError):
        make_norm("l-spiral")
    with pytest.raises(ValueError):
        make_norm("blocks")


@pytest.mark.parametrize("norm", _oracles(), ids=lambda n: n.name)
def test_unit_vectors_have_norm_one(norm):
    for n in (1, 2, 3, 5, 17, 100, 255):
        assert norm(SparseVector({n: 1.0})) == 1.0
        assert norm(SparseVector({n: -1.0})) == 1.0


@pytest.mark.parametrize("norm", _oracles(), ids=lambda n: n.name)
def test_homogeneity(norm):
    rng = random.Random(1)
    for _ in range(200):
        x = _random_vector(rng)
        lam = rng.choice((-1, 1)) * rng.uniform(0.01, 50)
        assert norm(x * lam) == pytest.approx(abs(lam) * norm(x), rel=1e-12)


@pytest.mark.parametrize("norm", _oracles(), ids=lambda n: n.name)
def test_p_triangle_inequality(norm):
    rng = random.Random(2)
    p = norm.p_convexity
    for _ in range(2000):
        x, y = _random_vector(rng), _random_vector(rng)
        assert norm(x + y) ** p <= (norm(x) ** p + norm(y) ** p) * (1 + 1e-12)


def test_kt_window_on_signed_indicators():
    kt = make_norm("kt")
    rng = random.Random(3)
    for _ in range(300):
        A = IndexSet(rng.sample(range(1, 4097), rng.randint(1, 256)))
        eps = [rng.choice((1, -1)) for _ in A]
        r = kt(indicator(A, eps)) / math.sqrt(len(A))
        assert 1 - 1e-12 <= r <= 2 + 1e-12


def test_block_norm_examples():
    norm = block_norm(BLOCKS)
    assert norm(SparseVector({1: 1})) == 1
    outside = next(n for n in range(2, 10 ** 4) if n not in BLOCKS.weights)
    assert norm(SparseVector({outside: 1})) == 1


def test_block_seminorm_on_block_unions():
    q = BLOCKS.q
    for s in range(1, BLOCKS.depth + 1):
        D = BLOCKS.union_of_blocks(s)
        circ = block_norm_parts(indicator(D), BLOCKS)[0]
        expected = math.fsum(j ** (-1 / q) for j in range(1, len(D) + 1))
        assert circ == pytest.approx(expected, rel=1e-12)
        assert circ >= 0.5 * len(D) ** (1 / BLOCKS.p)


def test_block_norm_lower_window_for_every_set():
    norm = block_norm(BLOCKS)
    rng = random.Random(4)
    for _ in range(300):
        A = IndexSet(rng.sample(range(1, 5000), rng.randint(1, 40)))
        eps = [rng.choice((1, -1)) for _ in A]
        assert norm(indicator(A, eps)) >= math.sqrt(len(A)) * (1 - 1e-12)


def test_block_norm_refuses_unbuilt_indices():
    with pytest.raises(ConstructionDepthExceeded, match="construction depth exceeded"):
        block_norm(BLOCKS)(SparseVector({BLOCKS.limit + 1: 1}))


def test_tail_norm_examples():
    norm = tail_norm(TAILS)
    a1 = TAILS.gap.a(1)
    assert norm(SparseVector({1: 1})) == 1
    assert norm(SparseVector({a1 + TAILS.n[0]: 1})) == 1
    far = a1 + TAILS.n[-1]
    assert norm(SparseVector({far + 1: 1, far + 2: 1})) == 2 ** (1 / 1.02)
    with pytest.raises(ConstructionDepthExceeded):
        norm(SparseVector({TAILS.limit + 1: 1}))


def test_sparse_block_branch_examples():
    assert sparse_block_branch(SparseVector({1: 1})) == 0
    assert sparse_block_branch(SparseVector({5: 1})) == 1


def test_sparse_block_branch_matches_oracle():
    rng = random.Random(5)
    for _ in range(300):
        x = _random_vector(rng, top=200, size=12)
        assert sparse_block_branch(x) == bf_branch2(x)


def test_gap_branch_matches_oracle():
    rng = random.Random(6)
    for _ in range(100):
        x = _random_vector(rng, top=90, size=8)
        assert density_branches(x, DENSITY)[3] == bf_gap_branch(x, DENSITY.gap)


def test_density_norm_examples():
    norm = density_norm(DENSITY)
    assert norm(SparseVector({1: 1})) == 1
    for m0 in (2, 4, 8, 16):
        shifted = IndexSet.interval(m0 * m0 + 1, m0 * m0 + m0)
        assert norm(indicator(shifted)) >= math.sqrt(m0) * (1 - 1e-12)


def test_density_norm_window():
    norm = density_norm(DENSITY)
    rng = random.Random(7)
    for _ in range(300):
        A = IndexSet(rng.sample(range(1, 3000), rng.randint(4, 40)))
        eps = [rng.choice((1, -1)) for _ in A]
        value = norm(indicator(A, eps))
        assert value >= 0.5 * len(A) ** 0.25 * (1 - 1e-12)
        assert value <= 2 * math.sqrt(len(A)) * (1 + 1e-12)


def test_padding_beyond_support_changes_nothing():
    rng = random.Random(8)
    for norm in _oracles():
        for _ in range(50):
            x = _random_vector(rng, top=150)
            padded = x + SparseVector({x.max_index() + 5: 0.0})
            assert norm(padded) == norm(x)

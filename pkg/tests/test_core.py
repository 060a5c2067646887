import math
import random

import pytest

from greedylab.core import (
    IndexSet,
    InsufficientSupport,
    SparseVector,
    greedy_residual,
    greedy_set,
    indicator,
    partial_sum,
    project,
    sigma_tilde,
)
from greedylab.norms import make_norm
from greedylab.oracle import bf_sigma_tilde

L1, L2 = make_norm("l1"), make_norm("l2")


def test_project_examples():
    assert project(SparseVector({1: 3, 2: -5}), {2}) == SparseVector({2: -5})
    assert project(SparseVector({1: 3, 4: 1}), set()) == SparseVector()
    x = SparseVector({1: 1, 2: 1, 3: 1})
    assert project(x, {1, 2, 3, 9}) == x


def test_partial_sum_examples():
    assert partial_sum(SparseVector({1: 1, 5: 2}), 3) == SparseVector({1: 1})
    assert partial_sum(SparseVector({1: 1, 5: 2}), 0) == SparseVector()
    assert partial_sum(SparseVector({2: 7}), 2) == SparseVector({2: 7})
    assert partial_sum(SparseVector({2: 7}), 50) == SparseVector({2: 7})


def test_greedy_set_examples():
    assert greedy_set(SparseVector({1: 3, 2: -5, 3: 2}), 1).greedy_set == IndexSet([2])
    out = greedy_set(SparseVector({1: 1, 2: 1}), 1)
    assert out.greedy_set == IndexSet([1]) and out.tie_broken
    out = greedy_set(SparseVector({1: 1, 2: 2, 3: 3}), 2)
    assert out.greedy_set == IndexSet([2, 3]) and not out.tie_broken


def test_greedy_set_insufficient_support():
    with pytest.raises(InsufficientSupport, match="insufficient support"):
        greedy_set(SparseVector({1: 1}), 2)


def test_greedy_set_padding_uses_smallest_unused_indices():
    out = greedy_set(SparseVector({2: 5}), 3, pad=True)
    assert out.greedy_set == IndexSet([1, 2, 3])


def test_greedy_residual_examples():
    assert greedy_residual(SparseVector({1: 3, 2: 4}), 1, L2) == 3.0
    x = SparseVector({1: 1, 2: -2, 7: 0.5})
    assert greedy_residual(x, 3, L2) == 0
    x = SparseVector({n: 1 for n in range(1, 5)})
    assert greedy_residual(x, 2, L2) == math.sqrt(2)


def test_indicator_examples():
    assert indicator([1, 3], [1, -1]) == SparseVector({1: 1, 3: -1})
    assert indicator([]) == SparseVector()
    assert indicator([5]) == SparseVector({5: 1})
    with pytest.raises(ValueError):
        indicator([1, 3], [1])
    with pytest.raises(ValueError):
        indicator([1, 3], {1: 1, 4: 1})


def test_sigma_tilde_examples():
    # frozen from the bitmask oracle
    assert sigma_tilde(SparseVector({1: 3, 2: 4}), 1, L2) == (3.0, IndexSet([2]))
    assert sigma_tilde(SparseVector({1: 1, 2: 2, 3: 3}), 2, L1) == (1.0, IndexSet([2, 3]))
    x = SparseVector({1: 2, 4: -1})
    assert sigma_tilde(x, 0, L2) == (L2(x), IndexSet())
    assert sigma_tilde(x, 5, L2) == (0.0, IndexSet([1, 4]))


def _random_vector(rng, top=30, size=8):
    support = rng.sample(range(1, top), rng.randint(1, size))
    return SparseVector({n: rng.choice((1.0, -1.0, rng.gauss(0, 2))) for n in support})


def test_sigma_tilde_matches_oracle():
    rng = random.Random(11)
    norms = [make_norm(n) for n in ("l1", "l2", "kt", "l0.5", "linf")]
    for i in range(300):
        x = _random_vector(rng)
        m = rng.randint(0, len(x))
        norm = norms[i % len(norms)]
        assert sigma_tilde(x, m, norm) == bf_sigma_tilde(x, m, norm)


def test_greedy_residual_dominates_best_projection():
    rng = random.Random(5)
    for norm in (make_norm("kt"), make_norm("linf"), L1):
        for _ in range(100):
            x = _random_vector(rng)
            m = rng.randint(0, len(x))
            assert greedy_residual(x, m, norm) >= sigma_tilde(x, m, norm)[0]


def test_lp_greedy_residual_is_optimal():
    rng = random.Random(6)
    for p in ("l1", "l2", "l4", "l0.5"):
        norm = make_norm(p)
        for _ in range(100):
            x = _random_vector(rng)
            m = rng.randint(0, len(x))
            a, b = greedy_residual(x, m, norm), sigma_tilde(x, m, norm)[0]
            assert a == b or abs(a - b) <= 1e-12 * max(a, b)


def test_threshold_condition_and_scaling_invariance():
    rng = random.Random(7)
    for _ in range(300):
        x = _random_vector(rng)
        m = rng.randint(1, len(x))
        lam = greedy_set(x, m).greedy_set
        inside = min(abs(x[n]) for n in lam)
        outside = [abs(c) for n, c in x.items() if n not in lam]
        assert all(inside >= v for v in outside)
        assert greedy_set(x * rng.uniform(0.1, 10), m).greedy_set == lam


def test_projection_composition():
    rng = random.Random(8)
    for _ in range(100):
        x = _random_vector(rng)
        A = set(rng.sample(range(1, 30), 10))
        B = set(rng.sample(range(1, 30), 10))
        assert project(project(x, A), B) == project(x, A & B)
        assert project(project(x, A), A) == project(x, A)

import pytest

from greedylab.core import BruteForceCapExceeded, SparseVector
from greedylab.families import GapSequence
from greedylab.norms import make_norm
from greedylab.oracle import (
    bf_branch2,
    bf_gap_branch,
    bf_partial_sums,
    bf_pf_member,
    bf_sigma_tilde,
    bf_superdemocracy,
)

L2 = make_norm("l2")


def test_sigma_examples():
    x = SparseVector({1: 2, 3: -1})
    assert bf_sigma_tilde(x, 0, L2) == (L2(x), ())
    value, chosen = bf_sigma_tilde(x, 2, L2)
    assert value == 0 and chosen == (1, 3)


def test_caps_are_errors():
    x = SparseVector({n: 1 for n in range(1, 22)})
    with pytest.raises(BruteForceCapExceeded):
        bf_sigma_tilde(x, 3, L2)
    with pytest.raises(BruteForceCapExceeded):
        bf_branch2(SparseVector({n: 1 for n in range(1, 14)}))
    with pytest.raises(BruteForceCapExceeded):
        bf_pf_member(GapSequence.constant(1), [500])
    with pytest.raises(BruteForceCapExceeded):
        bf_gap_branch(SparseVector({401: 1}), GapSequence.constant(1))
    with pytest.raises(BruteForceCapExceeded):
        bf_superdemocracy(L2, 2, 13)


def test_partial_sums():
    assert bf_partial_sums(GapSequence.identity(), 10) == [1, 3, 6, 10]
    assert bf_partial_sums(GapSequence.constant(2), 7) == [2, 4, 6]


def test_pf_examples():
    g = GapSequence.constant(2)
    assert bf_pf_member(g, [])
    assert bf_pf_member(g, [7])
    assert bf_pf_member(g, [2, 6])
    assert not bf_pf_member(g, [1, 2])


def test_branch2_examples():
    assert bf_branch2(SparseVector({1: 1})) == 0
    assert bf_branch2(SparseVector({5: 1})) == 1


def test_superdemocracy_l2():
    assert bf_superdemocracy(L2, 2, 5) == pytest.approx(1.0)

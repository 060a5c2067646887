import pytest

from greedylab.config import ExperimentConfig
from greedylab.experiments import EXPERIMENTS, run_experiment, triangular_level

SMALL = {
    "covering-audit": dict(budget=40),
    "sliding-audit": dict(dim=200),
    "pf-closure-audit": dict(budget=20),
    "kt-democracy": dict(budget=20),
    "thm43-democracy-window": dict(budget=20),
    "thm43-nondemocracy": dict(m_values=(8, 16, 32)),
    "thm43-conditionality": dict(),
    "thm43-claim-NA": dict(budget=50),
    "lemma58-blowup": dict(),
    "lemma510-bounds": dict(budget=20, horizon=10 ** 4, m_values=(8, 16, 32)),
    "definition-ordering": dict(budget=50),
    "appendix-emptyset": dict(budget=30),
    "oracle-crosscheck": dict(budget=30, size_cap=2, dim=5),
}


def test_every_experiment_has_a_small_configuration():
    assert set(SMALL) == set(EXPERIMENTS)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_runs_pass_and_repeat_exactly(name):
    cfg = ExperimentConfig(experiment=name, **SMALL[name])
    first = run_experiment(cfg)
    assert first.status == "pass", [c for c in first.checks if c.status != "pass"]
    assert first.checks and all(c.anchor for c in first.checks)
    assert first.to_json() == run_experiment(cfg).to_json()
    assert first.to_csv().splitlines()[0].split(",") == list(EXPERIMENTS[name].columns)


def test_seed_changes_samples():
    a = run_experiment(ExperimentConfig(experiment="kt-democracy", budget=30, seed=1))
    b = run_experiment(ExperimentConfig(experiment="kt-democracy", budget=30, seed=2))
    assert a.to_csv() != b.to_csv()


def test_triangular_level():
    assert [triangular_level(m) for m in (1, 2, 3, 5, 6, 32, 256)] == [1, 1, 2, 2, 3, 7, 22]

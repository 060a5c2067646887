import csv
import json

import pytest

from greedylab.cli import main
from greedylab.config import ConfigError, ExperimentConfig, parse_config
from greedylab.experiments import EXPERIMENTS, resolve, run_experiment
from greedylab.report import FAIL, INCONCLUSIVE, Report, cell, make_check, plain


def test_parse_config():
    cfg = parse_config("# comment\nexperiment = kt-democracy\nseed = 4\nm-values = 1, 2\n\n")
    assert cfg.experiment == "kt-democracy" and cfg.seed == 4 and cfg.m_values == (1, 2)
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("colour = blue")
    with pytest.raises(ConfigError):
        parse_config("seed = four")
    with pytest.raises(ConfigError):
        parse_config("seed 4")


def test_resolve_overlays_defaults():
    settings = resolve(ExperimentConfig(experiment="kt-democracy", budget=7))
    assert settings["budget"] == 7 and settings["dim"] == 4096 and settings["seed"] == 0
    with pytest.raises(ConfigError):
        resolve(ExperimentConfig(experiment="nope"))


def test_make_check_statuses():
    assert make_check("a", 1.0, 2.0, "<=", "x").status == "pass"
    assert make_check("a", 3.0, 2.0, "<=", "x").status == FAIL
    assert make_check("a", 2.0 + 1e-10, 2.0, "<=", "x", tol=1e-9).status == "pass"
    assert make_check("a", 1.0, 1.0, ">", "x").status == FAIL
    assert make_check("a", 0, 0, "==", "x", inconclusive=True).status == INCONCLUSIVE


def test_report_exit_codes():
    r = Report("demo", {}, ("a",))
    assert r.exit_code == 0
    r.add(make_check("i", 0, 0, "==", "x", inconclusive=True))
    assert r.exit_code == 3
    r.add(make_check("f", 1, 0, "<=", "x"))
    assert r.exit_code == 1


def test_cells_for_huge_and_non_finite_values():
    assert cell(2 ** 70) == hex(2 ** 70)
    assert cell(float("inf")) == "inf" and cell(True) == "true"
    assert plain({"n": 10 ** 5000}) == {"n": hex(10 ** 5000)}


def test_every_experiment_has_columns_and_pass_column():
    for name, entry in EXPERIMENTS.items():
        assert "pass" in entry.columns, name


def test_nondemocracy_columns():
    assert EXPERIMENTS["thm43-nondemocracy"].columns == (
        "m", "norm_Bm", "norm_Em", "ratio", "floor", "pass")


def test_main_writes_identical_reports(tmp_path):
    args = ["--experiment", "covering-audit", "--budget", "50", "--seed", "9", "-q"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for suffix in ("csv", "json"):
        a = (tmp_path / "a" / f"covering-audit.{suffix}").read_bytes()
        b = (tmp_path / "b" / f"covering-audit.{suffix}").read_bytes()
        assert a == b
    report = json.loads((tmp_path / "a" / "covering-audit.json").read_text())
    assert report["config"]["budget"] == 50 and report["config"]["seed"] == 9
    assert all(c["anchor"] for c in report["checks"])
    rows = list(csv.DictReader(open(tmp_path / "a" / "covering-audit.csv")))
    assert len(rows) == 50
    timing = json.loads((tmp_path / "a" / "covering-audit.timing.json").read_text())
    assert timing["seconds"] >= 0


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("experiment = sliding-audit\ndim = 50\n")
    assert main(["--config", str(cfg), "--dim", "20", "--out", str(tmp_path), "-q"]) == 0
    rows = list(csv.DictReader(open(tmp_path / "sliding-audit.csv")))
    assert len(rows) == 20


def test_usage_and_config_errors_exit_two(tmp_path, capsys):
    assert main(["--experiment", "nope"]) == 2
    assert main([]) == 2
    assert main(["--bogus"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment = kt-democracy\nshape = round\n")
    assert main(["--config", str(bad)]) == 2
    assert main(["--experiment", "kt-democracy", "--construction", str(bad)]) == 2
    assert main(["--experiment", "thm43-conditionality", "--construction",
                 str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2


def test_failed_check_exits_one(tmp_path):
    # a decreasing m series cannot give an increasing ratio series
    cfg = tmp_path / "reversed.cfg"
    cfg.write_text("experiment = thm43-nondemocracy\nm_values = 64, 32\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path), "-q"]) == 1
    report = json.loads((tmp_path / "thm43-nondemocracy.json").read_text())
    failed = [c["name"] for c in report["checks"] if c["status"] == "fail"]
    assert failed == ["ratio-strictly-increasing"]


def test_unbounded_gap_for_covering_exits_two(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment = covering-audit\ngap = identity\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path), "-q"]) == 2


def test_construction_file_round_trip(tmp_path):
    path = tmp_path / "blocks.json"
    assert main(["--experiment", "thm43-conditionality", "--save-construction", str(path)]) == 0
    out = tmp_path / "out"
    assert main(["--experiment", "thm43-conditionality", "--construction", str(path),
                 "--out", str(out), "-q"]) == 0
    assert main(["--experiment", "lemma58-blowup", "--construction", str(path),
                 "--out", str(out), "-q"]) == 2


def test_list(capsys):
    assert main(["--list"]) == 0
    assert "oracle-crosscheck" in capsys.readouterr().out


def test_run_experiment_embeds_config():
    report = run_experiment(ExperimentConfig(experiment="definition-ordering", budget=20))
    assert report.config["budget"] == 20 and report.config["experiment"] == "definition-ordering"
    assert report.status == "pass"

"""Command-line front end.

    greedylab --experiment thm43-nondemocracy --seed 3 --out results
    greedylab --config run.cfg --budget 50
    greedylab --list

Writes <experiment>.csv and <experiment>.json (identical across reruns with
the same settings) plus <experiment>.timing.json with the wall-clock time.
Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error,
3 only inconclusive checks.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .config import ConfigError, ExperimentConfig, load_config
from .constructions import ConstructionError, save_construction
from .experiments import EXPERIMENTS, resolve, run_experiment
from .norms import ConstructionDepthExceeded

EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greedylab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--experiment", help="experiment name (see --list)")
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--out", help="directory for report files (default: results)")
    parser.add_argument("--construction", help="construction file to use instead of building one")
    parser.add_argument("--save-construction", metavar="PATH",
                        help="build the experiment's construction, write it to PATH and exit")
    parser.add_argument("--list", action="store_true", help="list experiments and exit")
    parser.add_argument("-q", "--quiet", action="store_true", help="do not print the summary table")
    return parser


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg = cfg.merged(experiment=args.experiment, seed=args.seed, dim=args.dim,
                     budget=args.budget, out=args.out, construction=args.construction)
    if cfg.experiment is None:
        raise ConfigError("no experiment given (use --experiment or the config file)")
    resolve(cfg)
    return cfg


def _save_construction(cfg: ExperimentConfig, path: str) -> None:
    from . import experiments as ex

    settings = resolve(cfg)
    name = cfg.experiment
    if name not in ex.USES_CONSTRUCTION:
        raise ConfigError(f"experiment {name!r} does not use a construction")
    if name.startswith("thm43") or name == "pf-closure-audit":
        depth = settings["depth"]
        if depth is None:
            depth = ex.triangular_level(max(settings["m_values"]))
        c = ex._blocks(settings, None, depth=depth)
    elif name == "lemma58-blowup":
        c = ex._construction(settings, None, ex.TailConstruction, lambda: ex.build_tail_construction(
            ex._gap(settings), depth=settings["depth"], horizon=settings["horizon"]))
    else:
        c = ex._construction(settings, None, ex.DensityConstruction, lambda: ex.build_density_construction(
            ex._gap(settings), settings["alpha"], settings["horizon"]))
    save_construction(c, path)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.list:
        for name in EXPERIMENTS:
            print(name)
        return 0
    try:
        cfg = _config(args)
        if args.save_construction:
            _save_construction(cfg, args.save_construction)
            print(f"wrote {args.save_construction}")
            return 0
        start = time.perf_counter()
        report = run_experiment(cfg)
        elapsed = time.perf_counter() - start
    except (ConfigError, ConstructionError, ConstructionDepthExceeded) as exc:
        print(f"greedylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(cfg.out or "results")
    report.write(out)
    (out / f"{report.experiment}.timing.json").write_text(
        json.dumps({"experiment": report.experiment, "seconds": round(elapsed, 3)}) + "\n")
    if not args.quiet:
        print(report.table())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands wrap the experiment protocols one-to-one: simulate, sweep,
qscan, scaling, convergence, geometry, plus oracle-check, which replays the
internal consistency suites (quantum channel vs density-matrix oracle,
Monte Carlo vs exact joint) and exits nonzero on any failure. Config files
are flat key=value text; flags override file values; HFC_OUT_DIR overrides
the default output directory when --out-dir is not given.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, exact, experiments, metrics, quantum, tables
from .config import (ConfigError, load_config_file, make_config)

DEFAULT_OUT_DIR = "hfc-out"
OUT_DIR_ENV = "HFC_OUT_DIR"


def _parse_float_list(text: str):
    return [float(part) for part in text.split(",") if part.strip() != ""]


def _parse_int_list(text: str):
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--strategy", choices=("independent", "shared_latent", "quantum"))
    parser.add_argument("--n", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--p", type=float)
    parser.add_argument("--eps", type=float)
    parser.add_argument("--veto", type=float, dest="v")
    parser.add_argument("--lambda", type=float, dest="lam")
    parser.add_argument("--q", type=float)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--replicates", type=int)
    parser.add_argument("--seed", type=int, dest="seed_root")
    parser.add_argument("--mode", choices=("monte_carlo", "exact"))
    parser.add_argument("--out-dir")
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hfc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="one configuration: metrics, histogram, pair joint")
    _add_config_flags(p_sim)
    p_sim.add_argument("--pair", default="1,2", help="1-based agent pair for the exported pair joint")

    p_sweep = sub.add_parser("sweep", help="differential grid over (p, lambda)")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--p-grid", type=_parse_float_list)
    p_sweep.add_argument("--lambda-grid", type=_parse_float_list)
    p_sweep.add_argument("--q-grid-step", type=float, default=experiments.DEFAULT_Q_GRID_STEP)

    p_qscan = sub.add_parser("qscan", help="shared-latent quality scan with quantum reference")
    _add_config_flags(p_qscan)
    p_qscan.add_argument("--q-grid-step", type=float, default=experiments.DEFAULT_Q_GRID_STEP)

    p_scaling = sub.add_parser("scaling", help="differentials across team sizes")
    _add_config_flags(p_scaling)
    p_scaling.add_argument("--n-list", type=_parse_int_list)
    p_scaling.add_argument("--q-grid-step", type=float, default=experiments.DEFAULT_Q_GRID_STEP)

    p_conv = sub.add_parser("convergence", help="delta-TC on growing round prefixes")
    _add_config_flags(p_conv)
    p_conv.add_argument("--checkpoints", type=_parse_int_list)
    p_conv.add_argument("--q-grid-step", type=float, default=experiments.DEFAULT_Q_GRID_STEP)

    p_geo = sub.add_parser("geometry", help="(coincidence, APMI) trails over the intel rate")
    _add_config_flags(p_geo)
    p_geo.add_argument("--p-grid", type=_parse_float_list)
    p_geo.add_argument("--display-q", type=float, default=experiments.DISPLAY_Q)

    p_oracle = sub.add_parser("oracle-check", help="replay internal consistency checks")
    _add_config_flags(p_oracle)

    return parser


def _resolve_out_dir(args) -> Path:
    out = args.out_dir or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _resolve_config(args):
    file_overrides = load_config_file(args.config) if args.config else {}
    flag_overrides = {
        key: getattr(args, key, None)
        for key in ("n", "m", "k", "p", "eps", "v", "lam", "q", "strategy",
                    "rounds", "replicates", "seed_root", "mode")
    }
    return make_config(file_overrides, flag_overrides)


def _config_echo(config) -> dict:
    from .config import FIELD_KEYS
    return {FIELD_KEYS[attr]: getattr(config, attr) for attr in FIELD_KEYS}


def _finish(out_dir: Path, command: str, config, outputs, started: float, extras=None) -> int:
    manifest = tables.write_manifest(
        out_dir / "manifest.json", command, _config_echo(config),
        outputs, time.time() - started, __version__, extras,
    )
    for path in [*outputs, manifest]:
        print(f"wrote {path}")
    return 0


def cmd_simulate(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    pair = tuple(int(x) for x in args.pair.split(","))
    if len(pair) != 2 or not all(1 <= x <= config.n for x in pair) or pair[0] == pair[1]:
        raise ConfigError([f"--pair must name two distinct agents in 1..{config.n}"])

    outputs = []
    row, hists = experiments.simulate_row(config, workers=args.workers)
    outputs.append(tables.write_table(out_dir / "metrics.csv", "sweep",
                                      experiments.SweepRow.COLUMNS, [row.as_row()]))

    if config.mode == "exact":
        joint = exact.exact_joint(config)
        flat = joint.flat()
        rows = [["-".join(str(a) for a in metrics.unpack_profile(i, config.n, config.m)), flat[i]]
                for i in np.nonzero(flat > 0)[0]]
        outputs.append(tables.write_table(out_dir / "exact_joint.csv", "exact_joint",
                                          ("profile", "probability"), rows))
        pair_matrix = metrics.tensor_marginal(joint.probs, (pair[0] - 1, pair[1] - 1))
    else:
        pooled = hists[0]
        for h in hists[1:]:
            pooled = pooled + h
        rows = [["-".join(str(a) for a in profile), count] for profile, count in pooled.items()]
        outputs.append(tables.write_table(out_dir / "histogram.csv", "histogram",
                                          ("profile", "count"), rows))
        pair_matrix = metrics.pairwise_joint(pooled, pair[0] - 1, pair[1] - 1)

    pair_rows = [[a, b, pair_matrix[a - 1, b - 1]]
                 for a in range(1, config.m + 1) for b in range(1, config.m + 1)]
    outputs.append(tables.write_table(out_dir / "pair_joint.csv", "pair_joint",
                                      ("action_i", "action_j", "probability"), pair_rows))
    return _finish(out_dir, "simulate", config, outputs, started,
                   extras={"pair": list(pair)})


def cmd_sweep(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    rows = experiments.differential_grid(
        config,
        p_grid=args.p_grid,
        lambda_grid=args.lambda_grid,
        q_grid=experiments.q_grid_from_step(args.q_grid_step),
        workers=args.workers,
    )
    table = tables.write_table(out_dir / "differential.csv",
                               "differential", experiments.DifferentialRow.COLUMNS,
                               [r.as_row() for r in rows])
    return _finish(out_dir, "sweep", config, [table], started)


def cmd_qscan(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    result = experiments.q_scan(config, q_grid=experiments.q_grid_from_step(args.q_grid_step))
    curve = tables.write_table(
        out_dir / "qscan.csv", "qscan", ("q", "tc_mean", "tc_std"),
        [[float(q), float(mean), float(std)]
         for q, mean, std in zip(result.q_values, result.tc_mean, result.tc_std)],
    )
    summary = tables.write_table(
        out_dir / "qscan_summary.csv", "qscan_summary",
        ("n", "p", "lambda", "tc_quantum", "tc_independent", "crossover_q"),
        [[result.n, result.p, result.lam, result.tc_quantum,
          result.tc_independent, result.crossover_q]],
    )
    return _finish(out_dir, "qscan", config, [curve, summary], started)


def cmd_scaling(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    rows = experiments.scaling_study(
        config, n_list=args.n_list,
        q_grid=experiments.q_grid_from_step(args.q_grid_step),
        workers=args.workers,
    )
    table = tables.write_table(out_dir / "scaling.csv", "scaling",
                               experiments.ScalingRow.COLUMNS, [r.as_row() for r in rows])
    return _finish(out_dir, "scaling", config, [table], started)


def cmd_convergence(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    rows = experiments.convergence_study(
        config, checkpoints=args.checkpoints,
        q_grid=experiments.q_grid_from_step(args.q_grid_step),
    )
    table = tables.write_table(out_dir / "convergence.csv", "convergence",
                               experiments.ConvergenceRow.COLUMNS, [r.as_row() for r in rows])
    return _finish(out_dir, "convergence", config, [table], started)


def cmd_geometry(args) -> int:
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    points = experiments.geometry_trail(config, p_grid=args.p_grid, display_q=args.display_q)
    table = tables.write_table(out_dir / "geometry.csv", "geometry",
                               experiments.TrailPoint.COLUMNS, [pt.as_row() for pt in points])
    return _finish(out_dir, "geometry", config, [table], started)


def cmd_oracle_check(args) -> int:
    """Quantum-channel oracle equivalence plus Monte Carlo vs exact TV checks."""
    started = time.time()
    config = _resolve_config(args)
    out_dir = _resolve_out_dir(args)
    checks = []

    worst = 0.0
    for n in range(1, 5):
        for lam in np.linspace(0.0, 1.0, 11):
            chain = quantum.noisy_w_diagonal(n, float(lam))
            oracle = quantum.density_matrix_oracle(n, float(lam))
            worst = max(worst, float(np.max(np.abs(chain.probs - oracle.probs))))
    checks.append(("depolarize_vs_density_matrix_maxabs", worst, worst < 1e-12))

    small = config.with_(n=3, m=3, k=1, rounds=200_000, replicates=1, mode="monte_carlo")
    for strategy in ("independent", "shared_latent", "quantum"):
        cfg = small.with_(strategy=strategy)
        tv = exact.tv_distance(experiments.run_rounds(cfg, 0), exact.exact_joint(cfg))
        checks.append((f"tv_{strategy}", tv, tv < 0.01))

    table = tables.write_table(out_dir / "oracle_check.csv", "oracle_check",
                               ("check", "value", "passed"),
                               [[name, value, passed] for name, value, passed in checks])
    code = _finish(out_dir, "oracle-check", config, [table], started)
    failures = [name for name, _, passed in checks if not passed]
    for name, value, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'} {name} = {value:.3e}")
    if failures:
        print(f"oracle-check failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    return code


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "qscan": cmd_qscan,
    "scaling": cmd_scaling,
    "convergence": cmd_convergence,
    "geometry": cmd_geometry,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as err:
        for violation in err.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

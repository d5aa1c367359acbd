"""Experiment protocols: round simulation, replicate aggregation, baseline
optimization, differential grids, quality scans, scaling, convergence and
geometry trails.

Every protocol is a pure function of an ExperimentConfig: all randomness is
keyed through derive_seed, replicates and grid cells are independent work
units, and outputs are bit-identical across re-runs and worker counts.
Classical baselines are evaluated with the exact engine whenever the joint
is tractable; the Monte Carlo fallback reuses one set of draws across all q
values (common random numbers) so the optimum over q is not blurred by
sampling noise.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import exact, metrics, quantum, strategies, world
from .config import ExperimentConfig, require_valid, stream_generator

DEFAULT_Q_GRID_STEP = 0.01
DEFAULT_P_GRID = tuple(round(0.05 * i, 2) for i in range(11))
DEFAULT_LAMBDA_GRID = tuple(round(0.05 * i, 2) for i in range(11))
DEFAULT_N_LIST = (3, 4, 5, 6, 7)
DEFAULT_CHECKPOINTS = (250, 500, 1000, 2000, 5000, 10000, 20000)
DISPLAY_Q = 0.7


def q_grid_from_step(step: float = DEFAULT_Q_GRID_STEP) -> np.ndarray:
    """Inclusive [0, 1] grid; always contains q=0 (subsumes the independent
    baseline) and q=1 (the copy limit)."""
    count = int(round(1.0 / step))
    return np.round(np.linspace(0.0, 1.0, count + 1), 10)


# ---------------------------------------------------------------------------
# Round simulation


def simulate_actions(config: ExperimentConfig, replicate: int, rounds: int | None = None) -> np.ndarray:
    """Final (rounds, n) action block for one replicate.

    Per round: sample the hidden field, sample proposals from the configured
    strategy, push each agent's proposal through the intel channel. Streams
    are drawn as single round-major blocks, so prefixes of a longer run
    coincide with shorter runs of the same replicate.
    """
    require_valid(config)
    rounds = config.rounds if rounds is None else rounds
    n, m = config.n, config.m

    fields = world.sample_fields(stream_generator(config, "field", replicate), rounds, m, config.k)

    strat_rng = stream_generator(config, "strategy", replicate)
    if config.strategy == "independent":
        proposals = strategies.propose_independent_rounds(strat_rng, rounds, n, m)
    elif config.strategy == "shared_latent":
        latents = strategies.sample_latents(stream_generator(config, "latent", replicate), rounds, m)
        proposals = strategies.propose_shared_latent_rounds(latents, strat_rng, n, m, config.q)
    else:
        bits = quantum.sample_outcomes(stream_generator(config, "quantum", replicate), rounds, n, config.lam)
        proposals = strategies.propose_quantum_rounds(bits, strat_rng, m)

    intel_rng = stream_generator(config, "intel", replicate)
    return world.apply_intel(proposals, fields, config.p, config.eps, config.v, intel_rng)


def run_rounds(config: ExperimentConfig, replicate: int) -> metrics.JointHistogram:
    """Histogram of one replicate's final action profiles."""
    actions = simulate_actions(config, replicate)
    return metrics.JointHistogram.from_actions(actions, config.m)


def _run_rounds_unit(args):
    config, replicate = args
    return run_rounds(config, replicate)


def run_replicates(config: ExperimentConfig, workers: int = 1) -> list:
    """All replicate histograms, in replicate order."""
    units = [(config, r) for r in range(config.replicates)]
    return _map_units(_run_rounds_unit, units, workers)


def _map_units(fn, units, workers: int):
    if workers <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, units))


# ---------------------------------------------------------------------------
# Aggregation


@dataclass(frozen=True)
class SweepRow:
    """Replicate-aggregated metrics for one configuration, self-describing."""

    n: int
    m: int
    k: int
    p: float
    eps: float
    v: float
    lam: float
    q: float
    strategy: str
    rounds: int
    replicates: int
    seed_root: int
    mode: str
    apmi_mean: float
    apmi_std: float
    tc_mean: float
    tc_std: float
    coin_mean: float
    coin_std: float
    global_collision_mean: float
    global_collision_std: float
    product_coin_mean: float
    product_coin_std: float

    COLUMNS = (
        "n", "m", "k", "p", "eps", "v", "lambda", "q", "strategy", "rounds",
        "replicates", "seed_root", "mode",
        "apmi_mean", "apmi_std", "tc_mean", "tc_std", "coin_mean", "coin_std",
        "global_collision_mean", "global_collision_std",
        "product_coin_mean", "product_coin_std",
    )

    def as_row(self) -> list:
        return [
            self.n, self.m, self.k, self.p, self.eps, self.v, self.lam, self.q,
            self.strategy, self.rounds, self.replicates, self.seed_root, self.mode,
            self.apmi_mean, self.apmi_std, self.tc_mean, self.tc_std,
            self.coin_mean, self.coin_std,
            self.global_collision_mean, self.global_collision_std,
            self.product_coin_mean, self.product_coin_std,
        ]


def aggregate(config: ExperimentConfig, metric_sets) -> SweepRow:
    """Mean and sample standard deviation of each metric across replicates.

    A single replicate reports std 0.0 by convention; the replicates field in
    the row is the flag for that case.
    """
    metric_sets = list(metric_sets)
    if not metric_sets:
        raise ValueError("need at least one replicate")
    stats = {}
    for name in metrics.MetricSet.NAMES:
        values = np.array([getattr(ms, name) for ms in metric_sets])
        stats[name + "_mean"] = float(values.mean())
        stats[name + "_std"] = float(values.std(ddof=1)) if len(values) > 1 else 0.0
    return SweepRow(
        n=config.n, m=config.m, k=config.k, p=config.p, eps=config.eps,
        v=config.v, lam=config.lam, q=config.q, strategy=config.strategy,
        rounds=config.rounds, replicates=len(metric_sets), seed_root=config.seed_root,
        mode=config.mode, **stats,
    )


def simulate_row(config: ExperimentConfig, workers: int = 1):
    """One aggregated SweepRow plus the per-replicate histograms (Monte
    Carlo mode) or the exact MetricSet echoed with zero stds (exact mode)."""
    if config.mode == "exact":
        ms = exact.exact_metrics(config)
        return aggregate(config, [ms]), []
    hists = run_replicates(config, workers=workers)
    return aggregate(config, [metrics.metric_set(h) for h in hists]), hists


# ---------------------------------------------------------------------------
# Classical baseline optimization


_HIST_METRIC_FNS = {
    "apmi": metrics.apmi,
    "tc": metrics.total_correlation,
    "coin": metrics.pairwise_coincidence,
    "global_collision": metrics.global_collision,
    "product_coin": lambda h: metrics.product_baseline(h)[1],
}


def exact_tractable(config: ExperimentConfig) -> bool:
    return config.m**config.n <= exact.TRACTABLE_CELLS


def classical_exact_table(config: ExperimentConfig, q_grid) -> tuple:
    """(independent MetricSet, list of shared-latent MetricSets per q).

    Classical strategies never see the depolarizing strength, so one table
    serves a whole lambda column.
    """
    ind = exact.exact_metrics(config.with_(strategy="independent"))
    shared = [exact.exact_metrics(config.with_(strategy="shared_latent", q=float(q)))
              for q in q_grid]
    return ind, shared


def classical_mc_values(config: ExperimentConfig, metric_name: str, q_grid) -> tuple:
    """Monte Carlo fallback: (independent mean, per-q mean array).

    One set of field / latent / strategy / intel draws per replicate is
    reused across every q (common random numbers), so differences across q
    are not sampling artifacts.
    """
    fn = _HIST_METRIC_FNS[metric_name]
    n, m = config.n, config.m
    shared_vals = np.zeros((config.replicates, len(q_grid)))
    # Streams are keyed with q and lambda pinned to 0 so the common draws do
    # not depend on the incoming display parameters.
    base = config.with_(strategy="shared_latent", q=0.0, lam=0.0)
    for rep in range(config.replicates):
        fields = world.sample_fields(stream_generator(base, "field", rep), config.rounds, m, config.k)
        latents = strategies.sample_latents(stream_generator(base, "latent", rep), config.rounds, m)
        u_strat = strategies.shared_latent_draws(stream_generator(base, "strategy", rep), config.rounds, n)
        u_intel = world.intel_draws(stream_generator(base, "intel", rep), config.rounds, n)
        for qi, q in enumerate(q_grid):
            proposals = strategies.propose_shared_latent_given(latents, u_strat, m, float(q))
            actions = world.apply_intel_given(proposals, fields, config.p, config.eps, config.v, u_intel)
            shared_vals[rep, qi] = fn(metrics.JointHistogram.from_actions(actions, m))
    if float(q_grid[0]) == 0.0:
        # q=0 shared-latent coincides in law with independent sampling.
        ind_mean = float(shared_vals[:, 0].mean())
    else:
        ind_cfg = config.with_(strategy="independent")
        ind_mean = float(np.mean([fn(run_rounds(ind_cfg, rep)) for rep in range(config.replicates)]))
    return ind_mean, shared_vals.mean(axis=0)


def best_classical(config: ExperimentConfig, metric_name: str, q_grid=None) -> tuple:
    """Strongest classical value of one metric at this (p, n, ...) point.

    Returns (value, best_q) where value = max(independent, max_q shared) and
    ties resolve to the smallest q. best_q is reported for the shared-latent
    family; when the independent baseline strictly wins, best_q is the grid q
    achieving the shared maximum anyway (the value field is what defines the
    differential).
    """
    q_grid = q_grid_from_step() if q_grid is None else np.asarray(q_grid, dtype=float)
    if q_grid.size == 0:
        raise ValueError("q grid must be nonempty")
    if exact_tractable(config):
        ind, shared = classical_exact_table(config, q_grid)
        ind_val = getattr(ind, metric_name)
        shared_vals = np.array([getattr(ms, metric_name) for ms in shared])
    else:
        ind_val, shared_vals = classical_mc_values(config, metric_name, q_grid)
    # ties resolve to the smallest q; 1e-12 absorbs float noise between
    # analytically equal grid values
    best_idx = int(np.argmax(shared_vals >= shared_vals.max() - 1e-12))
    return float(max(ind_val, shared_vals[best_idx])), float(q_grid[best_idx])


# ---------------------------------------------------------------------------
# Strategy evaluation shared by the studies


def strategy_metrics(config: ExperimentConfig) -> metrics.MetricSet:
    """MetricSet for one strategy at one point, honoring config.mode.

    Exact mode computes the dense joint; Monte Carlo mode averages the
    plug-in metrics over replicates.
    """
    if config.mode == "exact":
        return exact.exact_metrics(config)
    sets = [metrics.metric_set(h) for h in run_replicates(config)]
    means = {name: float(np.mean([getattr(s, name) for s in sets])) for name in metrics.MetricSet.NAMES}
    return metrics.MetricSet(marginal=np.mean([s.marginal for s in sets], axis=0), **means)


# ---------------------------------------------------------------------------
# Differential grid


@dataclass(frozen=True)
class DifferentialRow:
    """Quantum-minus-best-classical differentials at one (p, lambda) cell."""

    p: float
    lam: float
    n: int
    delta_apmi: float
    delta_tc: float
    quantum_apmi: float
    quantum_tc: float
    best_classical_apmi: float
    best_classical_tc: float
    best_q_apmi: float
    best_q_tc: float

    COLUMNS = (
        "p", "lambda", "n", "delta_apmi", "delta_tc", "quantum_apmi",
        "quantum_tc", "best_classical_apmi", "best_classical_tc",
        "best_q_apmi", "best_q_tc",
    )

    def as_row(self) -> list:
        return [self.p, self.lam, self.n, self.delta_apmi, self.delta_tc,
                self.quantum_apmi, self.quantum_tc, self.best_classical_apmi,
                self.best_classical_tc, self.best_q_apmi, self.best_q_tc]


def _differential_column(args):
    """All lambda rows for one p value (classical table computed once)."""
    config, p, lambda_grid, q_grid = args
    at_p = config.with_(p=float(p))
    apmi_best, apmi_q = best_classical(at_p, "apmi", q_grid)
    tc_best, tc_q = best_classical(at_p, "tc", q_grid)
    rows = []
    for lam in lambda_grid:
        quant = strategy_metrics(at_p.with_(strategy="quantum", lam=float(lam)))
        rows.append(DifferentialRow(
            p=float(p), lam=float(lam), n=config.n,
            delta_apmi=quant.apmi - apmi_best,
            delta_tc=quant.tc - tc_best,
            quantum_apmi=quant.apmi, quantum_tc=quant.tc,
            best_classical_apmi=apmi_best, best_classical_tc=tc_best,
            best_q_apmi=apmi_q, best_q_tc=tc_q,
        ))
    return rows


def differential_grid(config: ExperimentConfig, p_grid=None, lambda_grid=None,
                      q_grid=None, workers: int = 1) -> list:
    """Delta-APMI and Delta-TC rows over a (p, lambda) grid.

    The classical side ignores lambda (noise applies to the quantum state
    only) but is re-emitted per row for grid completeness.
    """
    p_grid = DEFAULT_P_GRID if p_grid is None else p_grid
    lambda_grid = DEFAULT_LAMBDA_GRID if lambda_grid is None else lambda_grid
    q_grid = q_grid_from_step() if q_grid is None else q_grid
    units = [(config, p, tuple(lambda_grid), tuple(q_grid)) for p in p_grid]
    columns = _map_units(_differential_column, units, workers)
    return [row for column in columns for row in column]


# ---------------------------------------------------------------------------
# Shared-latent quality scan


@dataclass(frozen=True)
class QScanResult:
    """TC of the shared-latent family across q, with the quantum reference."""

    n: int
    p: float
    lam: float
    q_values: np.ndarray
    tc_mean: np.ndarray
    tc_std: np.ndarray
    tc_quantum: float
    tc_independent: float
    crossover_q: float | None  # smallest grid q with TC_shared(q) >= TC_quantum


def q_scan(config: ExperimentConfig, q_grid=None) -> QScanResult:
    q_grid = q_grid_from_step() if q_grid is None else np.asarray(q_grid, dtype=float)
    quant = strategy_metrics(config.with_(strategy="quantum"))
    if config.mode == "exact":
        ind, shared = classical_exact_table(config, q_grid)
        tc_mean = np.array([ms.tc for ms in shared])
        tc_std = np.zeros_like(tc_mean)
        tc_ind = ind.tc
    else:
        per_rep = _shared_tc_per_replicate(config, q_grid)
        tc_mean = per_rep.mean(axis=0)
        tc_std = per_rep.std(axis=0, ddof=1) if per_rep.shape[0] > 1 else np.zeros(len(q_grid))
        tc_ind = float(tc_mean[0]) if float(q_grid[0]) == 0.0 else \
            strategy_metrics(config.with_(strategy="independent")).tc
    above = np.nonzero(tc_mean >= quant.tc)[0]
    crossover = float(q_grid[above[0]]) if above.size else None
    return QScanResult(
        n=config.n, p=config.p, lam=config.lam,
        q_values=np.asarray(q_grid, dtype=float), tc_mean=tc_mean, tc_std=tc_std,
        tc_quantum=quant.tc, tc_independent=tc_ind, crossover_q=crossover,
    )


def _shared_tc_per_replicate(config: ExperimentConfig, q_grid) -> np.ndarray:
    """(replicates, len(q_grid)) plug-in TC with common random numbers."""
    base = config.with_(strategy="shared_latent", q=0.0, lam=0.0)
    out = np.zeros((config.replicates, len(q_grid)))
    for rep in range(config.replicates):
        fields = world.sample_fields(stream_generator(base, "field", rep), config.rounds, config.m, config.k)
        latents = strategies.sample_latents(stream_generator(base, "latent", rep), config.rounds, config.m)
        u_strat = strategies.shared_latent_draws(stream_generator(base, "strategy", rep), config.rounds, config.n)
        u_intel = world.intel_draws(stream_generator(base, "intel", rep), config.rounds, config.n)
        for qi, q in enumerate(q_grid):
            proposals = strategies.propose_shared_latent_given(latents, u_strat, config.m, float(q))
            actions = world.apply_intel_given(proposals, fields, config.p, config.eps, config.v, u_intel)
            out[rep, qi] = metrics.total_correlation(metrics.JointHistogram.from_actions(actions, config.m))
    return out


# ---------------------------------------------------------------------------
# Scaling and convergence studies


@dataclass(frozen=True)
class ScalingRow:
    n: int
    delta_apmi: float
    delta_tc: float
    quantum_apmi: float
    quantum_tc: float
    best_classical_apmi: float
    best_classical_tc: float
    best_q_apmi: float
    best_q_tc: float

    COLUMNS = ("n", "delta_apmi", "delta_tc", "quantum_apmi", "quantum_tc",
               "best_classical_apmi", "best_classical_tc", "best_q_apmi", "best_q_tc")

    def as_row(self) -> list:
        return [self.n, self.delta_apmi, self.delta_tc, self.quantum_apmi,
                self.quantum_tc, self.best_classical_apmi, self.best_classical_tc,
                self.best_q_apmi, self.best_q_tc]


def _scaling_unit(args):
    config, n, q_grid = args
    at_n = config.with_(n=int(n))
    if not exact_tractable(at_n) and at_n.mode == "exact":
        at_n = at_n.with_(mode="monte_carlo")  # documented fallback
    apmi_best, apmi_q = best_classical(at_n, "apmi", q_grid)
    tc_best, tc_q = best_classical(at_n, "tc", q_grid)
    quant = strategy_metrics(at_n.with_(strategy="quantum"))
    return ScalingRow(
        n=int(n),
        delta_apmi=quant.apmi - apmi_best, delta_tc=quant.tc - tc_best,
        quantum_apmi=quant.apmi, quantum_tc=quant.tc,
        best_classical_apmi=apmi_best, best_classical_tc=tc_best,
        best_q_apmi=apmi_q, best_q_tc=tc_q,
    )


def scaling_study(config: ExperimentConfig, n_list=None, q_grid=None, workers: int = 1) -> list:
    """Differentials per team size at the configured (p, lambda) point."""
    n_list = DEFAULT_N_LIST if n_list is None else n_list
    q_grid = q_grid_from_step() if q_grid is None else q_grid
    units = [(config, n, tuple(q_grid)) for n in n_list]
    return _map_units(_scaling_unit, units, workers)


@dataclass(frozen=True)
class ConvergenceRow:
    rounds: int
    delta_tc: float              # pooled-histogram estimate
    delta_tc_replicate_mean: float
    delta_tc_std: float          # sample std of per-replicate estimates
    tc_quantum: float
    best_classical_tc: float
    best_q_tc: float
    replicates: int

    COLUMNS = ("rounds", "delta_tc", "delta_tc_replicate_mean", "delta_tc_std",
               "tc_quantum", "best_classical_tc", "best_q_tc", "replicates")

    def as_row(self) -> list:
        return [self.rounds, self.delta_tc, self.delta_tc_replicate_mean,
                self.delta_tc_std, self.tc_quantum, self.best_classical_tc,
                self.best_q_tc, self.replicates]


def convergence_study(config: ExperimentConfig, checkpoints=None, q_grid=None) -> list:
    """Delta-TC of the quantum strategy on growing prefixes of each
    replicate's round stream.

    The headline estimate at each checkpoint pools all replicates' prefixes
    into one histogram (observables are computed from the aggregated action
    arrays); the per-replicate estimates provide the error bar. The classical
    reference is exact when tractable, otherwise a common-random-numbers
    Monte Carlo optimum at the largest checkpoint.
    """
    checkpoints = DEFAULT_CHECKPOINTS if checkpoints is None else tuple(int(c) for c in checkpoints)
    if any(c2 <= c1 for c1, c2 in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    q_grid = q_grid_from_step() if q_grid is None else q_grid
    r_max = checkpoints[-1]

    ref_config = config.with_(rounds=r_max)
    tc_best, tc_q = best_classical(ref_config, "tc", q_grid)

    quant = config.with_(strategy="quantum")
    action_blocks = [simulate_actions(quant, rep, rounds=r_max) for rep in range(config.replicates)]

    rows = []
    for checkpoint in checkpoints:
        per_rep = [metrics.JointHistogram.from_actions(block[:checkpoint], config.m)
                   for block in action_blocks]
        pooled = per_rep[0]
        for h in per_rep[1:]:
            pooled = pooled + h
        tc_pooled = metrics.total_correlation(pooled)
        tc_reps = np.array([metrics.total_correlation(h) for h in per_rep])
        rows.append(ConvergenceRow(
            rounds=checkpoint,
            delta_tc=tc_pooled - tc_best,
            delta_tc_replicate_mean=float(tc_reps.mean()) - tc_best,
            delta_tc_std=float(tc_reps.std(ddof=1)) if len(tc_reps) > 1 else 0.0,
            tc_quantum=tc_pooled,
            best_classical_tc=tc_best,
            best_q_tc=tc_q,
            replicates=config.replicates,
        ))
    return rows


# ---------------------------------------------------------------------------
# Geometry trails


@dataclass(frozen=True)
class TrailPoint:
    strategy: str
    q: float
    lam: float
    p: float
    coin: float
    apmi: float
    product_coin: float

    COLUMNS = ("strategy", "q", "lambda", "p", "coin", "apmi", "product_coin")

    def as_row(self) -> list:
        return [self.strategy, self.q, self.lam, self.p, self.coin, self.apmi,
                self.product_coin]


def geometry_trail(config: ExperimentConfig, p_grid=None, display_q: float = DISPLAY_Q) -> list:
    """(coincidence, APMI) trail per strategy as the intel rate varies, with
    each strategy's own product-baseline coincidence level."""
    p_grid = DEFAULT_P_GRID if p_grid is None else p_grid
    variants = (
        config.with_(strategy="independent", q=0.0, lam=0.0),
        config.with_(strategy="shared_latent", q=display_q, lam=0.0),
        config.with_(strategy="quantum"),
    )
    points = []
    for variant in variants:
        for p in p_grid:
            ms = strategy_metrics(variant.with_(p=float(p)))
            points.append(TrailPoint(
                strategy=variant.strategy, q=variant.q, lam=variant.lam,
                p=float(p), coin=ms.coin, apmi=ms.apmi, product_coin=ms.product_coin,
            ))
    return points

"""Experiment protocols: determinism, aggregation, baselines, studies."""

import numpy as np
import pytest

from hfc.config import ExperimentConfig
from hfc import exact, experiments, metrics
from hfc.experiments import (
    aggregate,
    best_classical,
    convergence_study,
    differential_grid,
    geometry_trail,
    q_grid_from_step,
    q_scan,
    run_replicates,
    run_rounds,
    scaling_study,
    simulate_actions,
)


def cfg(**kw):
    base = dict(n=3, m=5, k=2, p=0.25, eps=0.1, v=1.0, lam=0.0, q=0.7,
                strategy="quantum", rounds=2000, replicates=4, seed_root=7,
                mode="monte_carlo")
    base.update(kw)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# run_rounds


def test_zero_rounds_gives_empty_histogram():
    hist = run_rounds(cfg(rounds=0), 0)
    assert hist.total == 0


def test_run_rounds_deterministic():
    a = run_rounds(cfg(), 0)
    b = run_rounds(cfg(), 0)
    assert a.counts == b.counts


def test_replicates_differ():
    a = run_rounds(cfg(), 0)
    b = run_rounds(cfg(), 1)
    assert a.counts != b.counts


def test_seed_root_changes_everything():
    a = run_rounds(cfg(seed_root=1), 0)
    b = run_rounds(cfg(seed_root=2), 0)
    assert a.counts != b.counts


@pytest.mark.parametrize("strategy", ["independent", "shared_latent", "quantum"])
def test_prefix_property(strategy):
    config = cfg(strategy=strategy, lam=0.2)
    short = simulate_actions(config, 1, rounds=500)
    long = simulate_actions(config, 1, rounds=2000)
    assert (short == long[:500]).all()


def test_run_replicates_order_and_determinism():
    hists = run_replicates(cfg(replicates=3))
    again = run_replicates(cfg(replicates=3))
    assert all(a.counts == b.counts for a, b in zip(hists, again))


# ---------------------------------------------------------------------------
# aggregate


def test_aggregate_single_replicate_flags_zero_std():
    config = cfg(replicates=1)
    row = aggregate(config, [metrics.metric_set(run_rounds(config, 0))])
    assert row.replicates == 1
    assert row.tc_std == 0.0 and row.apmi_std == 0.0


def test_aggregate_identical_replicates_zero_std():
    config = cfg()
    ms = metrics.metric_set(run_rounds(config, 0))
    row = aggregate(config, [ms] * 8)
    assert row.replicates == 8
    assert row.tc_std == 0.0
    assert row.tc_mean == pytest.approx(ms.tc)


def test_aggregate_plugin_bias_level():
    # independent, p=0: true TC is 0, the plug-in mean sits near the
    # (cells-1)/(2R ln 2) bias level and decreases with R
    means = {}
    for rounds in (500, 5000):
        config = cfg(strategy="independent", p=0.0, n=3, m=3, k=1,
                     rounds=rounds, replicates=6)
        sets = [metrics.metric_set(h) for h in run_replicates(config)]
        means[rounds] = np.mean([s.tc for s in sets])
        bias = (27 - 1) / (2 * rounds * np.log(2))
        assert 0.2 * bias < means[rounds] < 3 * bias
    assert means[5000] < means[500]


# ---------------------------------------------------------------------------
# best_classical


def test_best_classical_grid_of_zero_is_independent():
    config = cfg(mode="exact")
    value, best_q = best_classical(config, "tc", q_grid=[0.0])
    ind = exact.exact_metrics(config.with_(strategy="independent")).tc
    assert value == pytest.approx(ind, abs=1e-12)
    assert best_q == 0.0


def test_best_classical_subsumes_independent():
    config = cfg(mode="exact")
    for metric_name in ("apmi", "tc", "coin"):
        value, _ = best_classical(config, metric_name, q_grid=q_grid_from_step(0.05))
        ind = getattr(exact.exact_metrics(config.with_(strategy="independent")), metric_name)
        assert value >= ind - 1e-12


def test_best_classical_tc_monotone_reaches_copy_limit():
    config = cfg(mode="exact", p=0.0)
    grid = q_grid_from_step(0.05)
    _, shared = experiments.classical_exact_table(config, grid)
    tc_values = [ms.tc for ms in shared]
    assert all(b >= a - 1e-12 for a, b in zip(tc_values, tc_values[1:]))
    value, best_q = best_classical(config, "tc", grid)
    assert best_q == 1.0
    assert value == pytest.approx(2 * np.log2(5), abs=1e-12)


def test_best_classical_tie_breaks_to_smallest_q():
    # product_coin is constant in q at p=0 (uniform marginal), so the
    # argmax must resolve to the first grid point
    config = cfg(mode="exact", p=0.0)
    _, best_q = best_classical(config, "product_coin", q_grid=q_grid_from_step(0.25))
    assert best_q == 0.0


def test_best_classical_empty_grid_rejected():
    with pytest.raises(ValueError):
        best_classical(cfg(mode="exact"), "tc", q_grid=[])


# ---------------------------------------------------------------------------
# differential grid


def test_differential_rows_recompute():
    config = cfg(mode="exact")
    rows = differential_grid(config, p_grid=[0.0, 0.25], lambda_grid=[0.0, 0.2],
                             q_grid=q_grid_from_step(0.1))
    assert len(rows) == 4
    for row in rows:
        assert row.delta_apmi == pytest.approx(row.quantum_apmi - row.best_classical_apmi, abs=1e-12)
        assert row.delta_tc == pytest.approx(row.quantum_tc - row.best_classical_tc, abs=1e-12)


def test_differential_classical_side_ignores_lambda():
    config = cfg(mode="exact")
    rows = differential_grid(config, p_grid=[0.25], lambda_grid=[0.0, 0.3],
                             q_grid=q_grid_from_step(0.2))
    assert rows[0].best_classical_tc == rows[1].best_classical_tc
    assert rows[0].quantum_tc != rows[1].quantum_tc


def test_differential_single_point_matches_scaling():
    config = cfg(mode="exact", p=0.25, lam=0.0)
    grid_row = differential_grid(config, p_grid=[0.25], lambda_grid=[0.0],
                                 q_grid=q_grid_from_step(0.1))[0]
    scaling_row = scaling_study(config, n_list=[3], q_grid=q_grid_from_step(0.1))[0]
    assert grid_row.delta_tc == pytest.approx(scaling_row.delta_tc, abs=1e-12)
    assert grid_row.delta_apmi == pytest.approx(scaling_row.delta_apmi, abs=1e-12)


def test_differential_worker_count_invariance():
    config = cfg(mode="exact")
    kw = dict(p_grid=[0.0, 0.2, 0.4], lambda_grid=[0.0, 0.2], q_grid=q_grid_from_step(0.2))
    serial = differential_grid(config, workers=1, **kw)
    parallel = differential_grid(config, workers=3, **kw)
    assert serial == parallel


# ---------------------------------------------------------------------------
# q scan


def test_q_scan_exact_monotone_and_crossover():
    result = q_scan(cfg(mode="exact", p=0.0), q_grid=q_grid_from_step(0.02))
    diffs = np.diff(result.tc_mean)
    assert (diffs >= -1e-12).all()  # nondecreasing at p=0, lambda=0
    assert (result.tc_std == 0).all()
    assert result.crossover_q is not None
    idx = np.where(result.q_values == result.crossover_q)[0][0]
    assert result.tc_mean[idx] >= result.tc_quantum
    if idx > 0:
        assert result.tc_mean[idx - 1] < result.tc_quantum


def test_q_scan_monte_carlo_has_stds():
    result = q_scan(cfg(rounds=400, replicates=3), q_grid=q_grid_from_step(0.5))
    assert result.tc_std.shape == (3,)
    assert (result.tc_std > 0).any()


# ---------------------------------------------------------------------------
# scaling and convergence


def test_scaling_two_agent_identity():
    # for n=2, TC and pairwise MI coincide, so the differentials do too
    row = scaling_study(cfg(mode="exact"), n_list=[2], q_grid=q_grid_from_step(0.1))[0]
    assert row.quantum_tc == pytest.approx(row.quantum_apmi, abs=1e-12)
    assert row.delta_tc == pytest.approx(row.delta_apmi, abs=1e-12)


def test_convergence_checkpoints_validated():
    with pytest.raises(ValueError):
        convergence_study(cfg(), checkpoints=[100, 100])


def test_convergence_prefix_consistency_and_sign():
    config = cfg(n=3, replicates=3)
    rows = convergence_study(config, checkpoints=[200, 500, 1000],
                             q_grid=q_grid_from_step(0.1))
    assert [r.rounds for r in rows] == [200, 500, 1000]
    again = convergence_study(config, checkpoints=[200, 500, 1000],
                              q_grid=q_grid_from_step(0.1))
    assert rows == again
    # the classical reference is shared by all checkpoints
    assert len({r.best_classical_tc for r in rows}) == 1
    for row in rows:
        assert row.delta_tc < 0
        assert row.delta_tc_std >= 0


def test_monte_carlo_means_match_exact_values():
    # Coincidence-type metrics are unbiased: agreement within 3 replicate-std
    # (plus a tiny floor for near-zero-variance entries). Entropy-based
    # metrics carry the plug-in bias, bounded by (occupied-1)/(2R ln2).
    config = cfg(strategy="quantum", p=0.25, lam=0.1, rounds=2000, replicates=8)
    hists = run_replicates(config)
    sets = [metrics.metric_set(h) for h in hists]
    ms_exact = exact.exact_metrics(config.with_(mode="exact"))
    for name in ("coin", "global_collision", "product_coin"):
        values = np.array([getattr(s, name) for s in sets])
        band = 3 * values.std(ddof=1) + 1e-3
        assert abs(values.mean() - getattr(ms_exact, name)) < band, name
    occupied = np.mean([len(h.counts) for h in hists])
    bias_allowance = occupied / (2 * config.rounds * np.log(2))
    for name in ("tc", "apmi"):
        values = np.array([getattr(s, name) for s in sets])
        band = 3 * values.std(ddof=1) + bias_allowance
        assert abs(values.mean() - getattr(ms_exact, name)) < band, name


# ---------------------------------------------------------------------------
# geometry


def test_geometry_trail_contents():
    points = geometry_trail(cfg(mode="exact"), p_grid=[0.0, 0.25], display_q=0.7)
    strategies_seen = {pt.strategy for pt in points}
    assert strategies_seen == {"independent", "shared_latent", "quantum"}
    by_key = {(pt.strategy, pt.p): pt for pt in points}
    # quantum sits below its own product baseline at lambda=0
    for p in (0.0, 0.25):
        pt = by_key[("quantum", p)]
        assert pt.coin < pt.product_coin
    # the classical trail exceeds the independent one in both coordinates at p=0
    shared = by_key[("shared_latent", 0.0)]
    ind = by_key[("independent", 0.0)]
    assert shared.coin > ind.coin
    assert shared.apmi > ind.apmi

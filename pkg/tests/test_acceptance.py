"""Acceptance suite: one test per criterion, each printing a pass/fail line.

A9's stability clause is implemented at its stated tolerance and fails by
construction: the drift of the plug-in Delta-TC estimate between R=2000 and
R=20000 is the estimator's own bias (~0.12 bits on pooled histograms, decaying
like 1/R), which exceeds 2 replicate-std (~0.024 bits) at the pinned operating
point no matter how the estimate is read. See the failure message for numbers.
"""

import itertools
import time

import numpy as np
import pytest
from scipy import stats

from hfc.config import ExperimentConfig, stream_generator
from hfc import exact, experiments, metrics, quantum
from hfc.cli import main as cli_main
from hfc.tables import read_table


def report(tag, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {tag}: {detail}")
    assert ok, f"{tag}: {detail}"


def base_config(**kw):
    cfg = dict(n=3, m=5, k=2, p=0.25, eps=0.1, v=1.0, lam=0.0, q=0.7,
               strategy="quantum", rounds=2000, replicates=8, seed_root=2024,
               mode="exact")
    cfg.update(kw)
    return ExperimentConfig(**cfg)


LAMBDA_GRID = [round(0.1 * i, 1) for i in range(11)]
P_GRID = [round(0.05 * i, 2) for i in range(11)]


def test_a1_quantum_channel_vs_density_matrix_oracle():
    started = time.monotonic()
    worst = 0.0
    for n in (1, 2, 3, 4):
        for lam in LAMBDA_GRID:
            chain = quantum.noisy_w_diagonal(n, lam)
            oracle = quantum.density_matrix_oracle(n, lam)
            worst = max(worst, float(np.abs(chain.probs - oracle.probs).max()))
    elapsed = time.monotonic() - started
    report("A1 channel-vs-oracle", worst < 1e-12 and elapsed < 10.0,
           f"max-abs={worst:.2e} over N in 1..4 x 11 lambdas, {elapsed:.1f}s")


def test_a2_sampler_equivalence_weight_classes():
    started = time.monotonic()
    n, draws = 10, 1_000_000
    weights_of = np.array([bin(i).count("1") for i in range(2**n)])
    worst_p = 1.0
    for lam in (0.0, 0.3, 1.0):
        rng = stream_generator(base_config(n=n, lam=lam), "quantum", 0)
        bits = quantum.sample_outcomes(rng, draws, n, lam)
        observed = np.bincount(bits.sum(axis=1), minlength=n + 1)
        dist = quantum.noisy_w_diagonal(n, lam)
        expected = np.array([dist.probs[weights_of == w].sum() for w in range(n + 1)]) * draws
        live = expected > 0
        assert observed[~live].sum() == 0  # impossible classes never sampled
        if live.sum() > 1:
            worst_p = min(worst_p, stats.chisquare(observed[live], expected[live]).pvalue)
    elapsed = time.monotonic() - started
    report("A2 sampler-equivalence", worst_p > 1e-3 and elapsed < 30.0,
           f"min chi-square p-value={worst_p:.4f} at N=10, 1e6 draws, {elapsed:.1f}s")


def test_a3_exact_closed_forms_no_intel():
    failures = []
    for n in (3, 5):
        cfg = base_config(n=n, p=0.0)
        for q in (0.3, 0.7):
            got = exact.exact_metrics(cfg.with_(strategy="shared_latent", q=q)).coin
            want = q * q + (1 - q * q) / 5
            if abs(got - want) > 1e-12:
                failures.append(f"coin(N={n},q={q})")
        tc = exact.exact_metrics(cfg.with_(strategy="shared_latent", q=1.0)).tc
        if abs(tc - (n - 1) * np.log2(5)) > 1e-12:
            failures.append(f"copyTC(N={n})")
        ms = exact.exact_metrics(cfg.with_(strategy="quantum", lam=0.0))
        if abs(ms.coin - (n - 2) / (n * 4)) > 1e-12:
            failures.append(f"quantumCoin(N={n})")
        if ms.global_collision != 0.0:
            failures.append(f"collision(N={n})")
        joint = exact.exact_joint(cfg.with_(strategy="quantum", lam=0.0)).probs
        for profile in itertools.product(range(5), repeat=n):
            leaders = sum(1 for a in profile if a == 0)
            if (joint[profile] > 0) != (leaders == 1):
                failures.append(f"support(N={n})")
                break
    report("A3 exact-closed-forms", not failures, f"violations={failures or 'none'}")


def test_a4_monte_carlo_consistency_and_rate():
    cfg = base_config(n=3, m=3, k=2, p=0.25, lam=0.2, q=0.7,
                      rounds=1_000_000, replicates=1, mode="monte_carlo")
    prefixes = [1_000, 10_000, 100_000, 1_000_000]
    details = []
    ok = True
    for strategy in ("independent", "shared_latent", "quantum"):
        variant = cfg.with_(strategy=strategy)
        joint = exact.exact_joint(variant)
        actions = experiments.simulate_actions(variant, 0)
        tvs = [exact.tv_distance(metrics.JointHistogram.from_actions(actions[:r], 3), joint)
               for r in prefixes]
        slope = float(np.polyfit(np.log10(prefixes), np.log10(tvs), 1)[0])
        details.append(f"{strategy}: TV={tvs[-1]:.4f} slope={slope:+.3f}")
        ok = ok and tvs[-1] < 0.005 and -0.6 <= slope <= -0.4
    report("A4 monte-carlo-consistency", ok, "; ".join(details))


def test_a5_collision_suppression_below_product_baseline():
    details = []
    ok = True
    for n in (3, 5):
        for p in P_GRID[: P_GRID.index(0.5) + 1]:
            ms = exact.exact_metrics(base_config(n=n, p=p, strategy="quantum", lam=0.0))
            ok = ok and ms.coin < ms.product_coin
        details.append(f"N={n} all p in 0..0.5")
    ref = exact.exact_metrics(base_config(n=3, p=0.0, strategy="quantum", lam=0.0))
    ok = ok and abs(ref.coin - 1 / 12) < 1e-12 and abs(ref.product_coin - 2 / 9) < 1e-12
    report("A5 collision-suppression", ok,
           f"{'; '.join(details)}; at (N=3,p=0): {ref.coin:.6f} < {ref.product_coin:.6f}")


def test_a6_negative_differentials_default_grid():
    started = time.monotonic()
    ok = True
    details = []
    for n in (3, 5):
        rows = experiments.differential_grid(base_config(n=n))
        worst_tc = max(r.delta_tc for r in rows)
        worst_apmi = max(r.delta_apmi for r in rows)
        details.append(f"N={n}: max dTC={worst_tc:.3f}, max dAPMI={worst_apmi:.3f}")
        ok = ok and worst_tc < 0.0 and worst_apmi <= 0.01
    elapsed = time.monotonic() - started
    report("A6 negative-differentials", ok and elapsed < 300.0,
           f"{'; '.join(details)}; {elapsed:.0f}s over 11x11 cells")


def test_a7_scaling_trend():
    rows = experiments.scaling_study(base_config(p=0.25, lam=0.0), n_list=(3, 4, 5, 6, 7))
    dtc = [r.delta_tc for r in rows]
    dapmi = [r.delta_apmi for r in rows]
    decreasing = all(b < a for a, b in zip(dtc, dtc[1:]))
    separation = abs(dtc[-1] - dtc[0]) > 3 * abs(dapmi[-1] - dapmi[0])
    report("A7 scaling-trend", decreasing and separation,
           f"dTC={['%.2f' % d for d in dtc]}, |dTC(7)-dTC(3)|={abs(dtc[-1]-dtc[0]):.2f} "
           f"> 3x|dAPMI(7)-dAPMI(3)|={3*abs(dapmi[-1]-dapmi[0]):.2f}")


def test_a8_q_scan_crossovers():
    crossovers = {}
    for n in (3, 5):
        result = experiments.q_scan(base_config(n=n))
        crossovers[n] = result.crossover_q
    ok = (
        crossovers[3] is not None and crossovers[5] is not None
        and crossovers[5] < crossovers[3]
        and 0.5 <= crossovers[3] <= 0.8
        and 0.35 <= crossovers[5] <= 0.65
    )
    report("A8 q-scan-crossovers", ok, f"q*(3)={crossovers[3]} in [0.5,0.8], "
           f"q*(5)={crossovers[5]} in [0.35,0.65], ordered")


@pytest.fixture(scope="module")
def convergence_rows():
    cfg = base_config(n=5, p=0.25, lam=0.0, mode="monte_carlo")
    return experiments.convergence_study(
        cfg, checkpoints=(250, 500, 1000, 2000, 5000, 10000, 20000))


def test_a9_convergence_sign(convergence_rows):
    late = [r for r in convergence_rows if r.rounds >= 500]
    ok = all(r.delta_tc < 0 and r.delta_tc_replicate_mean < 0 for r in late)
    report("A9 convergence-sign", ok,
           f"delta-TC negative at every checkpoint >= 500 "
           f"(range {min(r.delta_tc for r in late):.2f}..{max(r.delta_tc for r in late):.2f})")


def test_a9_convergence_stability(convergence_rows):
    at = {r.rounds: r for r in convergence_rows}
    drift = abs(at[2000].delta_tc - at[20000].delta_tc)
    band = 2 * at[2000].delta_tc_std
    report(
        "A9 convergence-stability", drift <= band,
        f"|dTC(2000)-dTC(20000)|={drift:.4f} bits vs 2*replicate-std={band:.4f}. "
        f"This clause cannot hold with the pinned plug-in estimator: the drift is "
        f"the estimator's own finite-sample bias (support ~2700 cells; bias ~ "
        f"support/(2*samples*ln2), decaying like 1/R) while replicate-std only "
        f"captures sampling spread (~1/sqrt(R)). Per-replicate-mean reading drifts "
        f"{abs(at[2000].delta_tc_replicate_mean - at[20000].delta_tc_replicate_mean):.4f} "
        f"bits (worse). A bias-corrected estimator would pass but is excluded by "
        f"design. See notes/decisions.md."
    )


def test_a10_sweep_determinism_and_worker_invariance(tmp_path):
    args = ["sweep", "--n", "3", "--m", "5", "--k", "2", "--mode", "exact",
            "--p-grid", "0,0.25,0.5", "--lambda-grid", "0,0.25",
            "--q-grid-step", "0.05", "--seed", "2024"]
    outs = {}
    for name, extra in (("a", []), ("b", []), ("c", ["--workers", "2"])):
        out = tmp_path / name
        assert cli_main([*args, *extra, "--out-dir", str(out)]) == 0
        outs[name] = (out / "differential.csv").read_bytes()
    ok = outs["a"] == outs["b"] == outs["c"]
    report("A10 determinism", ok,
           f"2 identical runs byte-identical={outs['a'] == outs['b']}, "
           f"worker-count invariant={outs['a'] == outs['c']}")


def test_a11_tc_factorization_property():
    ok = True
    details = []
    for kw in ({"p": 0.0}, {"p": 0.5, "v": 0.0}, {"p": 0.5, "eps": 0.5}):
        cfg = base_config(strategy="independent", **{"eps": 0.1, "v": 1.0, **kw})
        tc = exact.exact_metrics(cfg).tc
        details.append(f"{kw}: TC={tc:.1e}")
        ok = ok and tc < 1e-12
    mediated = exact.exact_metrics(
        base_config(strategy="independent", p=0.3, v=1.0, eps=0.1, k=2)).tc
    details.append(f"field-mediated: TC={mediated:.1e}")
    ok = ok and mediated > 1e-9
    report("A11 tc-factorization", ok, "; ".join(details))

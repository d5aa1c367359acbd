"""Shared-latent quality scan: how much copying buys the quantum TC level.

TC_shared(q) rises monotonically toward the copy limit; the crossover q* is
the smallest coordination strength at which the classical family matches the
quantum total correlation - deep in the high-collision regime.
"""

from hfc import ExperimentConfig, q_scan
from hfc.exact import exact_metrics

for n in (3, 5):
    config = ExperimentConfig(n=n, m=5, k=2, p=0.25, lam=0.0, rounds=0,
                              replicates=1, mode="exact")
    result = q_scan(config)
    print(f"\nN={n}: TC_quantum = {result.tc_quantum:.4f} bits, "
          f"crossover q* = {result.crossover_q}")
    print(f"{'q':>5} {'TC_shared':>10}  {'coin':>7}")
    for q in (0.0, 0.2, 0.4, 0.6, result.crossover_q, 0.8, 1.0):
        idx = int(round(q * (len(result.q_values) - 1)))
        coin = exact_metrics(config.with_(strategy="shared_latent", q=float(q))).coin
        marker = "  <- crossover" if q == result.crossover_q else ""
        print(f"{q:5.2f} {result.tc_mean[idx]:10.4f}  {coin:7.4f}{marker}")

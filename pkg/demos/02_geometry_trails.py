"""Coordination geometry: (coincidence, APMI) trails as the intel rate moves.

The classical family buys pairwise information with coincidence; the quantum
family holds APMI while sitting below its own product-baseline coincidence.
"""

from hfc import ExperimentConfig, geometry_trail

config = ExperimentConfig(n=3, m=5, k=2, rounds=0, replicates=1, mode="exact")
points = geometry_trail(config, p_grid=[0.0, 0.1, 0.2, 0.3, 0.4, 0.5], display_q=0.7)

current = None
for pt in points:
    if pt.strategy != current:
        current = pt.strategy
        print(f"\n{current} (q={pt.q}, lambda={pt.lam})")
        print(f"{'p':>5} {'Coin':>8} {'APMI':>8} {'product-Coin':>13}")
    marker = "  <- below baseline" if pt.coin < pt.product_coin else ""
    print(f"{pt.p:5.2f} {pt.coin:8.4f} {pt.apmi:8.4f} {pt.product_coin:13.4f}{marker}")

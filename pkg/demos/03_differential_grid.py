"""Differential total correlation over the (p, lambda) grid.

Delta-TC = TC_quantum - max(TC_independent, max_q TC_shared(q)), evaluated
exactly at each cell. Negative everywhere: the classical optimum buys its
total correlation by copying, which the quantum strategy refuses to do.
"""

from hfc import ExperimentConfig, differential_grid

config = ExperimentConfig(n=3, m=5, k=2, rounds=0, replicates=1, mode="exact")
p_grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
lambda_grid = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]

rows = differential_grid(config, p_grid=p_grid, lambda_grid=lambda_grid)
by_cell = {(r.p, r.lam): r for r in rows}

print("Delta-TC (bits), rows = p, columns = lambda")
print("p\\lam " + "".join(f"{lam:>8.2f}" for lam in lambda_grid))
for p in p_grid:
    cells = "".join(f"{by_cell[(p, lam)].delta_tc:8.3f}" for lam in lambda_grid)
    print(f"{p:5.2f} {cells}")

print("\nDelta-APMI (bits)")
print("p\\lam " + "".join(f"{lam:>8.2f}" for lam in lambda_grid))
for p in p_grid:
    cells = "".join(f"{by_cell[(p, lam)].delta_apmi:8.3f}" for lam in lambda_grid)
    print(f"{p:5.2f} {cells}")

print(f"\nbest classical q for TC at every cell: "
      f"{sorted({r.best_q_tc for r in rows})} (the copy limit wins)")

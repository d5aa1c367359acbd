"""Team-size scaling of the differentials at the fixed point (p=0.25, lam=0).

Delta-TC grows linearly more negative with N (the copy limit gains a full
log2(M) per agent while the quantum TC saturates); Delta-APMI barely moves.
"""

from hfc import ExperimentConfig, scaling_study

config = ExperimentConfig(n=3, m=5, k=2, p=0.25, lam=0.0, rounds=0,
                          replicates=1, mode="exact")
rows = scaling_study(config, n_list=[3, 4, 5, 6, 7])

print(f"{'N':>3} {'dTC':>9} {'dAPMI':>9} {'TC_quant':>9} {'TC_best':>9} {'best q':>7}")
for r in rows:
    print(f"{r.n:3d} {r.delta_tc:9.3f} {r.delta_apmi:9.3f} "
          f"{r.quantum_tc:9.3f} {r.best_classical_tc:9.3f} {r.best_q_tc:7.2f}")

spread_tc = abs(rows[-1].delta_tc - rows[0].delta_tc)
spread_apmi = abs(rows[-1].delta_apmi - rows[0].delta_apmi)
print(f"\n|dTC(7)-dTC(3)| = {spread_tc:.2f} bits vs |dAPMI(7)-dAPMI(3)| = {spread_apmi:.2f} bits")

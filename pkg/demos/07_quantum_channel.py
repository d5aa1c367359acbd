"""The noisy W-state measurement law, three ways.

1. The analytic diagonal: start from 1/N on each single-excitation string
   and flip each bit with probability lambda/2.
2. The dense density-matrix oracle: full 4-Kraus depolarizing per qubit.
3. The O(N) sampler used in simulation.

All three agree; the first two to 1e-12, the third statistically.
"""

import numpy as np

from hfc.config import ExperimentConfig, stream_generator
from hfc.quantum import (
    density_matrix_oracle,
    excitation_probability,
    noisy_w_diagonal,
    sample_outcomes,
)

n, lam = 4, 0.3
chain = noisy_w_diagonal(n, lam)
oracle = density_matrix_oracle(n, lam)
print(f"N={n}, lambda={lam}")
print(f"max |diagonal-chain - oracle| = {np.abs(chain.probs - oracle.probs).max():.2e}")

print("\nbitstring probabilities by Hamming weight:")
weights = np.array([bin(i).count('1') for i in range(2**n)])
for w in range(n + 1):
    block = chain.probs[weights == w]
    print(f"  weight {w}: {block[0]:.5f} per string x {len(block)} strings")

rng = stream_generator(ExperimentConfig(n=n, lam=lam), "quantum", 0)
bits = sample_outcomes(rng, 200_000, n, lam)
print(f"\nsampled P(b_i=1) = {bits.mean(axis=0).round(4)}")
print(f"analytic P(b_i=1) = {excitation_probability(n, lam):.4f}")
print(f"fraction of rounds with exactly one excitation: {(bits.sum(axis=1) == 1).mean():.4f}")
print(f"analytic: {chain.probs[weights == 1].sum():.4f}")

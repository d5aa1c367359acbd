"""Proposal samplers for the three strategy families, plus their exact
two-stage kernels (resource law + per-agent conditional law).

Strategies never see the hidden field, the round index or any history; the
sampler signatures make that structural. Correlation can only come from the
pre-shared resource: nothing for the independent family, a common uniform
action L for the shared-latent family, and a noisy W-state measurement
record for the quantum family (bit 1 -> leader targets action 1, bit 0 ->
follower samples uniformly from {2..m}; each agent uses only its own bit).

Vectorized samplers consume a fixed number of uniforms per round so round
streams are prefix-stable (see world module).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quantum


def _uniform_actions(u: np.ndarray, m: int) -> np.ndarray:
    """Map uniforms in [0,1) to actions in {1..m}."""
    return np.minimum(np.floor(u * m).astype(np.int64), m - 1) + 1


def propose_independent_rounds(rng: np.random.Generator, rounds: int, n: int, m: int) -> np.ndarray:
    """(rounds, n) i.i.d. uniform proposals on {1..m}."""
    return _uniform_actions(rng.random((rounds, n)), m)


def propose_independent(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return propose_independent_rounds(rng, 1, n, m)[0]


def sample_latents(rng: np.random.Generator, rounds: int, m: int) -> np.ndarray:
    """One shared latent action per round, uniform on {1..m}."""
    return _uniform_actions(rng.random(rounds), m)


def shared_latent_draws(rng: np.random.Generator, rounds: int, n: int) -> np.ndarray:
    """(rounds, n, 2) uniform block: copy decision and fallback action."""
    return rng.random((rounds, n, 2))


def propose_shared_latent_given(latents: np.ndarray, u: np.ndarray, m: int, q: float) -> np.ndarray:
    """Given per-round latents and a shared_latent_draws block, each agent
    copies L with probability q and otherwise draws uniformly from the full
    alphabet (which may hit L again). Reusing one block across q values gives
    common random numbers for baseline scans."""
    copy = u[:, :, 0] < q
    fresh = _uniform_actions(u[:, :, 1], m)
    return np.where(copy, latents[:, None], fresh)


def propose_shared_latent_rounds(
    latents: np.ndarray,
    rng: np.random.Generator,
    n: int,
    m: int,
    q: float,
) -> np.ndarray:
    return propose_shared_latent_given(latents, shared_latent_draws(rng, len(latents), n), m, q)


def propose_shared_latent(rng: np.random.Generator, n: int, m: int, q: float) -> np.ndarray:
    latents = sample_latents(rng, 1, m)
    return propose_shared_latent_rounds(latents, rng, n, m, q)[0]


def propose_quantum_rounds(
    bitstrings: np.ndarray,
    rng: np.random.Generator,
    m: int,
) -> np.ndarray:
    """Map measurement bitstrings (rounds, n) to proposals.

    Bit 1: propose action 1. Bit 0: propose uniform on {2..m}. Local and
    index-equivariant; agent i reads bitstrings[:, i] only.
    """
    if m < 2:
        raise ValueError("quantum strategy needs m >= 2")
    rounds, n = bitstrings.shape
    follower = _uniform_actions(rng.random((rounds, n)), m - 1) + 1
    return np.where(bitstrings == 1, 1, follower)


def propose_quantum(rng: np.random.Generator, n: int, m: int, lam: float) -> np.ndarray:
    bits = quantum.sample_outcomes(rng, 1, n, lam)
    return propose_quantum_rounds(bits, rng, m)[0]


@dataclass(frozen=True)
class ProposalKernel:
    """Exact two-stage description of a strategy's proposal law.

    resource_probs   -- (n_res,) law of the pre-shared resource
    conditionals     -- (n_res, n, m); conditionals[r, i] is P(proposal | res r)
                        for agent i. Agents are conditionally independent
                        given the resource.
    resource_labels  -- one descriptive label per resource value
    """

    resource_probs: np.ndarray
    conditionals: np.ndarray
    resource_labels: tuple

    def marginal(self) -> np.ndarray:
        """Common single-agent proposal law (agents are exchangeable)."""
        return np.einsum("r,rm->m", self.resource_probs, self.conditionals[:, 0, :])


def proposal_kernel(strategy: str, n: int, m: int, q: float = 0.0, lam: float = 0.0,
                    prune: float = 1e-15) -> ProposalKernel:
    """Exact kernel for one strategy family.

    independent   -- unit resource, uniform conditionals.
    shared_latent -- resource L in {1..m}, P(a=L|L) = q + (1-q)/m and
                     P(a=t|L) = (1-q)/m for t != L.
    quantum       -- resource is the noisy W measurement bitstring; entries
                     below `prune` are dropped (at lam=0 only the n weight-1
                     strings survive).
    """
    uniform = np.full(m, 1.0 / m)
    if strategy == "independent":
        return ProposalKernel(
            resource_probs=np.array([1.0]),
            conditionals=np.broadcast_to(uniform, (1, n, m)).copy(),
            resource_labels=("unit",),
        )
    if strategy == "shared_latent":
        conditionals = np.full((m, n, m), (1.0 - q) / m)
        for latent in range(m):
            conditionals[latent, :, latent] += q
        return ProposalKernel(
            resource_probs=np.full(m, 1.0 / m),
            conditionals=conditionals,
            resource_labels=tuple(f"L={t}" for t in range(1, m + 1)),
        )
    if strategy == "quantum":
        if m < 2:
            raise ValueError("quantum strategy needs m >= 2")
        dist = quantum.noisy_w_diagonal(n, lam)
        leader = np.zeros(m)
        leader[0] = 1.0
        follower = np.zeros(m)
        follower[1:] = 1.0 / (m - 1)
        probs, conds, labels = [], [], []
        for index in np.nonzero(dist.probs > prune)[0]:
            bits = [(int(index) >> (n - 1 - i)) & 1 for i in range(n)]
            probs.append(dist.probs[index])
            conds.append(np.stack([leader if b else follower for b in bits]))
            labels.append("b=" + "".join(str(b) for b in bits))
        return ProposalKernel(
            resource_probs=np.array(probs),
            conditionals=np.stack(conds),
            resource_labels=tuple(labels),
        )
    raise ValueError(f"unknown strategy {strategy!r}")

"""Hidden-field sampling and the local intel perturbation channel.

Each round an exogenous field marks k of the m targets as defended; agents
never observe it. With probability p an agent inspects one uniformly chosen
target, reads its defended bit through a binary symmetric channel with flip
probability eps, and, if the inspected target equals its own proposal and
the noisy bit reads defended, redirects uniformly to one of the other m-1
targets with probability v. The channel is memoryless and acts on each agent
independently given the field.

All samplers consume a FIXED number of uniform draws per round per agent so
that prefixes of a round stream are stable: running the first r rounds of a
longer run reproduces the shorter run exactly.
"""

from __future__ import annotations

import numpy as np

DRAWS_PER_AGENT = 5  # inspect, target, flip, veto, redirect


def sample_fields(rng: np.random.Generator, rounds: int, m: int, k: int) -> np.ndarray:
    """Uniform k-subset indicator per round, shape (rounds, m), dtype uint8.

    Each round ranks m uniforms; the k smallest mark the defended targets,
    which makes all C(m, k) subsets equiprobable. Consumes exactly m draws
    per round even when k is 0 or m.
    """
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    u = rng.random((rounds, m))
    fields = np.zeros((rounds, m), dtype=np.uint8)
    if k == 0:
        return fields
    if k == m:
        fields[:] = 1
        return fields
    order = np.argsort(u, axis=1, kind="stable")
    rows = np.repeat(np.arange(rounds), k)
    fields[rows, order[:, :k].reshape(-1)] = 1
    return fields


def sample_field(rng: np.random.Generator, m: int, k: int) -> np.ndarray:
    """Uniform k-subset indicator of length m."""
    return sample_fields(rng, 1, m, k)[0]


def intel_draws(rng: np.random.Generator, rounds: int, n: int) -> np.ndarray:
    """One (rounds, n, 5) uniform block: the channel's entire randomness.

    Drawn as a single round-major block so that any chunking over rounds
    reproduces the same values.
    """
    return rng.random((rounds, n, DRAWS_PER_AGENT))


def apply_intel_given(
    proposals: np.ndarray,
    fields: np.ndarray,
    p: float,
    eps: float,
    v: float,
    u: np.ndarray,
) -> np.ndarray:
    """Perturb a (rounds, n) block of proposals using a precomputed uniform
    block from intel_draws (enables common random numbers across parameter
    values)."""
    proposals = np.asarray(proposals)
    rounds, n = proposals.shape
    m = fields.shape[1]
    if m < 2:
        raise ValueError("intel channel needs m >= 2 (redirect set must be nonempty)")
    u_inspect = u[:, :, 0]
    u_target = u[:, :, 1]
    u_flip = u[:, :, 2]
    u_veto = u[:, :, 3]
    u_redirect = u[:, :, 4]

    targets = np.minimum(np.floor(u_target * m).astype(np.int64), m - 1) + 1
    defended = np.take_along_axis(fields.astype(bool), targets - 1, axis=1)
    noisy_bit = defended ^ (u_flip < eps)
    fires = (u_inspect < p) & (targets == proposals) & noisy_bit & (u_veto < v)

    # Uniform over {1..m} minus the inspected target.
    alt = np.minimum(np.floor(u_redirect * (m - 1)).astype(np.int64), m - 2) + 1
    alt = np.where(alt >= targets, alt + 1, alt)

    return np.where(fires, alt, proposals)


def apply_intel(
    proposals: np.ndarray,
    fields: np.ndarray,
    p: float,
    eps: float,
    v: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Perturb a (rounds, n) block of proposals, one field row per round.

    Consumes exactly 5 uniforms per agent per round regardless of which
    branches fire.
    """
    proposals = np.asarray(proposals)
    return apply_intel_given(proposals, fields, p, eps, v,
                             intel_draws(rng, proposals.shape[0], proposals.shape[1]))


def intel_perturb(
    proposal: int,
    field: np.ndarray,
    p: float,
    eps: float,
    v: float,
    rng: np.random.Generator,
) -> int:
    """Perturb a single proposed action given the round's field."""
    out = apply_intel(
        np.array([[proposal]], dtype=np.int64),
        np.asarray(field, dtype=np.uint8).reshape(1, -1),
        p,
        eps,
        v,
        rng,
    )
    return int(out[0, 0])


def redirect_rate(proposal: int, field: np.ndarray, p: float, eps: float, v: float) -> float:
    """Probability that the channel moves this proposal somewhere else.

    The veto can only fire when the inspected target equals the proposal
    (probability 1/m) and the noisy bit reads defended, so
        r = p * v * (1/m) * ((1-eps) * f_prop + eps * (1 - f_prop)).
    """
    m = len(field)
    f_prop = float(field[proposal - 1])
    return p * v * (1.0 / m) * ((1.0 - eps) * f_prop + eps * (1.0 - f_prop))


def intel_kernel(proposal: int, field: np.ndarray, p: float, eps: float, v: float) -> np.ndarray:
    """Exact conditional law of intel_perturb: length-m distribution.

    Mass 1-r stays on the proposal, r/(m-1) lands on each other target.
    """
    m = len(field)
    r = redirect_rate(proposal, field, p, eps, v)
    dist = np.full(m, r / (m - 1))
    dist[proposal - 1] = 1.0 - r
    return dist


def intel_kernel_matrix(field: np.ndarray, p: float, eps: float, v: float) -> np.ndarray:
    """Stack intel_kernel over all proposals: (m, m) row-stochastic matrix."""
    m = len(field)
    return np.stack([intel_kernel(a, field, p, eps, v) for a in range(1, m + 1)])

"""Exact joint-action distribution by enumeration over (field, resource).

Conditioned on a field realization f and a resource value (unit, latent L,
or measurement bitstring b), agents are independent, and each agent's final
action law is its proposal conditional pushed through the intel kernel for
f. The joint is the probability-weighted sum of the resulting product
distributions over all C(m,k) fields and all resource values. This gives
every diagnostic with zero sampling error and is the ground-truth oracle
for the Monte Carlo path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import metrics, strategies, world
from .config import ExperimentConfig, canonical_string, require_valid

TRACTABLE_CELLS = 10**6


@dataclass(frozen=True)
class ExactJoint:
    """Dense joint law over {1..m}^n; probs has shape (m,)*n, agent i = axis i."""

    probs: np.ndarray
    n: int
    m: int
    fingerprint: str

    def flat(self) -> np.ndarray:
        return self.probs.reshape(-1)


def _product_joint(per_agent: np.ndarray) -> np.ndarray:
    """Outer product of n per-agent distributions, rows of an (n, m) array."""
    out = per_agent[0]
    for row in per_agent[1:]:
        out = np.multiply.outer(out, row)
    return out


def exact_joint(config: ExperimentConfig) -> ExactJoint:
    """Exact joint-action law for a validated config.

    Raises ValueError when m^n exceeds the documented tractability bound.
    """
    require_valid(config)
    n, m, k = config.n, config.m, config.k
    if m**n > TRACTABLE_CELLS:
        raise ValueError(f"m^n = {m**n} exceeds the exact-mode bound {TRACTABLE_CELLS}")

    kernel = strategies.proposal_kernel(config.strategy, n, m, q=config.q, lam=config.lam)
    fields = list(itertools.combinations(range(m), k))
    joint = np.zeros((m,) * n)
    for subset in fields:
        field = np.zeros(m, dtype=np.uint8)
        field[list(subset)] = 1
        channel = world.intel_kernel_matrix(field, config.p, config.eps, config.v)
        for prob, conditionals in zip(kernel.resource_probs, kernel.conditionals):
            joint += prob * _product_joint(conditionals @ channel)
    joint /= len(fields)
    return ExactJoint(probs=joint, n=n, m=m, fingerprint=canonical_string(config))


def exact_metrics(config: ExperimentConfig) -> metrics.MetricSet:
    """Every diagnostic of the exact joint, zero sampling error."""
    return metrics.tensor_metric_set(exact_joint(config).probs)


def tv_distance(hist: metrics.JointHistogram, exact: ExactJoint) -> float:
    """Total-variation distance between an empirical histogram and the
    exact law: half the L1 distance over all m^n cells."""
    if (hist.n, hist.m) != (exact.n, exact.m):
        raise ValueError("histogram and joint shapes differ")
    flat = exact.flat()
    total = hist.total
    if total == 0:
        raise ValueError("empty histogram")
    keys = np.array(sorted(hist.counts), dtype=np.int64)
    observed = np.array([hist.counts[int(key)] for key in keys], dtype=float) / total
    expected = flat[keys]
    # |p - q| on occupied cells, plus the exact mass on unoccupied cells.
    diff = np.abs(observed - expected).sum() + (1.0 - expected.sum())
    return 0.5 * float(diff)

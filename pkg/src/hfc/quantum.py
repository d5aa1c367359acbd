"""Measurement statistics of an N-qubit W state under depolarizing noise.

The strategy layer only ever needs computational-basis measurement
probabilities, and single-qubit depolarizing noise acts on those diagonals
as an independent bit flip with probability lambda/2 per qubit. Working with
the 2^N diagonal (or, for sampling, never materializing it at all) replaces
gate-level circuit simulation exactly. A dense density-matrix oracle with
the full four-Kraus channel lives here too, for validation only.

Convention, pinned: per-qubit depolarizing rho -> (1-lambda)*rho + lambda*I/2,
i.e. Kraus weights (1-3*lambda/4, lambda/4, lambda/4, lambda/4); lambda=1 is
the fully mixing point.

Bit order: agent/qubit i is axis i of the probs tensor reshaped to (2,)*N,
so bitstring b maps to the flat index sum_i b_i * 2^(N-1-i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementDistribution:
    """Probability vector over the 2^n_qubits computational basis strings."""

    probs: np.ndarray
    n_qubits: int

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (2**self.n_qubits,):
            raise ValueError(f"expected {2**self.n_qubits} entries, got shape {probs.shape}")
        if np.any(probs < -NORM_TOL):
            raise ValueError("negative probability entry")
        if abs(probs.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "probs", probs)

    def prob_of(self, bits) -> float:
        index = 0
        for b in bits:
            index = (index << 1) | int(b)
        return float(self.probs[index])


def w_state_diagonal(n: int) -> MeasurementDistribution:
    """Noiseless W-state measurement law: 1/n on each weight-1 bitstring."""
    if n < 1:
        raise ValueError("need at least one qubit")
    probs = np.zeros(2**n)
    for i in range(n):
        probs[1 << (n - 1 - i)] = 1.0 / n
    return MeasurementDistribution(probs, n)


def depolarize_diagonal(dist: MeasurementDistribution, lam: float, qubit: int) -> MeasurementDistribution:
    """Apply single-qubit depolarizing noise of strength lam to one qubit.

    On diagonals the channel is exactly
        P'(b) = (1 - lam/2) P(b) + (lam/2) P(b with the qubit flipped);
    off-diagonal terms never mix in because the Paulis map them to
    off-diagonal positions.
    """
    n = dist.n_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit index {qubit} out of range for {n} qubits")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda out of [0,1]: {lam!r}")
    tensor = dist.probs.reshape((2,) * n)
    flipped = np.flip(tensor, axis=qubit)
    out = (1.0 - lam / 2.0) * tensor + (lam / 2.0) * flipped
    return MeasurementDistribution(out.reshape(-1), n)


def noisy_w_diagonal(n: int, lam: float) -> MeasurementDistribution:
    """W-state diagonal after depolarizing every qubit with strength lam."""
    dist = w_state_diagonal(n)
    for qubit in range(n):
        dist = depolarize_diagonal(dist, lam, qubit)
    return dist


def sample_outcomes(rng: np.random.Generator, count: int, n: int, lam: float) -> np.ndarray:
    """Sample `count` measurement bitstrings, shape (count, n), dtype uint8.

    Equivalent in law to sampling the fully depolarized diagonal: pick the
    excitation position uniformly, then flip each bit independently with
    probability lam/2. O(n) per sample; the 2^n vector is never built.

    Randomness comes from a single (count, 1+n) round-major uniform block
    (column 0 the excitation position, columns 1..n the flips), so any
    chunking over rounds reproduces the same outcomes.
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda out of [0,1]: {lam!r}")
    u = rng.random((count, 1 + n))
    positions = np.minimum(np.floor(u[:, 0] * n).astype(np.int64), n - 1)
    bits = np.zeros((count, n), dtype=np.uint8)
    bits[np.arange(count), positions] = 1
    flips = u[:, 1:] < lam / 2.0
    return bits ^ flips.astype(np.uint8)


def sample_outcome(rng: np.random.Generator, n: int, lam: float) -> np.ndarray:
    """Sample one measurement bitstring of length n."""
    return sample_outcomes(rng, 1, n, lam)[0]


def excitation_probability(n: int, lam: float) -> float:
    """Marginal P(b_i = 1): a Bernoulli(1/n) pushed through a flip of lam/2."""
    return 1.0 / n + (lam / 2.0) * (1.0 - 2.0 / n)


def density_matrix_oracle(n: int, lam: float) -> MeasurementDistribution:
    """Brute-force reference: dense W-state density matrix, four-Kraus
    depolarizing channel per qubit, then the diagonal. Test use only.

    Memory is 4^n amplitudes, so n is capped at 6.
    """
    if n > 6:
        raise ValueError("density-matrix oracle limited to n <= 6")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda out of [0,1]: {lam!r}")
    dim = 2**n
    amp = np.zeros(dim, dtype=complex)
    for i in range(n):
        amp[1 << (n - 1 - i)] = 1.0 / np.sqrt(n)
    rho = np.outer(amp, amp.conj())

    eye = np.eye(2, dtype=complex)
    pauli_x = np.array([[0, 1], [1, 0]], dtype=complex)
    pauli_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    pauli_z = np.array([[1, 0], [0, -1]], dtype=complex)
    kraus = [
        np.sqrt(1.0 - 3.0 * lam / 4.0) * eye,
        np.sqrt(lam / 4.0) * pauli_x,
        np.sqrt(lam / 4.0) * pauli_y,
        np.sqrt(lam / 4.0) * pauli_z,
    ]

    for qubit in range(n):
        # rho as a (2,)*n x (2,)*n tensor; qubit q acts on axes q and n+q.
        tensor = rho.reshape((2,) * (2 * n))
        acc = np.zeros_like(tensor)
        for op in kraus:
            left = np.tensordot(op, tensor, axes=([1], [qubit]))
            left = np.moveaxis(left, 0, qubit)
            right = np.tensordot(left, op.conj().T, axes=([n + qubit], [0]))
            acc += np.moveaxis(right, -1, n + qubit)
        rho = acc.reshape(dim, dim)

    diag = np.real(np.diag(rho)).copy()
    diag[np.abs(diag) < 1e-16] = 0.0
    return MeasurementDistribution(diag, n)

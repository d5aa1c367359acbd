"""Payoff-free diagnostics of joint-action data.

Everything here is a functional of the joint-action distribution: Shannon
entropies (base 2 throughout, values labeled in bits), mutual information,
its all-pairs average, total correlation, pairwise coincidence, the global
collision probability, and the product-marginal coincidence baseline. The
estimators are plain plug-in (maximum likelihood) with no bias correction;
exact-mode joints give the same functionals with zero sampling error.

Monte Carlo data lives in a sparse JointHistogram keyed by packed profiles,
since the m^n cell count dwarfs the sample count for larger teams. Dense
joints (from the exact engine) use the tensor_* variants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

CLIP_TOL = 1e-12  # floating-point noise floor for MI / TC near zero
NORM_TOL = 1e-9


def pack_profile(profile, m: int) -> int:
    """Lexicographic index of an action profile: agent 0 most significant."""
    index = 0
    for a in profile:
        index = index * m + (int(a) - 1)
    return index


def unpack_profile(index: int, n: int, m: int) -> tuple:
    actions = []
    for _ in range(n):
        index, digit = divmod(index, m)
        actions.append(digit + 1)
    return tuple(reversed(actions))


def pack_rows(actions: np.ndarray, m: int) -> np.ndarray:
    """Vectorized pack of an (rounds, n) action block."""
    n = actions.shape[1]
    weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (actions.astype(np.int64) - 1) @ weights


@dataclass
class JointHistogram:
    """Sparse counts over joint actions in {1..m}^n.

    counts maps packed profile indices to positive integers; total is their
    sum. Histograms merge by addition, so replicates and shards combine
    associatively and deterministically.
    """

    n: int
    m: int
    counts: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @classmethod
    def from_actions(cls, actions: np.ndarray, m: int) -> "JointHistogram":
        actions = np.asarray(actions)
        hist = cls(n=actions.shape[1], m=m)
        if actions.shape[0] == 0:
            return hist
        packed = pack_rows(actions, m)
        keys, counts = np.unique(packed, return_counts=True)
        hist.counts = {int(k): int(c) for k, c in zip(keys, counts)}
        return hist

    def merged(self, other: "JointHistogram") -> "JointHistogram":
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("histogram shapes differ")
        counts = dict(self.counts)
        for key, c in other.counts.items():
            counts[key] = counts.get(key, 0) + c
        return JointHistogram(self.n, self.m, counts)

    def __add__(self, other):
        return self.merged(other)

    def items(self):
        """(profile tuple, count) pairs in packed-index order."""
        for key in sorted(self.counts):
            yield unpack_profile(key, self.n, self.m), self.counts[key]

    def probabilities(self):
        """(packed index, probability) pairs in packed-index order."""
        total = self.total
        for key in sorted(self.counts):
            yield key, self.counts[key] / total

    def profile_array(self) -> np.ndarray:
        """Dense (#distinct, n) array of profiles aligned with count_array."""
        keys = np.array(sorted(self.counts), dtype=np.int64)
        out = np.empty((len(keys), self.n), dtype=np.int64)
        rem = keys
        for col in range(self.n - 1, -1, -1):
            rem, digit = np.divmod(rem, self.m)
            out[:, col] = digit + 1
        return out

    def count_array(self) -> np.ndarray:
        return np.array([self.counts[k] for k in sorted(self.counts)], dtype=np.int64)


@dataclass(frozen=True)
class MetricSet:
    """One evaluation of every diagnostic, in bits / probabilities."""

    apmi: float
    tc: float
    coin: float
    global_collision: float
    product_coin: float
    marginal: np.ndarray

    NAMES = ("apmi", "tc", "coin", "global_collision", "product_coin")

    def values(self) -> dict:
        return {name: getattr(self, name) for name in self.NAMES}


def entropy(dist) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = np.asarray(dist, dtype=float)
    if np.any(p < 0):
        raise ValueError("negative probability entry")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    nz = p > 0
    return float(-np.sum(p[nz] * np.log2(p[nz])))


def mutual_information(pair: np.ndarray) -> float:
    """I(X;Y) in bits from a joint matrix; clipped at 0 within noise."""
    pair = np.asarray(pair, dtype=float)
    mi = entropy(pair.sum(axis=1)) + entropy(pair.sum(axis=0)) - entropy(pair.reshape(-1))
    return _clip_nonneg(mi)


def _clip_nonneg(value: float) -> float:
    if value < 0:
        if value < -CLIP_TOL:
            raise ValueError(f"value {value} below the negative-noise floor")
        return 0.0
    return float(value)


# ---------------------------------------------------------------------------
# Sparse-histogram estimators


def _hist_weights(hist: JointHistogram):
    profiles = hist.profile_array()
    counts = hist.count_array()
    if counts.size == 0:
        raise ValueError("empty histogram")
    return profiles, counts / counts.sum()


def marginals(hist: JointHistogram) -> np.ndarray:
    """(n, m) per-agent empirical marginals."""
    profiles, w = _hist_weights(hist)
    out = np.zeros((hist.n, hist.m))
    for i in range(hist.n):
        np.add.at(out[i], profiles[:, i] - 1, w)
    return out


def pairwise_joint(hist: JointHistogram, i: int, j: int) -> np.ndarray:
    """Empirical (m, m) joint of agents (i, j), zero-based indices."""
    if i == j:
        raise ValueError("need two distinct agents")
    profiles, w = _hist_weights(hist)
    out = np.zeros((hist.m, hist.m))
    np.add.at(out, (profiles[:, i] - 1, profiles[:, j] - 1), w)
    return out


def apmi(hist: JointHistogram) -> float:
    """Average of I(a_i; a_j) over all unordered agent pairs, in bits."""
    pairs = list(itertools.combinations(range(hist.n), 2))
    return sum(mutual_information(pairwise_joint(hist, i, j)) for i, j in pairs) / len(pairs)


def total_correlation(hist: JointHistogram) -> float:
    """sum_i H(a_i) - H(a_1..a_n), in bits; zero iff the joint factorizes."""
    _, w = _hist_weights(hist)
    joint_h = float(-np.sum(w * np.log2(w)))
    return _clip_nonneg(sum(entropy(row) for row in marginals(hist)) - joint_h)


def pairwise_coincidence(hist: JointHistogram) -> float:
    """Average over pairs of Pr[a_i = a_j]."""
    profiles, w = _hist_weights(hist)
    pairs = list(itertools.combinations(range(hist.n), 2))
    acc = 0.0
    for i, j in pairs:
        acc += float(w[profiles[:, i] == profiles[:, j]].sum())
    return acc / len(pairs)


def global_collision(hist: JointHistogram) -> float:
    """Pr[a_1 = ... = a_n]."""
    profiles, w = _hist_weights(hist)
    same = np.all(profiles == profiles[:, :1], axis=1)
    return float(w[same].sum())


def product_baseline(hist: JointHistogram):
    """Pooled common marginal and its product coincidence sum_t marginal(t)^2.

    Per-agent marginals agree in law for every strategy family here, so the
    arithmetic mean over agents is the natural pooled estimate.
    """
    marginal = marginals(hist).mean(axis=0)
    return marginal, float(np.sum(marginal**2))


def metric_set(hist: JointHistogram) -> MetricSet:
    marginal, product_coin = product_baseline(hist)
    return MetricSet(
        apmi=apmi(hist),
        tc=total_correlation(hist),
        coin=pairwise_coincidence(hist),
        global_collision=global_collision(hist),
        product_coin=product_coin,
        marginal=marginal,
    )


# ---------------------------------------------------------------------------
# Dense-tensor (exact-mode) counterparts


def tensor_marginal(joint: np.ndarray, axes) -> np.ndarray:
    """Marginal of a dense (m,)*n joint onto the given agent axes, in the
    order given."""
    keep = tuple(axes)
    drop = tuple(i for i in range(joint.ndim) if i not in keep)
    out = joint.sum(axis=drop)
    order = sorted(keep)
    if list(keep) != order:
        out = np.transpose(out, [order.index(k) for k in keep])
    return out


def tensor_metric_set(joint: np.ndarray) -> MetricSet:
    """All diagnostics of a dense joint tensor, zero sampling error."""
    n = joint.ndim
    m = joint.shape[0]
    margs = [tensor_marginal(joint, (i,)) for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))

    mi_sum = 0.0
    coin_sum = 0.0
    for i, j in pairs:
        pair = tensor_marginal(joint, (i, j))
        mi_sum += mutual_information(pair)
        coin_sum += float(np.trace(pair))

    flat = joint.reshape(-1)
    nz = flat > 0
    joint_h = float(-np.sum(flat[nz] * np.log2(flat[nz])))
    tc = _clip_nonneg(sum(entropy(mg) for mg in margs) - joint_h)

    diag = joint[tuple(np.arange(m) for _ in range(n))]
    marginal = np.mean(margs, axis=0)
    return MetricSet(
        apmi=mi_sum / len(pairs),
        tc=tc,
        coin=coin_sum / len(pairs),
        global_collision=float(diag.sum()),
        product_coin=float(np.sum(marginal**2)),
        marginal=marginal,
    )

"""Hidden-field coordination simulator.

Generates joint-action distributions for decentralized teams under three
strategy families (independent, shared-latent classical, noisy-W-state
quantum) and computes payoff-free information diagnostics: average pairwise
mutual information, total correlation, coincidence functionals, and
differentials against the strongest classical baseline.
"""

__version__ = "0.1.0"

from .config import ExperimentConfig, derive_seed, make_config, require_valid, validate
from .exact import ExactJoint, exact_joint, exact_metrics, tv_distance
from .metrics import JointHistogram, MetricSet, metric_set
from .experiments import (
    DifferentialRow,
    QScanResult,
    SweepRow,
    aggregate,
    best_classical,
    convergence_study,
    differential_grid,
    geometry_trail,
    q_scan,
    run_rounds,
    scaling_study,
    simulate_actions,
)

__all__ = [
    "ExperimentConfig",
    "ExactJoint",
    "JointHistogram",
    "MetricSet",
    "DifferentialRow",
    "QScanResult",
    "SweepRow",
    "aggregate",
    "best_classical",
    "convergence_study",
    "derive_seed",
    "differential_grid",
    "exact_joint",
    "exact_metrics",
    "geometry_trail",
    "make_config",
    "metric_set",
    "q_scan",
    "require_valid",
    "run_rounds",
    "scaling_study",
    "simulate_actions",
    "tv_distance",
    "validate",
    "__version__",
]

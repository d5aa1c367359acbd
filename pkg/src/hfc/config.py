"""Experiment configuration and deterministic seed derivation.

Every random stream in the simulator is keyed by a SHA-256 hash of the
canonical configuration text plus a (stream, replicate, round) label, so a
full experiment re-run is bit-identical on any machine and under any worker
count. The hash function and the canonical serialization are pinned here and
must not change between releases.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

STRATEGIES = ("independent", "shared_latent", "quantum")
MODES = ("monte_carlo", "exact")

# Stream labels. "field" drives hidden-field sampling, "intel" the local
# perturbation channel, "strategy" per-agent proposal randomness, "latent"
# the shared classical variable, "quantum" the W-state measurement record.
STREAMS = ("field", "intel", "strategy", "latent", "quantum")

# Defaults for the parameters the reference experiments never pin down.
DEFAULTS = dict(
    n=3,
    m=5,
    k=2,
    p=0.25,
    eps=0.1,
    v=1.0,
    lam=0.0,
    q=0.7,
    strategy="quantum",
    rounds=2000,
    replicates=8,
    seed_root=2024,
    mode="monte_carlo",
)

# Config-file / CLI key for each dataclass field ("lambda" is reserved in
# Python, so the attribute is "lam").
FIELD_KEYS = {
    "n": "n",
    "m": "m",
    "k": "k",
    "p": "p",
    "eps": "eps",
    "v": "v",
    "lam": "lambda",
    "q": "q",
    "strategy": "strategy",
    "rounds": "rounds",
    "replicates": "replicates",
    "seed_root": "seed_root",
    "mode": "mode",
}
KEY_FIELDS = {v: k for k, v in FIELD_KEYS.items()}


@dataclass(frozen=True)
class ExperimentConfig:
    """All model, strategy, noise and run parameters, plus the seed root.

    n      -- number of agents (>= 2)
    m      -- action alphabet size (>= 2)
    k      -- number of defended targets, 0 <= k <= m
    p      -- intel rate in [0, 1]
    eps    -- intel flip probability in [0, 1]
    v      -- veto probability in [0, 1]
    lam    -- depolarizing strength in [0, 1] (quantum strategy only)
    q      -- shared-latent copy strength in [0, 1]
    strategy   -- "independent", "shared_latent" or "quantum"
    rounds     -- rounds per replicate (>= 1)
    replicates -- replicate count (>= 1)
    seed_root  -- 64-bit unsigned root seed
    mode       -- "monte_carlo" or "exact"
    """

    n: int = DEFAULTS["n"]
    m: int = DEFAULTS["m"]
    k: int = DEFAULTS["k"]
    p: float = DEFAULTS["p"]
    eps: float = DEFAULTS["eps"]
    v: float = DEFAULTS["v"]
    lam: float = DEFAULTS["lam"]
    q: float = DEFAULTS["q"]
    strategy: str = DEFAULTS["strategy"]
    rounds: int = DEFAULTS["rounds"]
    replicates: int = DEFAULTS["replicates"]
    seed_root: int = DEFAULTS["seed_root"]
    mode: str = DEFAULTS["mode"]

    def with_(self, **changes) -> "ExperimentConfig":
        """Copy with the given fields replaced."""
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


class ConfigError(ValueError):
    """Raised when a configuration violates one or more constraints."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def validate(config: ExperimentConfig) -> list[str]:
    """Return the list of violated constraints (empty when valid)."""
    errors = []
    if not isinstance(config.n, int) or config.n < 2:
        errors.append(f"n must be an integer >= 2, got {config.n!r}")
    if not isinstance(config.m, int) or config.m < 2:
        errors.append(f"m must be an integer >= 2, got {config.m!r}")
    if not isinstance(config.k, int) or config.k < 0:
        errors.append(f"k must be a nonnegative integer, got {config.k!r}")
    elif isinstance(config.m, int) and config.k > config.m:
        errors.append(f"k must satisfy k <= m, got k={config.k}, m={config.m}")
    for name in ("p", "eps", "v", "lam", "q"):
        value = getattr(config, name)
        if not (0.0 <= float(value) <= 1.0):
            errors.append(f"{FIELD_KEYS[name]} out of [0,1]: {value!r}")
    if config.strategy not in STRATEGIES:
        errors.append(f"unknown strategy {config.strategy!r}; expected one of {STRATEGIES}")
    if config.strategy == "quantum" and isinstance(config.m, int) and config.m < 2:
        errors.append("quantum requires m >= 2 (follower set {2..m} must be nonempty)")
    if not isinstance(config.rounds, int) or config.rounds < 0:
        errors.append(f"rounds must be an integer >= 0, got {config.rounds!r}")
    if not isinstance(config.replicates, int) or config.replicates < 1:
        errors.append(f"replicates must be an integer >= 1, got {config.replicates!r}")
    if not isinstance(config.seed_root, int) or not (0 <= config.seed_root < 2**64):
        errors.append(f"seed_root must be a 64-bit unsigned integer, got {config.seed_root!r}")
    if config.mode not in MODES:
        errors.append(f"unknown mode {config.mode!r}; expected one of {MODES}")
    return errors


def require_valid(config: ExperimentConfig) -> ExperimentConfig:
    """Return the config unchanged, or raise ConfigError listing violations."""
    errors = validate(config)
    if errors:
        raise ConfigError(errors)
    return config


def canonical_string(config: ExperimentConfig) -> str:
    """Stable text form of a config: sorted key=value lines.

    Field order can never affect the result, and floats are serialized with
    repr so that equal values hash equally.
    """
    items = []
    for attr, key in FIELD_KEYS.items():
        value = getattr(config, attr)
        if isinstance(value, float):
            text = repr(float(value))
        else:
            text = str(value)
        items.append(f"{key}={text}")
    return "\n".join(sorted(items))


def derive_seed(config: ExperimentConfig, stream: str, replicate: int, rnd: int = 0) -> int:
    """Derive the 64-bit seed for one (stream, replicate, round) cell.

    Pure function of the canonical config text and the labels; SHA-256 is the
    pinned hash, the seed is its first 8 bytes big-endian.
    """
    if stream not in STREAMS:
        raise ValueError(f"unknown stream {stream!r}; expected one of {STREAMS}")
    payload = f"{canonical_string(config)}|{stream}|{int(replicate)}|{int(rnd)}"
    digest = hashlib.sha256(payload.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def stream_generator(config: ExperimentConfig, stream: str, replicate: int, rnd: int = 0) -> np.random.Generator:
    """Counter-based generator for one stream, keyed by derive_seed."""
    return np.random.Generator(np.random.Philox(key=derive_seed(config, stream, replicate, rnd)))


def _parse_value(attr: str, text: str):
    if attr in ("n", "m", "k", "rounds", "replicates", "seed_root"):
        return int(text)
    if attr in ("p", "eps", "v", "lam", "q"):
        return float(text)
    return text


def load_config_file(path) -> dict:
    """Read a flat key=value config file into an override dict.

    One "key = value" pair per line; blank lines and '#' comments ignored.
    Keys are the documented external names (so "lambda", not "lam").
    """
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([f"{path}:{lineno}: expected key=value, got {raw!r}"])
        key, text = (part.strip() for part in line.split("=", 1))
        if key not in KEY_FIELDS:
            raise ConfigError([f"{path}:{lineno}: unknown key {key!r}"])
        attr = KEY_FIELDS[key]
        overrides[attr] = _parse_value(attr, text)
    return overrides


def make_config(file_overrides: dict | None = None, flag_overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated config from defaults, file values, then flag values."""
    merged = dict(DEFAULTS)
    merged.update(file_overrides or {})
    merged.update({k: v for k, v in (flag_overrides or {}).items() if v is not None})
    return require_valid(ExperimentConfig(**merged))

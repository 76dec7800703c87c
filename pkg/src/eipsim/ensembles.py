"""Joint distributions over label configurations of an ensemble.

A distribution is stored either at count level (exchangeable mode, keys
are (n_B00, n_E01, n_E10, n_B10) tuples) or at position level (keys are
full label sequences).  Count-level support grows polynomially with the
ensemble size and is the workhorse for exact analytics; positional mode
carries non-exchangeable states, e.g. post-measurement posteriors or
deliberately non-IID inputs.

Positions are 1-based in all public queries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .states import LABELS, PairLabel, StandardFormState

PROB_ATOL = 1e-12

#: guard for materializing count-level supports position by position
MAX_POSITIONAL_SUPPORT = 2_000_000


def multinomial_coefficient(counts):
    total = sum(counts)
    out = 1
    for c in counts:
        out *= math.comb(total, c)
        total -= c
    return out


@dataclass(frozen=True)
class ConfigurationDistribution:
    """Distribution over length-n label configurations."""

    n: int
    mode: str  # "counts" or "positions"
    support: dict

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ensemble size must be >= 1, got {self.n}")
        if self.mode not in ("counts", "positions"):
            raise ValueError(f"unknown mode {self.mode!r}")
        total = 0.0
        for key, prob in self.support.items():
            if prob < -PROB_ATOL:
                raise ValueError(f"negative probability for {key}")
            if self.mode == "counts":
                if len(key) != 4 or sum(key) != self.n:
                    raise ValueError(f"bad count key {key} for n={self.n}")
            else:
                if len(key) != self.n:
                    raise ValueError(f"bad configuration key {key} for n={self.n}")
            total += prob
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"support probabilities sum to {total!r}, not 1")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_counts(cls, n, support):
        return cls(n, "counts", dict(support))

    @classmethod
    def from_positional(cls, support):
        configs = list(support)
        if not configs:
            raise ValueError("empty support")
        n = len(configs[0])
        return cls(
            n,
            "positions",
            {tuple(PairLabel(x) for x in k): v for k, v in support.items()},
        )

    @classmethod
    def point_mass(cls, labels):
        """Deterministic configuration (the simplest non-IID input)."""
        key = tuple(PairLabel(x) for x in labels)
        return cls(len(key), "positions", {key: 1.0})

    # -- queries -------------------------------------------------------

    def label_counts_distribution(self):
        """Distribution over count 4-tuples regardless of mode."""
        if self.mode == "counts":
            return dict(self.support)
        out = {}
        for labels, pr in self.support.items():
            key = tuple(sum(1 for lab in labels if lab == ref) for ref in LABELS)
            out[key] = out.get(key, 0.0) + pr
        return out

    def is_rank2(self, atol=PROB_ATOL):
        return all(
            pr <= atol or (c[2] == 0 and c[3] == 0)
            for c, pr in self.label_counts_distribution().items()
        )

    def is_rank3(self, atol=PROB_ATOL):
        return all(
            pr <= atol or c[3] == 0
            for c, pr in self.label_counts_distribution().items()
        )

    def to_positional(self, max_support=MAX_POSITIONAL_SUPPORT):
        """Expand count-level support into explicit configurations.

        Each count class fans out into all distinct position assignments
        with equal probability.  Refuses when the expanded support would
        exceed ``max_support``.
        """
        if self.mode == "positions":
            return self
        size = sum(
            multinomial_coefficient(c) for c, p in self.support.items() if p > 0
        )
        if size > max_support:
            raise ValueError(
                f"positional expansion needs {size} configurations "
                f"(limit {max_support})"
            )
        support = {}
        for counts, prob in self.support.items():
            if prob <= 0.0:
                continue
            base = []
            for lab, c in zip(LABELS, counts):
                base.extend([lab] * c)
            perms = set(itertools.permutations(base))
            w = prob / len(perms)
            for perm in perms:
                support[perm] = support.get(perm, 0.0) + w
        return ConfigurationDistribution(self.n, "positions", support)


def iid_ensemble(state: StandardFormState, n: int) -> ConfigurationDistribution:
    """Product ensemble of n copies, stored at count level.

    Count probabilities follow the multinomial law of the single-pair
    label probabilities; labels with zero weight are dropped from the
    support.
    """
    if n < 1:
        raise ValueError(f"ensemble size must be >= 1, got {n}")
    p = state.p
    active = [i for i in range(4) if p[i] > 0.0]
    support = {}
    for combo in itertools.combinations_with_replacement(active, n):
        counts = [0, 0, 0, 0]
        for i in combo:
            counts[i] += 1
        counts = tuple(counts)
        prob = multinomial_coefficient(counts) * math.prod(
            p[i] ** counts[i] for i in active
        )
        support[counts] = prob
    dist = ConfigurationDistribution(n, "counts", support)
    object.__setattr__(dist, "iid_state", state)  # used by blocked runs
    return dist


def global_fidelity(dist: ConfigurationDistribution) -> float:
    """Probability mass of the all-target configuration."""
    if dist.mode == "counts":
        return dist.support.get((dist.n, 0, 0, 0), 0.0)
    return dist.support.get((PairLabel.B00,) * dist.n, 0.0)


def local_fidelity(dist: ConfigurationDistribution, k: int) -> float:
    """Marginal probability that pair k (1-based) carries the target label."""
    if not 1 <= k <= dist.n:
        raise ValueError(f"position {k} out of range for n={dist.n}")
    if dist.mode == "counts":
        return sum(pr * counts[0] / dist.n for counts, pr in dist.support.items())
    return sum(
        pr for labels, pr in dist.support.items() if labels[k - 1] == PairLabel.B00
    )


def sample_configuration(dist: ConfigurationDistribution, seed) -> tuple:
    """Draw one configuration; deterministic for a given seed.

    ``seed`` may be an integer or a numpy Generator.  In exchangeable
    mode, counts are drawn first and then assigned to uniformly random
    positions.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    keys = sorted(dist.support)
    probs = np.array([dist.support[k] for k in keys], dtype=float)
    probs = probs / probs.sum()
    idx = rng.choice(len(keys), p=probs)
    key = keys[idx]
    if dist.mode == "positions":
        return tuple(key)
    labels = []
    for lab, c in zip(LABELS, key):
        labels.extend([lab] * c)
    perm = rng.permutation(dist.n)
    out = [None] * dist.n
    for slot, lab in zip(perm, labels):
        out[slot] = lab
    return tuple(out)

"""Entangling nonlocal measurements on configuration distributions.

Two primitives: the error number gate (ENG) applies the counter gate
once per pair of a subset to a shared d-dimensional auxiliary pair, so
the readout is the net error count of the subset mod d; the error
position gate (EPG) applies it a position-dependent number of times, so
the readout is a weighted position sum.  Both are deterministic per
configuration, never disturb B00/B10 labels, and the posteriors are
plain Bayesian conditioning on the readout.  Each measurement consumes
log2(d) ebits of auxiliary entanglement, booked in a ResourceLedger.

These functions are the reference semantics, enumerating the support of
the input distribution; the protocol engines use specialized equivalents
that scale further.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .ensembles import ConfigurationDistribution
from .states import COUNTER_SHIFT, PairLabel


@dataclass(frozen=True)
class EngSpec:
    """Error number gate over a position subset with a d-level auxiliary."""

    subset: frozenset
    d: int

    def __init__(self, subset, d):
        object.__setattr__(self, "subset", frozenset(int(i) for i in subset))
        object.__setattr__(self, "d", int(d))
        if not self.subset:
            raise ValueError("ENG subset must be non-empty")
        if self.d < 2:
            raise ValueError(f"auxiliary dimension must be >= 2, got {d}")


@dataclass(frozen=True)
class EpgSpec:
    """Error position gate: counter gate applied weights[i] times for pair i."""

    weights: tuple  # ((position, weight), ...) sorted by position
    d: int

    def __init__(self, weights, d):
        items = tuple(sorted((int(p), int(w)) for p, w in dict(weights).items()))
        object.__setattr__(self, "weights", items)
        object.__setattr__(self, "d", int(d))
        if not items:
            raise ValueError("EPG needs at least one weighted position")
        if any(w < 1 for _, w in items):
            raise ValueError("EPG weights must be >= 1")
        if self.d < 2:
            raise ValueError(f"auxiliary dimension must be >= 2, got {d}")

    @property
    def subset(self):
        return frozenset(p for p, _ in self.weights)

    @classmethod
    def canonical(cls, n, d):
        """Weights 1..n over the whole ensemble (1-based positions)."""
        return cls({i: i for i in range(1, n + 1)}, d)


@dataclass(frozen=True)
class MeasurementOutcome:
    j: int
    probability: float
    posterior: ConfigurationDistribution


@dataclass(frozen=True)
class ResourceLedger:
    """Append-only record of consumed auxiliary entanglement."""

    entries: tuple = field(default=())

    def charge(self, purpose, d):
        if d < 2:
            raise ValueError(f"cannot charge a dimension-{d} auxiliary")
        return ResourceLedger(self.entries + ((str(purpose), int(d)),))

    @property
    def total_ebits(self):
        return sum(math.log2(d) for _, d in self.entries)


def ledger_charge(ledger: ResourceLedger, purpose, d) -> ResourceLedger:
    return ledger.charge(purpose, d)


def ledger_total(ledger: ResourceLedger) -> float:
    return ledger.total_ebits


def _subset_check(subset, n):
    if not subset or not subset <= set(range(1, n + 1)):
        raise ValueError(f"subset {sorted(subset)} not within 1..{n}")


def _conditioned(dist, outcome_of_config):
    """Group configurations by deterministic outcome, renormalize."""
    groups = {}
    for labels, pr in dist.support.items():
        if pr <= 0.0:
            continue
        j = outcome_of_config(labels)
        groups.setdefault(j, {})[labels] = pr
    out = []
    for j in sorted(groups):
        pj = sum(groups[j].values())
        posterior = ConfigurationDistribution(
            dist.n, "positions", {k: v / pj for k, v in groups[j].items()}
        )
        out.append(MeasurementOutcome(j, pj, posterior))
    return out


def apply_eng(dist, spec: EngSpec, ledger: ResourceLedger):
    """Measure the net error count of a subset mod d.

    Returns (outcomes, ledger) where outcomes is a list of
    MeasurementOutcome sorted by readout value and the ledger has been
    charged log2(d) once.
    """
    _subset_check(spec.subset, dist.n)
    ledger = ledger.charge(f"eng_d{spec.d}", spec.d)
    full = spec.subset == set(range(1, dist.n + 1))
    if dist.mode == "counts" and full:
        groups = {}
        for counts, pr in dist.support.items():
            if pr <= 0.0:
                continue
            j = (counts[1] - counts[2]) % spec.d
            groups.setdefault(j, {})[counts] = pr
        outcomes = []
        for j in sorted(groups):
            pj = sum(groups[j].values())
            posterior = ConfigurationDistribution(
                dist.n, "counts", {k: v / pj for k, v in groups[j].items()}
            )
            outcomes.append(MeasurementOutcome(j, pj, posterior))
        return outcomes, ledger
    # proper subsets break exchangeability: work positionally
    dist = dist.to_positional()

    def outcome(labels):
        net = sum(COUNTER_SHIFT[labels[i - 1]] for i in spec.subset)
        return net % spec.d

    return _conditioned(dist, outcome), ledger


def apply_epg(dist, spec: EpgSpec, ledger: ResourceLedger):
    """Measure a weighted position sum of the errors mod d.

    The readout is sum_i w_i * e_i mod d with e_i = +1 for E01, -1 for
    E10 and 0 otherwise.  Always positional (weights single out
    positions).
    """
    _subset_check(spec.subset, dist.n)
    ledger = ledger.charge(f"epg_d{spec.d}", spec.d)
    dist = dist.to_positional()

    def outcome(labels):
        total = sum(w * COUNTER_SHIFT[labels[p - 1]] for p, w in spec.weights)
        return total % spec.d

    return _conditioned(dist, outcome), ledger

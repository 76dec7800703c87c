"""Label-level algebra of noisy Bell pairs.

Each pair in an ensemble is tracked by one of four labels: the target
Bell state B00, the two product error states E01 / E10 that trip the
counter gate in opposite directions, and the phase-flipped Bell state
B10 which is invisible to the counter gate.  Twirling channels and the
counter gate act on these labels as stochastic maps; the dense-matrix
module (:mod:`eipsim.oracle`) certifies that this classical picture is
exact for the states and operations used here.

Probability vectors over labels are always ordered (B00, E01, E10, B10).
Bell-diagonal vectors are ordered (p00, p01, p10, p11) by phase/shift
index of the Bell state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

PROB_ATOL = 1e-12


class PairLabel(IntEnum):
    """The four basis labels of a noisy pair in standard form."""

    B00 = 0  # target Bell state, counter invariant
    E01 = 1  # |01> error, increments the counter index
    E10 = 2  # |10> error, decrements the counter index
    B10 = 3  # phase-flipped Bell state, counter invariant


#: counter-index increment contributed by each label (mod d)
COUNTER_SHIFT = {
    PairLabel.B00: 0,
    PairLabel.E01: +1,
    PairLabel.E10: -1,
    PairLabel.B10: 0,
}

LABELS = tuple(PairLabel)


def _check_probs(p, what, atol=PROB_ATOL):
    p = tuple(float(x) for x in p)
    if len(p) != 4:
        raise ValueError(f"{what} needs 4 probabilities, got {len(p)}")
    if min(p) < -atol:
        raise ValueError(f"{what} has a negative entry: {p}")
    if abs(sum(p) - 1.0) > atol:
        raise ValueError(f"{what} does not sum to 1: sum={sum(p)!r}")
    return p


@dataclass(frozen=True)
class BellDiagonal:
    """Mixture of the four Bell states, coefficients (p00, p01, p10, p11)."""

    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", _check_probs(self.p, "BellDiagonal"))

    @property
    def fidelity(self):
        return self.p[0]


@dataclass(frozen=True)
class StandardFormState:
    """Mixture over PairLabel, coefficients (B00, E01, E10, B10).

    rank-2 means p(E10) = p(B10) = 0 (pure decay-type noise); rank-3
    means p(B10) = 0.
    """

    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", _check_probs(self.p, "StandardFormState"))

    @property
    def fidelity(self):
        return self.p[0]

    def is_rank2(self, atol=PROB_ATOL):
        return self.p[2] <= atol and self.p[3] <= atol

    def is_rank3(self, atol=PROB_ATOL):
        return self.p[3] <= atol

    @classmethod
    def rank2(cls, fidelity):
        """Decay-noise state: target plus a single |01> error component."""
        return cls((fidelity, 1.0 - fidelity, 0.0, 0.0))

    @classmethod
    def rank3(cls, fidelity, asymmetry=0.0):
        """Bit-flip-noise state with both counter-active errors.

        ``asymmetry`` in [-1, 1] shifts error weight from E10 to E01.
        """
        q = 1.0 - fidelity
        return cls((fidelity, q * (1 + asymmetry) / 2, q * (1 - asymmetry) / 2, 0.0))


@dataclass(frozen=True)
class QuditBellIndex:
    """Index (m, n) of a maximally entangled qudit pair of dimension d."""

    d: int
    m: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"qudit dimension must be >= 2, got {self.d}")
        if not (0 <= self.m < self.d and 0 <= self.n < self.d):
            raise ValueError(f"indices ({self.m},{self.n}) out of range for d={self.d}")


def counter_step(label, j, d):
    """Advance an auxiliary counter index by one application of the gate.

    E01 increments, E10 decrements (mod d), B00 and B10 leave the index
    unchanged.
    """
    if d < 2:
        raise ValueError(f"counter dimension must be >= 2, got {d}")
    if not 0 <= j < d:
        raise ValueError(f"counter index {j} out of range for d={d}")
    return (j + COUNTER_SHIFT[PairLabel(label)]) % d


def standardize(rho: BellDiagonal) -> StandardFormState:
    """Twirl a Bell-diagonal state into standard form.

    The second depolarization stage maps the two counter-active Bell
    states to an equal mixture of the product errors |01>, |10| while
    fixing B00 and B10, so the fidelity is preserved.
    """
    p00, p01, p10, p11 = rho.p
    e = (p01 + p11) / 2.0
    return StandardFormState((p00, e, e, p10))


def standard_to_bell_diagonal(s: StandardFormState) -> BellDiagonal:
    """Bell-twirl a standard-form state (the input convention for the
    recurrence baseline, which operates on Bell-diagonal coefficients)."""
    b00, e01, e10, b10 = s.p
    e = (e01 + e10) / 2.0
    return BellDiagonal((b00, e, b10, e))


#: Stochastic label map of the second purification step: the basis change
#: that converts B10 into counter-visible errors, followed by the twirl
#: that returns the ensemble to standard form.  Rows sum to one.
STEP2_ROWS = {
    PairLabel.B00: {PairLabel.B00: 1.0},
    PairLabel.E01: {PairLabel.E01: 0.25, PairLabel.E10: 0.25, PairLabel.B10: 0.5},
    PairLabel.E10: {PairLabel.E01: 0.25, PairLabel.E10: 0.25, PairLabel.B10: 0.5},
    PairLabel.B10: {PairLabel.E01: 0.5, PairLabel.E10: 0.5},
}


def step2_transition(label) -> dict:
    """Label transition probabilities of the second full-rank step."""
    return dict(STEP2_ROWS[PairLabel(label)])


def shannon_entropy(p) -> float:
    """Entropy in bits of a probability vector, with 0*log(0) = 0."""
    p = [float(x) for x in p]
    if min(p) < -1e-9 or abs(sum(p) - 1.0) > 1e-9:
        raise ValueError(f"not a probability vector: {p}")
    return -sum(x * math.log2(x) for x in p if x > 0.0)


def hashing_rate(state) -> float:
    """Per-pair asymptotic distillation rate max(0, 1 - S) of a state.

    Accepts a StandardFormState, BellDiagonal, or raw probability
    4-vector.  States with more than one bit of label entropy carry no
    distillable value and are clamped to rate zero.
    """
    p = state.p if isinstance(state, (StandardFormState, BellDiagonal)) else state
    return max(0.0, 1.0 - shannon_entropy(p))

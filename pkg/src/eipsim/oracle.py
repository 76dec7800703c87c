"""Dense complex-amplitude simulation of the underlying quantum objects.

Everything here works on explicit state vectors / density matrices at
tiny scale (a few qubit pairs plus one auxiliary qudit pair) and exists
to certify the classical label model: twirling channels, the bilateral
controlled-shift counter gate, and the number/position readout
measurements.  Exactness matters more than scale; the dimension cap is
enforced, not negotiated.

Register layout: a state over ``n`` qubit pairs and one auxiliary qudit
pair is a vector indexed by (pair_1, ..., pair_n, aux) where each pair
index runs over the computational basis |mn> (m on side A, n on side B,
index 2*m+n) and the aux index runs over |k, k'> (index d*k + k').
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .states import LABELS, PairLabel

MAX_TOTAL_DIM = 200_000

# single-qubit gates
_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PAULIS = (_I2, _X, _Y, _Z)


def bell_state(i, j):
    """Two-qubit Bell vector with phase index i and flip index j."""
    v = np.zeros(4, dtype=complex)
    # (|00> + |11>)/sqrt2 with sigma_x^j sigma_z^i applied on side B
    op = np.linalg.matrix_power(_X, j) @ np.linalg.matrix_power(_Z, i)
    base = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    v = np.kron(_I2, op) @ base
    return v


#: standard-form basis vectors per label
def label_vector(label):
    label = PairLabel(label)
    if label == PairLabel.B00:
        return bell_state(0, 0)
    if label == PairLabel.E01:
        v = np.zeros(4, dtype=complex)
        v[1] = 1.0
        return v
    if label == PairLabel.E10:
        v = np.zeros(4, dtype=complex)
        v[2] = 1.0
        return v
    return bell_state(1, 0)


def qudit_bell(d, m, n):
    """Maximally entangled qudit pair with phase index m, shift index n."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"indices ({m},{n}) out of range for d={d}")
    v = np.zeros(d * d, dtype=complex)
    for k in range(d):
        v[d * k + (k - n) % d] = np.exp(2j * np.pi * k * m / d) / math.sqrt(d)
    return v


@dataclass
class DenseState:
    """State vector over n qubit pairs and one auxiliary qudit pair."""

    amplitudes: np.ndarray
    n_pairs: int
    aux_dim: int

    def __post_init__(self):
        dim = 4**self.n_pairs * self.aux_dim**2
        if dim > MAX_TOTAL_DIM:
            raise ValueError(f"total dimension {dim} exceeds cap {MAX_TOTAL_DIM}")
        if self.amplitudes.shape != (dim,):
            raise ValueError("amplitude vector has wrong length")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state not normalized: |psi| = {norm}")

    @classmethod
    def from_labels(cls, labels, aux_dim, aux_index=(0, 0)):
        """Product state of standard-form basis vectors and one aux pair."""
        vec = np.ones(1, dtype=complex)
        for lab in labels:
            vec = np.kron(vec, label_vector(lab))
        vec = np.kron(vec, qudit_bell(aux_dim, *aux_index))
        return cls(vec, len(labels), aux_dim)

    def reshaped(self):
        return self.amplitudes.reshape((4,) * self.n_pairs + (self.aux_dim,) * 2)


def apply_bcx(state: DenseState, pair_index, repetitions=1) -> DenseState:
    """Bilateral controlled-shift from one qubit pair onto the aux pair.

    Each computational branch |mn> of the pair shifts the A-side aux ket
    by -m and the B-side by -n (times ``repetitions``), which moves the
    shift index of |Psi_(0,j)> to j - m + n per application.
    """
    if not 0 <= pair_index < state.n_pairs:
        raise ValueError(f"pair index {pair_index} out of range")
    d = state.aux_dim
    arr = state.reshaped()
    # move the acting pair and the two aux axes to the front
    arr = np.moveaxis(arr, (pair_index, state.n_pairs, state.n_pairs + 1), (0, 1, 2))
    out = np.empty_like(arr)
    for mn in range(4):
        m, n = divmod(mn, 2)
        out[mn] = np.roll(
            np.roll(arr[mn], -m * repetitions, axis=0), -n * repetitions, axis=1
        )
    out = np.moveaxis(out, (0, 1, 2), (pair_index, state.n_pairs, state.n_pairs + 1))
    return DenseState(out.reshape(-1), state.n_pairs, d)


def measure_aux_zz(state: DenseState):
    """Measure both aux qudits in the computational basis and read j.

    Returns a list of (j, probability, post_state_without_aux) sorted by
    j, where j is the difference of the two local outcomes mod d and the
    post state is the renormalized pair register conditioned on j.
    Outcomes with zero probability are dropped.
    """
    d = state.aux_dim
    arr = state.reshaped()
    pair_dim = 4**state.n_pairs
    flat = arr.reshape(pair_dim, d, d)
    results = []
    for j in range(d):
        # collect all (k, k') with k - k' = j mod d
        block = np.stack([flat[:, k, (k - j) % d] for k in range(d)], axis=1)
        prob = float(np.sum(np.abs(block) ** 2))
        if prob < 1e-15:
            continue
        # conditional density matrix of the pair register
        rho = (block @ block.conj().T) / prob
        results.append((j, prob, rho))
    return results


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by an explicit list of single-pair Kraus operators."""

    operators: tuple

    def __post_init__(self):
        total = sum(k.conj().T @ k for k in self.operators)
        if not np.allclose(total, np.eye(total.shape[0]), atol=1e-10):
            raise ValueError("Kraus operators do not satisfy completeness")

    def __call__(self, rho):
        return sum(k @ rho @ k.conj().T for k in self.operators)


def bell_twirl_channel() -> KrausChannel:
    """First depolarization stage: dephase in the Bell basis."""
    return KrausChannel(tuple(0.5 * np.kron(p, p) for p in PAULIS))


def error_mix_channel() -> KrausChannel:
    """Second depolarization stage: maps the counter-active Bell states
    to the equal product-error mixture while fixing B00 and B10."""
    pa = np.diag([1.0, np.exp(1j * np.pi / 2)]).astype(complex)  # phase on |1>
    pb = np.diag([np.exp(1j * np.pi / 2), 1.0]).astype(complex)  # phase on |0>
    u = np.kron(pa, pb)
    s = 1 / math.sqrt(2)
    return KrausChannel((s * np.eye(4, dtype=complex), s * u))


def hadamard_pair():
    return np.kron(_H, _H)


def apply_channel(rho, channel: KrausChannel):
    """Apply a single-pair channel to a 4x4 density matrix."""
    if rho.shape != (4, 4):
        raise ValueError("expected a single-pair 4x4 density matrix")
    out = channel(rho)
    if abs(np.trace(out) - np.trace(rho)) > 1e-10:
        raise ValueError("channel did not preserve trace")
    return out


def standard_form_coefficients(rho):
    """Diagonal of a 4x4 density matrix in the standard-form basis."""
    return np.array(
        [float(np.real(label_vector(lab).conj() @ rho @ label_vector(lab))) for lab in LABELS]
    )


def depolarize_to_standard_form(rho):
    """Full twirl (both stages) of an arbitrary two-qubit state."""
    return apply_channel(apply_channel(rho, bell_twirl_channel()), error_mix_channel())


def step2_channel(rho):
    """Density-matrix version of the second full-rank purification step,
    including the re-twirl that keeps the ensemble in standard form."""
    h = hadamard_pair()
    return depolarize_to_standard_form(
        apply_channel(h @ rho @ h.conj().T, error_mix_channel())
    )


# ---------------------------------------------------------------------------
# label-model certification


@dataclass
class EquivalenceReport:
    """Outcome of a label-model vs dense-simulation comparison run."""

    cases: int
    max_deviation: float
    tolerance: float
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.max_deviation < self.tolerance and not self.failures


def _label_model_outcome_dist(labels_list, probs, weights, d, shift_table):
    """Outcome distribution and per-outcome posteriors from label rules."""
    outcome = {}
    for labels, pr in zip(labels_list, probs):
        j = 0
        for lab, w in zip(labels, weights):
            j = (j + shift_table[PairLabel(lab)] * w) % d
        outcome.setdefault(j, []).append((labels, pr))
    dist = {j: sum(pr for _, pr in items) for j, items in outcome.items()}
    posts = {
        j: {labels: pr / dist[j] for labels, pr in items}
        for j, items in outcome.items()
    }
    return dist, posts


def _dense_joint_diagonal(rho, n_pairs):
    """Configuration probabilities read from a pair-register density matrix."""
    probs = {}
    for labels in itertools.product(LABELS, repeat=n_pairs):
        vec = np.ones(1, dtype=complex)
        for lab in labels:
            vec = np.kron(vec, label_vector(lab))
        probs[labels] = float(np.real(vec.conj() @ rho @ vec))
    return probs


def verify_label_equivalence(
    n=3, d=4, trials=25, tol=1e-9, seed=2024, shift_table=None
):
    """Compare the label model against the dense simulation.

    For random standard-form product inputs and random counter-gate
    weight patterns, checks that outcome distributions and posterior
    configuration distributions agree within ``tol`` (total variation /
    max absolute deviation).  ``shift_table`` overrides the label
    counter rule and exists as a negative-control hook for tests.

    Returns an :class:`EquivalenceReport`.
    """
    if 4**n * d**2 > MAX_TOTAL_DIM:
        raise ValueError(f"n={n}, d={d} exceeds the oracle dimension cap")
    if shift_table is None:
        from .states import COUNTER_SHIFT

        shift_table = COUNTER_SHIFT
    rng = np.random.default_rng(seed)
    max_dev = 0.0
    failures = []
    cases = 0
    for t in range(trials):
        p_single = rng.dirichlet(np.ones(4) * 0.7, size=n)
        # random weights: plain counting half the time, positional otherwise
        if rng.random() < 0.5:
            weights = [1] * n
        else:
            weights = [int(w) for w in rng.integers(1, max(2, d), size=n)]
        configs = list(itertools.product(LABELS, repeat=n))
        probs = [
            float(np.prod([p_single[i][lab] for i, lab in enumerate(labels)]))
            for labels in configs
        ]
        want_dist, want_posts = _label_model_outcome_dist(
            configs, probs, weights, d, shift_table
        )
        # dense side: run each pure configuration through the gate sequence
        got_dist = {}
        got_rho = {}
        for labels, pr in zip(configs, probs):
            if pr < 1e-14:
                continue
            state = DenseState.from_labels(labels, d)
            for i, w in enumerate(weights):
                state = apply_bcx(state, i, repetitions=w)
            for j, pj, rho in measure_aux_zz(state):
                got_dist[j] = got_dist.get(j, 0.0) + pr * pj
                got_rho[j] = got_rho.get(j, 0.0) + pr * pj * rho
        cases += 1
        all_j = set(want_dist) | set(got_dist)
        tv = 0.5 * sum(
            abs(want_dist.get(j, 0.0) - got_dist.get(j, 0.0)) for j in all_j
        )
        max_dev = max(max_dev, tv)
        if tv >= tol:
            failures.append((t, "outcome distribution", tv))
            continue
        for j, rho in got_rho.items():
            pj = got_dist[j]
            if pj < 1e-12:
                continue
            diag = _dense_joint_diagonal(rho / pj, n)
            post = want_posts.get(j, {})
            dev = max(
                abs(post.get(labels, 0.0) - diag.get(labels, 0.0))
                for labels in set(post) | set(diag)
            )
            # also require that no weight escaped the label-diagonal
            dev = max(dev, abs(sum(diag.values()) - 1.0))
            max_dev = max(max_dev, dev)
            if dev >= tol:
                failures.append((t, f"posterior after outcome {j}", dev))
    return EquivalenceReport(cases, max_dev, tol, failures)

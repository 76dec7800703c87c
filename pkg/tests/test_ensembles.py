import itertools
import math

import numpy as np
import pytest

from eipsim.ensembles import (
    ConfigurationDistribution,
    global_fidelity,
    iid_ensemble,
    local_fidelity,
    sample_configuration,
)
from eipsim.states import PairLabel, StandardFormState


class TestIIDEnsemble:
    def test_rejects_empty_ensemble(self):
        with pytest.raises(ValueError):
            iid_ensemble(StandardFormState.rank2(0.9), 0)

    def test_pure_input_is_point_mass(self):
        dist = iid_ensemble(StandardFormState((1, 0, 0, 0)), 5)
        assert dist.support == {(5, 0, 0, 0): 1.0}

    def test_rank2_error_count_is_binomial(self):
        n, f = 6, 0.85
        dist = iid_ensemble(StandardFormState.rank2(f), n)
        for k in range(n + 1):
            want = math.comb(n, k) * f ** (n - k) * (1 - f) ** k
            assert dist.support.get((n - k, k, 0, 0), 0.0) == pytest.approx(want)

    def test_rank3_pair_enumeration(self):
        # brute enumeration over all 16 ordered label pairs
        s = StandardFormState((0.8, 0.1, 0.1, 0.0))
        dist = iid_ensemble(s, 2)
        brute = {}
        for pair in itertools.product(range(4), repeat=2):
            counts = tuple(pair.count(i) for i in range(4))
            brute[counts] = brute.get(counts, 0.0) + s.p[pair[0]] * s.p[pair[1]]
        for counts, pr in brute.items():
            if pr == 0:
                continue
            assert dist.support[counts] == pytest.approx(pr)
        assert dist.support[(0, 1, 1, 0)] == pytest.approx(0.02)


class TestFidelities:
    def test_global_fidelity_iid(self):
        dist = iid_ensemble(StandardFormState.rank2(0.9), 2)
        assert global_fidelity(dist) == pytest.approx(0.81)

    def test_global_fidelity_point_mass(self):
        dist = ConfigurationDistribution.from_counts(4, {(4, 0, 0, 0): 1.0})
        assert global_fidelity(dist) == 1.0

    def test_global_fidelity_rank3(self):
        dist = iid_ensemble(StandardFormState((0.8, 0.1, 0.1, 0.0)), 3)
        assert global_fidelity(dist) == pytest.approx(0.512)

    def test_local_fidelity_iid_marginal(self):
        dist = iid_ensemble(StandardFormState.rank3(0.87), 5)
        for k in range(1, 6):
            assert local_fidelity(dist, k) == pytest.approx(0.87)

    def test_local_fidelity_single_error_posterior(self):
        # one error uniformly placed among 4 pairs
        dist = ConfigurationDistribution.from_counts(4, {(3, 1, 0, 0): 1.0})
        for k in range(1, 5):
            assert local_fidelity(dist, k) == pytest.approx(3 / 4)

    def test_local_fidelity_range_check(self):
        dist = iid_ensemble(StandardFormState.rank2(0.9), 3)
        with pytest.raises(ValueError):
            local_fidelity(dist, 0)
        with pytest.raises(ValueError):
            local_fidelity(dist, 4)

    def test_global_never_exceeds_local(self):
        for p in [(0.8, 0.1, 0.06, 0.04), (0.6, 0.4, 0.0, 0.0)]:
            dist = iid_ensemble(StandardFormState(p), 4)
            fg = global_fidelity(dist)
            for k in range(1, 5):
                assert fg <= local_fidelity(dist, k) + 1e-12

    def test_positional_mode_queries(self):
        cfg = (PairLabel.B00, PairLabel.E01, PairLabel.B00)
        dist = ConfigurationDistribution.point_mass(cfg)
        assert global_fidelity(dist) == 0.0
        assert local_fidelity(dist, 1) == 1.0
        assert local_fidelity(dist, 2) == 0.0


class TestSampling:
    def test_point_mass_sample(self):
        dist = ConfigurationDistribution.from_counts(4, {(4, 0, 0, 0): 1.0})
        assert sample_configuration(dist, 0) == (PairLabel.B00,) * 4

    def test_deterministic_given_seed(self):
        dist = iid_ensemble(StandardFormState((0.7, 0.15, 0.1, 0.05)), 8)
        a = sample_configuration(dist, 123)
        b = sample_configuration(dist, 123)
        assert a == b

    def test_error_count_frequencies(self):
        n, f, samples = 5, 0.8, 100_000
        dist = iid_ensemble(StandardFormState.rank2(f), n)
        rng = np.random.default_rng(42)
        hits = np.zeros(n + 1)
        for _ in range(samples):
            cfg = sample_configuration(dist, rng)
            hits[sum(1 for lab in cfg if lab == PairLabel.E01)] += 1
        for k in range(n + 1):
            want = math.comb(n, k) * f ** (n - k) * (1 - f) ** k
            sigma = math.sqrt(want * (1 - want) / samples)
            assert abs(hits[k] / samples - want) < 4 * sigma + 1e-9

    def test_positions_uniform(self):
        # single error must land on every position with equal frequency
        dist = ConfigurationDistribution.from_counts(3, {(2, 1, 0, 0): 1.0})
        rng = np.random.default_rng(7)
        where = np.zeros(3)
        trials = 30_000
        for _ in range(trials):
            cfg = sample_configuration(dist, rng)
            where[cfg.index(PairLabel.E01)] += 1
        assert np.all(np.abs(where / trials - 1 / 3) < 0.02)


class TestModeHandling:
    def test_positional_expansion_uniform(self):
        dist = ConfigurationDistribution.from_counts(3, {(2, 0, 1, 0): 1.0})
        pos = dist.to_positional()
        assert len(pos.support) == 3
        for pr in pos.support.values():
            assert pr == pytest.approx(1 / 3)

    def test_expansion_guard(self):
        dist = iid_ensemble(StandardFormState((0.7, 0.1, 0.1, 0.1)), 16)
        with pytest.raises(ValueError):
            dist.to_positional(max_support=1000)

    def test_rank_predicates(self):
        assert iid_ensemble(StandardFormState.rank2(0.9), 4).is_rank2()
        assert iid_ensemble(StandardFormState.rank3(0.9), 4).is_rank3()
        assert not iid_ensemble(StandardFormState((0.7, 0.1, 0.1, 0.1)), 4).is_rank3()

    def test_probability_validation(self):
        with pytest.raises(ValueError):
            ConfigurationDistribution.from_counts(3, {(3, 0, 0, 0): 0.5})

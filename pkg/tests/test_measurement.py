"""标签制备、辅助比特测量与 AccEk 的测试"""
import math

import numpy as np
import pytest

from conftest import random_unit
from quantum.errors import (
    AllSamplesCollapsed, ConfigError, DegenerateBranch, DimensionMismatch, EmptyDataset,
    NotNormalized,
)
from quantum.loss import SampleSet, accumulated_mse, accumulated_mse_summary
from quantum.measurement import (
    ShotPlan, measure_exact, measure_shots, phi_probability, prepare_label,
)
from quantum.network import NetworkConfig, forward
from quantum.state import AmplitudeVector, BranchState, distance_squared, ghz_init, inner


def state_with(k, v, gamma_sq=0.5) -> BranchState:
    """给定 γ² 的双分支态"""
    weight = math.sqrt(gamma_sq / (1 - gamma_sq))
    return BranchState.from_weight(weight, AmplitudeVector(k), AmplitudeVector(v))


class TestPrepareLabel:

    def test_setosa_label(self):
        label = AmplitudeVector([1, 0, 0, 0])
        state = prepare_label(ghz_init(2), label)
        np.testing.assert_array_equal(state.label_vec.amps, [1, 0, 0, 0])

    def test_same_label_unchanged(self):
        before = ghz_init(2)
        after = prepare_label(before, before.label_vec)
        np.testing.assert_array_equal(after.label_vec.amps, before.label_vec.amps)
        assert after.gamma == before.gamma

    def test_virginica_label(self):
        state = prepare_label(ghz_init(2), AmplitudeVector([0, 0, 1, 0]))
        np.testing.assert_array_equal(state.label_vec.amps, [0, 0, 1, 0])
        np.testing.assert_array_equal(state.out_vec.amps, [1, 0, 0, 0])

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            prepare_label(ghz_init(2), AmplitudeVector([1, 0]))
        with pytest.raises(NotNormalized):
            prepare_label(ghz_init(2), AmplitudeVector([1, 1, 0, 0]))


class TestMeasureExact:

    def test_equal_vectors(self):
        est = measure_exact(state_with([0.6, 0.8, 0, 0], [0.6, 0.8, 0, 0]))
        assert est.p_phi == 0.0
        assert est.mse == 0.0

    def test_orthogonal_half_weights(self):
        est = measure_exact(state_with([1, 0, 0, 0], [0, 1, 0, 0]))
        assert est.p_phi == pytest.approx(0.5, abs=1e-12)
        assert est.mse == pytest.approx(2.0, abs=1e-12)

    def test_unbalanced_weights(self):
        k = np.array([1.0, 0, 0, 0])
        v = np.array([0.5, math.sqrt(0.75), 0, 0])  # (k−v)ᵀ(k−v) = 1
        est = measure_exact(state_with(k, v, gamma_sq=0.9))
        assert est.gamma_sq == pytest.approx(0.9, abs=1e-12)
        assert est.p_phi == pytest.approx(0.09, abs=1e-12)
        assert est.mse == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_branch(self):
        state = BranchState.from_weight(1e-7, AmplitudeVector.basis(4, 0), AmplitudeVector.basis(4, 1))
        with pytest.raises(DegenerateBranch):
            measure_exact(state)

    def test_oracle_equivalence(self, rng):
        for _ in range(1000):
            config = NetworkConfig.random(4, rng.integers(1, 4), rng)
            state = forward(config, random_unit(rng, 4), random_unit(rng, 4))
            est = measure_exact(state)
            assert abs(est.mse - distance_squared(state.out_vec, state.label_vec)) < 1e-10
            assert 0.0 <= est.mse <= 4.0 + 1e-12
            assert abs(est.gamma_sq + est.lambda_sq - 1.0) < 1e-12

    def test_phi_complement_identity(self, rng):
        for _ in range(200):
            state = forward(NetworkConfig.random(4, 2, rng), random_unit(rng, 4), random_unit(rng, 4))
            est = measure_exact(state)
            g2, l2 = est.gamma_sq, est.lambda_sq
            overlap = inner(state.out_vec, state.label_vec)
            assert abs(est.p_phi - g2 * l2 * (2 - 2 * overlap)) < 1e-12
            assert abs((1 - est.p_phi) - (g2 ** 2 + l2 ** 2 + 2 * g2 * l2 * overlap)) < 1e-12

    def test_nonnegative_overlap_bound(self, rng):
        for _ in range(200):
            k, v = random_unit(rng, 4), random_unit(rng, 4)
            if inner(k, v) >= 0:
                assert measure_exact(state_with(k.amps, v.amps)).mse <= 2.0 + 1e-12


class TestShotPlan:

    def test_counts_must_be_positive(self):
        with pytest.raises(ConfigError):
            ShotPlan(0, 10, rng_seed=1)

    def test_spawn_is_deterministic(self):
        plan = ShotPlan.equal(100, rng_seed=3)
        assert plan.spawn(4) == plan.spawn(4)
        assert plan.spawn(4).rng_seed != plan.spawn(5).rng_seed


class TestMeasureShots:

    def test_deterministic(self):
        state = state_with([1, 0, 0, 0], [0.6, 0.8, 0, 0])
        plan = ShotPlan.equal(500, rng_seed=11)
        assert measure_shots(state, plan) == measure_shots(state, plan)

    def test_zero_probability(self):
        state = state_with([0, 1, 0, 0], [0, 1, 0, 0])
        for shots in (100, 1000):
            est = measure_shots(state, ShotPlan.equal(shots, rng_seed=shots))
            assert est.p_phi == 0.0
            assert est.mse == 0.0

    def test_large_shot_limit(self):
        state = state_with([1, 0, 0, 0], [0.6, 0.8, 0, 0], gamma_sq=0.7)
        exact = measure_exact(state)
        est = measure_shots(state, ShotPlan.equal(10 ** 7, rng_seed=5))
        assert est.gamma_sq == pytest.approx(exact.gamma_sq, abs=1e-3)
        assert est.p_phi == pytest.approx(exact.p_phi, abs=1e-3)
        assert est.mse == pytest.approx(exact.mse, abs=1e-2)

    def test_binomial_standard_error(self):
        state = state_with([1, 0, 0, 0], [0, 1, 0, 0])  # P = 0.5
        p_hat = [measure_shots(state, ShotPlan(1000, 1000, rng_seed=seed)).p_phi
                 for seed in range(10_000)]
        assert np.std(p_hat) == pytest.approx(math.sqrt(0.25 / 1000), rel=0.05)

    def test_error_shrinks_with_shots(self):
        state = state_with([1, 0, 0, 0], [0.5, math.sqrt(0.75), 0, 0])  # E = 1
        medians = []
        for shots in (10 ** 2, 10 ** 3, 10 ** 4, 10 ** 5):
            errors = [abs(measure_shots(state, ShotPlan.equal(shots, rng_seed=seed)).mse - 1.0)
                      for seed in range(100)]
            medians.append(float(np.median(errors)))
        inversions = sum(1 for a, b in zip(medians, medians[1:]) if b > a)
        assert inversions <= 1
        assert medians[-1] < 0.02

    def test_estimated_basis_probability(self):
        state = state_with([1, 0, 0, 0], [0.6, 0.8, 0, 0], gamma_sq=0.3)
        exact = measure_exact(state)
        assert phi_probability(state, state.gamma, state.lam) == pytest.approx(exact.p_phi, abs=1e-15)
        # λ̂²γ² + γ̂²λ² − 2λ̂γ̂γλ⟨k,v⟩
        g_hat, l_hat = math.sqrt(0.25), math.sqrt(0.75)
        expected = l_hat ** 2 * 0.3 + g_hat ** 2 * 0.7 - 2 * l_hat * g_hat * math.sqrt(0.21) * 0.6
        assert phi_probability(state, g_hat, l_hat) == pytest.approx(expected, abs=1e-12)

    def test_estimated_basis_converges(self):
        state = state_with([1, 0, 0, 0], [0.6, 0.8, 0, 0], gamma_sq=0.4)
        plan = ShotPlan.equal(10 ** 7, rng_seed=9, estimated_basis=True)
        assert measure_shots(state, plan).mse == pytest.approx(measure_exact(state).mse, abs=2e-2)


class TestAccumulatedMse:

    def test_single_zero(self):
        e0 = AmplitudeVector.basis(4, 0)
        assert accumulated_mse(NetworkConfig.identity(4, 2), [(e0, e0)]) == 0.0

    def test_mean_of_two(self):
        e0, e1 = AmplitudeVector.basis(4, 0), AmplitudeVector.basis(4, 1)
        value = accumulated_mse(NetworkConfig.identity(4, 2), [(e0, e0), (e0, e1)])
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_matches_per_sample_sum(self, rng, iris_split):
        config = NetworkConfig.random(4, 2, rng)
        per_sample = [measure_exact(forward(config, s.vector, s.label)).mse for s in iris_split.train]
        assert len(per_sample) == 120
        assert abs(accumulated_mse(config, iris_split.train) - np.mean(per_sample)) < 1e-12

    def test_empty(self):
        with pytest.raises(EmptyDataset):
            accumulated_mse(NetworkConfig.identity(4, 2), [])

    def test_collapsed_samples_skipped(self):
        collapsing = AmplitudeVector(np.array([1.0, -1.0, 0.0, 0.0]) / math.sqrt(2))
        e0, e1 = AmplitudeVector.basis(4, 0), AmplitudeVector.basis(4, 1)
        config = NetworkConfig.identity(4, 1)
        summary = accumulated_mse_summary(config, [(collapsing, e0), (e0, e1)])
        assert summary.collapsed == 1
        assert summary.collapsed_indices == (0,)
        assert summary.used == 1
        assert summary.value == pytest.approx(2.0, abs=1e-12)

    def test_all_collapsed(self):
        collapsing = AmplitudeVector(np.array([1.0, -1.0, 0.0, 0.0]) / math.sqrt(2))
        with pytest.raises(AllSamplesCollapsed):
            accumulated_mse(NetworkConfig.identity(4, 1), [(collapsing, AmplitudeVector.basis(4, 0))])

    def test_shot_mode_uses_per_sample_seeds(self, rng):
        config = NetworkConfig.random(4, 2, rng)
        pairs = [(random_unit(rng, 4), AmplitudeVector.basis(4, i % 3)) for i in range(6)]
        plan = ShotPlan.equal(2000, rng_seed=17)
        expected = np.mean([
            measure_shots(forward(config, x, v), plan.spawn(i)).mse for i, (x, v) in enumerate(pairs)
        ])
        assert accumulated_mse(config, pairs, plan) == pytest.approx(expected, abs=1e-15)
        assert accumulated_mse(config, pairs, plan) == accumulated_mse(config, pairs, plan)

    def test_sample_set_reuse(self, rng):
        config = NetworkConfig.random(4, 3, rng)
        pairs = [(random_unit(rng, 4), random_unit(rng, 4)) for _ in range(20)]
        assert accumulated_mse(config, SampleSet.from_pairs(pairs)) == accumulated_mse(config, pairs)

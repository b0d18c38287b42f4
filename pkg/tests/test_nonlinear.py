"""非线性层与分支重新归一化的测试"""
import math

import numpy as np
import pytest

from conftest import random_unit
from quantum.errors import NonlinearCollapse
from quantum.nonlinear import apply_nonlinear, nonlinear_kernel, nonlinear_map
from quantum.state import AmplitudeVector, ghz_init, set_input


class TestNonlinearMap:

    def test_first_basis_vector(self):
        result = nonlinear_map(AmplitudeVector.basis(4, 0))
        np.testing.assert_array_equal(result.beta, [1, 0, 0, 0])
        assert result.a == 1.0

    def test_last_basis_vector_flips_sign(self):
        result = nonlinear_map(AmplitudeVector.basis(4, 3))
        np.testing.assert_array_equal(result.beta, [0, 0, 0, -1])
        assert result.a == 1.0

    def test_uniform(self):
        result = nonlinear_map(AmplitudeVector([0.5, 0.5, 0.5, 0.5]))
        np.testing.assert_allclose(result.beta, [1, 1, 1, 0.5])
        assert result.a == pytest.approx(3.25)

    def test_a_is_squared_norm(self, rng):
        for _ in range(100):
            result = nonlinear_map(random_unit(rng, 8))
            assert abs(result.a - float(np.sum(result.beta ** 2))) < 1e-12

    def test_degree_two_homogeneous(self, rng):
        for _ in range(100):
            alpha = rng.normal(size=4)
            c = rng.uniform(-3, 3)
            beta, a = nonlinear_kernel(alpha)
            beta_c, a_c = nonlinear_kernel(c * alpha)
            np.testing.assert_allclose(beta_c, c ** 2 * beta, rtol=1e-12, atol=1e-12)
            assert a_c == pytest.approx(c ** 4 * a, rel=1e-12, abs=1e-12)

    def test_batch_matches_single(self, rng):
        alphas = np.stack([random_unit(rng, 4).amps for _ in range(10)])
        beta, a = nonlinear_kernel(alphas)
        for row, alpha in enumerate(alphas):
            single = nonlinear_map(AmplitudeVector(alpha))
            np.testing.assert_allclose(beta[row], single.beta, atol=1e-15)
            assert a[row] == pytest.approx(single.a, abs=1e-15)

    def test_real_output(self, rng):
        result = nonlinear_map(random_unit(rng, 4))
        assert result.beta.dtype == np.float64


class TestApplyNonlinear:

    def test_fresh_state(self):
        state = apply_nonlinear(ghz_init(2))
        assert state.gamma == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        np.testing.assert_array_equal(state.out_vec.amps, [1, 0, 0, 0])

    def test_single_layer_weights(self):
        state = set_input(ghz_init(2), AmplitudeVector([0.5, 0.5, 0.5, 0.5]))
        after = apply_nonlinear(state)
        assert after.gamma == pytest.approx(math.sqrt(3.25) / math.sqrt(4.25), abs=1e-12)
        assert after.lam == pytest.approx(1 / math.sqrt(4.25), abs=1e-12)
        np.testing.assert_allclose(after.out_vec.amps, np.array([1, 1, 1, 0.5]) / math.sqrt(3.25))

    def test_collapse(self):
        x = AmplitudeVector(np.array([1.0, -1.0, 0.0, 0.0]) / math.sqrt(2))
        with pytest.raises(NonlinearCollapse) as info:
            apply_nonlinear(set_input(ghz_init(2), x), layer=1)
        assert info.value.layer == 1

    def test_invariants_restored(self, rng):
        for _ in range(200):
            after = apply_nonlinear(set_input(ghz_init(2), random_unit(rng, 4)))
            assert abs(after.gamma ** 2 + after.lam ** 2 - 1.0) < 1e-12
            assert abs(after.out_vec.norm_squared() - 1.0) < 1e-12
            after.check()

    def test_two_layer_weight_law(self, rng):
        for _ in range(100):
            trace = []
            state = set_input(ghz_init(2), random_unit(rng, 4))
            state = apply_nonlinear(state, layer=0, trace=trace)
            state = apply_nonlinear(state, layer=1, trace=trace)
            product = trace[0] * trace[1]
            assert abs(state.gamma ** 2 - product / (product + 1)) < 1e-12

    def test_label_untouched(self, rng):
        state = set_input(ghz_init(2), random_unit(rng, 4))
        assert apply_nonlinear(state).label_vec is state.label_vec

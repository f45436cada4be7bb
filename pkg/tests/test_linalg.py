import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.linalg import (
    DensityOperator,
    Operator,
    StateVector,
    STRUCT_TOL,
    apply,
    basis_state,
    expectation,
    identity,
    outer,
    partial_trace,
    tensor,
)

from oracles import partial_trace_sum, random_density

RSQRT2 = 1.0 / math.sqrt(2.0)

X = Operator(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex), kind="hermitian")
PAIR = StateVector(np.array([RSQRT2, 0.0, 0.0, RSQRT2]), (2, 2))


def random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return Operator(q @ np.diag(np.diag(r) / np.abs(np.diag(r))), kind="unitary")


def random_ket(rng, dim, factors):
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(amps / np.linalg.norm(amps), factors)


class TestConstructors:
    def test_state_requires_unit_norm(self):
        with pytest.raises(ValueError, match="norm"):
            StateVector(np.array([1.0, 1.0]), (2,))

    def test_state_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            StateVector(np.array([np.nan, 0.0]), (2,))

    def test_factor_dims_must_multiply_out(self):
        with pytest.raises(ValueError, match="factor_dims"):
            StateVector(np.array([1.0, 0.0, 0.0, 0.0]), (2, 3))

    def test_operator_kind_enforced(self):
        with pytest.raises(ValueError, match="unitary"):
            Operator(np.array([[1.0, 1.0], [0.0, 1.0]]), kind="unitary")
        with pytest.raises(ValueError, match="hermit"):
            Operator(np.array([[0.0, 1.0], [0.0, 0.0]]), kind="hermitian")

    def test_density_operator_checks(self):
        with pytest.raises(ValueError, match="trace"):
            DensityOperator(np.eye(2), (2,))
        with pytest.raises(ValueError, match="hermit"):
            DensityOperator(np.array([[0.5, 0.5], [0.0, 0.5]]), (2,))
        with pytest.raises(ValueError, match="eigenvalue"):
            DensityOperator(np.diag([1.5, -0.5]).astype(complex), (2,))

    def test_dimension_cap(self):
        with pytest.raises(ValueError, match="MAX_DIM"):
            StateVector(np.ones(32) / np.sqrt(32.0), (32,))

    def test_values_immutable(self):
        with pytest.raises(ValueError):
            PAIR.amps[0] = 0.0


class TestTensor:
    def test_identity_tensor_identity(self):
        assert np.array_equal(tensor(identity(2), identity(2)).mat, np.eye(4))

    def test_uniform_product_state(self):
        plus = StateVector(np.array([RSQRT2, RSQRT2]), (2,))
        result = tensor(plus, plus)
        assert np.allclose(result.amps, 0.25**0.5)
        assert result.factor_dims == (2, 2)

    def test_sign_flip_on_pair(self):
        # diag(1, e^{i*pi}) on the first photon turns |11>+|22> into |11>-|22>.
        flip = tensor(Operator(np.diag([1.0, np.exp(1j * math.pi)]), kind="unitary"), identity(2))
        result = apply(flip, PAIR)
        expected = np.array([RSQRT2, 0.0, 0.0, -RSQRT2])
        assert np.abs(result.amps - expected).max() <= STRUCT_TOL

    def test_dimension_overflow_rejected(self):
        op8 = Operator(np.eye(8), kind="unitary")
        with pytest.raises(ValueError, match="MAX_DIM"):
            tensor(op8, Operator(np.eye(4), kind="unitary"))

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor(identity(2), PAIR)

    def test_kind_combination(self):
        assert tensor(X, X).kind == "hermitian"
        assert tensor(identity(2), identity(2)).kind == "unitary"
        assert tensor(X, identity(2)).kind == "general"


class TestApply:
    def test_identity_is_noop(self):
        assert np.array_equal(apply(identity(4), PAIR).amps, PAIR.amps)

    def test_requires_unitary_kind(self):
        with pytest.raises(ValueError, match="unitary"):
            apply(X, basis_state(0, (2,)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            apply(identity(2), PAIR)

    def test_density_conjugation(self):
        rho = outer(basis_state(0, (2,)))
        had = Operator(np.array([[1.0, 1.0], [1.0, -1.0]]) * RSQRT2, kind="unitary")
        evolved = apply(had, rho)
        assert np.abs(evolved.mat - 0.5).max() <= STRUCT_TOL

    def test_norm_preserved_for_random_unitaries(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            u = random_unitary(rng, 4)
            psi = random_ket(rng, 4, (2, 2))
            assert abs(np.linalg.norm(apply(u, psi).amps) - 1.0) <= STRUCT_TOL


class TestOuter:
    def test_basis_projector(self):
        assert np.array_equal(outer(basis_state(0, (2,))).mat, np.diag([1.0, 0.0]))

    def test_pair_projector_entries(self):
        mat = outer(PAIR).mat
        expected = np.zeros((4, 4))
        for i, j in ((0, 0), (0, 3), (3, 0), (3, 3)):
            expected[i, j] = 0.5
        assert np.abs(mat - expected).max() <= STRUCT_TOL

    def test_uniform_superposition(self):
        plus = StateVector(np.array([RSQRT2, RSQRT2]), (2,))
        assert np.abs(outer(plus).mat - 0.5).max() <= STRUCT_TOL


class TestPartialTrace:
    def test_pair_reduces_to_maximally_mixed(self):
        for keep in (0, 1):
            reduced = partial_trace(outer(PAIR), keep)
            assert np.abs(reduced.mat - np.eye(2) / 2).max() <= STRUCT_TOL

    def test_product_state_reduces_to_projector(self):
        plus = StateVector(np.array([RSQRT2, RSQRT2]), (2,))
        product = tensor(plus, plus)
        reduced = partial_trace(outer(product), 0)
        assert np.abs(reduced.mat - outer(plus).mat).max() <= STRUCT_TOL

    def test_mixture_reduces_to_maximally_mixed(self):
        mixture = DensityOperator(np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex), (2, 2))
        reduced = partial_trace(mixture, 1)
        assert np.abs(reduced.mat - np.eye(2) / 2).max() <= STRUCT_TOL

    def test_against_index_summation_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            rho = DensityOperator(random_density(rng, 4), (2, 2))
            for keep in (0, 1):
                slow = partial_trace_sum(rho.mat, (2, 2), keep)
                slow = slow / np.trace(slow).real
                assert np.abs(partial_trace(rho, keep).mat - slow).max() <= STRUCT_TOL

    def test_linearity(self):
        rng = np.random.default_rng(5)
        for alpha in (0.0, 0.3, 1.0):
            r1 = DensityOperator(random_density(rng, 4), (2, 2))
            r2 = DensityOperator(random_density(rng, 4), (2, 2))
            mixed = DensityOperator(alpha * r1.mat + (1 - alpha) * r2.mat, (2, 2))
            lhs = partial_trace(mixed, 0).mat
            rhs = alpha * partial_trace(r1, 0).mat + (1 - alpha) * partial_trace(r2, 0).mat
            assert np.abs(lhs - rhs).max() <= STRUCT_TOL

    def test_invalid_factor_index(self):
        with pytest.raises(ValueError, match="factor index"):
            partial_trace(outer(PAIR), 2)

    def test_needs_two_factors(self):
        with pytest.raises(ValueError, match="two factors"):
            partial_trace(outer(basis_state(0, (2,))), 0)


class TestExpectation:
    def test_pair_has_no_lifted_coherence(self):
        lifted = tensor(X, identity(2, kind="hermitian"))
        assert expectation(outer(PAIR), lifted) == pytest.approx(0.0, abs=STRUCT_TOL)

    def test_maximally_mixed_z(self):
        z = Operator(np.diag([1.0, -1.0]).astype(complex), kind="hermitian")
        rho = DensityOperator(np.eye(2) / 2, (2,))
        assert expectation(rho, z) == pytest.approx(0.0, abs=STRUCT_TOL)

    def test_uniform_superposition_x(self):
        plus = StateVector(np.array([RSQRT2, RSQRT2]), (2,))
        assert expectation(outer(plus), X) == pytest.approx(1.0, abs=STRUCT_TOL)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="hermitian"):
            expectation(outer(PAIR), identity(4, kind="unitary"))

    def test_matches_sandwich_for_random_inputs(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            psi = random_ket(rng, 4, (2, 2))
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            q = Operator(g + g.conj().T, kind="hermitian")
            direct = (psi.amps.conj() @ (q.mat @ psi.amps)).real
            assert expectation(outer(psi), q) == pytest.approx(direct, abs=STRUCT_TOL)


@settings(max_examples=200)
@given(
    re1=st.floats(-1, 1), im1=st.floats(-1, 1),
    re2=st.floats(-1, 1), im2=st.floats(-1, 1),
)
def test_witness_strength_equals_overlap_product(re1, im1, re2, im2):
    # q^2 + p^2 = 4 |beta|^2 |gamma|^2 for every pure single-photon state.
    beta = complex(re1, im1)
    gamma = complex(re2, im2)
    norm = math.hypot(abs(beta), abs(gamma))
    if norm < 1e-3:
        return
    beta, gamma = beta / norm, gamma / norm
    rho = outer(StateVector(np.array([beta, gamma]), (2,)))
    y = Operator(np.array([[0.0, -1.0j], [1.0j, 0.0]]), kind="hermitian")
    q = expectation(rho, X)
    p = expectation(rho, y)
    assert q * q + p * p == pytest.approx(4.0 * abs(beta) ** 2 * abs(gamma) ** 2, abs=1e-12)

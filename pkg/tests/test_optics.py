import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from biphoton.linalg import STRUCT_TOL, DensityOperator, StateVector, apply, outer, partial_trace
from biphoton.optics import (
    PhaseSettings,
    RSQRT2,
    SourceKind,
    beam_splitter,
    circuit_unitary,
    make_source,
    phase_shifter,
)

from oracles import circuit_matrix

angles = st.floats(min_value=-20.0, max_value=20.0, allow_nan=False)


class TestBeamSplitter:
    def test_matrix(self):
        expected = np.array([[1.0, 1.0j], [1.0j, 1.0]]) * RSQRT2
        assert np.abs(beam_splitter().mat - expected).max() <= 1e-15

    def test_unitarity(self):
        bs = beam_splitter().mat
        assert np.abs(bs.conj().T @ bs - np.eye(2)).max() <= 1e-15

    def test_fifty_fifty_split(self):
        out = apply(beam_splitter(), StateVector([1.0, 0.0], (2,)))
        assert abs(abs(out.amps[0]) ** 2 - 0.5) <= STRUCT_TOL
        assert abs(abs(out.amps[1]) ** 2 - 0.5) <= STRUCT_TOL

    def test_double_pass_swaps_paths_up_to_phase(self):
        out = apply(beam_splitter(), apply(beam_splitter(), StateVector([1.0, 0.0], (2,))))
        # BS^2 |path1> = i |path2|: overlap magnitude 1 with the swapped basis ket.
        assert abs(abs(out.amps[1]) - 1.0) <= STRUCT_TOL
        assert abs(out.amps[0]) <= STRUCT_TOL


class TestPhaseShifter:
    def test_zero_is_identity(self):
        assert np.abs(phase_shifter(0.0).mat - np.eye(2)).max() <= STRUCT_TOL

    def test_pi_is_sign_flip(self):
        assert np.abs(phase_shifter(math.pi).mat - np.diag([1.0, -1.0])).max() <= STRUCT_TOL

    def test_acts_on_second_path(self):
        plus = StateVector([RSQRT2, RSQRT2], (2,))
        out = apply(phase_shifter(math.pi / 2), plus)
        assert np.abs(out.amps - np.array([RSQRT2, 1j * RSQRT2])).max() <= STRUCT_TOL

    @given(a=angles, b=angles)
    def test_composition(self, a, b):
        combined = phase_shifter(a).mat @ phase_shifter(b).mat
        assert np.abs(combined - phase_shifter(a + b).mat).max() <= STRUCT_TOL

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            phase_shifter(math.inf)


class TestSources:
    def test_equal_amplitude_pair(self):
        state = make_source(SourceKind("entangled"))
        assert np.abs(state.amps - np.array([RSQRT2, 0, 0, RSQRT2])).max() <= STRUCT_TOL

    def test_equal_weight_mixture(self):
        rho = make_source(SourceKind("mixture"))
        assert isinstance(rho, DensityOperator)
        assert np.abs(rho.mat - np.diag([0.5, 0.0, 0.0, 0.5])).max() <= STRUCT_TOL

    def test_degenerate_amplitudes_give_product_state(self):
        state = make_source(SourceKind("entangled", 1.0, 0.0))
        assert np.abs(state.amps - np.array([1.0, 0, 0, 0])).max() <= STRUCT_TOL

    def test_product_state_is_uniform(self):
        state = make_source(SourceKind("product"))
        assert np.allclose(state.amps, 0.5)

    def test_unnormalized_amplitudes_rejected(self):
        with pytest.raises(ValueError, match="normalized"):
            SourceKind("entangled", 1.0, 1.0)

    def test_unknown_tag_rejected(self):
        with pytest.raises(ValueError, match="tag"):
            SourceKind("squeezed")

    def test_schmidt_weights_are_amplitude_moduli(self):
        src = SourceKind("entangled", math.sqrt(0.3), complex(0, math.sqrt(0.7)))
        reduced = partial_trace(outer(make_source(src)), 0)
        eigs = np.sort(np.linalg.eigvalsh(reduced.mat))
        assert np.abs(eigs - np.array([0.3, 0.7])).max() <= STRUCT_TOL

    def test_product_source_reduces_to_rank_one(self):
        rho = outer(make_source(SourceKind("product")))
        for keep in (0, 1):
            reduced = partial_trace(rho, keep).mat
            assert abs(np.trace(reduced @ reduced).real - 1.0) <= STRUCT_TOL


class TestCircuit:
    def test_zero_settings_is_double_beam_splitter(self):
        bs = beam_splitter().mat
        expected = np.kron(bs, bs)
        assert np.abs(circuit_unitary(PhaseSettings(0.0, 0.0)).mat - expected).max() <= STRUCT_TOL

    @given(ps=angles, pa=angles)
    def test_unitarity(self, ps, pa):
        u = circuit_unitary(PhaseSettings(ps, pa)).mat
        assert np.abs(u.conj().T @ u - np.eye(4)).max() <= STRUCT_TOL

    @given(ps=angles, pa=angles)
    def test_matches_loop_oracle(self, ps, pa):
        fast = circuit_unitary(PhaseSettings(ps, pa)).mat
        slow = np.array(circuit_matrix(ps, pa))
        assert np.abs(fast - slow).max() <= STRUCT_TOL

    def test_common_shift_leaves_pair_statistics_alone(self):
        pair = make_source(SourceKind("entangled"))
        base = np.abs(apply(circuit_unitary(PhaseSettings(0.4, 0.1)), pair).amps) ** 2
        for c in (0.9, -2.5, 11.0):
            shifted = np.abs(
                apply(circuit_unitary(PhaseSettings(0.4 + c, 0.1 + c)), pair).amps
            ) ** 2
            assert np.abs(base - shifted).max() <= STRUCT_TOL

    def test_settings_must_be_finite(self):
        with pytest.raises(ValueError):
            PhaseSettings(math.nan, 0.0)

"""Self-contained invariant suite behind the ``check`` command.

Each check is a named callable raising AssertionError (or any exception)
on failure; the runner turns that into a per-name pass/fail record.  The
brute-force reference implementations here are deliberately independent
of the production code paths they validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import optics
from .analysis import (
    CANONICAL_CHSH_SETTINGS,
    CHSH_TOL,
    TSIRELSON,
    chsh,
    coincidence_law,
    correlation,
    fringe_visibility,
    joint_probabilities,
    local_coherence,
    no_signaling_audit,
    phase_grid,
    state_discrimination_report,
    tsirelson_scan,
)
from .linalg import (
    DensityOperator,
    Operator,
    StateVector,
    STRUCT_TOL,
    apply,
    expectation,
    identity,
    outer,
    partial_trace,
    tensor,
)
from .measurement import JointProbabilities, born_probabilities, marginals, sample_outcomes
from .optics import PhaseSettings, SourceKind, make_source
from .rng import substream_seed, uniforms


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _rand_reals(seed: int, n: int) -> np.ndarray:
    return uniforms(seed, n) - 0.5


def _rand_complex(seed: int, n: int) -> np.ndarray:
    parts = _rand_reals(seed, 2 * n)
    return parts[:n] + 1j * parts[n:]


def _rand_state(seed: int, dim: int, factors: tuple[int, ...]) -> StateVector:
    amps = _rand_complex(seed, dim)
    return StateVector(amps / np.linalg.norm(amps), factors)


def _rand_unitary(seed: int, dim: int) -> Operator:
    g = _rand_complex(seed, dim * dim).reshape(dim, dim)
    q, r = np.linalg.qr(g)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return Operator(q, kind="unitary")


def _rand_density(seed: int, dim: int, factors: tuple[int, ...]) -> DensityOperator:
    g = _rand_complex(seed, dim * dim).reshape(dim, dim)
    mat = g @ g.conj().T
    return DensityOperator(mat / np.trace(mat).real, factors)


def _partial_trace_bruteforce(rho: DensityOperator, keep: int) -> np.ndarray:
    """Double-index summation over the traced factor's basis (reference path)."""
    d_s, d_a = rho.factor_dims
    if keep == 0:
        out = np.zeros((d_s, d_s), dtype=np.complex128)
        for i in range(d_s):
            for j in range(d_s):
                for k in range(d_a):
                    out[i, j] += rho.mat[i * d_a + k, j * d_a + k]
    else:
        out = np.zeros((d_a, d_a), dtype=np.complex128)
        for i in range(d_a):
            for j in range(d_a):
                for k in range(d_s):
                    out[i, j] += rho.mat[k * d_a + i, k * d_a + j]
    return out / np.trace(out).real


def check_norm_preservation() -> None:
    for k in range(20):
        for dim, factors in ((2, (2,)), (4, (2, 2))):
            u = _rand_unitary(1000 + 10 * k + dim, dim)
            psi = _rand_state(2000 + 10 * k + dim, dim, factors)
            assert abs(np.linalg.norm(apply(u, psi).amps) - 1.0) <= STRUCT_TOL


def check_partial_trace_oracle() -> None:
    for k in range(200):
        rho = _rand_density(3000 + k, 4, (2, 2))
        for keep in (0, 1):
            fast = partial_trace(rho, keep).mat
            slow = _partial_trace_bruteforce(rho, keep)
            assert np.abs(fast - slow).max() <= STRUCT_TOL


def check_trace_linearity() -> None:
    for k in range(50):
        r1 = _rand_density(4000 + k, 4, (2, 2))
        r2 = _rand_density(5000 + k, 4, (2, 2))
        alpha = float(uniforms(6000 + k, 1)[0])
        mixed = DensityOperator(alpha * r1.mat + (1 - alpha) * r2.mat, (2, 2))
        lhs = partial_trace(mixed, 0).mat
        rhs = alpha * partial_trace(r1, 0).mat + (1 - alpha) * partial_trace(r2, 0).mat
        assert np.abs(lhs - rhs).max() <= STRUCT_TOL


def check_expectation_matches_sandwich() -> None:
    for k in range(50):
        psi = _rand_state(7000 + k, 4, (2, 2))
        h = _rand_complex(8000 + k, 16).reshape(4, 4)
        q = Operator(h + h.conj().T, kind="hermitian")
        direct = (psi.amps.conj() @ (q.mat @ psi.amps)).real
        assert abs(expectation(outer(psi), q) - direct) <= STRUCT_TOL


def check_witness_completeness() -> None:
    # q^2 + p^2 = 4 |beta|^2 |gamma|^2 for every pure single-photon state.
    for k in range(500):
        psi = _rand_state(9000 + k, 2, (2,))
        q, p = local_coherence(outer(psi))
        target = 4.0 * abs(psi.amps[0]) ** 2 * abs(psi.amps[1]) ** 2
        assert abs(q * q + p * p - target) <= STRUCT_TOL


def check_entangled_reduction_coherence_free() -> None:
    # Both reduced states of a correlated pair are diagonal for any amplitudes.
    for k in range(500):
        amps = _rand_complex(10_000 + k, 2)
        amps = amps / np.linalg.norm(amps)
        rho = outer(make_source(SourceKind("entangled", amps[0], amps[1])))
        for factor in (0, 1):
            q, p = local_coherence(partial_trace(rho, factor))
            assert abs(q) <= STRUCT_TOL and abs(p) <= STRUCT_TOL


def check_beam_splitter_unitary() -> None:
    bs = optics.beam_splitter()
    defect = np.abs(bs.mat.conj().T @ bs.mat - np.eye(2)).max()
    assert defect <= STRUCT_TOL, f"unitarity defect {defect:.3e}"
    assert abs(abs(bs.mat[0, 0]) ** 2 - 0.5) <= STRUCT_TOL


def check_phase_shifter_composition() -> None:
    for k in range(50):
        a, b = 20.0 * (_rand_reals(11_000 + k, 2))
        combined = optics.phase_shifter(a).mat @ optics.phase_shifter(b).mat
        assert np.abs(combined - optics.phase_shifter(a + b).mat).max() <= STRUCT_TOL


def check_circuit_unitary_random_settings() -> None:
    for k in range(100):
        ps, pa = 20.0 * (_rand_reals(12_000 + k, 2))
        u = optics.circuit_unitary(PhaseSettings(ps, pa)).mat
        assert np.abs(u.conj().T @ u - np.eye(4)).max() <= STRUCT_TOL


def check_schmidt_coefficients() -> None:
    for k in range(50):
        amps = _rand_complex(13_000 + k, 2)
        amps = amps / np.linalg.norm(amps)
        rho = outer(make_source(SourceKind("entangled", amps[0], amps[1])))
        eigs = np.sort(np.linalg.eigvalsh(partial_trace(rho, 0).mat))
        target = np.sort([abs(amps[0]) ** 2, abs(amps[1]) ** 2])
        assert np.abs(eigs - target).max() <= STRUCT_TOL


def check_product_source_factorizes() -> None:
    rho = outer(make_source(SourceKind("product")))
    for factor in (0, 1):
        reduced = partial_trace(rho, factor).mat
        purity = np.trace(reduced @ reduced).real
        assert abs(purity - 1.0) <= STRUCT_TOL


def check_probability_conservation() -> None:
    for k in range(50):
        ps, pa = 20.0 * (_rand_reals(14_000 + k, 2))
        for tag in ("entangled", "product", "mixture"):
            p = joint_probabilities(SourceKind(tag), PhaseSettings(ps, pa))
            assert abs(p.table.sum() - 1.0) <= STRUCT_TOL


def check_flat_marginals_grid() -> None:
    src = SourceKind("entangled")
    for s in phase_grid(16):
        dist_s, dist_a = marginals(joint_probabilities(src, s))
        assert np.abs(dist_s - 0.5).max() <= STRUCT_TOL
        assert np.abs(dist_a - 0.5).max() <= STRUCT_TOL


def check_sampling_determinism() -> None:
    p = joint_probabilities(SourceKind("entangled"), PhaseSettings(0.7, 0.1))
    a = sample_outcomes(p, 10_000, seed=99)
    b = sample_outcomes(p, 10_000, seed=99)
    assert a.tobytes() == b.tobytes()


def check_empirical_convergence() -> None:
    p = joint_probabilities(SourceKind("entangled"), PhaseSettings(math.pi / 2, 0.0))
    for k in range(30):
        outcomes = sample_outcomes(p, 100_000, substream_seed(424242, k))
        freq = np.bincount(outcomes, minlength=4) / 100_000
        assert np.abs(freq - p.table.reshape(-1)).max() < 0.01


def check_fringe_law_matches_circuit() -> None:
    src = SourceKind("entangled")
    deltas = 40.0 * _rand_reals(15_000, 1000)
    shifts = 40.0 * _rand_reals(15_001, 1000)
    for d, c in zip(deltas, shifts):
        p = joint_probabilities(src, PhaseSettings(d + c, c))
        same = coincidence_law(d, "same")
        opposite = coincidence_law(d, "opposite")
        expected = np.array([[same, opposite], [opposite, same]])
        assert np.abs(p.table - expected).max() <= STRUCT_TOL


def check_delta_shift_invariance() -> None:
    src = SourceKind("entangled")
    for k in range(100):
        ps, pa, c = 20.0 * (_rand_reals(16_000 + k, 3))
        p0 = joint_probabilities(src, PhaseSettings(ps, pa))
        p1 = joint_probabilities(src, PhaseSettings(ps + c, pa + c))
        assert np.abs(p0.table - p1.table).max() <= STRUCT_TOL


def check_visibility_contrast() -> None:
    deltas = 2.0 * math.pi * np.arange(32) / 32
    ent = [joint_probabilities(SourceKind("entangled"), PhaseSettings(d, 0.0)).p11 for d in deltas]
    mix = [joint_probabilities(SourceKind("mixture"), PhaseSettings(d, 0.0)).p11 for d in deltas]
    assert abs(fringe_visibility(ent) - 1.0) <= STRUCT_TOL
    assert abs(fringe_visibility(mix)) <= STRUCT_TOL


def check_chsh_canonical() -> None:
    s = chsh(*CANONICAL_CHSH_SETTINGS).s_value
    assert abs(abs(s) - TSIRELSON) <= CHSH_TOL, f"|S| = {abs(s)!r}"


def check_chsh_mixture_bounded() -> None:
    src = SourceKind("mixture")
    angles = 2.0 * math.pi * np.arange(6) / 6
    for a in angles:
        for b in angles:
            s = chsh(float(a), float(a) + 0.9, float(b), float(b) + 1.7, source=src).s_value
            assert abs(s) <= 2.0 + CHSH_TOL


def check_tsirelson_scan() -> None:
    best = tsirelson_scan(coarse=64, refine_rounds=2)
    assert best <= TSIRELSON + CHSH_TOL, f"scan found {best!r}"
    assert best >= TSIRELSON - 1e-6, f"scan only reached {best!r}"


def check_no_signaling_entangled() -> None:
    audit = no_signaling_audit(phase_grid(16))
    assert audit <= STRUCT_TOL, f"audit spread {audit:.3e}"


def check_no_signaling_detects_corruption() -> None:
    src = SourceKind("entangled")
    eps = 1e-3
    skew = np.array([[1.0, 0.0], [0.0, 0.0]])

    def corrupted(s: PhaseSettings) -> JointProbabilities:
        table = joint_probabilities(src, s).table
        if s.phi_s > math.pi:
            table = (1.0 - eps) * table + eps * skew
        return JointProbabilities(table)

    audit = no_signaling_audit(phase_grid(8), joint_of=corrupted)
    assert audit > eps / 2, f"audit missed injected asymmetry ({audit:.3e})"


def check_marginals_identical_across_sources() -> None:
    ent, mix = SourceKind("entangled"), SourceKind("mixture")
    for s in phase_grid(8):
        for me, mm in zip(marginals(joint_probabilities(ent, s)), marginals(joint_probabilities(mix, s))):
            assert np.abs(me - mm).max() <= STRUCT_TOL


def check_discrimination_report() -> None:
    report = state_discrimination_report(phase_grid(16))
    assert report.marginal_max_diff <= STRUCT_TOL
    assert abs(report.entangled_visibility - 1.0) <= STRUCT_TOL
    assert abs(report.mixture_visibility) <= STRUCT_TOL
    assert abs(report.entangled_chsh_max - TSIRELSON) <= CHSH_TOL
    assert report.mixture_chsh_max <= 2.0 + CHSH_TOL


def check_presets_share_circuit() -> None:
    s = PhaseSettings(0.3, 1.1)
    mats = [optics.circuit_unitary(s).mat for _ in range(3)]
    assert all(np.array_equal(mats[0], m) for m in mats[1:])


def check_correlation_law() -> None:
    assert abs(correlation(born_probabilities(make_source(SourceKind("mixture")))) - 1.0) <= STRUCT_TOL
    src = SourceKind("entangled")
    for d, want in ((0.0, -1.0), (math.pi / 2, 0.0), (math.pi, 1.0)):
        e = correlation(joint_probabilities(src, PhaseSettings(d, 0.0)))
        assert abs(e - want) <= STRUCT_TOL


def check_lifted_witness_zero_on_pair() -> None:
    rho = outer(make_source(SourceKind("entangled")))
    x = Operator(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex), kind="hermitian")
    y = Operator(np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex), kind="hermitian")
    eye = identity(2, kind="hermitian")
    for w in (x, y):
        assert abs(expectation(rho, tensor(w, eye))) <= STRUCT_TOL
        assert abs(expectation(rho, tensor(eye, w))) <= STRUCT_TOL


ALL_CHECKS: tuple[tuple[str, Callable[[], None]], ...] = (
    ("linalg.norm_preservation", check_norm_preservation),
    ("linalg.partial_trace_oracle", check_partial_trace_oracle),
    ("linalg.trace_linearity", check_trace_linearity),
    ("linalg.expectation_matches_sandwich", check_expectation_matches_sandwich),
    ("linalg.witness_completeness", check_witness_completeness),
    ("linalg.entangled_reduction_coherence_free", check_entangled_reduction_coherence_free),
    ("linalg.lifted_witness_zero_on_pair", check_lifted_witness_zero_on_pair),
    ("optics.beam_splitter_unitary", check_beam_splitter_unitary),
    ("optics.phase_shifter_composition", check_phase_shifter_composition),
    ("optics.circuit_unitary_random_settings", check_circuit_unitary_random_settings),
    ("optics.schmidt_coefficients", check_schmidt_coefficients),
    ("optics.product_source_factorizes", check_product_source_factorizes),
    ("measurement.probability_conservation", check_probability_conservation),
    ("measurement.flat_marginals_grid", check_flat_marginals_grid),
    ("measurement.sampling_determinism", check_sampling_determinism),
    ("measurement.empirical_convergence", check_empirical_convergence),
    ("analysis.fringe_law_matches_circuit", check_fringe_law_matches_circuit),
    ("analysis.delta_shift_invariance", check_delta_shift_invariance),
    ("analysis.visibility_contrast", check_visibility_contrast),
    ("analysis.correlation_law", check_correlation_law),
    ("analysis.chsh_canonical", check_chsh_canonical),
    ("analysis.chsh_mixture_bounded", check_chsh_mixture_bounded),
    ("analysis.tsirelson_scan", check_tsirelson_scan),
    ("analysis.no_signaling_entangled", check_no_signaling_entangled),
    ("analysis.no_signaling_detects_corruption", check_no_signaling_detects_corruption),
    ("analysis.marginals_identical_across_sources", check_marginals_identical_across_sources),
    ("analysis.discrimination_report", check_discrimination_report),
    ("experiments.presets_share_circuit", check_presets_share_circuit),
)


def run_all() -> list[CheckResult]:
    """Run every invariant; a raised exception becomes a named failure."""
    results = []
    for name, fn in ALL_CHECKS:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report, do not crash the suite
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
        else:
            results.append(CheckResult(name, True))
    return results

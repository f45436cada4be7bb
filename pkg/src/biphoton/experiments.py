"""Named experiment presets with pass/fail verdicts.

Every preset is deterministic given (spec, seed).  Sweep point k draws
from the child stream ``substream_seed(spec.seed, k)``; the delayed-choice
run further splits each point's stream into a coin substream (index 0)
and an outcome substream (index 1).

``n_trials`` is the number of Monte Carlo trials per sweep point.
Analytic verdicts use the structural tolerance (CHSH uses its own);
empirical verdicts use 4-sigma binomial bounds derived from the realized
per-point counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analysis import (
    CANONICAL_CHSH_SETTINGS,
    CHSH_TOL,
    FringeScan,
    TSIRELSON,
    chsh,
    fringe_visibility,
    joint_probabilities,
    local_coherence,
    no_signaling_audit,
    phase_grid,
)
from .linalg import STRUCT_TOL, outer, partial_trace
from .measurement import CoincidenceTally, born_probabilities, marginals, sample_outcomes
from .optics import PhaseSettings, SourceKind, make_source
from .rng import substream_seed, uniforms

PRESETS = ("rtm", "product_control", "mixture_control", "delayed_choice", "cat")

_PRESET_SOURCE_TAG = {
    "rtm": "entangled",
    "product_control": "product",
    "mixture_control": "mixture",
    "delayed_choice": "entangled",
    "cat": "entangled",
}

_DEFAULT_AXIS = {
    "rtm": "delta",
    "product_control": "phi_s",
    "mixture_control": "delta",
    "delayed_choice": "phi_s",
    "cat": "delta",
}

SWEEP_AXES = ("delta", "phi_s", "phi_a")
DEFAULT_SWEEP_POINTS = 32
DEFAULT_N_TRIALS = 100_000


@dataclass(frozen=True)
class SweepSpec:
    """Phase sweep: which angle varies and how many even points over 2*pi."""

    axis: str
    points: int

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.points < 1:
            raise ValueError("sweep needs at least one point")


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one preset run."""

    preset: str
    source: SourceKind
    settings: PhaseSettings = PhaseSettings(0.0, 0.0)
    which_path: bool = False
    n_trials: int = DEFAULT_N_TRIALS
    seed: int = 1
    sweep: Optional[SweepSpec] = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ValueError(f"unknown preset {self.preset!r}")
        required = _PRESET_SOURCE_TAG[self.preset]
        if self.source.tag != required:
            raise ValueError(
                f"preset {self.preset!r} requires a {required!r} source, got {self.source.tag!r}"
            )
        if self.n_trials < 1:
            raise ValueError("n_trials must be positive")
        if self.preset == "product_control" and self.which_path:
            raise ValueError("product_control models unentangled photons; which_path must be off")


@dataclass(frozen=True)
class Verdict:
    """One named check: passes iff |measured - expected| <= tolerance."""

    name: str
    measured: float
    expected: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.measured - self.expected) <= self.tolerance


@dataclass(frozen=True, eq=False)
class DelayedChoiceData:
    """Per-point bin statistics of the delayed-choice run."""

    phi_values: np.ndarray
    off_n: np.ndarray
    off_hits: np.ndarray
    on_n: np.ndarray
    on_hits: np.ndarray
    analytic_off_p1: np.ndarray

    @property
    def off_p1(self) -> np.ndarray:
        return self.off_hits / self.off_n

    @property
    def on_p1(self) -> np.ndarray:
        return self.on_hits / self.on_n


@dataclass
class RunOutcome:
    """Uniform result container used by the command-line front end."""

    verdicts: list[Verdict]
    scan: FringeScan | None = None
    delayed: DelayedChoiceData | None = None


def _effective_sweep(spec: ExperimentSpec) -> SweepSpec:
    return spec.sweep if spec.sweep is not None else SweepSpec(_DEFAULT_AXIS[spec.preset], DEFAULT_SWEEP_POINTS)


def _scan_settings(spec: ExperimentSpec) -> list[PhaseSettings]:
    sweep = _effective_sweep(spec)
    offsets = 2.0 * math.pi * np.arange(sweep.points) / sweep.points
    base = spec.settings
    if sweep.axis == "phi_a":
        return [PhaseSettings(base.phi_s, base.phi_a + t) for t in offsets]
    # "delta" and "phi_s" both advance phi_s with phi_a held fixed.
    return [PhaseSettings(base.phi_s + t, base.phi_a) for t in offsets]


def _build_scan(spec: ExperimentSpec, settings: list[PhaseSettings]) -> FringeScan:
    analytic = [joint_probabilities(spec.source, s) for s in settings]
    empirical = []
    for k, p in enumerate(analytic):
        seed_k = substream_seed(spec.seed, k)
        empirical.append(CoincidenceTally.from_outcomes(sample_outcomes(p, spec.n_trials, seed_k), seed_k))
    return FringeScan(tuple(settings), tuple(analytic), tuple(empirical))


def _local_visibility(scan: FringeScan) -> float:
    return max(
        fringe_visibility(scan.marginal_series("s", 1)),
        fringe_visibility(scan.marginal_series("a", 1)),
    )


def binomial_se(p_hat: float, n: int) -> float:
    """Binomial standard error with a 1/n floor against degenerate cells."""
    return math.sqrt(p_hat * (1.0 - p_hat) / n + 1.0 / n**2)


def visibility_tolerance(p_hat: np.ndarray, counts: np.ndarray, sigmas: float = 4.0) -> float:
    """Delta-method error bound on a visibility estimated from binomial cells."""
    hi = int(np.argmax(p_hat))
    lo = int(np.argmin(p_hat))
    denom = float(p_hat[hi] + p_hat[lo])
    if denom <= 0.0:
        raise ValueError("visibility tolerance undefined for an all-zero series")
    d_hi = 2.0 * p_hat[lo] / denom**2
    d_lo = 2.0 * p_hat[hi] / denom**2
    se_hi = binomial_se(float(p_hat[hi]), int(counts[hi]))
    se_lo = binomial_se(float(p_hat[lo]), int(counts[lo]))
    return sigmas * math.sqrt((d_hi * se_hi) ** 2 + (d_lo * se_lo) ** 2)


def _run_rtm(spec: ExperimentSpec) -> tuple[FringeScan, list[Verdict]]:
    settings = _scan_settings(spec)
    scan = _build_scan(spec, settings)
    audit = no_signaling_audit(
        phase_grid(8), joint_of=lambda s: joint_probabilities(spec.source, s)
    )
    bell = chsh(*CANONICAL_CHSH_SETTINGS, source=spec.source)
    verdicts = [
        Verdict("local_fringe_visibility", _local_visibility(scan), 0.0, STRUCT_TOL),
        Verdict("coincidence_visibility", fringe_visibility(scan.cell_series(1, 1)), 1.0, STRUCT_TOL),
        Verdict("no_signaling_audit", audit, 0.0, STRUCT_TOL),
        Verdict("chsh_violation", abs(bell.s_value), TSIRELSON, CHSH_TOL),
    ]
    return scan, verdicts


def run_rtm(spec: ExperimentSpec) -> tuple[FringeScan, list[Verdict]]:
    """Entangled-pair run: flat local statistics, full-visibility coincidence
    fringe in the setting difference, clean no-signaling audit, CHSH violation."""
    if spec.preset != "rtm":
        raise ValueError(f"run_rtm expects preset 'rtm', got {spec.preset!r}")
    return _run_rtm(spec)


def _run_controls(spec: ExperimentSpec) -> tuple[FringeScan, list[Verdict]]:
    settings = _scan_settings(spec)
    scan = _build_scan(spec, settings)
    if spec.preset == "product_control":
        verdicts = [
            Verdict("local_fringe_visibility", fringe_visibility(scan.marginal_series("s", 1)), 1.0, STRUCT_TOL),
        ]
        return scan, verdicts

    reference = SourceKind("entangled", spec.source.amp1, spec.source.amp2)
    mismatch = 0.0
    for s in settings:
        ref_marg = marginals(joint_probabilities(reference, s))
        mix_marg = marginals(joint_probabilities(spec.source, s))
        for mr, mm in zip(ref_marg, mix_marg):
            mismatch = max(mismatch, float(np.abs(mr - mm).max()))
    verdicts = [
        Verdict("local_fringe_visibility", _local_visibility(scan), 0.0, STRUCT_TOL),
        Verdict("coincidence_visibility", fringe_visibility(scan.cell_series(1, 1)), 0.0, STRUCT_TOL),
        Verdict("marginal_match_vs_entangled", mismatch, 0.0, STRUCT_TOL),
    ]
    return scan, verdicts


def run_controls(spec: ExperimentSpec) -> list[Verdict]:
    """Counterfactual runs: unentangled photons do interfere locally, while
    the collapsed mixture shows neither local nor coincidence fringes."""
    if spec.preset not in ("product_control", "mixture_control"):
        raise ValueError(f"run_controls expects a control preset, got {spec.preset!r}")
    return _run_controls(spec)[1]


def _run_delayed_choice(spec: ExperimentSpec) -> tuple[DelayedChoiceData, list[Verdict]]:
    sweep = _effective_sweep(spec)
    settings = _scan_settings(spec)
    phis = np.array([s.phi_s for s in settings])
    if sweep.axis == "phi_a":
        raise ValueError("delayed_choice sweeps the first photon's phase")

    # Single-photon interferometer law for the unentangled (detector-off) bin.
    analytic_off = (1.0 - np.sin(phis)) / 2.0

    k_points = len(settings)
    off_n = np.zeros(k_points, dtype=np.int64)
    off_hits = np.zeros(k_points, dtype=np.int64)
    on_n = np.zeros(k_points, dtype=np.int64)
    on_hits = np.zeros(k_points, dtype=np.int64)

    for k in range(k_points):
        point_seed = substream_seed(spec.seed, k)
        coin = uniforms(substream_seed(point_seed, 0), spec.n_trials) < 0.5
        u = uniforms(substream_seed(point_seed, 1), spec.n_trials)
        p1 = np.where(coin, 0.5, analytic_off[k])
        hit = u < p1
        on_n[k] = int(coin.sum())
        off_n[k] = spec.n_trials - on_n[k]
        on_hits[k] = int((hit & coin).sum())
        off_hits[k] = int((hit & ~coin).sum())

    if off_n.min() == 0 or on_n.min() == 0:
        raise ValueError("a delayed-choice bin received no trials; increase n_trials")

    data = DelayedChoiceData(phis, off_n, off_hits, on_n, on_hits, analytic_off)
    off_p, on_p = data.off_p1, data.on_p1
    verdicts = [
        Verdict(
            "delayed_off_visibility",
            fringe_visibility(off_p),
            fringe_visibility(analytic_off),
            visibility_tolerance(off_p, off_n),
        ),
        Verdict(
            "delayed_on_visibility",
            fringe_visibility(on_p),
            0.0,
            visibility_tolerance(on_p, on_n),
        ),
    ]
    return data, verdicts


def run_delayed_choice(spec: ExperimentSpec) -> list[Verdict]:
    """Per-trial seeded coin engages or removes the entangling partner; the
    two bins show full and zero local fringe visibility respectively."""
    if spec.preset != "delayed_choice":
        raise ValueError(f"run_delayed_choice expects preset 'delayed_choice', got {spec.preset!r}")
    return _run_delayed_choice(spec)[1]


def run_cat(spec: ExperimentSpec) -> list[Verdict]:
    """Two-qubit correlated pair with arbitrary branch amplitudes: both
    reduced states are diagonal (no coherence witnesses fire), populations
    follow the branch weights, and cross coincidences vanish.

    Phase settings and sweep are ignored; the pair is examined as emitted.
    """
    if spec.preset != "cat":
        raise ValueError(f"run_cat expects preset 'cat', got {spec.preset!r}")
    state = make_source(spec.source)
    rho = outer(state)
    w1 = abs(spec.source.amp1) ** 2
    w2 = abs(spec.source.amp2) ** 2
    verdicts: list[Verdict] = []
    for label, factor in (("s", 0), ("a", 1)):
        reduced = partial_trace(rho, factor)
        q, p = local_coherence(reduced)
        verdicts.append(Verdict(f"cat_{label}_coherence_q", q, 0.0, STRUCT_TOL))
        verdicts.append(Verdict(f"cat_{label}_coherence_p", p, 0.0, STRUCT_TOL))
        verdicts.append(Verdict(f"cat_{label}_population_1", float(reduced.mat[0, 0].real), w1, STRUCT_TOL))
        verdicts.append(Verdict(f"cat_{label}_population_2", float(reduced.mat[1, 1].real), w2, STRUCT_TOL))
    joint = born_probabilities(state)
    verdicts.append(Verdict("cat_cross_coincidence", joint.p12 + joint.p21, 0.0, STRUCT_TOL))
    return verdicts


def run_preset(spec: ExperimentSpec) -> RunOutcome:
    """Dispatch a preset and collect verdicts plus any scan or bin data."""
    if spec.preset == "rtm":
        scan, verdicts = _run_rtm(spec)
        return RunOutcome(verdicts, scan=scan)
    if spec.preset in ("product_control", "mixture_control"):
        scan, verdicts = _run_controls(spec)
        return RunOutcome(verdicts, scan=scan)
    if spec.preset == "delayed_choice":
        data, verdicts = _run_delayed_choice(spec)
        return RunOutcome(verdicts, delayed=data)
    return RunOutcome(run_cat(spec))

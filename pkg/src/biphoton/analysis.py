"""Fringe laws, visibility, CHSH statistics, no-signaling audit, coherence witnesses.

The closed-form coincidence law stated here is tied to the conventions in
:mod:`biphoton.optics` and is verified against the full circuit in the
test suite rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import DensityOperator, STRUCT_TOL, apply
from .measurement import CoincidenceTally, JointProbabilities, born_probabilities, marginals
from .optics import PhaseSettings, SourceKind, circuit_unitary, make_source

TSIRELSON = 2.0 * math.sqrt(2.0)
CHSH_TOL = 1e-9

# Textbook-optimal analyzer settings for a cosine correlation:
# (phi_s, phi_s', phi_a, phi_a').
CANONICAL_CHSH_SETTINGS = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)

_MIN_SCAN_POINTS = 8


def joint_probabilities(source: SourceKind, settings: PhaseSettings) -> JointProbabilities:
    """Detector statistics of the full interferometer for one setting pair."""
    return born_probabilities(apply(circuit_unitary(settings), make_source(source)))


def coincidence_law(delta_phi: float, pairing: str) -> float:
    """Per-cell coincidence probability of the correlated equal-amplitude pair.

    ``same`` is a same-index detector pair (1,1) or (2,2), ``opposite``
    a mixed pair; the law is (1 -/+ cos(delta_phi)) / 4 respectively.
    """
    if pairing == "same":
        return (1.0 - math.cos(delta_phi)) / 4.0
    if pairing == "opposite":
        return (1.0 + math.cos(delta_phi)) / 4.0
    raise ValueError(f"pairing must be 'same' or 'opposite', got {pairing!r}")


@dataclass(frozen=True, eq=False)
class FringeScan:
    """Per-setting joint statistics along a phase sweep.

    ``analytic`` holds exact Born tables; ``empirical`` optionally holds
    the matching Monte Carlo tallies.
    """

    settings: tuple[PhaseSettings, ...]
    analytic: tuple[JointProbabilities, ...]
    empirical: tuple[CoincidenceTally, ...] | None = None

    def __post_init__(self):
        if not self.settings:
            raise ValueError("a fringe scan needs at least one setting")
        if len(self.analytic) != len(self.settings):
            raise ValueError("one analytic table per setting required")
        if self.empirical is not None and len(self.empirical) != len(self.settings):
            raise ValueError("one tally per setting required")
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "analytic", tuple(self.analytic))
        if self.empirical is not None:
            object.__setattr__(self, "empirical", tuple(self.empirical))

    @property
    def delta_phis(self) -> np.ndarray:
        return np.array([s.delta for s in self.settings])

    def cell_series(self, i: int, j: int, empirical: bool = False) -> np.ndarray:
        """Probability (or frequency) of detector pair (i, j) along the scan."""
        if not (i in (1, 2) and j in (1, 2)):
            raise ValueError("detector labels are 1 or 2")
        if empirical:
            if self.empirical is None:
                raise ValueError("scan carries no empirical tallies")
            return np.array([t.frequencies[i - 1, j - 1] for t in self.empirical])
        return np.array([p.table[i - 1, j - 1] for p in self.analytic])

    def marginal_series(self, side: str, detector: int, empirical: bool = False) -> np.ndarray:
        """Single-photon detector probability along the scan for one side."""
        if side not in ("s", "a"):
            raise ValueError("side must be 's' or 'a'")
        if detector not in (1, 2):
            raise ValueError("detector labels are 1 or 2")
        axis = 1 if side == "s" else 0
        if empirical:
            if self.empirical is None:
                raise ValueError("scan carries no empirical tallies")
            return np.array([t.frequencies.sum(axis=axis)[detector - 1] for t in self.empirical])
        return np.array([p.table.sum(axis=axis)[detector - 1] for p in self.analytic])


def fringe_visibility(series) -> float:
    """(max - min) / (max + min) of a probability series."""
    arr = np.asarray(series, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty series")
    if arr.min() < -STRUCT_TOL:
        raise ValueError("probability series has negative entries")
    hi = float(arr.max())
    lo = float(arr.min())
    if hi <= 0.0:
        raise ValueError("all-zero series has no defined visibility")
    return (hi - lo) / (hi + lo)


def _check_full_period(delta_phis: np.ndarray) -> None:
    """Require >= 8 points whose differences cover a full 2*pi period.

    Coverage means no circular gap between the sorted values mod 2*pi
    exceeds 2*pi / 8, which any even sweep with >= 8 points satisfies.
    """
    if delta_phis.size < _MIN_SCAN_POINTS:
        raise ValueError(f"need at least {_MIN_SCAN_POINTS} phase points, got {delta_phis.size}")
    wrapped = np.sort(np.mod(delta_phis, 2.0 * math.pi))
    gaps = np.diff(wrapped, append=wrapped[0] + 2.0 * math.pi)
    if gaps.max() > 2.0 * math.pi / _MIN_SCAN_POINTS + 1e-9:
        raise ValueError("scan does not cover a full 2*pi period of the phase difference")


def visibility(scan: FringeScan, cell: tuple[int, int], empirical: bool = False) -> float:
    """Fringe visibility of one coincidence cell over a full-period scan."""
    _check_full_period(scan.delta_phis)
    return fringe_visibility(scan.cell_series(cell[0], cell[1], empirical=empirical))


def correlation(p: JointProbabilities) -> float:
    """Detector-parity correlation E = p11 + p22 - p12 - p21, in [-1, 1]."""
    return float(p.table[0, 0] + p.table[1, 1] - p.table[0, 1] - p.table[1, 0])


@dataclass(frozen=True)
class ChshResult:
    """Four correlations and the CHSH combination S = E1 - E2 + E3 + E4."""

    settings: tuple[PhaseSettings, PhaseSettings, PhaseSettings, PhaseSettings]
    correlations: tuple[float, float, float, float]
    s_value: float

    def __post_init__(self):
        if abs(self.s_value) > TSIRELSON + CHSH_TOL:
            raise ValueError(f"CHSH value {self.s_value!r} exceeds the quantum bound")

    @property
    def violates(self) -> bool:
        return abs(self.s_value) > 2.0


def chsh(
    phi_s: float,
    phi_s_prime: float,
    phi_a: float,
    phi_a_prime: float,
    source: SourceKind | None = None,
) -> ChshResult:
    """CHSH statistic from analytic joint probabilities at four setting pairs."""
    if source is None:
        source = SourceKind("entangled")
    pairs = (
        PhaseSettings(phi_s, phi_a),
        PhaseSettings(phi_s, phi_a_prime),
        PhaseSettings(phi_s_prime, phi_a),
        PhaseSettings(phi_s_prime, phi_a_prime),
    )
    es = tuple(correlation(joint_probabilities(source, s)) for s in pairs)
    s_value = es[0] - es[1] + es[2] + es[3]
    return ChshResult(pairs, es, s_value)


def no_signaling_audit(
    grid: Sequence[PhaseSettings],
    joint_of: Callable[[PhaseSettings], JointProbabilities] | None = None,
) -> float:
    """Largest cross-influence of one side's setting on the other's marginal.

    For every fixed phi_a the audit compares A's marginal across all
    phi_s values in the grid (and symmetrically for S); the result is the
    maximum absolute spread found.  The grid must vary phi_s at fixed
    phi_a and vice versa.
    """
    if joint_of is None:
        src = SourceKind("entangled")
        joint_of = lambda s: joint_probabilities(src, s)

    dists: dict[PhaseSettings, tuple[np.ndarray, np.ndarray]] = {}
    for s in grid:
        dists[s] = marginals(joint_of(s))

    by_a: dict[float, list[np.ndarray]] = {}
    by_s: dict[float, list[np.ndarray]] = {}
    for s, (dist_s, dist_a) in dists.items():
        by_a.setdefault(s.phi_a, []).append(dist_a)
        by_s.setdefault(s.phi_s, []).append(dist_s)

    if not any(len(v) >= 2 for v in by_a.values()) or not any(len(v) >= 2 for v in by_s.values()):
        raise ValueError("grid must vary phi_s at fixed phi_a and vice versa")

    worst = 0.0
    for groups in (by_a, by_s):
        for rows in groups.values():
            if len(rows) < 2:
                continue
            stack = np.vstack(rows)
            worst = max(worst, float((stack.max(axis=0) - stack.min(axis=0)).max()))
    return worst


def local_coherence(rho_reduced: DensityOperator) -> tuple[float, float]:
    """Pauli X and Y expectations of a single-photon reduced state.

    For a pure state beta|1> + gamma|2> this returns
    (2 Re(beta gamma*), 2 Im(beta* gamma)); both vanish exactly on any
    diagonal reduced state.
    """
    if rho_reduced.dim != 2:
        raise ValueError("local coherence witnesses act on a 2-dimensional state")
    q = 2.0 * rho_reduced.mat[0, 1].real
    p = 2.0 * rho_reduced.mat[1, 0].imag
    return float(q), float(p)


def phase_grid(n_s: int, n_a: int | None = None) -> list[PhaseSettings]:
    """Even (phi_s, phi_a) grid over [0, 2*pi) x [0, 2*pi)."""
    if n_a is None:
        n_a = n_s
    if n_s < 2 or n_a < 2:
        raise ValueError("grid needs at least two points per axis")
    step_s = 2.0 * math.pi / n_s
    step_a = 2.0 * math.pi / n_a
    return [PhaseSettings(i * step_s, j * step_a) for i in range(n_s) for j in range(n_a)]


@dataclass(frozen=True)
class DiscriminationReport:
    """Side-by-side contrast of the entangled pair and the collapsed mixture.

    Local statistics coincide; only coincidence visibility and the CHSH
    statistic tell the two apart.
    """

    n_settings: int
    marginal_max_diff: float
    entangled_visibility: float
    mixture_visibility: float
    entangled_chsh_max: float
    mixture_chsh_max: float

    def to_rows(self) -> list[tuple[str, str, str]]:
        return [
            ("metric", "entangled", "mixture"),
            ("coincidence visibility", f"{self.entangled_visibility:.15g}", f"{self.mixture_visibility:.15g}"),
            ("max |S| (CHSH)", f"{self.entangled_chsh_max:.15g}", f"{self.mixture_chsh_max:.15g}"),
            ("max marginal difference", f"{self.marginal_max_diff:.3e}", ""),
        ]


def state_discrimination_report(settings_grid: Sequence[PhaseSettings]) -> DiscriminationReport:
    """Evaluate both sources over a grid covering a full period of the difference."""
    grid = list(settings_grid)
    deltas = np.array([s.delta for s in grid])
    _check_full_period(deltas)

    ent = SourceKind("entangled")
    mix = SourceKind("mixture")

    marg_diff = 0.0
    ent_cell: list[float] = []
    mix_cell: list[float] = []
    for s in grid:
        pe = joint_probabilities(ent, s)
        pm = joint_probabilities(mix, s)
        for me, mm in zip(marginals(pe), marginals(pm)):
            marg_diff = max(marg_diff, float(np.abs(me - mm).max()))
        ent_cell.append(pe.p11)
        mix_cell.append(pm.p11)

    phi_s_vals = sorted({s.phi_s for s in grid})[:4]
    phi_a_vals = sorted({s.phi_a for s in grid})[:4]
    quadruples = [CANONICAL_CHSH_SETTINGS]
    quadruples += [
        (ps, psp, pa, pap)
        for ps in phi_s_vals
        for psp in phi_s_vals
        for pa in phi_a_vals
        for pap in phi_a_vals
        if ps < psp and pa < pap
    ]
    ent_chsh = max(abs(chsh(*q, source=ent).s_value) for q in quadruples)
    mix_chsh = max(abs(chsh(*q, source=mix).s_value) for q in quadruples)

    return DiscriminationReport(
        n_settings=len(grid),
        marginal_max_diff=marg_diff,
        entangled_visibility=fringe_visibility(ent_cell),
        mixture_visibility=fringe_visibility(mix_cell),
        entangled_chsh_max=ent_chsh,
        mixture_chsh_max=mix_chsh,
    )


def tsirelson_scan(coarse: int = 64, refine_rounds: int = 3) -> float:
    """Maximize |S| numerically over analyzer settings; returns the maximum found.

    A coarse grid of ``coarse`` points per analyzer axis is followed by
    local coordinate refinement around the best quadruple.  Every value
    evaluated en route is tracked, so the return value is the largest
    |S| the scan ever saw.
    """
    source = SourceKind("entangled")
    phis = 2.0 * math.pi * np.arange(coarse) / coarse
    e = np.empty((coarse, coarse))
    for i, ps in enumerate(phis):
        for j, pa in enumerate(phis):
            e[i, j] = correlation(joint_probabilities(source, PhaseSettings(ps, pa)))

    best = 0.0
    best_q = (0.0, 0.0, 0.0, 0.0)
    for i in range(coarse):
        for k in range(coarse):
            s_mat = e[i, :, None] - e[i, None, :] + e[k, :, None] + e[k, None, :]
            flat = np.abs(s_mat)
            idx = int(flat.argmax())
            val = float(flat.reshape(-1)[idx])
            if val > best:
                best = val
                j, m = divmod(idx, coarse)
                best_q = (float(phis[i]), float(phis[k]), float(phis[j]), float(phis[m]))

    def s_of(q: tuple[float, float, float, float]) -> float:
        return abs(chsh(*q, source=source).s_value)

    step = 2.0 * math.pi / coarse
    current = best_q
    for _ in range(refine_rounds):
        for coord in range(4):
            candidates = [
                tuple(
                    c + (offset if idx == coord else 0.0) for idx, c in enumerate(current)
                )
                for offset in np.linspace(-step, step, 9)
            ]
            vals = [s_of(q) for q in candidates]
            pick = int(np.argmax(vals))
            best = max(best, vals[pick])
            current = candidates[pick]
        step /= 4.0
    return best

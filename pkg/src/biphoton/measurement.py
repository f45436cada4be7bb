"""Detector statistics: Born probabilities, seeded sampling, coincidence tallies.

Detector labels are 1 and 2 per photon, mapping to the two beam-splitter
output ports in basis order.  Joint outcomes are flattened in the fixed
order (1,1), (1,2), (2,1), (2,2); sampling draws by inverse CDF over that
order, so identical (p, n, seed) reproduce the identical event stream on
every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityOperator, StateVector, STRUCT_TOL
from .rng import uniforms

OUTCOME_ORDER = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True, eq=False)
class JointProbabilities:
    """2x2 table; entry [i-1, j-1] is Prob(S fires detector i, A fires j)."""

    table: np.ndarray

    def __post_init__(self):
        arr = np.array(self.table, dtype=np.float64)
        if arr.shape != (2, 2):
            raise ValueError(f"joint probability table must be 2x2, got {arr.shape}")
        if arr.min() < -STRUCT_TOL or arr.max() > 1.0 + STRUCT_TOL:
            raise ValueError("joint probabilities must lie in [0, 1]")
        if abs(arr.sum() - 1.0) > STRUCT_TOL:
            raise ValueError(f"joint probabilities sum to {arr.sum()!r}, not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def p11(self) -> float:
        return float(self.table[0, 0])

    @property
    def p12(self) -> float:
        return float(self.table[0, 1])

    @property
    def p21(self) -> float:
        return float(self.table[1, 0])

    @property
    def p22(self) -> float:
        return float(self.table[1, 1])


@dataclass(frozen=True)
class DetectionEvent:
    """One coincidence trial: which detector fired on each side."""

    trial: int
    d_s: int
    d_a: int


@dataclass(frozen=True, eq=False)
class CoincidenceTally:
    """Joint detector counts accumulated over a seeded run."""

    counts: np.ndarray
    n_trials: int
    seed: int

    def __post_init__(self):
        arr = np.array(self.counts, dtype=np.int64)
        if arr.shape != (2, 2):
            raise ValueError(f"count table must be 2x2, got {arr.shape}")
        if arr.min() < 0:
            raise ValueError("counts must be non-negative")
        if self.n_trials < 1:
            raise ValueError("n_trials must be positive")
        if int(arr.sum()) != self.n_trials:
            raise ValueError(f"counts sum to {int(arr.sum())}, expected n_trials={self.n_trials}")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @classmethod
    def from_outcomes(cls, outcomes: np.ndarray, seed: int) -> "CoincidenceTally":
        counts = np.bincount(np.asarray(outcomes, dtype=np.int64), minlength=4).reshape(2, 2)
        return cls(counts, int(np.asarray(outcomes).size), seed)

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.n_trials


def born_probabilities(state: StateVector | DensityOperator) -> JointProbabilities:
    """Born-rule joint detector probabilities for a 2x2-factored state."""
    if state.factor_dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got factors {state.factor_dims}")
    if isinstance(state, StateVector):
        p = np.abs(state.amps) ** 2
    else:
        p = np.diag(state.mat).real
    return JointProbabilities(p.reshape(2, 2))


def marginals(p: JointProbabilities) -> tuple[np.ndarray, np.ndarray]:
    """(S distribution, A distribution): row sums and column sums."""
    return p.table.sum(axis=1), p.table.sum(axis=0)


def sample_outcomes(p: JointProbabilities, n: int, seed: int) -> np.ndarray:
    """n inverse-CDF draws as flat outcome indices 0..3 (OUTCOME_ORDER).

    This is the vectorized core; the stream is a pure function of
    (p, n, seed).
    """
    if n < 1:
        raise ValueError("need at least one trial")
    cdf = np.cumsum(p.table.reshape(-1))[:3]
    u = uniforms(seed, n)
    return np.searchsorted(cdf, u, side="right").astype(np.uint8)


def sample_events(p: JointProbabilities, n: int, seed: int) -> list[DetectionEvent]:
    """Materialized event stream for the same draws as sample_outcomes."""
    outcomes = sample_outcomes(p, n, seed)
    return [
        DetectionEvent(trial=i, d_s=int(k // 2) + 1, d_a=int(k % 2) + 1)
        for i, k in enumerate(outcomes)
    ]


def tally(events, seed: int = 0) -> CoincidenceTally:
    """Count events into a 2x2 coincidence table."""
    counts = np.zeros((2, 2), dtype=np.int64)
    n = 0
    for ev in events:
        counts[ev.d_s - 1, ev.d_a - 1] += 1
        n += 1
    if n == 0:
        raise ValueError("cannot tally an empty event sequence")
    return CoincidenceTally(counts, n, seed)

"""Optical elements and sources of a two-arm, two-photon interferometer.

Conventions, fixed once here:

- Each photon carries a 2-dimensional path space with basis (path 1,
  path 2); the composite basis is photon-S major, so the flat index of
  paths (i, j) is ``2*i + j``.
- The 50/50 beam splitter is the symmetric convention
  ``(1/sqrt2) [[1, i], [i, 1]]``.
- A phase shifter puts ``exp(i*phi)`` on path 2.
- In the full circuit the second photon's setting enters negated: its
  shifter sits in the arm paired with the first photon's reference arm,
  which is the same element up to a dropped global phase.  With the
  correlated pair source this makes every joint fringe depend only on
  the setting difference ``phi_s - phi_a``: same-detector coincidences
  follow ``(1 - cos(phi_s - phi_a)) / 4`` and opposite-detector ones
  ``(1 + cos(phi_s - phi_a)) / 4``.
- Mirrors only relabel paths and are absorbed into the basis.

Phase settings are stored unwrapped (no reduction mod 2*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityOperator, Operator, StateVector, STRUCT_TOL, tensor

RSQRT2 = 1.0 / math.sqrt(2.0)

SOURCE_TAGS = ("entangled", "product", "mixture")


@dataclass(frozen=True)
class PhaseSettings:
    """One shifter angle per photon, in radians."""

    phi_s: float
    phi_a: float

    def __post_init__(self):
        if not (math.isfinite(self.phi_s) and math.isfinite(self.phi_a)):
            raise ValueError("phase settings must be finite")

    @property
    def delta(self) -> float:
        return self.phi_s - self.phi_a


@dataclass(frozen=True)
class SourceKind:
    """Pair source description: correlated pure, uncorrelated, or collapsed.

    ``entangled`` emits amp1|s1 a1> + amp2|s2 a2>; ``product`` emits the
    fixed uniform two-photon product state (the amplitudes are unused);
    ``mixture`` emits the classical mixture of the two correlated
    branches with weights |amp1|^2 and |amp2|^2.
    """

    tag: str
    amp1: complex = RSQRT2
    amp2: complex = RSQRT2

    def __post_init__(self):
        if self.tag not in SOURCE_TAGS:
            raise ValueError(f"unknown source tag {self.tag!r}")
        a1 = complex(self.amp1)
        a2 = complex(self.amp2)
        for z in (a1, a2):
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError("source amplitudes must be finite")
        total = abs(a1) ** 2 + abs(a2) ** 2
        if abs(total - 1.0) > STRUCT_TOL:
            raise ValueError(f"source amplitudes are not normalized: |a1|^2+|a2|^2 = {total!r}")
        object.__setattr__(self, "amp1", a1)
        object.__setattr__(self, "amp2", a2)


def beam_splitter() -> Operator:
    """Symmetric 50/50 beam splitter on one photon's path space."""
    mat = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128) * RSQRT2
    return Operator(mat, kind="unitary")


def phase_shifter(phi: float) -> Operator:
    """diag(1, e^{i phi}): the shifted arm is path 2."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    mat = np.diag([1.0, np.exp(1j * phi)]).astype(np.complex128)
    return Operator(mat, kind="unitary")


def make_source(kind: SourceKind) -> StateVector | DensityOperator:
    """Construct the emitted two-photon state for a source description."""
    if kind.tag == "entangled":
        amps = np.array([kind.amp1, 0.0, 0.0, kind.amp2], dtype=np.complex128)
        return StateVector(amps, (2, 2))
    if kind.tag == "product":
        uniform = StateVector(np.array([RSQRT2, RSQRT2]), (2,))
        return tensor(uniform, uniform)
    w1 = abs(kind.amp1) ** 2
    w2 = abs(kind.amp2) ** 2
    return DensityOperator(np.diag([w1, 0.0, 0.0, w2]).astype(np.complex128), (2, 2))


def circuit_unitary(settings: PhaseSettings) -> Operator:
    """Full interferometer: phase layer, then a beam splitter per photon.

    The second photon's shifter is applied with a negated angle (same
    element, shifted arm swapped, global phase dropped), so joint
    statistics depend only on ``settings.delta``.
    """
    phases = tensor(phase_shifter(settings.phi_s), phase_shifter(-settings.phi_a))
    splitters = tensor(beam_splitter(), beam_splitter())
    return Operator(splitters.mat @ phases.mat, kind="unitary")

"""Dense complex linear algebra on small composite Hilbert spaces.

State vectors, operators, and density operators are immutable wrappers
around numpy complex128 arrays.  Composite bases are ordered first-factor
major: for factor dimensions (d0, d1) the flat index of the basis pair
(i, j) is ``i * d1 + j``.  Everything is dense and dimensions are capped
at MAX_DIM; there is no sparse or symbolic machinery.

Tolerances are centralized here.  STRUCT_TOL bounds structural defects
(norm, hermiticity, trace, unitarity), EIGEN_TOL is the slack allowed
below zero when checking positivity, and IMAG_TOL bounds the imaginary
part discarded when an expectation value is reported as real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STRUCT_TOL = 1e-12
EIGEN_TOL = 1e-10
IMAG_TOL = 1e-10
MAX_DIM = 16

OPERATOR_KINDS = ("unitary", "hermitian", "general")


def _clean_matrix(mat, what: str) -> np.ndarray:
    arr = np.array(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} contains non-finite entries")
    if arr.shape[0] > MAX_DIM:
        raise ValueError(f"{what} dimension {arr.shape[0]} exceeds MAX_DIM={MAX_DIM}")
    arr.setflags(write=False)
    return arr


def _check_factor_dims(factor_dims, dim: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in factor_dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"factor_dims must be positive integers, got {dims}")
    if math.prod(dims) != dim:
        raise ValueError(f"product of factor_dims {dims} != dimension {dim}")
    return dims


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm ket over a composite space with first-factor-major basis."""

    amps: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        arr = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("state amplitudes contain non-finite entries")
        if arr.size > MAX_DIM:
            raise ValueError(f"state dimension {arr.size} exceeds MAX_DIM={MAX_DIM}")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > STRUCT_TOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1 beyond {STRUCT_TOL}")
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)
        object.__setattr__(self, "factor_dims", _check_factor_dims(self.factor_dims, arr.size))

    @property
    def dim(self) -> int:
        return self.amps.size


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense square matrix tagged as unitary, hermitian, or general."""

    mat: np.ndarray
    kind: str = "general"

    def __post_init__(self):
        arr = _clean_matrix(self.mat, "operator")
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "unitary":
            defect = np.abs(arr.conj().T @ arr - np.eye(arr.shape[0])).max()
            if defect > STRUCT_TOL:
                raise ValueError(f"matrix tagged unitary has unitarity defect {defect:.3e}")
        elif self.kind == "hermitian":
            defect = np.abs(arr - arr.conj().T).max()
            if defect > STRUCT_TOL:
                raise ValueError(f"matrix tagged hermitian has hermiticity defect {defect:.3e}")
        object.__setattr__(self, "mat", arr)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive, trace-1 matrix over a composite space."""

    mat: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        arr = _clean_matrix(self.mat, "density operator")
        herm = np.abs(arr - arr.conj().T).max()
        if herm > STRUCT_TOL:
            raise ValueError(f"density operator hermiticity defect {herm:.3e}")
        tr = np.trace(arr)
        if abs(tr - 1.0) > STRUCT_TOL:
            raise ValueError(f"density operator trace {tr!r} deviates from 1")
        lo = np.linalg.eigvalsh(arr).min()
        if lo < -EIGEN_TOL:
            raise ValueError(f"density operator has eigenvalue {lo:.3e} below -{EIGEN_TOL}")
        object.__setattr__(self, "mat", arr)
        object.__setattr__(self, "factor_dims", _check_factor_dims(self.factor_dims, arr.shape[0]))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def identity(dim: int, kind: str = "unitary") -> Operator:
    """Identity operator; ``kind`` picks the tag (it satisfies both)."""
    return Operator(np.eye(dim, dtype=np.complex128), kind=kind)


def basis_state(index: int, factor_dims: tuple[int, ...]) -> StateVector:
    """Computational basis ket |index> on the given factorization."""
    dim = math.prod(factor_dims)
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, factor_dims)


def tensor(a, b):
    """Kronecker product with a's indices major; factor lists concatenate.

    Both operands must be the same kind (two kets or two operators).  The
    combined dimension is rejected beyond MAX_DIM.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        if a.dim * b.dim > MAX_DIM:
            raise ValueError(f"tensor dimension {a.dim * b.dim} exceeds MAX_DIM={MAX_DIM}")
        return StateVector(np.kron(a.amps, b.amps), a.factor_dims + b.factor_dims)
    if isinstance(a, Operator) and isinstance(b, Operator):
        if a.dim * b.dim > MAX_DIM:
            raise ValueError(f"tensor dimension {a.dim * b.dim} exceeds MAX_DIM={MAX_DIM}")
        if a.kind == b.kind and a.kind in ("unitary", "hermitian"):
            kind = a.kind
        else:
            kind = "general"
        return Operator(np.kron(a.mat, b.mat), kind=kind)
    raise TypeError("tensor requires two StateVectors or two Operators")


def apply(u: Operator, state):
    """Act with a unitary: u|psi> for kets, u rho u^dag for density operators."""
    if u.kind != "unitary":
        raise ValueError("apply requires an operator tagged unitary")
    if isinstance(state, StateVector):
        if u.dim != state.dim:
            raise ValueError(f"dimension mismatch: operator {u.dim}, state {state.dim}")
        return StateVector(u.mat @ state.amps, state.factor_dims)
    if isinstance(state, DensityOperator):
        if u.dim != state.dim:
            raise ValueError(f"dimension mismatch: operator {u.dim}, state {state.dim}")
        return DensityOperator(u.mat @ state.mat @ u.mat.conj().T, state.factor_dims)
    raise TypeError("apply expects a StateVector or DensityOperator")


def outer(psi: StateVector) -> DensityOperator:
    """Rank-1 projector |psi><psi| as a density operator."""
    return DensityOperator(np.outer(psi.amps, psi.amps.conj()), psi.factor_dims)


def partial_trace(rho: DensityOperator, keep: int) -> DensityOperator:
    """Reduced density operator on factor ``keep``, normalized to trace 1.

    All other factors are summed out over their computational bases.
    Hermiticity and positivity survive by construction and are re-checked
    by the result's own constructor.
    """
    dims = rho.factor_dims
    n = len(dims)
    if n < 2:
        raise ValueError("partial_trace needs at least two factors")
    if not 0 <= keep < n:
        raise ValueError(f"factor index {keep} out of range for {n} factors")
    cur = list(dims)
    t = rho.mat.reshape(cur + cur)
    for ax in sorted((i for i in range(n) if i != keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + len(cur))
        cur.pop(ax)
    mat = t.reshape(cur[0], cur[0])
    tr = np.trace(mat).real
    if tr <= 0:
        raise ValueError("reduced state has non-positive trace")
    return DensityOperator(mat / tr, (dims[keep],))


def expectation(rho: DensityOperator, q: Operator) -> float:
    """Tr(rho q) for a hermitian observable; the tiny imaginary part is dropped.

    Observables on a subsystem must be lifted to the full space first,
    e.g. ``tensor(q, identity(d, "hermitian"))``.
    """
    if q.kind != "hermitian":
        raise ValueError("expectation requires an operator tagged hermitian")
    if q.dim != rho.dim:
        raise ValueError(f"dimension mismatch: observable {q.dim}, state {rho.dim}")
    val = np.trace(rho.mat @ q.mat)
    if abs(val.imag) >= IMAG_TOL:
        raise ValueError(f"expectation trace has imaginary part {val.imag:.3e}")
    return float(val.real)

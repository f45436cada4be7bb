"""Independent brute-force reference implementations used by the tests.

Everything here is written with explicit index loops, deliberately
avoiding the production code paths (np.kron, reshape-based partial
trace, the closed-form fringe law) so that agreement is evidence and
not tautology.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

RSQRT2 = 1.0 / math.sqrt(2.0)

BS = [[complex(RSQRT2), 1j * RSQRT2], [1j * RSQRT2, complex(RSQRT2)]]


def kron2(a, b):
    """4x4 Kronecker product of two 2x2 matrices via explicit loops."""
    out = [[0j] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for m in range(2):
                    out[2 * i + k][2 * j + m] = a[i][j] * b[k][m]
    return out


def matmul4(a, b):
    out = [[0j] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(4):
            acc = 0j
            for k in range(4):
                acc += a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def matvec4(a, v):
    return [sum(a[i][k] * v[k] for k in range(4)) for i in range(4)]


def circuit_matrix(phi_s: float, phi_a: float):
    """Interferometer unitary under the fixed conventions: symmetric beam
    splitters after per-photon phase layers, the second photon's angle
    entering negated."""
    ps = [[1.0 + 0j, 0j], [0j, cmath.exp(1j * phi_s)]]
    pa = [[1.0 + 0j, 0j], [0j, cmath.exp(-1j * phi_a)]]
    return matmul4(kron2(BS, BS), kron2(ps, pa))


def joint_table(phi_s: float, phi_a: float, amps) -> np.ndarray:
    """Born probabilities of the evolved correlated pair a|11> + b|22>."""
    state = [complex(amps[0]), 0j, 0j, complex(amps[1])]
    out = matvec4(circuit_matrix(phi_s, phi_a), state)
    return np.array([abs(z) ** 2 for z in out]).reshape(2, 2)


def partial_trace_sum(mat: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Reduced matrix by double-index summation over the traced basis."""
    d_s, d_a = dims
    if keep == 0:
        out = np.zeros((d_s, d_s), dtype=complex)
        for i in range(d_s):
            for j in range(d_s):
                for k in range(d_a):
                    out[i, j] += mat[i * d_a + k, j * d_a + k]
    else:
        out = np.zeros((d_a, d_a), dtype=complex)
        for i in range(d_a):
            for j in range(d_a):
                for k in range(d_s):
                    out[i, j] += mat[k * d_a + i, k * d_a + j]
    return out


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = g @ g.conj().T
    return mat / np.trace(mat).real

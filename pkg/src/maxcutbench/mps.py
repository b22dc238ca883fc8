"""Exact matrix-product-state simulation of the shallow RY/CNOT circuit.

The circuit is one layer of RY rotations, a brick pattern of CNOTs
(controls 0,2,4,... then 1,3,5,...), and a second RY layer. All gates are
real, so tensors stay real throughout. For this depth the bond dimension
is at most 4 and the two-site factorization after each CNOT is exact: the
singular-value cut at 1e-12 only removes numerically zero values, never
amplitude weight.

Bitstring convention: qubit q maps to position q of a sample row, and
qubit 0 is the most significant position of a serialized bitstring.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ParamLengthMismatch

__all__ = [
    "CircuitLayout",
    "MpsCircuitState",
    "build_layout",
    "apply_circuit",
    "sample",
    "exact_probability",
    "ry_matrix",
    "wrap_angles",
]

MAX_BOND_DIM = 4
_SV_CUTOFF = 1e-12


def ry_matrix(angle: float) -> np.ndarray:
    half = 0.5 * angle
    c, s = np.cos(half), np.sin(half)
    return np.array([[c, -s], [s, c]])


def wrap_angles(params) -> np.ndarray:
    """Reduce parameters modulo 2*pi into [0, 2*pi)."""
    return np.mod(np.asarray(params, dtype=float), 2.0 * np.pi)


@dataclass(frozen=True)
class CircuitLayout:
    """Gate plan of the ansatz for a given qubit count."""

    n_qubits: int
    cnot_pairs_first: tuple[tuple[int, int], ...]
    cnot_pairs_second: tuple[tuple[int, int], ...]

    @property
    def param_count(self) -> int:
        return 2 * self.n_qubits


def build_layout(n_qubits: int) -> CircuitLayout:
    """Brick-pattern layout: even controls first, then odd controls."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    first = tuple((c, c + 1) for c in range(0, n_qubits - 1, 2))
    second = tuple((c, c + 1) for c in range(1, n_qubits - 1, 2))
    return CircuitLayout(n_qubits, first, second)


@dataclass(frozen=True, eq=False)
class MpsCircuitState:
    """Open-boundary MPS with one (left, physical, right) tensor per qubit."""

    tensors: tuple[np.ndarray, ...]

    @property
    def n_qubits(self) -> int:
        return len(self.tensors)

    def bond_dims(self) -> tuple[int, ...]:
        """Internal bond dimensions (length n_qubits - 1)."""
        return tuple(t.shape[2] for t in self.tensors[:-1])

    def max_bond_dim(self) -> int:
        return max(self.bond_dims(), default=1)

    def norm(self) -> float:
        env = np.ones((1, 1))
        for t in reversed(self.tensors):
            t0, t1 = t[:, 0, :], t[:, 1, :]
            env = t0 @ env @ t0.T + t1 @ env @ t1.T
        return float(np.sqrt(env[0, 0]))


def _apply_single(tensor: np.ndarray, gate: np.ndarray) -> np.ndarray:
    a, _, b = tensor.shape
    rotated = gate @ tensor.transpose(1, 0, 2).reshape(2, a * b)
    return np.ascontiguousarray(rotated.reshape(2, a, b).transpose(1, 0, 2))


def _apply_cnot_pair(left: np.ndarray, right: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, _, mid = left.shape
    c = right.shape[2]
    theta = (left.reshape(a * 2, mid) @ right.reshape(mid, 2 * c)).reshape(a, 2, 2, c)
    # CNOT: flip the target bit where the control bit is 1
    theta[:, 1, :, :] = theta[:, 1, ::-1, :].copy()
    matrix = theta.reshape(a * 2, 2 * c)
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    keep = max(int(np.sum(s > _SV_CUTOFF)), 1)
    assert keep <= MAX_BOND_DIM, f"bond dimension {keep} exceeds {MAX_BOND_DIM}"
    new_left = u[:, :keep].reshape(a, 2, keep)
    new_right = (s[:keep, None] * vt[:keep]).reshape(keep, 2, c)
    return new_left, new_right


def apply_circuit(layout: CircuitLayout, params) -> MpsCircuitState:
    """Run the ansatz from |0...0> and return the exact MPS."""
    theta = np.asarray(params, dtype=float)
    if theta.shape != (layout.param_count,):
        raise ParamLengthMismatch(
            f"need {layout.param_count} parameters, got shape {theta.shape}"
        )
    n = layout.n_qubits
    tensors = [np.zeros((1, 2, 1)) for _ in range(n)]
    for t in tensors:
        t[0, 0, 0] = 1.0

    for q in range(n):
        tensors[q] = _apply_single(tensors[q], ry_matrix(theta[q]))
    for control, target in layout.cnot_pairs_first + layout.cnot_pairs_second:
        assert target == control + 1, "CNOTs act on adjacent qubits only"
        tensors[control], tensors[target] = _apply_cnot_pair(
            tensors[control], tensors[target]
        )
    for q in range(n):
        tensors[q] = _apply_single(tensors[q], ry_matrix(theta[n + q]))
    return MpsCircuitState(tuple(tensors))


def _right_environments(state: MpsCircuitState) -> list[np.ndarray]:
    """env[i][b, b'] contracts sites i..n-1 of <psi|psi> (env[n] = [[1]])."""
    n = state.n_qubits
    envs: list[np.ndarray] = [np.zeros(0)] * (n + 1)
    envs[n] = np.ones((1, 1))
    for i in range(n - 1, -1, -1):
        t0 = state.tensors[i][:, 0, :]
        t1 = state.tensors[i][:, 1, :]
        env = envs[i + 1]
        envs[i] = t0 @ env @ t0.T + t1 @ env @ t1.T
    return envs


def sample(state: MpsCircuitState, n_shots: int, rng: np.random.Generator) -> np.ndarray:
    """Perfect samples from |<x|psi>|^2, shape (n_shots, n_qubits).

    Sweeps qubits left to right, drawing each bit from its conditional
    marginal given the prefix; all shots advance through a site together.
    One uniform variate per (shot, qubit) is consumed, in qubit-major
    order, so a fixed stream reproduces the exact same shot matrix.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be >= 1")
    n = state.n_qubits
    envs = _right_environments(state)
    bits = np.empty((n_shots, n), dtype=np.uint8)
    vec = np.ones((n_shots, 1))
    for i in range(n):
        t = state.tensors[i]
        w0 = vec @ t[:, 0, :]
        w1 = vec @ t[:, 1, :]
        env = envs[i + 1]
        q0 = np.maximum(((w0 @ env) * w0).sum(axis=1), 0.0)
        q1 = np.maximum(((w1 @ env) * w1).sum(axis=1), 0.0)
        p_one = q1 / (q0 + q1)
        chosen = (rng.random(n_shots) < p_one).astype(np.uint8)
        bits[:, i] = chosen
        pick = chosen.astype(bool)
        vec = np.where(pick[:, None], w1, w0)
        scale = np.where(pick, q1, q0)
        vec = vec / np.sqrt(scale)[:, None]
    return bits


def exact_probability(state: MpsCircuitState, bitstring) -> float:
    """|<x|psi>|^2 by direct contraction against a basis state."""
    bits = np.asarray(bitstring)
    if bits.ndim != 1 or bits.shape[0] != state.n_qubits:
        raise LengthMismatch(
            f"bitstring must have length {state.n_qubits}, got shape {bits.shape}"
        )
    vec = np.ones((1,))
    for i, t in enumerate(state.tensors):
        vec = vec @ t[:, int(bits[i]), :]
    amplitude = float(vec[0])
    return amplitude * amplitude

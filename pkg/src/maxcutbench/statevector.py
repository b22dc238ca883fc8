"""Dense statevector backend, used only as a test oracle (N <= 20).

The state is a real (2,)*n tensor; qubit q is axis q, and the flattened
C-order index reads bitstrings with qubit 0 as the most significant bit,
matching the serialization convention of the sampler.
"""

from __future__ import annotations

import numpy as np

from .mps import CircuitLayout, ry_matrix

__all__ = ["dense_state", "dense_probabilities"]

_DENSE_LIMIT = 20


def dense_state(layout: CircuitLayout, params: np.ndarray) -> np.ndarray:
    """Real amplitudes of the circuit output, shape (2**n_qubits,)."""
    n = layout.n_qubits
    if n > _DENSE_LIMIT:
        raise ValueError(f"dense backend limited to {_DENSE_LIMIT} qubits")
    theta = np.asarray(params, dtype=float)
    if theta.shape != (layout.param_count,):
        raise ValueError(f"need {layout.param_count} parameters")

    psi = np.zeros((2,) * n)
    psi[(0,) * n] = 1.0

    def apply_ry(state: np.ndarray, angle: float, q: int) -> np.ndarray:
        rotated = np.tensordot(ry_matrix(angle), state, axes=([1], [q]))
        return np.moveaxis(rotated, 0, q)

    def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
        picker = [slice(None)] * n
        picker[control] = 1
        sub = state[tuple(picker)]
        state[tuple(picker)] = np.flip(sub, axis=target if target < control else target - 1)
        return state

    for q in range(n):
        psi = apply_ry(psi, theta[q], q)
    for control, target in layout.cnot_pairs_first + layout.cnot_pairs_second:
        psi = apply_cnot(psi, control, target)
    for q in range(n):
        psi = apply_ry(psi, theta[n + q], q)
    return psi.ravel()


def dense_probabilities(layout: CircuitLayout, params: np.ndarray) -> np.ndarray:
    amplitudes = dense_state(layout, params)
    return amplitudes * amplitudes

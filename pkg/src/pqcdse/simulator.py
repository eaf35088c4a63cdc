"""Dense statevector simulation of small n-qubit circuits.

Conventions used throughout the package:

* Qubit 0 is the most significant bit of the basis-state index, so for
  ``n = 2`` the amplitude order is ``|00>, |01>, |10>, |11>`` with the
  first bit belonging to qubit 0.
* Rotations follow ``R_P(theta) = exp(-1j * theta * P / 2)`` for
  ``P in {X, Y, Z}``.
* Controlled rotations ``CRX/CRZ`` apply the rotation on the target
  qubit conditioned on the control being ``|1>``.
* Global phase is unconstrained; only phase-invariant quantities
  (fidelity, expectation values) are compared across decompositions.

States are plain complex ``numpy`` arrays.  A single state has shape
``(2**n,)``; the batched variants accept ``(batch, 2**n)`` arrays and one
angle per batch element, which is what makes the Monte-Carlo metrics
cheap enough to run the whole catalog in minutes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GATE_KINDS = ("H", "RX", "RY", "RZ", "CX", "CZ", "CRX", "CRZ")
PARAMETRIZED_KINDS = frozenset({"RX", "RY", "RZ", "CRX", "CRZ"})
TWO_QUBIT_KINDS = frozenset({"CX", "CZ", "CRX", "CRZ"})

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """One gate in an instantiated circuit.

    ``qubits`` is ``(q,)`` for single-qubit kinds and
    ``(control, target)`` for two-qubit kinds.  ``param_slot`` indexes
    the circuit's parameter vector and is ``None`` exactly for the
    non-parametrized kinds (H, CX, CZ).
    """

    kind: str
    qubits: tuple[int, ...]
    param_slot: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != arity:
            raise ValueError(
                f"{self.kind} expects {arity} qubit(s), got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct: {self.qubits}")
        if (self.param_slot is not None) != (self.kind in PARAMETRIZED_KINDS):
            raise ValueError(
                f"param_slot must be present iff the gate is parametrized "
                f"(kind={self.kind}, param_slot={self.param_slot})"
            )

    @property
    def is_parametrized(self) -> bool:
        return self.kind in PARAMETRIZED_KINDS

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS


def num_qubits(state: np.ndarray) -> int:
    """Number of qubits of a state given as a length-2**n vector."""
    n = int(np.log2(state.shape[-1]) + 0.5)
    if 2**n != state.shape[-1]:
        raise ValueError(f"state length {state.shape[-1]} is not a power of two")
    return n


def zero_state(n_qubits: int, batch: int | None = None) -> np.ndarray:
    """|0...0> as a (2**n,) vector, or (batch, 2**n) when batch is given."""
    dim = 2**n_qubits
    if batch is None:
        state = np.zeros(dim, dtype=complex)
        state[0] = 1.0
        return state
    states = np.zeros((batch, dim), dtype=complex)
    states[:, 0] = 1.0
    return states


def rotation_matrix(kind: str, theta) -> np.ndarray:
    """2x2 rotation exp(-i*theta*P/2); batched thetas give (..., 2, 2)."""
    half = np.asarray(theta, dtype=float) / 2.0
    c, s = np.cos(half), np.sin(half)
    out = np.zeros(half.shape + (2, 2), dtype=complex)
    if kind == "RX":
        out[..., 0, 0] = c
        out[..., 0, 1] = -1j * s
        out[..., 1, 0] = -1j * s
        out[..., 1, 1] = c
    elif kind == "RY":
        out[..., 0, 0] = c
        out[..., 0, 1] = -s
        out[..., 1, 0] = s
        out[..., 1, 1] = c
    elif kind == "RZ":
        out[..., 0, 0] = np.exp(-1j * half)
        out[..., 1, 1] = np.exp(1j * half)
    else:
        raise ValueError(f"{kind} is not a rotation kind")
    return out


def _apply_single(tensor: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    """Apply a 2x2 (or batched (B,2,2)) matrix along one qubit axis."""
    moved = np.moveaxis(tensor, axis, -1)
    if mat.ndim == 2:
        out = moved @ mat.T
    else:
        out = np.einsum("bij,b...j->b...i", mat, moved)
    return np.moveaxis(out, -1, axis)


def _apply_gate_tensor(tensor: np.ndarray, gate: Gate, theta) -> np.ndarray:
    """Apply one gate to a (batch, 2, ..., 2) state tensor."""
    kind = gate.kind
    if kind == "H":
        return _apply_single(tensor, _HADAMARD, 1 + gate.qubits[0])
    if kind in ("RX", "RY", "RZ"):
        return _apply_single(tensor, rotation_matrix(kind, theta), 1 + gate.qubits[0])

    ctrl, tgt = gate.qubits
    out = tensor.copy()
    # View of the control = |1> subspace; the target axis shifts left by
    # one when it sat to the right of the control axis.
    sub = np.moveaxis(out, 1 + ctrl, 1)[:, 1]
    tgt_axis = 1 + (tgt - 1 if tgt > ctrl else tgt)
    if kind == "CX":
        sub[...] = np.flip(sub, axis=tgt_axis).copy()
    elif kind == "CZ":
        np.moveaxis(sub, tgt_axis, 1)[:, 1] *= -1.0
    else:  # CRX / CRZ
        mat = rotation_matrix(kind[1:], theta)
        moved = np.moveaxis(sub, tgt_axis, -1)
        if mat.ndim == 2:
            moved[...] = moved @ mat.T
        else:
            moved[...] = np.einsum("bij,b...j->b...i", mat, moved)
    return out


def _check_gate(gate: Gate, n: int, theta) -> None:
    if any(q < 0 or q >= n for q in gate.qubits):
        raise ValueError(f"{gate.kind} on qubits {gate.qubits} out of range for n={n}")
    if gate.is_parametrized and theta is None:
        raise ValueError(f"{gate.kind} requires an angle")
    if not gate.is_parametrized and theta is not None:
        raise ValueError(f"{gate.kind} takes no angle")


def apply_gate(state: np.ndarray, gate: Gate, theta: float | None = None) -> np.ndarray:
    """Return the state after the gate's unitary action (norm preserved)."""
    n = num_qubits(state)
    _check_gate(gate, n, theta)
    tensor = state.reshape((1,) + (2,) * n)
    out = _apply_gate_tensor(tensor, gate, theta)
    return out.reshape(2**n)


def run_circuit(circuit, theta: np.ndarray) -> np.ndarray:
    """Run an instantiated circuit on |0...0> and return the final state.

    ``theta`` must have exactly ``circuit.n_params`` entries; slot ``k``
    of the parameter vector feeds the gate whose ``param_slot`` is ``k``.
    """
    theta = np.asarray(theta, dtype=float).reshape(-1)
    return run_circuit_batch(circuit, theta[None, :])[0]


def run_circuit_batch(circuit, thetas: np.ndarray) -> np.ndarray:
    """Run one circuit on a batch of parameter vectors.

    ``thetas`` has shape (batch, n_params); the result has shape
    (batch, 2**n) with one output state per row.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2:
        raise ValueError("thetas must have shape (batch, n_params)")
    if thetas.shape[1] != circuit.n_params:
        raise ValueError(
            f"circuit {circuit.id} expects {circuit.n_params} parameters, "
            f"got {thetas.shape[1]}"
        )
    n = circuit.n_qubits
    tensor = zero_state(n, batch=thetas.shape[0]).reshape(
        (thetas.shape[0],) + (2,) * n
    )
    for gate in circuit.gates:
        angle = thetas[:, gate.param_slot] if gate.is_parametrized else None
        tensor = _apply_gate_tensor(tensor, gate, angle)
    return tensor.reshape(thetas.shape[0], 2**n)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2, clipped to [0, 1] against rounding."""
    if a.shape != b.shape:
        raise ValueError(f"state dimensions differ: {a.shape} vs {b.shape}")
    return float(np.clip(np.abs(np.vdot(a, b)) ** 2, 0.0, 1.0))


def fidelity_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise |<a_i|b_i>|^2 for two (batch, dim) state arrays."""
    if a.shape != b.shape:
        raise ValueError(f"state dimensions differ: {a.shape} vs {b.shape}")
    overlaps = np.einsum("bi,bi->b", np.conj(a), b)
    return np.clip(np.abs(overlaps) ** 2, 0.0, 1.0)

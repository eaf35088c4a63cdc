"""Benchmark Hamiltonians as real-weighted sums of Pauli strings.

Three observables define the optimization landscapes used by the
trainability metric: the transverse-field Ising chain (global,
correlated), the isotropic Heisenberg chain (exchange terms in all three
bases) and a strictly local sum of X fields.  All chains use open
boundary conditions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PAULIS = frozenset("IXYZ")


@dataclass(frozen=True)
class Observable:
    """Hermitian operator sum_t w_t * P_t with real weights w_t.

    Each Pauli string is one letter per qubit (qubit 0 first); strings
    are unique, with weights pre-combined.
    """

    n_qubits: int
    terms: tuple[tuple[float, str], ...]

    def __post_init__(self):
        seen = set()
        for weight, pauli in self.terms:
            if len(pauli) != self.n_qubits:
                raise ValueError(
                    f"pauli string {pauli!r} has length {len(pauli)}, "
                    f"expected {self.n_qubits}"
                )
            if not set(pauli) <= _PAULIS:
                raise ValueError(f"invalid pauli string {pauli!r}")
            if pauli in seen:
                raise ValueError(f"duplicate pauli string {pauli!r}")
            seen.add(pauli)

    @property
    def weight_norm(self) -> float:
        """sum_t |w_t|, an upper bound on |<O>| for any state."""
        return float(sum(abs(w) for w, _ in self.terms))


def _single_site(n: int, site: int, letter: str) -> str:
    chars = ["I"] * n
    chars[site] = letter
    return "".join(chars)


def _two_site(n: int, i: int, j: int, letter: str) -> str:
    chars = ["I"] * n
    chars[i] = letter
    chars[j] = letter
    return "".join(chars)


def tfim(n: int, coupling: float = 1.0, field: float = 1.0) -> Observable:
    """Transverse-field Ising chain, open boundaries.

    H = -coupling * sum_i Z_i Z_{i+1} - field * sum_i X_i with (n-1)
    nearest-neighbor ZZ terms and n X terms.
    """
    if n < 2:
        raise ValueError("tfim needs at least 2 qubits")
    terms = [(-coupling, _two_site(n, i, i + 1, "Z")) for i in range(n - 1)]
    terms += [(-field, _single_site(n, i, "X")) for i in range(n)]
    return Observable(n, tuple(terms))


def heisenberg(n: int) -> Observable:
    """Isotropic Heisenberg chain: sum_i (XX + YY + ZZ), open boundaries."""
    if n < 2:
        raise ValueError("heisenberg needs at least 2 qubits")
    terms = []
    for letter in "XYZ":
        terms += [(1.0, _two_site(n, i, i + 1, letter)) for i in range(n - 1)]
    return Observable(n, tuple(terms))


def local_x(n: int) -> Observable:
    """Non-interacting transverse fields: sum_i X_i."""
    if n < 1:
        raise ValueError("local_x needs at least 1 qubit")
    return Observable(n, tuple((1.0, _single_site(n, i, "X")) for i in range(n)))


HAMILTONIAN_SELECTORS = ("tfim", "heisenberg", "localx")


def by_selector(selector: str, n: int) -> Observable:
    """Build a benchmark Hamiltonian from its CLI selector string."""
    if selector == "tfim":
        return tfim(n, 1.0, 1.0)
    if selector == "heisenberg":
        return heisenberg(n)
    if selector == "localx":
        return local_x(n)
    raise ValueError(
        f"unknown hamiltonian {selector!r}; choose from {HAMILTONIAN_SELECTORS}"
    )


def _apply_pauli_string(tensor: np.ndarray, pauli: str) -> np.ndarray:
    """P|psi> for a (batch, 2, ..., 2) state tensor; input left untouched."""
    out = tensor.copy()
    for q, letter in enumerate(pauli):
        if letter == "I":
            continue
        axis = 1 + q
        if letter == "X":
            out = np.ascontiguousarray(np.flip(out, axis=axis))
        elif letter == "Z":
            np.moveaxis(out, axis, 1)[:, 1] *= -1.0
        else:  # Y = [[0, -i], [i, 0]]
            out = np.ascontiguousarray(np.flip(out, axis=axis))
            moved = np.moveaxis(out, axis, 1)
            moved[:, 0] *= -1j
            moved[:, 1] *= 1j
    return out


def expectation_batch(states: np.ndarray, obs: Observable) -> np.ndarray:
    """Exact <psi|O|psi> for each row of a (batch, 2**n) state array."""
    if states.shape[-1] != 2**obs.n_qubits:
        raise ValueError(
            f"observable acts on {obs.n_qubits} qubits, state dimension "
            f"is {states.shape[-1]}"
        )
    tensor = states.reshape((states.shape[0],) + (2,) * obs.n_qubits)
    flat = states.reshape(states.shape[0], -1)
    values = np.zeros(states.shape[0], dtype=complex)
    for weight, pauli in obs.terms:
        acted = _apply_pauli_string(tensor, pauli).reshape(states.shape[0], -1)
        values += weight * np.einsum("bi,bi->b", np.conj(flat), acted)
    return values.real


def expectation(state: np.ndarray, obs: Observable) -> float:
    """Exact expectation value of an observable on a single state."""
    return float(expectation_batch(state[None, :], obs)[0])

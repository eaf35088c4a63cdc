"""Benchmark Hamiltonians: term structure and exact expectation values."""

import numpy as np
import pytest

from pqcdse.observables import (
    Observable,
    by_selector,
    expectation,
    expectation_batch,
    heisenberg,
    local_x,
    tfim,
)
from pqcdse.simulator import zero_state


def plus_state(n):
    return np.full(2**n, 1.0 / np.sqrt(2**n), dtype=complex)


def random_states(n, count, seed):
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((count, 2**n)) + 1j * rng.standard_normal((count, 2**n))
    return vecs / np.linalg.norm(vecs, axis=1, keepdims=True)


def test_tfim_terms():
    obs = tfim(4, 1.0, 1.0)
    assert len(obs.terms) == 7
    zz = [t for t in obs.terms if t[1].count("Z") == 2]
    x = [t for t in obs.terms if t[1].count("X") == 1]
    assert len(zz) == 3 and all(w == -1.0 for w, _ in zz)
    assert len(x) == 4 and all(w == -1.0 for w, _ in x)


def test_tfim_zero_field_limit():
    obs = tfim(2, 1.0, 0.0)
    nonzero = [t for t in obs.terms if t[0] != 0.0]
    assert nonzero == [(-1.0, "ZZ")]


def test_tfim_on_all_zeros():
    assert expectation(zero_state(4), tfim(4, 1, 1)) == pytest.approx(-3.0, abs=1e-12)


def test_heisenberg_term_count():
    assert len(heisenberg(4).terms) == 9


def test_heisenberg_on_all_zeros():
    assert expectation(zero_state(4), heisenberg(4)) == pytest.approx(3.0, abs=1e-12)


def test_heisenberg_singlet():
    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    assert expectation(singlet, heisenberg(2)) == pytest.approx(-3.0, abs=1e-12)


def test_local_x_counts_and_values():
    obs = local_x(4)
    assert len(obs.terms) == 4
    assert expectation(plus_state(4), obs) == pytest.approx(4.0, abs=1e-12)
    assert expectation(zero_state(4), obs) == pytest.approx(0.0, abs=1e-12)
    assert local_x(1).terms == ((1.0, "X"),)


def test_minimum_sizes():
    with pytest.raises(ValueError):
        tfim(1)
    with pytest.raises(ValueError):
        heisenberg(1)
    with pytest.raises(ValueError):
        local_x(0)


def test_selector_round_trip():
    for name in ("tfim", "heisenberg", "localx"):
        assert by_selector(name, 4).n_qubits == 4
    with pytest.raises(ValueError, match="unknown hamiltonian"):
        by_selector("ising", 4)


def test_duplicate_pauli_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        Observable(2, ((1.0, "XX"), (2.0, "XX")))


def test_wrong_length_pauli_rejected():
    with pytest.raises(ValueError, match="length"):
        Observable(2, ((1.0, "XXX"),))


def test_expectation_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        expectation(zero_state(3), tfim(4))


def test_hermitian_expectations_real_and_bounded():
    states = random_states(4, 50, seed=11)
    for obs in (tfim(4, 1, 1), heisenberg(4), local_x(4)):
        tensor = states.reshape((50,) + (2,) * 4)
        values = np.zeros(50, dtype=complex)
        from pqcdse.observables import _apply_pauli_string

        for weight, pauli in obs.terms:
            acted = _apply_pauli_string(tensor, pauli).reshape(50, -1)
            values += weight * np.einsum("bi,bi->b", np.conj(states), acted)
        assert np.max(np.abs(values.imag)) < 1e-10
        assert np.all(np.abs(values.real) <= obs.weight_norm + 1e-12)


def test_tfim_j_zero_matches_negated_local_x():
    states = random_states(4, 30, seed=12)
    jzero = expectation_batch(states, tfim(4, 0.0, 0.7))
    lx = expectation_batch(states, local_x(4))
    assert np.allclose(jzero, -0.7 * lx, atol=1e-12)

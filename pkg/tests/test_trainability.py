"""Parameter-shift gradients against oracles; gradient-variance metric."""

import numpy as np
import pytest

from pqcdse.catalog import CircuitTemplate, GateSpec, instantiate
from pqcdse.observables import Observable, tfim
from pqcdse.simulator import run_circuit
from pqcdse.observables import expectation
from pqcdse.trainability import (
    gradient,
    gradient_batch,
    landscape_bias,
    trainability,
)

Z_OBS = Observable(1, ((1.0, "Z"),))


def ry_circuit():
    template = CircuitTemplate(
        id="ry", n_qubits=1, connectivity="none",
        layer_block=(GateSpec("RY", (0,), True),),
    )
    return instantiate(template, 1)


def finite_difference(circuit, obs, theta, step=1e-5):
    grads = np.zeros(len(theta))
    for k in range(len(theta)):
        plus, minus = np.array(theta, float), np.array(theta, float)
        plus[k] += step
        minus[k] -= step
        e_plus = expectation(run_circuit(circuit, plus), obs)
        e_minus = expectation(run_circuit(circuit, minus), obs)
        grads[k] = (e_plus - e_minus) / (2 * step)
    return grads


def all_kinds_circuit():
    """One gate of every parametrized kind plus the fixed kinds."""
    template = CircuitTemplate(
        id="kinds", n_qubits=3, connectivity="all_to_all",
        layer_block=(
            GateSpec("H", (0,), False),
            GateSpec("RX", (0,), True),
            GateSpec("RY", (1,), True),
            GateSpec("RZ", (2,), True),
            GateSpec("CX", (0, 1), False),
            GateSpec("CZ", (1, 2), False),
            GateSpec("CRX", (0, 2), True),
            GateSpec("CRZ", (2, 1), True),
        ),
    )
    return instantiate(template, 2)


def test_single_ry_gradient_at_zero():
    assert gradient(ry_circuit(), Z_OBS, [0.0])[0] == pytest.approx(0.0, abs=1e-12)


def test_single_ry_gradient_at_half_pi():
    assert gradient(ry_circuit(), Z_OBS, [np.pi / 2])[0] == pytest.approx(-1.0, abs=1e-10)


def test_parameter_shift_matches_finite_differences_all_kinds():
    circuit = all_kinds_circuit()
    obs = tfim(3, 1.0, 1.0)
    rng = np.random.default_rng(9)
    for _ in range(5):
        theta = rng.uniform(0, 2 * np.pi, circuit.n_params)
        exact = gradient(circuit, obs, theta)
        approx = finite_difference(circuit, obs, theta)
        assert np.max(np.abs(exact - approx)) < 1e-6


def test_parameter_shift_matches_finite_differences_catalog(catalog_by_id):
    obs = tfim(4, 1.0, 1.0)
    rng = np.random.default_rng(10)
    for cid in ("A04", "A10", "A14"):
        circuit = instantiate(catalog_by_id[cid], 1)
        theta = rng.uniform(0, 2 * np.pi, circuit.n_params)
        exact = gradient(circuit, obs, theta)
        approx = finite_difference(circuit, obs, theta)
        assert np.max(np.abs(exact - approx)) < 1e-6, cid


def test_gradient_batch_matches_single():
    circuit = all_kinds_circuit()
    obs = tfim(3, 1.0, 1.0)
    rng = np.random.default_rng(11)
    thetas = rng.uniform(0, 2 * np.pi, size=(4, circuit.n_params))
    batch = gradient_batch(circuit, obs, thetas)
    for i in range(4):
        assert np.allclose(batch[i], gradient(circuit, obs, thetas[i]), atol=1e-12)


def test_gradient_wrong_length():
    with pytest.raises(ValueError, match="batch"):
        gradient_batch(ry_circuit(), Z_OBS, np.zeros((2, 3)))


def test_trainability_single_ry_analytic():
    # Var[d(cos t)/dt] over uniform t is the mean of sin^2 = 0.5
    result = trainability(ry_circuit(), Z_OBS, n_samples=1000, seed=3)
    assert result.mean_variance == pytest.approx(0.5, abs=0.03)
    assert result.per_param_variance.shape == (1,)
    assert result.mean_variance == pytest.approx(
        result.per_param_variance.mean(), abs=1e-15
    )


def test_trainability_requires_parameters():
    template = CircuitTemplate(
        id="fixed", n_qubits=2, connectivity="linear",
        layer_block=(GateSpec("CX", (0, 1), False),),
    )
    with pytest.raises(ValueError, match="no trainable parameters"):
        trainability(instantiate(template, 1), tfim(2), n_samples=10, seed=0)


def test_trainability_deterministic():
    circuit = ry_circuit()
    a = trainability(circuit, Z_OBS, n_samples=50, seed=5)
    b = trainability(circuit, Z_OBS, n_samples=50, seed=5)
    assert a.mean_variance == b.mean_variance


def test_landscape_bias_single_ry():
    # mean of -sin over uniform angles vanishes
    bias = landscape_bias(ry_circuit(), Z_OBS, n_samples=2000, seed=6)
    assert abs(bias[0]) < 4 * np.sqrt(0.5 / 2000)


def test_landscape_bias_deterministic():
    a = landscape_bias(ry_circuit(), Z_OBS, n_samples=100, seed=8)
    b = landscape_bias(ry_circuit(), Z_OBS, n_samples=100, seed=8)
    assert np.array_equal(a, b)


def test_landscape_unbiased_catalog_spot(catalog_by_id):
    obs = tfim(4, 1.0, 1.0)
    for cid in ("A10", "A16"):
        circuit = instantiate(catalog_by_id[cid], 1)
        from pqcdse.trainability import _gradient_samples

        grads = _gradient_samples(circuit, obs, 1000, seed=21)
        means = grads.mean(axis=0)
        variances = np.mean(grads**2, axis=0)
        bound = 4 * np.sqrt(variances / 1000)
        assert np.all(np.abs(means) <= bound), cid


def test_chebyshev_bound_spot(catalog_by_id):
    obs = tfim(4, 1.0, 1.0)
    circuit = instantiate(catalog_by_id["A10"], 1)
    from pqcdse.trainability import _gradient_samples

    n_samples = 1000
    grads = _gradient_samples(circuit, obs, n_samples, seed=22)
    variances = np.mean(grads**2, axis=0)
    mc_slack = 3 * np.sqrt(0.25 / n_samples)
    for delta in (0.5, 1.0):
        fractions = np.mean(np.abs(grads) >= delta, axis=0)
        bounds = np.minimum(1.0, variances / delta**2) + mc_slack
        assert np.all(fractions <= bounds)

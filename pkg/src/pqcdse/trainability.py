"""Parameter-shift gradients and the mean gradient-variance metric.

Trainability of a (circuit, Hamiltonian) pair is the average over
trainable parameters of the variance of the cost derivative under
uniformly random parameters.  Per-parameter variances use the mean of
squared derivatives: the landscape is unbiased, so the uncentered
estimator is the natural one and avoids an extra pass.

Gradients are exact.  Single-qubit rotations use the two-term shift
rule; controlled rotations need the four-term rule because their
generator has three distinct eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .observables import Observable, expectation_batch
from .simulator import run_circuit_batch

DEFAULT_N_SAMPLES = 500

_TWO_TERM_SHIFT = np.pi / 2
_FOUR_TERM_C_PLUS = (np.sqrt(2.0) + 1.0) / (4.0 * np.sqrt(2.0))
_FOUR_TERM_C_MINUS = (np.sqrt(2.0) - 1.0) / (4.0 * np.sqrt(2.0))


@dataclass(frozen=True)
class TrainabilityResult:
    mean_variance: float
    per_param_variance: np.ndarray
    n_samples: int
    hamiltonian_id: str
    seed: int


def _energy(circuit, obs: Observable, thetas: np.ndarray) -> np.ndarray:
    return expectation_batch(run_circuit_batch(circuit, thetas), obs)


def _shifted(thetas: np.ndarray, k: int, delta: float) -> np.ndarray:
    shifted = thetas.copy()
    shifted[:, k] += delta
    return shifted


def gradient_batch(circuit, obs: Observable, thetas: np.ndarray) -> np.ndarray:
    """Parameter-shift gradient of <H> for each row of thetas.

    Returns an array of shape (batch, n_params).
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != circuit.n_params:
        raise ValueError(
            f"thetas must have shape (batch, {circuit.n_params}), "
            f"got {thetas.shape}"
        )
    grads = np.empty_like(thetas)
    kinds = [g.kind for g in circuit.gates if g.is_parametrized]
    for k, kind in enumerate(kinds):
        if kind in ("RX", "RY", "RZ"):
            plus = _energy(circuit, obs, _shifted(thetas, k, _TWO_TERM_SHIFT))
            minus = _energy(circuit, obs, _shifted(thetas, k, -_TWO_TERM_SHIFT))
            grads[:, k] = 0.5 * (plus - minus)
        else:  # CRX / CRZ
            near = _energy(circuit, obs, _shifted(thetas, k, np.pi / 2)) - _energy(
                circuit, obs, _shifted(thetas, k, -np.pi / 2)
            )
            far = _energy(circuit, obs, _shifted(thetas, k, 3 * np.pi / 2)) - _energy(
                circuit, obs, _shifted(thetas, k, -3 * np.pi / 2)
            )
            grads[:, k] = _FOUR_TERM_C_PLUS * near - _FOUR_TERM_C_MINUS * far
    return grads


def gradient(circuit, obs: Observable, theta: np.ndarray) -> np.ndarray:
    """Exact gradient of E(theta) = <psi_theta|H|psi_theta>."""
    theta = np.asarray(theta, dtype=float).reshape(-1)
    return gradient_batch(circuit, obs, theta[None, :])[0]


def _gradient_samples(
    circuit, obs: Observable, n_samples: int, seed: int
) -> np.ndarray:
    """(n_samples, n_params) derivatives at uniform random parameters."""
    if circuit.n_params == 0:
        raise ValueError(
            f"circuit {circuit.id} has no trainable parameters; "
            "the gradient-variance metric is undefined"
        )
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=(n_samples, circuit.n_params))
    return gradient_batch(circuit, obs, thetas)


def trainability(
    circuit,
    obs: Observable,
    n_samples: int = DEFAULT_N_SAMPLES,
    seed: int = 0,
    hamiltonian_id: str = "",
) -> TrainabilityResult:
    """Mean over parameters of the uncentered gradient variance."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    grads = _gradient_samples(circuit, obs, n_samples, seed)
    per_param = np.mean(grads**2, axis=0)
    return TrainabilityResult(
        mean_variance=float(per_param.mean()),
        per_param_variance=per_param,
        n_samples=n_samples,
        hamiltonian_id=hamiltonian_id,
        seed=seed,
    )


def landscape_bias(
    circuit, obs: Observable, n_samples: int = DEFAULT_N_SAMPLES, seed: int = 0
) -> np.ndarray:
    """Per-parameter sample mean of the derivative (diagnostic only).

    For an unbiased landscape each entry is statistically consistent
    with zero; compare against 4*sqrt(var_k / n_samples).
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    grads = _gradient_samples(circuit, obs, n_samples, seed)
    return grads.mean(axis=0)

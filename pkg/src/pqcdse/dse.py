"""Design-space encoding, Pareto-surface fits and the score regressor.

The design space has three controllable coordinates: layer count,
connectivity pattern and primitive gate set.  Connectivity is ordered by
interaction-graph density (none < linear < circular < all_to_all); gate
sets take their ordinal from the catalog's sorted list of distinct
labels, so the encoding is reproducible from the catalog alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONNECTIVITY_ORDER = ("none", "linear", "circular", "all_to_all")


@dataclass(frozen=True)
class DesignPoint:
    """Architectural coordinates of one circuit instance."""

    layers: int
    connectivity_ord: int
    gate_set_ord: int
    circuit_id: str = ""


def gate_set_labels(templates) -> list[str]:
    """Sorted distinct gate-set labels of a catalog (the ordinal axis)."""
    return sorted({t.gate_set_label for t in templates})


def encode(circuit, labels) -> DesignPoint:
    """Map a circuit (template or instance) to its design-space point."""
    try:
        gate_set_ord = list(labels).index(circuit.gate_set_label)
    except ValueError:
        raise ValueError(
            f"gate set {circuit.gate_set_label!r} is not in the catalog "
            f"enumeration {list(labels)}"
        ) from None
    return DesignPoint(
        layers=getattr(circuit, "layers", 1),
        connectivity_ord=CONNECTIVITY_ORDER.index(circuit.connectivity),
        gate_set_ord=gate_set_ord,
        circuit_id=circuit.id,
    )


def decode(point: DesignPoint, labels) -> tuple[int, str, str]:
    """Inverse of :func:`encode` up to the (layers, connectivity, gate set) triple."""
    return (
        point.layers,
        CONNECTIVITY_ORDER[point.connectivity_ord],
        list(labels)[point.gate_set_ord],
    )


def _monomial_exponents(degree: int) -> list[tuple[int, int]]:
    """(a, b) exponent pairs of x^a y^b ordered 1, x, y, x^2, xy, y^2, ..."""
    return [
        (total - b, b) for total in range(degree + 1) for b in range(total + 1)
    ]


@dataclass(frozen=True)
class SurfaceFit:
    """Least-squares polynomial surface z = g(x, y) over design points."""

    degree: int
    coefficients: np.ndarray
    axis_mapping: tuple[str, str, str]
    residual_rms: float
    x_range: tuple[float, float]
    y_range: tuple[float, float]

    def predict(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for coef, (a, b) in zip(self.coefficients, _monomial_exponents(self.degree)):
            out = out + coef * x**a * y**b
        return out


def _point_coords(points, axis_mapping):
    cols = []
    for name in axis_mapping:
        cols.append(np.array([getattr(p, name) for p in points], dtype=float))
    return cols


def fit_surface(
    points,
    degree: int,
    axis_mapping: tuple[str, str, str] = ("layers", "connectivity_ord", "gate_set_ord"),
    allow_rank_deficient: bool = False,
) -> SurfaceFit:
    """Ordinary least squares over the monomials x^a y^b with a+b <= degree.

    A rank-deficient design matrix raises by default; with
    ``allow_rank_deficient`` the minimum-norm least-squares solution is
    returned instead (useful when the sample sits on few distinct
    coordinate values, which makes higher monomials linearly dependent).
    """
    exponents = _monomial_exponents(degree)
    n_coef = len(exponents)
    if len(points) < n_coef:
        raise ValueError(
            f"degree {degree} needs at least {n_coef} points, got {len(points)}"
        )
    x, y, z = _point_coords(points, axis_mapping)
    design = np.column_stack([x**a * y**b for a, b in exponents])
    rank = np.linalg.matrix_rank(design)
    if rank < n_coef and not allow_rank_deficient:
        raise ValueError(
            f"design matrix is rank-deficient (rank {rank} < {n_coef} "
            f"coefficients); the points do not span degree {degree}"
        )
    coef, _, _, _ = np.linalg.lstsq(design, z, rcond=None)
    residual = design @ coef - z
    return SurfaceFit(
        degree=degree,
        coefficients=coef,
        axis_mapping=tuple(axis_mapping),
        residual_rms=float(np.sqrt(np.mean(residual**2))),
        x_range=(float(x.min()), float(x.max())),
        y_range=(float(y.min()), float(y.max())),
    )


@dataclass
class ScoreRegressor:
    """Fixed-architecture MLP (3 -> 32 -> 32 -> 1, tanh hidden, linear out)."""

    mean: np.ndarray
    std: np.ndarray
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    final_mse: float
    seed: int

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
        z = (inputs - self.mean) / self.std
        z = np.tanh(z @ self.weights[0] + self.biases[0])
        z = np.tanh(z @ self.weights[1] + self.biases[1])
        return (z @ self.weights[2] + self.biases[2]).ravel()


def _init_params(rng: np.random.Generator, sizes=(3, 32, 32, 1)):
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _mse_and_grads(weights, biases, x, y):
    """Forward/backward pass; returns (mse, weight grads, bias grads)."""
    h1 = np.tanh(x @ weights[0] + biases[0])
    h2 = np.tanh(h1 @ weights[1] + biases[1])
    pred = (h2 @ weights[2] + biases[2]).ravel()
    err = pred - y
    n = len(y)
    mse = float(np.mean(err**2))

    d_pred = (2.0 / n) * err[:, None]
    grad_w2 = h2.T @ d_pred
    grad_b2 = d_pred.sum(axis=0)
    d_h2 = (d_pred @ weights[2].T) * (1.0 - h2**2)
    grad_w1 = h1.T @ d_h2
    grad_b1 = d_h2.sum(axis=0)
    d_h1 = (d_h2 @ weights[1].T) * (1.0 - h1**2)
    grad_w0 = x.T @ d_h1
    grad_b0 = d_h1.sum(axis=0)
    return mse, [grad_w0, grad_w1, grad_w2], [grad_b0, grad_b1, grad_b2]


def train_regressor(
    samples,
    seed: int = 0,
    learning_rate: float = 0.01,
    epochs: int = 5000,
) -> ScoreRegressor:
    """Full-batch Adam on mean squared error over (DesignPoint, score) pairs.

    Inputs are standardized per coordinate before training; a coordinate
    with zero spread across the samples is rejected.
    """
    if len(samples) < 2:
        raise ValueError("need at least 2 training samples")
    x = np.array(
        [(p.layers, p.connectivity_ord, p.gate_set_ord) for p, _ in samples],
        dtype=float,
    )
    y = np.array([s for _, s in samples], dtype=float)
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    if np.any(std == 0):
        dead = [i for i, s in enumerate(std) if s == 0]
        raise ValueError(f"zero-variance input coordinate(s) {dead}")
    x_std = (x - mean) / std

    rng = np.random.default_rng(seed)
    weights, biases = _init_params(rng)
    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    mse = np.inf
    for step in range(1, epochs + 1):
        mse, grads_w, grads_b = _mse_and_grads(weights, biases, x_std, y)
        correction1 = 1.0 - beta1**step
        correction2 = 1.0 - beta2**step
        for i in range(3):
            m_w[i] = beta1 * m_w[i] + (1 - beta1) * grads_w[i]
            v_w[i] = beta2 * v_w[i] + (1 - beta2) * grads_w[i] ** 2
            weights[i] -= learning_rate * (m_w[i] / correction1) / (
                np.sqrt(v_w[i] / correction2) + eps
            )
            m_b[i] = beta1 * m_b[i] + (1 - beta1) * grads_b[i]
            v_b[i] = beta2 * v_b[i] + (1 - beta2) * grads_b[i] ** 2
            biases[i] -= learning_rate * (m_b[i] / correction1) / (
                np.sqrt(v_b[i] / correction2) + eps
            )
    mse = _mse_and_grads(weights, biases, x_std, y)[0]
    return ScoreRegressor(
        mean=mean, std=std, weights=weights, biases=biases,
        final_mse=mse, seed=seed,
    )


def predict_grid(
    regressor: ScoreRegressor,
    surface: SurfaceFit,
    resolution: int,
) -> np.ndarray:
    """Score predictions over the surface's (x, y) rectangle.

    Returns an array of rows (x, y, z, score_pred) with resolution**2
    entries; z is lifted through the fitted surface and the regressor is
    evaluated at the lifted design coordinates.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    xs = np.linspace(*surface.x_range, resolution)
    ys = np.linspace(*surface.y_range, resolution)
    mesh_x, mesh_y = np.meshgrid(xs, ys, indexing="ij")
    flat_x, flat_y = mesh_x.ravel(), mesh_y.ravel()
    flat_z = surface.predict(flat_x, flat_y)
    # Map the (x, y, z) axis roles back to regressor input order.
    coord_by_axis = dict(zip(surface.axis_mapping, (flat_x, flat_y, flat_z)))
    inputs = np.column_stack(
        [coord_by_axis[name] for name in ("layers", "connectivity_ord", "gate_set_ord")]
    )
    preds = regressor.predict(inputs)
    return np.column_stack([flat_x, flat_y, flat_z, preds])

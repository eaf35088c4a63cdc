"""Multi-objective analysis: cost metric, Pareto fronts, redundancy, scores.

Everything here is a pure function over in-memory metric records.  A
record can be any object or mapping exposing the named fields; the
evaluation pipeline uses :class:`MetricRecord`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import gaussian_kde


@dataclass
class MetricRecord:
    """One row of the results table: metrics of a (circuit, L, H) triple."""

    circuit_id: str
    layers: int
    n_qubits: int
    n_params: int
    n_2q: int
    depth: int
    dkl: float
    expr_prime: float
    hamiltonian: str
    trainability: float
    cost: float | None = None
    score: float | None = None
    seed: int = 0

    @property
    def label(self) -> str:
        return f"{self.circuit_id}-L{self.layers}"


@dataclass(frozen=True)
class CostWeights:
    """Relative weight of parameter count, depth and two-qubit count."""

    alpha: float = 1.0 / 3.0
    beta: float = 1.0 / 3.0
    gamma: float = 1.0 / 3.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.gamma < 0:
            raise ValueError("cost weights must be nonnegative")
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("cost weights must not all be zero")


@dataclass(frozen=True)
class NormalizationContext:
    """Per-metric (min, max) bounds over a declared record population."""

    bounds: dict

    @classmethod
    def from_records(cls, records, fields=("n_params", "depth", "n_2q")):
        bounds = {}
        for name in fields:
            values = [_get(r, name) for r in records]
            bounds[name] = (min(values), max(values))
        return cls(bounds=bounds)

    def normalize(self, name: str, x: float) -> float:
        return normalize(x, self.bounds[name])


def _get(record, name):
    if isinstance(record, dict):
        return record[name]
    return getattr(record, name)


def normalize(x: float, bounds: tuple[float, float]) -> float:
    """Min-max normalization; a degenerate min = max population maps to 0."""
    lo, hi = bounds
    if lo > hi:
        raise ValueError(f"invalid bounds {bounds}")
    if lo == hi:
        return 0.0
    return (x - lo) / (hi - lo)


def cost(resources, ctx: NormalizationContext, weights: CostWeights = CostWeights()) -> float:
    """Weighted sum of min-max normalized resource components.

    ``resources`` needs fields n_params / depth / n_2q (a ResourceCounts
    works, as does a MetricRecord).  Values outside the normalization
    population may produce a cost outside [0, 1]; callers evaluating
    late additions against a persisted context should flag those.
    """
    n_2q = _get(resources, "n_2q") if _has(resources, "n_2q") else _get(resources, "n_two_qubit")
    return (
        weights.alpha * ctx.normalize("n_params", _get(resources, "n_params"))
        + weights.beta * ctx.normalize("depth", _get(resources, "depth"))
        + weights.gamma * ctx.normalize("n_2q", n_2q)
    )


def _has(record, name):
    if isinstance(record, dict):
        return name in record
    return hasattr(record, name)


def _dominates(a, b, objectives) -> bool:
    """True if a is at least as good as b everywhere and better somewhere."""
    strictly_better = False
    for name, direction in objectives:
        va, vb = _get(a, name), _get(b, name)
        if direction == "max":
            if va < vb:
                return False
            strictly_better = strictly_better or va > vb
        elif direction == "min":
            if va > vb:
                return False
            strictly_better = strictly_better or va < vb
        else:
            raise ValueError(f"objective direction must be max|min, got {direction!r}")
    return strictly_better


def pareto_front(records, objectives, constraint=None) -> list:
    """Non-dominated subset under the given objectives.

    ``objectives`` is a list of (field, "max"|"min") pairs.  An optional
    ``constraint`` predicate filters the population first.  Records tied
    on every objective are all retained.  The result is sorted by the
    first objective (ascending for min, descending for max).
    """
    population = [r for r in records if constraint is None or constraint(r)]
    front = [
        r
        for r in population
        if not any(_dominates(other, r, objectives) for other in population)
    ]
    name, direction = objectives[0]
    front.sort(key=lambda r: _get(r, name), reverse=(direction == "max"))
    return front


def redundancy(record, front) -> float | None:
    """Parameter overhead above the linearly interpolated Pareto front.

    ``front`` must come from the (n_params min, expr_prime max)
    bi-objective.  Records whose expr_prime falls outside the front's
    range (or fronts with fewer than two points) yield ``None``: the
    projection is undefined there.  The distance is a lower bound on the
    true redundancy.
    """
    if len(front) < 2:
        return None
    xs = np.array(sorted(_get(r, "expr_prime") for r in front))
    by_expr = sorted(front, key=lambda r: _get(r, "expr_prime"))
    ys = np.array([_get(r, "n_params") for r in by_expr], dtype=float)
    x = _get(record, "expr_prime")
    if x < xs[0] or x > xs[-1]:
        return None
    return float(_get(record, "n_params") - np.interp(x, xs, ys))


def redundancy_ranking(records) -> list[tuple]:
    """(record, redundancy) pairs sorted by decreasing redundancy.

    The reference front is the (n_params min, expr_prime max) front of
    the full record list; records with undefined redundancy are dropped.
    """
    front = pareto_front(
        records, [("n_params", "min"), ("expr_prime", "max")]
    )
    ranked = []
    for record in records:
        dist = redundancy(record, front)
        if dist is not None:
            ranked.append((record, dist))
    ranked.sort(key=lambda pair: -pair[1])
    return ranked


def score(record) -> float:
    """Composite trainability * expr_prime figure used for ranking."""
    trainability = _get(record, "trainability")
    expr_prime = _get(record, "expr_prime")
    if trainability is None or expr_prime is None:
        raise ValueError("score needs both trainability and expr_prime")
    return trainability * expr_prime


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("pearson needs two equal-length 1-d arrays, length >= 2")
    if np.std(x) == 0 or np.std(y) == 0:
        raise ValueError("pearson undefined for zero-variance input")
    return float(np.corrcoef(x, y)[0, 1])


@dataclass(frozen=True)
class LayerDensity:
    """KDE summary of one layer group in a 2-d metric plane."""

    layers: int
    x_grid: np.ndarray
    y_grid: np.ndarray
    density: np.ndarray
    centroid: tuple[float, float]
    centroid_mean: tuple[float, float]
    threshold: float
    n_records: int


def layer_centroids(
    records,
    x_field: str,
    y_field: str,
    grid_size: int = 100,
    mass: float = 0.95,
    padding: float = 0.1,
) -> list[LayerDensity]:
    """Per-layer 2-d Gaussian KDE (Scott's rule) with density centroids.

    For each layer group the density is evaluated on a grid over the
    padded data range.  ``centroid`` is the grid argmax of the density;
    ``centroid_mean`` the density-weighted mean, exposed as the
    alternative summary.  ``threshold`` is the density level enclosing
    ``mass`` of the probability, for contour plotting.  Groups with
    fewer than two records (or degenerate spread) are skipped with a
    warning.
    """
    groups: dict[int, list] = {}
    for r in records:
        groups.setdefault(_get(r, "layers"), []).append(r)
    out: list[LayerDensity] = []
    for layers in sorted(groups):
        members = groups[layers]
        if len(members) < 2:
            warnings.warn(f"layer group {layers} has < 2 records; skipped")
            continue
        xs = np.array([_get(r, x_field) for r in members], dtype=float)
        ys = np.array([_get(r, y_field) for r in members], dtype=float)
        try:
            kde = gaussian_kde(np.vstack([xs, ys]))
        except np.linalg.LinAlgError:
            warnings.warn(f"layer group {layers} is degenerate; skipped")
            continue
        def padded(v):
            lo, hi = v.min(), v.max()
            span = (hi - lo) or 1.0
            return lo - padding * span, hi + padding * span
        x_lo, x_hi = padded(xs)
        y_lo, y_hi = padded(ys)
        x_grid = np.linspace(x_lo, x_hi, grid_size)
        y_grid = np.linspace(y_lo, y_hi, grid_size)
        mesh_x, mesh_y = np.meshgrid(x_grid, y_grid, indexing="ij")
        density = kde(np.vstack([mesh_x.ravel(), mesh_y.ravel()])).reshape(
            grid_size, grid_size
        )
        arg = np.unravel_index(np.argmax(density), density.shape)
        cell = (x_grid[1] - x_grid[0]) * (y_grid[1] - y_grid[0])
        flat = np.sort(density.ravel())[::-1]
        cum = np.cumsum(flat) * cell
        total = cum[-1]
        idx = int(np.searchsorted(cum, mass * total))
        threshold = float(flat[min(idx, len(flat) - 1)])
        weight = density / density.sum()
        out.append(
            LayerDensity(
                layers=layers,
                x_grid=x_grid,
                y_grid=y_grid,
                density=density,
                centroid=(float(x_grid[arg[0]]), float(y_grid[arg[1]])),
                centroid_mean=(
                    float((weight.sum(axis=1) * x_grid).sum()),
                    float((weight.sum(axis=0) * y_grid).sum()),
                ),
                threshold=threshold,
                n_records=len(members),
            )
        )
    return out

"""Render publication-style figures from pqcdse evaluation exports.

Strictly presentational: every number comes from the exported CSV/JSON
files (results.csv, fronts.json, redundancy.csv, kde.json, surfaces.json
and the grid CSVs); nothing is recomputed here.  Pareto polylines
connect exactly the rows flagged as front members in the fronts JSON, in
the order they are listed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = ("expr-cost", "redundancy", "train-depth", "expr-train", "dse-surface")

COST_AXIS_LABELS = {
    "n_params": "trainable parameters",
    "n_2q": "two-qubit gates",
    "depth": "circuit depth",
}


@dataclass
class FigureSpec:
    """Inputs and options of one figure rendering."""

    kind: str
    output: Path
    results: Path | None = None
    fronts: Path | None = None
    redundancy: Path | None = None
    kde: Path | None = None
    surfaces: Path | None = None
    grid_dir: Path | None = None
    dpi: int = 150
    top_k: int = 5
    cmap: str = "viridis"
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_bundle(cls, kind: str, bundle: Path, output: Path, **options):
        bundle = Path(bundle)
        return cls(
            kind=kind,
            output=Path(output),
            results=bundle / "results.csv",
            fronts=bundle / "fronts.json",
            redundancy=bundle / "redundancy.csv",
            kde=bundle / "kde.json",
            surfaces=bundle / "surfaces.json",
            grid_dir=bundle,
            **options,
        )


def _read_csv(path: Path, required: tuple[str, ...]) -> list[dict]:
    if path is None or not Path(path).exists():
        raise FileNotFoundError(f"missing input file {path}")
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = set(required) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path} lacks required columns {sorted(missing)}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path} has no data rows")
    return rows


def _read_json(path: Path) -> dict:
    if path is None or not Path(path).exists():
        raise FileNotFoundError(f"missing input file {path}")
    return json.loads(Path(path).read_text(encoding="utf-8"))


def front_polyline(front: dict, x_field: str, y_field: str) -> np.ndarray:
    """(n, 2) vertex array of a front's members, in listed order."""
    return np.array(
        [[float(m[x_field]), float(m[y_field])] for m in front["members"]]
    )


def _render_expr_cost(spec: FigureSpec):
    rows = _read_csv(
        spec.results, ("circuit_id", "layers", "expr_prime", "n_params", "n_2q", "depth")
    )
    fronts = _read_json(spec.fronts)
    fig, axes = plt.subplots(1, 3, figsize=(13, 4), sharey=True)
    layers = np.array([int(r["layers"]) for r in rows])
    expr = np.array([float(r["expr_prime"]) for r in rows])
    for ax, front in zip(axes, fronts["expr_cost_fronts"]):
        axis = front["name"]
        xs = np.array([float(r[axis]) for r in rows])
        scatter = ax.scatter(xs, expr, c=layers, cmap=spec.cmap, s=24, alpha=0.85)
        line = front_polyline(front, axis, "expr_prime")
        ax.plot(line[:, 0], line[:, 1], "r--", lw=1.4, marker="o", ms=4,
                label=f"front:{axis}")
        ax.set_xlabel(COST_AXIS_LABELS.get(axis, axis))
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("expressibility  (-log10 KL)")
    axes[2].legend(loc="lower right", fontsize=8)
    fig.colorbar(scatter, ax=axes, label="layers", shrink=0.9)
    return fig


def _render_redundancy(spec: FigureSpec):
    rows = _read_csv(spec.redundancy, ("label", "redundancy"))
    top = rows[: spec.top_k]
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [r["label"] for r in top]
    values = [float(r["redundancy"]) for r in top]
    bars = ax.bar(labels, values, color=plt.get_cmap(spec.cmap)(0.55))
    ax.bar_label(bars, fmt="%.1f", fontsize=8)
    ax.set_ylabel("parameters above the Pareto front")
    ax.set_title(f"{len(top)} most redundant circuits")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


def _render_train_depth(spec: FigureSpec):
    rows = _read_csv(spec.results, ("depth", "trainability", "layers"))
    kde = _read_json(spec.kde)
    fig, ax = plt.subplots(figsize=(7, 5))
    layer_values = sorted({int(r["layers"]) for r in rows})
    cmap = plt.get_cmap(spec.cmap)
    colors = {
        layer: cmap(i / max(1, len(layer_values) - 1))
        for i, layer in enumerate(layer_values)
    }
    for layer in layer_values:
        xs = [float(r["depth"]) for r in rows if int(r["layers"]) == layer]
        ys = [float(r["trainability"]) for r in rows if int(r["layers"]) == layer]
        ax.scatter(xs, ys, s=22, color=colors[layer], label=f"L={layer}")
    for group in kde["groups"]:
        density = np.array(group["density"])
        ax.contour(
            np.array(group["x_grid"]), np.array(group["y_grid"]), density.T,
            levels=[group["threshold"]],
            colors=[colors.get(group["layers"], "gray")], alpha=0.7,
        )
        ax.contourf(
            np.array(group["x_grid"]), np.array(group["y_grid"]), density.T,
            levels=[group["threshold"], float(density.max()) + 1e-12],
            colors=[colors.get(group["layers"], "gray")], alpha=0.12,
        )
    ax.set_xlabel(f"circuit {kde['x_field']}")
    ax.set_ylabel(f"{kde['y_field']} (mean gradient variance)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    inset = ax.inset_axes([0.62, 0.62, 0.34, 0.32])
    centroids = [(g["layers"], g["centroid"]) for g in kde["groups"]]
    inset.plot(
        [c[0] for c in centroids], [c[1][1] for c in centroids],
        "k-o", ms=4, lw=1.2,
    )
    inset.set_xlabel("layers", fontsize=7)
    inset.set_ylabel("centroid", fontsize=7)
    inset.tick_params(labelsize=7)
    return fig


def _render_expr_train(spec: FigureSpec):
    rows = _read_csv(spec.results, ("expr_prime", "trainability", "cost"))
    fronts = _read_json(spec.fronts)
    fig, ax = plt.subplots(figsize=(7, 5))
    xs = np.array([float(r["expr_prime"]) for r in rows])
    ys = np.array([float(r["trainability"]) for r in rows])
    cost = np.array([float(r["cost"]) for r in rows])
    scatter = ax.scatter(xs, ys, c=cost, cmap=spec.cmap, s=26, alpha=0.9)
    fig.colorbar(scatter, ax=ax, label="normalized cost")
    styles = ("r--", "b--", "g--")
    for front, style in zip(fronts["expr_train_fronts"], styles):
        line = front_polyline(front, "expr_prime", "trainability")
        ax.plot(line[:, 0], line[:, 1], style, lw=1.4, marker="o", ms=4,
                label=f"front:{front['name']}")
    ax.set_xlabel("expressibility  (-log10 KL)")
    ax.set_ylabel("trainability (mean gradient variance)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return fig


def _render_dse_surface(spec: FigureSpec):
    surfaces = _read_json(spec.surfaces)
    entries = surfaces["constraints"]
    if not entries:
        raise ValueError("surfaces file lists no fitted constraints")
    fig = plt.figure(figsize=(5 * len(entries), 4.6))
    cmap = plt.get_cmap(spec.cmap)
    axis_names = surfaces["axis_mapping"]
    for i, entry in enumerate(entries):
        grid_path = Path(spec.grid_dir or Path(spec.surfaces).parent) / entry["grid_csv"]
        grid_rows = _read_csv(grid_path, ("x", "y", "z", "score_pred"))
        ax = fig.add_subplot(1, len(entries), i + 1, projection="3d")
        xs = np.array([float(r["x"]) for r in grid_rows])
        ys = np.array([float(r["y"]) for r in grid_rows])
        zs = np.array([float(r["z"]) for r in grid_rows])
        scores = np.array([float(r["score_pred"]) for r in grid_rows])
        res = int(round(np.sqrt(len(grid_rows))))
        shape = (res, res)
        span = scores.max() - scores.min()
        norm = (scores - scores.min()) / (span if span > 0 else 1.0)
        ax.plot_surface(
            xs.reshape(shape), ys.reshape(shape), zs.reshape(shape),
            facecolors=cmap(norm.reshape(shape)), shade=False,
            rstride=1, cstride=1, alpha=0.85,
        )
        points = entry["points"]
        ax.scatter(
            [p["x"] for p in points], [p["y"] for p in points],
            [p["z"] for p in points],
            color="red", s=26, depthshade=False, label="front members",
        )
        ax.set_xlabel(axis_names[0], fontsize=8)
        ax.set_ylabel(axis_names[1], fontsize=8)
        ax.set_zlabel(axis_names[2], fontsize=8)
        ax.set_title(f"{entry['name']} (degree {entry['degree']})", fontsize=9)
    return fig


_RENDERERS = {
    "expr-cost": _render_expr_cost,
    "redundancy": _render_redundancy,
    "train-depth": _render_train_depth,
    "expr-train": _render_expr_train,
    "dse-surface": _render_dse_surface,
}


def render(spec: FigureSpec):
    """Render one figure kind and write it to spec.output.

    Validation happens before any file is written; the returned Figure
    allows callers (and tests) to inspect the drawn artists.
    """
    if spec.kind not in _RENDERERS:
        raise ValueError(f"unknown figure kind {spec.kind!r}; choose from {FIGURE_KINDS}")
    fig = _RENDERERS[spec.kind](spec)
    output = Path(spec.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(output, dpi=spec.dpi, bbox_inches="tight")
    return fig

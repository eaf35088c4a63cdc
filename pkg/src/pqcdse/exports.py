"""Analysis exports: the file contracts consumed by figure scripts.

The evaluation CSV is the single numerical source; everything here
derives fronts, rankings, KDE summaries and design-space fits from it
and serializes them deterministically (sorted rows, repr floats, fixed
key order).
"""

from __future__ import annotations

import csv
import json
import warnings
from pathlib import Path

import numpy as np

from .catalog import CircuitTemplate
from .dse import (
    ScoreRegressor,
    SurfaceFit,
    encode,
    fit_surface,
    gate_set_labels,
    predict_grid,
    train_regressor,
    CONNECTIVITY_ORDER,
)
from .pareto import MetricRecord, layer_centroids, pareto_front, redundancy_ranking

FRONTS_NAME = "fronts.json"
REDUNDANCY_NAME = "redundancy.csv"
SCORES_NAME = "scores.csv"
KDE_NAME = "kde.json"
SURFACES_NAME = "surfaces.json"
REPORT_NAME = "report.md"
EXPORT_FORMAT_VERSION = 1

EXPR_TRAIN_OBJECTIVES = (("expr_prime", "max"), ("trainability", "max"))
COST_AXES = ("n_params", "n_2q", "depth")


def constraint_name(limit: float | None) -> str:
    return "unconstrained" if limit is None else f"cost_le_{limit:.2f}"


def _member(record: MetricRecord) -> dict:
    return {
        "circuit_id": record.circuit_id,
        "layers": record.layers,
        "label": record.label,
        "expr_prime": record.expr_prime,
        "trainability": record.trainability,
        "cost": record.cost,
        "score": record.score,
        "n_params": record.n_params,
        "n_2q": record.n_2q,
        "depth": record.depth,
    }


def build_fronts(records: list[MetricRecord], constraints=(0.2, 0.1)) -> dict:
    """Expressibility-trainability fronts (per cost budget) and the three
    expressibility-vs-cost-axis fronts."""
    expr_train = []
    for limit in (None, *constraints):
        predicate = None if limit is None else (lambda r, c=limit: r.cost <= c)
        front = pareto_front(records, EXPR_TRAIN_OBJECTIVES, predicate)
        expr_train.append(
            {
                "name": constraint_name(limit),
                "constraint": limit,
                "objectives": [list(o) for o in EXPR_TRAIN_OBJECTIVES],
                "members": [_member(r) for r in front],
            }
        )
    expr_cost = []
    for axis in COST_AXES:
        front = pareto_front(records, [(axis, "min"), ("expr_prime", "max")])
        expr_cost.append(
            {
                "name": axis,
                "objectives": [[axis, "min"], ["expr_prime", "max"]],
                "members": [_member(r) for r in front],
            }
        )
    hams = sorted({r.hamiltonian for r in records})
    return {
        "format_version": EXPORT_FORMAT_VERSION,
        "hamiltonian": hams[0] if len(hams) == 1 else hams,
        "expr_train_fronts": expr_train,
        "expr_cost_fronts": expr_cost,
    }


def write_fronts_json(fronts: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(fronts, handle, indent=2)
        handle.write("\n")


def write_redundancy_csv(records: list[MetricRecord], path: Path) -> list[tuple]:
    ranked = redundancy_ranking(records)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["label", "circuit_id", "layers", "expr_prime", "n_params", "redundancy"]
        )
        for record, dist in ranked:
            writer.writerow(
                [
                    record.label,
                    record.circuit_id,
                    record.layers,
                    repr(record.expr_prime),
                    record.n_params,
                    repr(dist),
                ]
            )
    return ranked


def write_scores_csv(records: list[MetricRecord], path: Path) -> list[MetricRecord]:
    ranked = sorted(records, key=lambda r: -(r.score or 0.0))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["rank", "label", "circuit_id", "layers", "score", "expr_prime",
             "trainability", "cost"]
        )
        for rank, record in enumerate(ranked, start=1):
            writer.writerow(
                [rank, record.label, record.circuit_id, record.layers,
                 repr(record.score), repr(record.expr_prime),
                 repr(record.trainability), repr(record.cost)]
            )
    return ranked


def write_kde_json(
    records: list[MetricRecord],
    path: Path,
    x_field: str = "depth",
    y_field: str = "trainability",
) -> None:
    groups = layer_centroids(records, x_field, y_field)
    payload = {
        "format_version": EXPORT_FORMAT_VERSION,
        "x_field": x_field,
        "y_field": y_field,
        "groups": [
            {
                "layers": g.layers,
                "n_records": g.n_records,
                "centroid": list(g.centroid),
                "centroid_mean": list(g.centroid_mean),
                "threshold": g.threshold,
                "x_grid": g.x_grid.tolist(),
                "y_grid": g.y_grid.tolist(),
                "density": g.density.tolist(),
            }
            for g in groups
        ],
    }
    # density grids dominate this file; compact separators keep it small
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, separators=(",", ":"))
        handle.write("\n")


def _surface_for_front(points, degree: int, name: str) -> SurfaceFit | None:
    if len(points) < 3:
        warnings.warn(
            f"front {name!r} has only {len(points)} point(s); no surface fitted"
        )
        return None
    while degree > 1:
        n_coef = (degree + 1) * (degree + 2) // 2
        if len(points) >= n_coef:
            # Front members often sit on few distinct coordinate values,
            # which makes the full monomial basis rank-deficient; the
            # minimum-norm solution is the conventional fit there.
            return fit_surface(points, degree, allow_rank_deficient=True)
        warnings.warn(
            f"front {name!r} has {len(points)} points, fewer than the "
            f"{n_coef} coefficients of degree {degree}; downgrading to "
            f"degree {degree - 1}"
        )
        degree -= 1
    return fit_surface(points, 1)


def build_dse_outputs(
    records: list[MetricRecord],
    fronts: dict,
    templates: list[CircuitTemplate],
    degree: int = 2,
    resolution: int = 50,
    seed: int = 0,
    learning_rate: float = 0.01,
    epochs: int = 5000,
) -> tuple[dict, dict[str, np.ndarray], ScoreRegressor]:
    """Per-front surface fits plus the shared score regressor and grids."""
    by_id = {t.id: t for t in templates}
    labels = gate_set_labels(templates)

    def design_point(record: MetricRecord):
        template = by_id.get(record.circuit_id)
        if template is None:
            raise ValueError(f"record {record.label} not in the catalog")
        point = encode(template, labels)
        return type(point)(
            layers=record.layers,
            connectivity_ord=point.connectivity_ord,
            gate_set_ord=point.gate_set_ord,
            circuit_id=record.circuit_id,
        )

    samples = [(design_point(r), r.score) for r in records]
    regressor = train_regressor(
        samples, seed=seed, learning_rate=learning_rate, epochs=epochs
    )

    constraint_entries = []
    grids: dict[str, np.ndarray] = {}
    for front in fronts["expr_train_fronts"]:
        name = front["name"]
        member_records = [
            r
            for r in records
            if any(
                m["circuit_id"] == r.circuit_id and m["layers"] == r.layers
                for m in front["members"]
            )
        ]
        if not member_records:
            warnings.warn(f"front {name!r} is empty; skipped")
            continue
        points = [design_point(r) for r in member_records]
        surface = _surface_for_front(points, degree, name)
        if surface is None:
            continue
        grid = predict_grid(regressor, surface, resolution)
        grids[name] = grid
        constraint_entries.append(
            {
                "name": name,
                "constraint": front["constraint"],
                "degree": surface.degree,
                "coefficients": surface.coefficients.tolist(),
                "residual_rms": surface.residual_rms,
                "x_range": list(surface.x_range),
                "y_range": list(surface.y_range),
                "grid_csv": f"grid_{name}.csv",
                "points": [
                    {
                        "circuit_id": p.circuit_id,
                        "layers": p.layers,
                        "label": f"{p.circuit_id}-L{p.layers}",
                        "x": p.layers,
                        "y": p.connectivity_ord,
                        "z": p.gate_set_ord,
                        "score": r.score,
                    }
                    for p, r in zip(points, member_records)
                ],
            }
        )

    surfaces = {
        "format_version": EXPORT_FORMAT_VERSION,
        "axis_mapping": ["layers", "connectivity_ord", "gate_set_ord"],
        "connectivity_order": list(CONNECTIVITY_ORDER),
        "gate_set_labels": labels,
        "regressor": {
            "seed": seed,
            "learning_rate": learning_rate,
            "epochs": epochs,
            "standardization": {
                "mean": regressor.mean.tolist(),
                "std": regressor.std.tolist(),
            },
            "weights": [w.tolist() for w in regressor.weights],
            "biases": [b.tolist() for b in regressor.biases],
            "final_mse": regressor.final_mse,
        },
        "constraints": constraint_entries,
    }
    return surfaces, grids, regressor


def write_surfaces_json(surfaces: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(surfaces, handle, indent=2)
        handle.write("\n")


def write_grid_csv(grid: np.ndarray, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["x", "y", "z", "score_pred"])
        for row in grid:
            writer.writerow([repr(float(v)) for v in row])


def write_report_md(
    records: list[MetricRecord],
    fronts: dict,
    ranked_scores: list[MetricRecord],
    ranked_redundancy: list[tuple],
    path: Path,
    top_k: int = 10,
) -> None:
    lines = ["# Evaluation report", ""]
    hams = sorted({r.hamiltonian for r in records})
    layer_counts = sorted({r.layers for r in records})
    lines.append(
        f"{len(records)} records | hamiltonian: {', '.join(hams)} | "
        f"layers: {layer_counts} | qubits: {records[0].n_qubits}"
    )
    lines.append("")
    lines.append("## Top scores (trainability x expressibility)")
    lines.append("")
    lines.append("| rank | circuit | score | expr' | trainability | cost |")
    lines.append("|---|---|---|---|---|---|")
    for rank, r in enumerate(ranked_scores[:top_k], start=1):
        lines.append(
            f"| {rank} | {r.label} | {r.score:.3f} | {r.expr_prime:.3f} "
            f"| {r.trainability:.3f} | {r.cost:.3f} |"
        )
    lines.append("")
    for front in fronts["expr_train_fronts"]:
        title = front["name"].replace("_", " ")
        members = ", ".join(m["label"] for m in front["members"])
        lines.append(f"## Pareto front ({title})")
        lines.append("")
        lines.append(members or "(empty)")
        lines.append("")
    lines.append("## Expressibility vs cost-axis fronts")
    lines.append("")
    for front in fronts["expr_cost_fronts"]:
        members = ", ".join(m["label"] for m in front["members"])
        lines.append(f"- {front['name']}: {members}")
    lines.append("")
    lines.append("## Most redundant circuits")
    lines.append("")
    lines.append("| circuit | redundancy (params) | expr' | params |")
    lines.append("|---|---|---|---|")
    for record, dist in ranked_redundancy[:5]:
        lines.append(
            f"| {record.label} | {dist:.2f} | {record.expr_prime:.3f} "
            f"| {record.n_params} |"
        )
    lines.append("")
    lines.append("## Mean trainability per layer count")
    lines.append("")
    for layers in layer_counts:
        group = [r.trainability for r in records if r.layers == layers]
        lines.append(f"- L={layers}: {np.mean(group):.3f} over {len(group)} circuits")
    lines.append("")
    Path(path).write_text("\n".join(lines), encoding="utf-8")

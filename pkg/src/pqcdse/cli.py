"""Command-line harness: catalog -> metrics -> analysis -> exports.

Exit codes: 0 on success, 1 on runtime failure (failed jobs, integrity
mismatch), 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import exports, runner
from .catalog import (
    CatalogError,
    default_catalog,
    instantiate,
    load_catalog,
    resource_counts,
)
from .observables import HAMILTONIAN_SELECTORS
from .pareto import CostWeights

_DEFAULT_CATALOG = "<built-in>"


def _parse_layers(text: str) -> tuple[int, ...]:
    try:
        layers = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid layer list {text!r}")
    if not layers or any(layer < 1 for layer in layers):
        raise argparse.ArgumentTypeError("layers must be positive integers")
    return layers


def _parse_weights(text: str) -> CostWeights:
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError
        return CostWeights(*parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"weights must be three comma-separated nonnegative numbers, got {text!r}"
        )


def _load_templates(path: str):
    if path == _DEFAULT_CATALOG:
        return default_catalog(), ""
    return load_catalog(path), runner.sha256_file(Path(path))


def _add_catalog_arg(parser):
    parser.add_argument(
        "--catalog",
        default=_DEFAULT_CATALOG,
        help="catalog YAML path (default: the built-in 19-circuit family)",
    )


def cmd_validate_catalog(args) -> int:
    templates, _ = _load_templates(args.catalog)
    print(f"{len(templates)} circuit template(s) valid")
    for template in templates:
        circuit = instantiate(template, 1)
        res = resource_counts(circuit)
        print(
            f"  {template.id}: n={template.n_qubits} {template.connectivity:>10} "
            f"params/layer={template.params_per_layer:>3} 2q={res.n_two_qubit:>3} "
            f"depth(L1)={res.depth:>3}  [{template.gate_set_label}]"
        )
    return 0


def cmd_evaluate(args) -> int:
    templates, catalog_sha = _load_templates(args.catalog)
    config = runner.RunConfig(
        hamiltonian=args.hamiltonian,
        qubits=args.qubits,
        layers=args.layers,
        n_pairs=args.pairs,
        n_bins=args.bins,
        n_grad_samples=args.grad_samples,
        master_seed=args.seed,
        weights=args.weights,
        threads=args.threads,
    )
    out_dir = Path(args.out)
    try:
        records = runner.run_evaluation(templates, config, out_dir, catalog_sha)
    except runner.EvaluationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(
            f"completed rows kept in {out_dir / (runner.RESULTS_NAME + '.partial')}",
            file=sys.stderr,
        )
        return 1
    print(f"wrote {len(records)} records to {out_dir / runner.RESULTS_NAME}")
    return 0


def _load_results(args) -> tuple[list, dict]:
    try:
        return runner.load_checked_results(Path(args.results))
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def cmd_pareto(args) -> int:
    records, manifest = _load_results(args)
    out_dir = Path(args.out or args.results)
    out_dir.mkdir(parents=True, exist_ok=True)
    fronts = exports.build_fronts(records, constraints=tuple(args.constraint))
    fronts["results_sha256"] = manifest["results_sha256"]
    exports.write_fronts_json(fronts, out_dir / exports.FRONTS_NAME)
    ranked_scores = exports.write_scores_csv(records, out_dir / exports.SCORES_NAME)
    ranked_redundancy = exports.write_redundancy_csv(
        records, out_dir / exports.REDUNDANCY_NAME
    )
    exports.write_kde_json(records, out_dir / exports.KDE_NAME)
    for front in fronts["expr_train_fronts"]:
        members = ", ".join(m["label"] for m in front["members"])
        print(f"{front['name']}: {members}")
    print(
        f"wrote {exports.FRONTS_NAME}, {exports.SCORES_NAME}, "
        f"{exports.REDUNDANCY_NAME}, {exports.KDE_NAME} to {out_dir}"
    )
    _ = ranked_scores, ranked_redundancy
    return 0


def cmd_redundancy(args) -> int:
    records, _ = _load_results(args)
    out_dir = Path(args.out or args.results)
    out_dir.mkdir(parents=True, exist_ok=True)
    ranked = exports.write_redundancy_csv(records, out_dir / exports.REDUNDANCY_NAME)
    print("most redundant circuits (parameter distance to the front):")
    for record, dist in ranked[: args.top_k]:
        print(f"  {record.label}: {dist:.2f} params above the front")
    return 0


def cmd_dse(args) -> int:
    import json

    records, manifest = _load_results(args)
    fronts_path = Path(args.results) / exports.FRONTS_NAME
    if not fronts_path.exists():
        print(
            f"error: missing {fronts_path}; run the pareto command first",
            file=sys.stderr,
        )
        return 1
    fronts = json.loads(fronts_path.read_text(encoding="utf-8"))
    if fronts.get("results_sha256") != manifest["results_sha256"]:
        print("error: fronts.json does not match results.csv checksum", file=sys.stderr)
        return 1
    templates, _ = _load_templates(args.catalog)
    out_dir = Path(args.out or args.results)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        surfaces, grids, _ = exports.build_dse_outputs(
            records,
            fronts,
            templates,
            degree=args.degree,
            resolution=args.resolution,
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    surfaces["results_sha256"] = manifest["results_sha256"]
    exports.write_surfaces_json(surfaces, out_dir / exports.SURFACES_NAME)
    for name, grid in grids.items():
        exports.write_grid_csv(grid, out_dir / f"grid_{name}.csv")
    print(
        f"wrote {exports.SURFACES_NAME} and {len(grids)} grid file(s) to {out_dir}"
    )
    return 0


def cmd_report(args) -> int:
    import json

    records, _ = _load_results(args)
    fronts_path = Path(args.results) / exports.FRONTS_NAME
    if not fronts_path.exists():
        print(
            f"error: missing {fronts_path}; run the pareto command first",
            file=sys.stderr,
        )
        return 1
    fronts = json.loads(fronts_path.read_text(encoding="utf-8"))
    out_dir = Path(args.out or args.results)
    out_dir.mkdir(parents=True, exist_ok=True)
    from .pareto import redundancy_ranking

    ranked_scores = sorted(records, key=lambda r: -(r.score or 0.0))
    exports.write_report_md(
        records,
        fronts,
        ranked_scores,
        redundancy_ranking(records),
        out_dir / exports.REPORT_NAME,
        top_k=args.top_k,
    )
    print(f"wrote {out_dir / exports.REPORT_NAME}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcdse",
        description=(
            "Evaluate parametrized quantum circuits on expressibility, "
            "trainability and resource cost, and explore the design space."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-catalog", help="load and validate a catalog file")
    _add_catalog_arg(p)
    p.set_defaults(func=cmd_validate_catalog)

    p = sub.add_parser("evaluate", help="run the metric pipeline over the catalog")
    _add_catalog_arg(p)
    p.add_argument("--hamiltonian", choices=HAMILTONIAN_SELECTORS, default="tfim")
    p.add_argument("--qubits", type=int, default=4)
    p.add_argument("--layers", type=_parse_layers, default=(1, 2, 3),
                   help="comma-separated layer counts, e.g. 1,2,3")
    p.add_argument("--pairs", type=int, default=5000,
                   help="fidelity pairs per expressibility estimate")
    p.add_argument("--bins", type=int, default=75, help="fidelity histogram bins")
    p.add_argument("--grad-samples", type=int, default=500,
                   help="parameter samples per gradient-variance estimate")
    p.add_argument("--seed", type=int, default=runner.DEFAULT_MASTER_SEED)
    p.add_argument("--weights", type=_parse_weights, default=CostWeights(),
                   help="cost weights alpha,beta,gamma")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pareto", help="fronts, scores, redundancy and KDE exports")
    p.add_argument("--results", required=True,
                   help="directory holding results.csv and manifest.json")
    p.add_argument("--constraint", type=float, action="append", default=None,
                   help="cost budget (repeatable); defaults to 0.2 and 0.1")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--out", default=None, help="output directory (default: results dir)")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("redundancy", help="parameter-redundancy ranking only")
    p.add_argument("--results", required=True)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_redundancy)

    p = sub.add_parser("dse", help="design-space surfaces, regressor and grids")
    p.add_argument("--results", required=True)
    _add_catalog_arg(p)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--seed", type=int, default=runner.DEFAULT_MASTER_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dse)

    p = sub.add_parser("report", help="human-readable summary of a results directory")
    p.add_argument("--results", required=True)
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "pareto" and args.constraint is None:
        args.constraint = [0.2, 0.1]
    try:
        return args.func(args)
    except CatalogError as exc:
        print(f"catalog error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

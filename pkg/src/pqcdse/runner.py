"""Catalog evaluation pipeline: jobs, seeding, records and file outputs.

All randomness flows from one master seed.  Each (circuit, layers,
metric) job derives its own RNG stream by hashing those coordinates, so
results are independent of scheduling order and worker count; rows are
sorted before writing and floats are serialized with ``repr``, which
makes the results CSV byte-for-byte reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import observables
from .catalog import CircuitTemplate, instantiate, resource_counts
from .expressibility import expressibility
from .pareto import CostWeights, MetricRecord, NormalizationContext, cost, score
from .trainability import trainability

RESULTS_NAME = "results.csv"
MANIFEST_NAME = "manifest.json"
MANIFEST_FORMAT_VERSION = 1
DEFAULT_MASTER_SEED = 147
RESULTS_HEADER = (
    "circuit_id,layers,n_qubits,n_params,n_2q,depth,dkl,expr_prime,"
    "hamiltonian,trainability,cost,score,seed"
)


def derive_seed(master_seed: int, circuit_id: str, layers: int, metric: str) -> int:
    """Stable per-job RNG seed from the job coordinates."""
    digest = hashlib.sha256(
        f"{master_seed}:{circuit_id}:{layers}:{metric}".encode()
    ).digest()
    return int.from_bytes(digest[:16], "big")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines an evaluation run's output bytes."""

    hamiltonian: str = "tfim"
    qubits: int = 4
    layers: tuple[int, ...] = (1, 2, 3)
    n_pairs: int = 5000
    n_bins: int = 75
    n_grad_samples: int = 500
    master_seed: int = DEFAULT_MASTER_SEED
    weights: CostWeights = CostWeights()
    threads: int = 1

    def __post_init__(self):
        if self.qubits < 1 or self.n_pairs < 1 or self.n_bins < 1:
            raise ValueError("counts must be positive")
        if self.n_grad_samples < 2:
            raise ValueError("need at least 2 gradient samples")
        if not self.layers or any(layer < 1 for layer in self.layers):
            raise ValueError("layer list must contain positive layer counts")
        if self.hamiltonian not in observables.HAMILTONIAN_SELECTORS:
            raise ValueError(f"unknown hamiltonian {self.hamiltonian!r}")


def evaluate_catalog(
    templates: list[CircuitTemplate], config: RunConfig
) -> list[MetricRecord]:
    """One MetricRecord per (template, layer count) under the configured H.

    Jobs run on a worker pool of ``config.threads``; the pool size
    affects wall time only.  A failing job aborts the run with the
    partial results attached to the raised error.
    """
    bad = [t.id for t in templates if t.n_qubits != config.qubits]
    if bad:
        raise ValueError(
            f"catalog templates {bad} do not match --qubits {config.qubits}"
        )
    obs = observables.by_selector(config.hamiltonian, config.qubits)
    jobs = [(template, layers) for template in templates for layers in config.layers]

    def run_job(job):
        template, layers = job
        circuit = instantiate(template, layers)
        resources = resource_counts(circuit)
        expr = expressibility(
            circuit,
            n_pairs=config.n_pairs,
            n_bins=config.n_bins,
            seed=derive_seed(config.master_seed, template.id, layers, "expressibility"),
        )
        train = trainability(
            circuit,
            obs,
            n_samples=config.n_grad_samples,
            seed=derive_seed(config.master_seed, template.id, layers, "trainability"),
            hamiltonian_id=config.hamiltonian,
        )
        return MetricRecord(
            circuit_id=template.id,
            layers=layers,
            n_qubits=template.n_qubits,
            n_params=resources.n_params,
            n_2q=resources.n_two_qubit,
            depth=resources.depth,
            dkl=expr.dkl,
            expr_prime=expr.expr_prime,
            hamiltonian=config.hamiltonian,
            trainability=train.mean_variance,
            seed=config.master_seed,
        )

    records: list[MetricRecord] = []
    failures: list[tuple[str, Exception]] = []
    if config.threads <= 1:
        for job in jobs:
            try:
                records.append(run_job(job))
            except Exception as exc:  # keep completed rows for the .partial file
                failures.append((f"{job[0].id}-L{job[1]}", exc))
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            futures = {pool.submit(run_job, job): job for job in jobs}
            for future, job in futures.items():
                try:
                    records.append(future.result())
                except Exception as exc:
                    failures.append((f"{job[0].id}-L{job[1]}", exc))
    records.sort(key=lambda r: (r.circuit_id, r.layers))
    attach_cost_and_score(records, config.weights)
    if failures:
        label, first = failures[0]
        raise EvaluationError(
            f"{len(failures)} job(s) failed, first: {label}: {first}", records
        ) from first
    return records


class EvaluationError(RuntimeError):
    """A job failed; carries the successfully completed records."""

    def __init__(self, message: str, partial_records: list[MetricRecord]):
        super().__init__(message)
        self.partial_records = partial_records


def attach_cost_and_score(
    records: list[MetricRecord], weights: CostWeights = CostWeights()
) -> NormalizationContext:
    """Fill cost (normalized over the given records) and score in place."""
    ctx = NormalizationContext.from_records(records)
    for record in records:
        record.cost = cost(record, ctx, weights)
        record.score = score(record)
    return ctx


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(records: list[MetricRecord], path: Path) -> None:
    columns = RESULTS_HEADER.split(",")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for record in records:
            row = asdict(record)
            writer.writerow([_format(row[c]) for c in columns])


def read_results_csv(path: Path) -> list[MetricRecord]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(RESULTS_HEADER.split(",")) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"results file {path} lacks columns {sorted(missing)}")
        records = []
        for row in reader:
            records.append(
                MetricRecord(
                    circuit_id=row["circuit_id"],
                    layers=int(row["layers"]),
                    n_qubits=int(row["n_qubits"]),
                    n_params=int(row["n_params"]),
                    n_2q=int(row["n_2q"]),
                    depth=int(row["depth"]),
                    dkl=float(row["dkl"]),
                    expr_prime=float(row["expr_prime"]),
                    hamiltonian=row["hamiltonian"],
                    trainability=float(row["trainability"]),
                    cost=float(row["cost"]),
                    score=float(row["score"]),
                    seed=int(row["seed"]),
                )
            )
    return records


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(
    out_dir: Path,
    config: RunConfig,
    catalog_sha256: str,
    ctx: NormalizationContext,
    templates: list[CircuitTemplate],
    wall_time_s: float,
    n_rows: int,
) -> None:
    seeds = {
        f"{t.id}-L{layers}:{metric}": derive_seed(
            config.master_seed, t.id, layers, metric
        )
        for t in templates
        for layers in config.layers
        for metric in ("expressibility", "trainability")
    }
    manifest = {
        "format_version": MANIFEST_FORMAT_VERSION,
        "config": {
            "hamiltonian": config.hamiltonian,
            "qubits": config.qubits,
            "layers": list(config.layers),
            "n_pairs": config.n_pairs,
            "n_bins": config.n_bins,
            "n_grad_samples": config.n_grad_samples,
            "master_seed": config.master_seed,
            "weights": [config.weights.alpha, config.weights.beta, config.weights.gamma],
            "threads": config.threads,
        },
        "job_seeds": seeds,
        "catalog_sha256": catalog_sha256,
        "results_sha256": sha256_file(out_dir / RESULTS_NAME),
        "normalization": {k: list(v) for k, v in ctx.bounds.items()},
        "rows": n_rows,
        "wall_time_s": wall_time_s,
    }
    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")


def run_evaluation(
    templates: list[CircuitTemplate],
    config: RunConfig,
    out_dir: Path,
    catalog_sha256: str = "",
) -> list[MetricRecord]:
    """Evaluate and write results.csv plus manifest.json into out_dir.

    On a partial failure the completed rows land in results.csv.partial
    and the error propagates.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    try:
        records = evaluate_catalog(templates, config)
    except EvaluationError as exc:
        write_results_csv(exc.partial_records, out_dir / (RESULTS_NAME + ".partial"))
        raise
    write_results_csv(records, out_dir / RESULTS_NAME)
    ctx = NormalizationContext.from_records(records)
    write_manifest(
        out_dir,
        config,
        catalog_sha256,
        ctx,
        templates,
        wall_time_s=time.monotonic() - started,
        n_rows=len(records),
    )
    return records


def load_checked_results(results_dir: Path) -> tuple[list[MetricRecord], dict]:
    """Read results.csv after validating it against its manifest checksum."""
    results_dir = Path(results_dir)
    results_path = results_dir / RESULTS_NAME
    manifest_path = results_dir / MANIFEST_NAME
    if not results_path.exists():
        raise FileNotFoundError(f"missing {results_path}")
    if not manifest_path.exists():
        raise FileNotFoundError(f"missing {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    actual = sha256_file(results_path)
    expected = manifest.get("results_sha256")
    if actual != expected:
        raise ValueError(
            f"results checksum mismatch: manifest says {expected}, file is "
            f"{actual}; refusing stale or edited inputs"
        )
    return read_results_csv(results_path), manifest

"""End-to-end harness: determinism, thread invariance, integrity checks."""

import json
import subprocess
import sys

import pytest
import yaml

from pqcdse import cli
from pqcdse.runner import load_checked_results

SMALL_CATALOG = {
    "format_version": 1,
    "circuits": [
        {
            "id": "S1",
            "n_qubits": 2,
            "connectivity": "linear",
            "layer_block": [
                {"kind": "RY", "qubits": [0], "parametrized": True},
                {"kind": "RY", "qubits": [1], "parametrized": True},
                {"kind": "CX", "qubits": [0, 1], "parametrized": False},
            ],
        },
        {
            "id": "S2",
            "n_qubits": 2,
            "connectivity": "linear",
            "layer_block": [
                {"kind": "RX", "qubits": [0], "parametrized": True},
                {"kind": "RZ", "qubits": [1], "parametrized": True},
                {"kind": "CRZ", "qubits": [1, 0], "parametrized": True},
            ],
        },
        {
            "id": "S3",
            "n_qubits": 2,
            "connectivity": "none",
            "layer_block": [
                {"kind": "RY", "qubits": [0], "parametrized": True},
                {"kind": "RY", "qubits": [1], "parametrized": True},
            ],
        },
        {
            "id": "S4",
            "n_qubits": 2,
            "connectivity": "circular",
            "prologue": [{"kind": "H", "qubits": [0], "parametrized": False}],
            "layer_block": [
                {"kind": "RY", "qubits": [0], "parametrized": True},
                {"kind": "CZ", "qubits": [0, 1], "parametrized": False},
                {"kind": "RY", "qubits": [1], "parametrized": True},
            ],
        },
    ],
}


@pytest.fixture()
def small_catalog(tmp_path):
    path = tmp_path / "catalog.yaml"
    path.write_text(yaml.safe_dump(SMALL_CATALOG))
    return path


def evaluate_args(catalog, out, threads=1, seed=3, extra=()):
    return [
        "evaluate", "--catalog", str(catalog), "--qubits", "2",
        "--layers", "1,2", "--pairs", "150", "--grad-samples", "25",
        "--seed", str(seed), "--threads", str(threads), "--out", str(out),
        *extra,
    ]


def test_validate_catalog_ok(small_catalog, capsys):
    assert cli.main(["validate-catalog", "--catalog", str(small_catalog)]) == 0
    out = capsys.readouterr().out
    assert "4 circuit template(s) valid" in out


def test_validate_catalog_bad_file(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("format_version: 1\ncircuits:\n  - id: X\n")
    assert cli.main(["validate-catalog", "--catalog", str(bad)]) == 2


def test_unknown_hamiltonian_is_usage_error(small_catalog, tmp_path):
    with pytest.raises(SystemExit) as err:
        cli.main(
            evaluate_args(small_catalog, tmp_path / "o", extra=["--hamiltonian", "xy"])
        )
    assert err.value.code == 2


def test_evaluate_row_count_and_determinism(small_catalog, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli.main(evaluate_args(small_catalog, out_a)) == 0
    assert cli.main(evaluate_args(small_catalog, out_b)) == 0
    bytes_a = (out_a / "results.csv").read_bytes()
    assert bytes_a == (out_b / "results.csv").read_bytes()
    records, manifest = load_checked_results(out_a)
    assert len(records) == 8  # 4 templates x 2 layer counts
    assert manifest["rows"] == 8


def test_thread_count_does_not_change_output(small_catalog, tmp_path):
    out_a, out_b = tmp_path / "t1", tmp_path / "t4"
    assert cli.main(evaluate_args(small_catalog, out_a, threads=1)) == 0
    assert cli.main(evaluate_args(small_catalog, out_b, threads=4)) == 0
    assert (out_a / "results.csv").read_bytes() == (out_b / "results.csv").read_bytes()


def test_qubit_mismatch_is_config_error(small_catalog, tmp_path):
    args = evaluate_args(small_catalog, tmp_path / "o")
    args[args.index("--qubits") + 1] = "3"
    assert cli.main(args) == 2


def test_pareto_dse_report_chain(small_catalog, tmp_path):
    out = tmp_path / "run"
    assert cli.main(evaluate_args(small_catalog, out)) == 0
    assert cli.main(["pareto", "--results", str(out)]) == 0
    fronts = json.loads((out / "fronts.json").read_text())
    names = [f["name"] for f in fronts["expr_train_fronts"]]
    assert names == ["unconstrained", "cost_le_0.20", "cost_le_0.10"]
    assert (out / "scores.csv").exists()
    assert (out / "redundancy.csv").exists()
    assert (out / "kde.json").exists()
    assert cli.main([
        "dse", "--results", str(out), "--catalog", str(small_catalog),
        "--degree", "1", "--resolution", "4",
    ]) == 0
    surfaces = json.loads((out / "surfaces.json").read_text())
    assert surfaces["axis_mapping"] == ["layers", "connectivity_ord", "gate_set_ord"]
    assert len(surfaces["regressor"]["weights"]) == 3
    for entry in surfaces["constraints"]:
        grid = (out / entry["grid_csv"]).read_text().splitlines()
        assert grid[0] == "x,y,z,score_pred"
        assert len(grid) == 1 + 16
    assert cli.main(["report", "--results", str(out)]) == 0
    assert "Top scores" in (out / "report.md").read_text()


def test_dse_outputs_on_synthetic_front(small_catalog, tmp_path):
    from pqcdse.catalog import load_catalog
    from pqcdse.exports import build_dse_outputs, build_fronts
    from pqcdse.pareto import MetricRecord
    from pqcdse.runner import attach_cost_and_score

    templates = load_catalog(small_catalog)
    records = []
    for i, template in enumerate(templates):
        for layers in (1, 2, 3):
            expr = 0.3 * layers + 0.1 * i
            records.append(
                MetricRecord(
                    circuit_id=template.id, layers=layers, n_qubits=2,
                    n_params=2 * layers + i, n_2q=layers * (i % 3), depth=3 * layers,
                    dkl=10.0**-expr, expr_prime=expr,
                    hamiltonian="tfim", trainability=2.0 - expr,
                )
            )
    attach_cost_and_score(records)
    # constrained fronts of this synthetic set collapse onto single layer
    # counts (degenerate surfaces); the vacuous budget keeps full spread
    fronts = build_fronts(records, constraints=(1.0,))
    surfaces, grids, regressor = build_dse_outputs(
        records, fronts, templates, degree=2, resolution=5, seed=1, epochs=300,
    )
    assert len(surfaces["constraints"]) == 2
    for entry in surfaces["constraints"]:
        assert entry["name"] in grids
        assert grids[entry["name"]].shape == (25, 4)
        assert len(entry["points"]) >= 3


def test_vacuous_constraint_equals_unconstrained(small_catalog, tmp_path):
    out = tmp_path / "run"
    assert cli.main(evaluate_args(small_catalog, out)) == 0
    assert cli.main(["pareto", "--results", str(out), "--constraint", "1.0"]) == 0
    fronts = json.loads((out / "fronts.json").read_text())
    by_name = {f["name"]: f["members"] for f in fronts["expr_train_fronts"]}
    assert by_name["cost_le_1.00"] == by_name["unconstrained"]


def test_pareto_refuses_checksum_mismatch(small_catalog, tmp_path, capsys):
    out = tmp_path / "run"
    assert cli.main(evaluate_args(small_catalog, out)) == 0
    results = out / "results.csv"
    results.write_text(results.read_text().replace("S1", "Z1"))
    with pytest.raises(SystemExit) as err:
        cli.main(["pareto", "--results", str(out)])
    assert err.value.code == 1
    assert "checksum mismatch" in capsys.readouterr().err


def test_missing_results_dir_fails(tmp_path):
    with pytest.raises(SystemExit) as err:
        cli.main(["pareto", "--results", str(tmp_path / "nope")])
    assert err.value.code == 1


def test_console_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "pqcdse.cli", "validate-catalog"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "19 circuit template(s) valid" in proc.stdout


def test_partial_failure_keeps_completed_rows(tmp_path, capsys):
    doc = dict(SMALL_CATALOG)
    doc["circuits"] = SMALL_CATALOG["circuits"][:1] + [
        {
            "id": "BAD",
            "n_qubits": 2,
            "connectivity": "linear",
            # no trainable parameters: the gradient-variance job fails
            "layer_block": [
                {"kind": "H", "qubits": [0], "parametrized": False},
                {"kind": "CX", "qubits": [0, 1], "parametrized": False},
            ],
        },
    ]
    path = tmp_path / "catalog.yaml"
    path.write_text(yaml.safe_dump(doc))
    out = tmp_path / "run"
    assert cli.main(evaluate_args(path, out)) == 1
    err = capsys.readouterr().err
    assert "BAD" in err and "partial" in err
    partial = (out / "results.csv.partial").read_text().splitlines()
    assert partial[0].startswith("circuit_id,")
    assert len(partial) == 3  # header + the two healthy S1 rows
    assert not (out / "results.csv").exists()


def test_evaluate_seed_changes_output(small_catalog, tmp_path):
    out_a, out_b = tmp_path / "s3", tmp_path / "s4"
    assert cli.main(evaluate_args(small_catalog, out_a, seed=3)) == 0
    assert cli.main(evaluate_args(small_catalog, out_b, seed=4)) == 0
    assert (out_a / "results.csv").read_bytes() != (out_b / "results.csv").read_bytes()

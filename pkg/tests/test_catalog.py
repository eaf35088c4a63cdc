"""Catalog loading, validation, instantiation and resource accounting."""

import numpy as np
import pytest
import yaml

from pqcdse.catalog import (
    CatalogError,
    CircuitTemplate,
    GateSpec,
    circuit_depth,
    instantiate,
    parse_catalog,
    resource_counts,
)
from pqcdse.simulator import Gate

# Parameter counts per layer for the shipped family at n = 4.
PARAMS_PER_LAYER = {
    "A01": 8, "A02": 8, "A03": 11, "A04": 11, "A05": 28, "A06": 28,
    "A07": 19, "A08": 19, "A09": 4, "A10": 8, "A11": 12, "A12": 12,
    "A13": 16, "A14": 16, "A15": 8, "A16": 11, "A17": 11, "A18": 12,
    "A19": 12,
}


def entry(gates, cid="T1", connectivity="all_to_all", n=4, **extra):
    doc = {
        "format_version": 1,
        "circuits": [
            {
                "id": cid,
                "n_qubits": n,
                "connectivity": connectivity,
                "layer_block": gates,
                **extra,
            }
        ],
    }
    return doc


def gate(kind, qubits, parametrized):
    return {"kind": kind, "qubits": list(qubits), "parametrized": parametrized}


def test_default_catalog_has_19_templates(catalog):
    assert len(catalog) == 19
    assert [t.id for t in catalog] == [f"A{i:02d}" for i in range(1, 20)]
    assert all(t.n_qubits == 4 for t in catalog)


def test_params_per_layer_table(catalog_by_id):
    for cid, expected in PARAMS_PER_LAYER.items():
        assert catalog_by_id[cid].params_per_layer == expected, cid


def test_resource_anchors(catalog_by_id):
    for cid in ("A05", "A06"):
        res = resource_counts(instantiate(catalog_by_id[cid], 3))
        assert (res.n_params, res.n_two_qubit, res.depth) == (84, 36, 48)
    res = resource_counts(instantiate(catalog_by_id["A10"], 1))
    assert (res.n_params, res.n_two_qubit, res.depth) == (8, 4, 6)


def test_instantiate_fresh_slots_per_layer(catalog_by_id):
    for cid, template in catalog_by_id.items():
        circuit = instantiate(template, 2)
        prologue_params = sum(1 for s in template.prologue if s.parametrized)
        epilogue_params = sum(1 for s in template.epilogue if s.parametrized)
        expected = prologue_params + 2 * template.params_per_layer + epilogue_params
        assert circuit.n_params == expected, cid
        slots = [g.param_slot for g in circuit.gates if g.is_parametrized]
        assert slots == list(range(len(slots))), cid


def test_instantiate_rejects_zero_layers(catalog_by_id):
    with pytest.raises(ValueError, match="layers"):
        instantiate(catalog_by_id["A01"], 0)


def test_two_qubit_gates_respect_connectivity(catalog):
    for template in catalog:
        n = template.n_qubits
        for spec in (*template.prologue, *template.layer_block, *template.epilogue):
            if len(spec.qubits) != 2:
                continue
            i, j = spec.qubits
            dist = abs(i - j)
            if template.connectivity == "linear":
                assert dist == 1, template.id
            elif template.connectivity == "circular":
                assert dist == 1 or dist == n - 1, template.id
            elif template.connectivity == "none":
                pytest.fail(f"{template.id} declares none but has two-qubit gates")


def test_depth_subadditive_over_layers(catalog):
    for template in catalog:
        block = instantiate(
            CircuitTemplate(
                id="b", n_qubits=template.n_qubits, connectivity=template.connectivity,
                layer_block=template.layer_block,
            ),
            1,
        )
        block_depth = resource_counts(block).depth
        prologue_depth = circuit_depth(
            [Gate(s.kind, s.qubits, 0 if s.parametrized else None)
             for s in template.prologue],
            template.n_qubits,
        )
        for layers in (1, 2, 3):
            total = resource_counts(instantiate(template, layers)).depth
            assert total <= layers * block_depth + prologue_depth, template.id


def test_depth_is_parameter_independent(catalog_by_id):
    circuit = instantiate(catalog_by_id["A07"], 2)
    assert resource_counts(circuit) == resource_counts(circuit)


def test_single_rotation_column_depth_one():
    doc = entry([gate("RY", [q], True) for q in range(4)], connectivity="none")
    template = parse_catalog(doc)[0]
    assert resource_counts(instantiate(template, 1)).depth == 1


def test_duplicate_id_rejected():
    doc = entry([gate("RY", [0], True)])
    doc["circuits"].append(dict(doc["circuits"][0]))
    with pytest.raises(CatalogError, match="duplicate circuit id"):
        parse_catalog(doc)


def test_connectivity_violation_rejected():
    doc = entry([gate("CX", [0, 2], False)], connectivity="linear")
    with pytest.raises(CatalogError, match="violates"):
        parse_catalog(doc)


def test_unknown_gate_kind_rejected():
    doc = entry([gate("RW", [0], True)])
    with pytest.raises(CatalogError, match="unknown gate kind"):
        parse_catalog(doc)


def test_malformed_parametrized_flag_rejected():
    doc = entry([gate("RX", [0], False)])
    with pytest.raises(CatalogError, match="parametrized"):
        parse_catalog(doc)
    doc = entry([gate("CZ", [0, 1], True)])
    with pytest.raises(CatalogError, match="parametrized"):
        parse_catalog(doc)


def test_empty_circuit_list_allowed():
    assert parse_catalog({"format_version": 1, "circuits": []}) == []


def test_wrong_format_version_rejected():
    with pytest.raises(CatalogError, match="format_version"):
        parse_catalog({"format_version": 2, "circuits": []})


def test_gate_set_labels(catalog_by_id):
    assert catalog_by_id["A01"].gate_set_label == "RX+RZ"
    assert catalog_by_id["A05"].gate_set_label == "CRZ+RX+RZ"
    assert catalog_by_id["A09"].gate_set_label == "CZ+RX"
    assert catalog_by_id["A10"].gate_set_label == "CZ+RY"
    assert catalog_by_id["A14"].gate_set_label == "CRX+RY"


def test_catalog_yaml_round_trip(tmp_path, catalog):
    doc = {
        "format_version": 1,
        "circuits": [
            {
                "id": "C1",
                "n_qubits": 2,
                "connectivity": "linear",
                "layer_block": [gate("RY", [0], True), gate("CX", [1, 0], False)],
            }
        ],
    }
    path = tmp_path / "cat.yaml"
    path.write_text(yaml.safe_dump(doc))
    from pqcdse.catalog import load_catalog

    templates = load_catalog(path)
    assert templates[0].id == "C1"
    assert instantiate(templates[0], 3).n_params == 3

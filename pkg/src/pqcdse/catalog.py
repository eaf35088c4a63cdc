"""Ansatz catalog: declarative circuit templates, validation and resource counts.

A template is a layered gate program: an optional ``prologue`` applied
once, a ``layer_block`` repeated L times with fresh parameter slots per
repetition, and an optional ``epilogue``.  Templates are loaded from a
versioned YAML document (see ``data/ansatz_catalog.yaml`` for the format
and the shipped 19-circuit family at n = 4).

Depth follows as-soon-as-possible scheduling constrained by the listed
gate order: each gate lands on the earliest moment after the last use of
any of its qubits.  This keeps a chained sequence of overlapping
two-qubit gates strictly sequential while letting independent rotations
share a moment.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import yaml

from .simulator import (
    GATE_KINDS,
    PARAMETRIZED_KINDS,
    TWO_QUBIT_KINDS,
    Gate,
)

CATALOG_FORMAT_VERSION = 1
CONNECTIVITIES = ("none", "linear", "circular", "all_to_all")


class CatalogError(ValueError):
    """Raised for malformed or inconsistent catalog documents."""


@dataclass(frozen=True)
class GateSpec:
    """One gate record of a template block (no parameter slot yet)."""

    kind: str
    qubits: tuple[int, ...]
    parametrized: bool


@dataclass(frozen=True)
class ResourceCounts:
    """Static cost components of an instantiated circuit."""

    n_params: int
    n_two_qubit: int
    depth: int


@dataclass(frozen=True)
class Circuit:
    """A template instantiated at a concrete layer count.

    Parameter slots are assigned in gate order (prologue, then each layer
    repetition with fresh slots, then epilogue) and form the contiguous
    range ``0 .. n_params - 1``.
    """

    id: str
    n_qubits: int
    layers: int
    gates: tuple[Gate, ...]
    connectivity: str
    gate_set_label: str

    @property
    def n_params(self) -> int:
        return sum(1 for g in self.gates if g.is_parametrized)


@dataclass(frozen=True)
class CircuitTemplate:
    """Declarative circuit family member prior to layer instantiation."""

    id: str
    n_qubits: int
    connectivity: str
    layer_block: tuple[GateSpec, ...]
    prologue: tuple[GateSpec, ...] = field(default_factory=tuple)
    epilogue: tuple[GateSpec, ...] = field(default_factory=tuple)

    @property
    def gate_set_label(self) -> str:
        """Canonical '+'-joined label of the template's gate alphabet.

        Includes every distinct trainable kind plus every distinct
        non-trainable two-qubit kind, sorted; plain single-qubit gates
        such as H do not contribute.
        """
        kinds = set()
        for spec in (*self.prologue, *self.layer_block, *self.epilogue):
            if spec.parametrized or spec.kind in TWO_QUBIT_KINDS:
                kinds.add(spec.kind)
        return "+".join(sorted(kinds))

    @property
    def params_per_layer(self) -> int:
        return sum(1 for s in self.layer_block if s.parametrized)


def _connectivity_ok(connectivity: str, i: int, j: int, n: int) -> bool:
    dist = abs(i - j)
    if connectivity == "none":
        return False
    if connectivity == "linear":
        return dist == 1
    if connectivity == "circular":
        return dist == 1 or dist == n - 1
    return True  # all_to_all


def _validate_spec(spec: GateSpec, template_id: str, n: int, connectivity: str):
    if spec.kind not in GATE_KINDS:
        raise CatalogError(f"{template_id}: unknown gate kind {spec.kind!r}")
    arity = 2 if spec.kind in TWO_QUBIT_KINDS else 1
    if len(spec.qubits) != arity:
        raise CatalogError(
            f"{template_id}: {spec.kind} expects {arity} qubit(s), got {spec.qubits}"
        )
    if len(set(spec.qubits)) != len(spec.qubits):
        raise CatalogError(f"{template_id}: repeated qubit in {spec}")
    if any(q < 0 or q >= n for q in spec.qubits):
        raise CatalogError(
            f"{template_id}: qubit index out of range in {spec} (n_qubits={n})"
        )
    if spec.parametrized != (spec.kind in PARAMETRIZED_KINDS):
        raise CatalogError(
            f"{template_id}: gate {spec.kind} must declare "
            f"parametrized={spec.kind in PARAMETRIZED_KINDS}"
        )
    if spec.kind in TWO_QUBIT_KINDS and not _connectivity_ok(
        connectivity, spec.qubits[0], spec.qubits[1], n
    ):
        raise CatalogError(
            f"{template_id}: {spec.kind} on {spec.qubits} violates "
            f"{connectivity!r} connectivity"
        )


def _parse_gate(raw, template_id: str) -> GateSpec:
    try:
        kind = raw["kind"]
        qubits = tuple(int(q) for q in raw["qubits"])
        parametrized = bool(raw["parametrized"])
    except (KeyError, TypeError) as exc:
        raise CatalogError(
            f"{template_id}: malformed gate record {raw!r} ({exc})"
        ) from exc
    return GateSpec(kind=kind, qubits=qubits, parametrized=parametrized)


def parse_catalog(document: dict) -> list[CircuitTemplate]:
    """Validate a parsed catalog document and return its templates."""
    if not isinstance(document, dict):
        raise CatalogError("catalog document must be a mapping")
    version = document.get("format_version")
    if version != CATALOG_FORMAT_VERSION:
        raise CatalogError(
            f"unsupported catalog format_version {version!r} "
            f"(expected {CATALOG_FORMAT_VERSION})"
        )
    entries = document.get("circuits", [])
    templates: list[CircuitTemplate] = []
    seen_ids: set[str] = set()
    for entry in entries:
        try:
            template_id = str(entry["id"])
            n = int(entry["n_qubits"])
            connectivity = entry["connectivity"]
        except (KeyError, TypeError) as exc:
            raise CatalogError(f"malformed circuit entry {entry!r} ({exc})") from exc
        if template_id in seen_ids:
            raise CatalogError(f"duplicate circuit id {template_id!r}")
        seen_ids.add(template_id)
        if connectivity not in CONNECTIVITIES:
            raise CatalogError(
                f"{template_id}: unknown connectivity {connectivity!r}"
            )
        if n < 1:
            raise CatalogError(f"{template_id}: n_qubits must be positive")
        blocks = {}
        for block_name in ("prologue", "layer_block", "epilogue"):
            raw_block = entry.get(block_name) or []
            specs = tuple(_parse_gate(raw, template_id) for raw in raw_block)
            for spec in specs:
                _validate_spec(spec, template_id, n, connectivity)
            blocks[block_name] = specs
        if not blocks["layer_block"]:
            raise CatalogError(f"{template_id}: layer_block must not be empty")
        templates.append(
            CircuitTemplate(
                id=template_id,
                n_qubits=n,
                connectivity=connectivity,
                prologue=blocks["prologue"],
                layer_block=blocks["layer_block"],
                epilogue=blocks["epilogue"],
            )
        )
    return templates


def load_catalog(path) -> list[CircuitTemplate]:
    """Load and validate a catalog YAML file."""
    with open(path, "r", encoding="utf-8") as handle:
        document = yaml.safe_load(handle)
    return parse_catalog(document)


def default_catalog() -> list[CircuitTemplate]:
    """The shipped 19-template family (A01-A19) at n = 4."""
    resource = importlib.resources.files("pqcdse").joinpath(
        "data/ansatz_catalog.yaml"
    )
    document = yaml.safe_load(resource.read_text(encoding="utf-8"))
    return parse_catalog(document)


def instantiate(template: CircuitTemplate, layers: int) -> Circuit:
    """Materialize prologue + layers * layer_block + epilogue.

    Every layer repetition receives fresh parameter slots; there is no
    parameter sharing anywhere in the instantiated circuit.
    """
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    gates: list[Gate] = []
    slot = 0

    def emit(specs):
        nonlocal slot
        for spec in specs:
            if spec.parametrized:
                gates.append(Gate(spec.kind, spec.qubits, param_slot=slot))
                slot += 1
            else:
                gates.append(Gate(spec.kind, spec.qubits))

    emit(template.prologue)
    for _ in range(layers):
        emit(template.layer_block)
    emit(template.epilogue)
    return Circuit(
        id=template.id,
        n_qubits=template.n_qubits,
        layers=layers,
        gates=tuple(gates),
        connectivity=template.connectivity,
        gate_set_label=template.gate_set_label,
    )


def circuit_depth(gates, n_qubits: int) -> int:
    """Moments under ASAP scheduling that preserves the listed gate order."""
    busy = [0] * n_qubits
    depth = 0
    for gate in gates:
        moment = max(busy[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            busy[q] = moment
        depth = max(depth, moment)
    return depth


def resource_counts(circuit: Circuit) -> ResourceCounts:
    """Static resource accounting of an instantiated circuit."""
    return ResourceCounts(
        n_params=circuit.n_params,
        n_two_qubit=sum(1 for g in circuit.gates if g.is_two_qubit),
        depth=circuit_depth(circuit.gates, circuit.n_qubits),
    )

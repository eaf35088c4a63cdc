"""PQC design-space exploration toolkit.

Evaluates parametrized quantum circuits on expressibility, trainability
and resource cost, and analyzes the resulting multi-objective landscape:
constrained Pareto fronts, redundancy distances, composite scores and
regression over the architectural design space.
"""

from .catalog import (
    CatalogError,
    Circuit,
    CircuitTemplate,
    GateSpec,
    ResourceCounts,
    circuit_depth,
    default_catalog,
    instantiate,
    load_catalog,
    parse_catalog,
    resource_counts,
)
from .expressibility import (
    ExpressibilityResult,
    FidelityHistogram,
    expressibility,
    haar_bin_masses,
    haar_pdf,
    haar_reference_dkl,
    kl_divergence,
    sample_fidelity_histogram,
)
from .observables import (
    Observable,
    by_selector,
    expectation,
    expectation_batch,
    heisenberg,
    local_x,
    tfim,
)
from .simulator import (
    Gate,
    apply_gate,
    fidelity,
    fidelity_batch,
    run_circuit,
    run_circuit_batch,
    zero_state,
)
from .trainability import (
    TrainabilityResult,
    gradient,
    gradient_batch,
    landscape_bias,
    trainability,
)

__version__ = "0.1.0"

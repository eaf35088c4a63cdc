"""Build a circuit from the catalog, run it, and measure things."""
import numpy as np

from pqcdse import (
    default_catalog, expectation, fidelity, instantiate, resource_counts,
    run_circuit, tfim,
)

templates = {t.id: t for t in default_catalog()}

# A10 is the classic ring circuit: RY column, CZ ring, RY column
circuit = instantiate(templates["A10"], layers=1)
print("A10 at one layer:", resource_counts(circuit))

rng = np.random.default_rng(0)
theta = rng.uniform(0, 2 * np.pi, circuit.n_params)
state = run_circuit(circuit, theta)
print("output norm:", np.linalg.norm(state))

# fidelity between two random parameter settings
other = run_circuit(circuit, rng.uniform(0, 2 * np.pi, circuit.n_params))
print("fidelity between two random settings:", fidelity(state, other))

# energy under the transverse-field Ising chain
hamiltonian = tfim(4, coupling=1.0, field=1.0)
print("TFIM energy:", expectation(state, hamiltonian))
print("ground reference on |0000>:", expectation(run_circuit(instantiate(templates["A10"], 1), np.zeros(8)), hamiltonian))

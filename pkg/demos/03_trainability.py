"""Parameter-shift gradients and the flattening of deep landscapes."""
import numpy as np

from pqcdse import default_catalog, gradient, instantiate, tfim, trainability

templates = {t.id: t for t in default_catalog()}
hamiltonian = tfim(4, 1.0, 1.0)

# exact gradients at a random point
circuit = instantiate(templates["A10"], layers=1)
rng = np.random.default_rng(1)
theta = rng.uniform(0, 2 * np.pi, circuit.n_params)
grads = gradient(circuit, hamiltonian, theta)
print("gradient of <H> for A10-L1:", np.round(grads, 4))

# the trainability metric is the average variance of those derivatives
# under uniform random parameters; watch it decay with depth
for cid in ("A10", "A14", "A05"):
    values = []
    for layers in (1, 2, 3):
        result = trainability(
            instantiate(templates[cid], layers), hamiltonian,
            n_samples=200, seed=2,
        )
        values.append(result.mean_variance)
    print(f"{cid}: mean gradient variance by layers {np.round(values, 3)}")

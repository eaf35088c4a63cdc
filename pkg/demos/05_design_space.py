"""Map circuits into design space, fit a surface, predict scores."""
import numpy as np

from pqcdse import default_catalog, instantiate
from pqcdse.dse import (
    decode, encode, fit_surface, gate_set_labels, predict_grid, train_regressor,
)
from pqcdse.runner import RunConfig, evaluate_catalog

catalog = default_catalog()
labels = gate_set_labels(catalog)
print(f"{len(labels)} distinct gate sets:", labels)

point = encode(instantiate(catalog[9], 2), labels)   # A10 at two layers
print("A10-L2 encodes to", point)
print("and decodes back to", decode(point, labels))

# train the score regressor on a fast evaluation pass
config = RunConfig(n_pairs=500, n_grad_samples=50, threads=4)
records = evaluate_catalog(catalog, config)
by_id = {t.id: t for t in catalog}
samples = []
for r in records:
    base = encode(by_id[r.circuit_id], labels)
    samples.append((type(base)(r.layers, base.connectivity_ord,
                               base.gate_set_ord, r.circuit_id), r.score))
regressor = train_regressor(samples, seed=0, epochs=2000)
print(f"regressor trained, final mse {regressor.final_mse:.4f}")

# fit a surface over the best records and sweep predictions across it
best = sorted(samples, key=lambda s: -s[1])[:8]
surface = fit_surface([p for p, _ in best], degree=1)
grid = predict_grid(regressor, surface, resolution=4)
print("surface residual rms:", round(surface.residual_rms, 3))
print("grid of predicted scores across the fitted surface:")
print(np.round(grid, 3))

"""Compare the fidelity histograms of a weak and a strong entangler."""
import numpy as np

from pqcdse import (
    default_catalog, expressibility, haar_bin_masses, instantiate,
    sample_fidelity_histogram,
)

templates = {t.id: t for t in default_catalog()}
n_pairs, n_bins = 2000, 75

for cid in ("A01", "A09", "A14"):
    circuit = instantiate(templates[cid], layers=1)
    result = expressibility(circuit, n_pairs, n_bins, seed=5)
    print(f"{cid}-L1: dkl = {result.dkl:.4f}  expr' = {result.expr_prime:.3f}")

# the histogram itself, next to the Haar reference masses
circuit = instantiate(templates["A14"], layers=3)
hist = sample_fidelity_histogram(circuit, n_pairs, n_bins, seed=5)
haar = haar_bin_masses(n_bins, 2**4)
print("\nfirst five bins (A14-L3 vs Haar):")
for k in range(5):
    bar = "#" * int(60 * hist.probabilities[k])
    print(f"  [{k/75:.3f}, {(k+1)/75:.3f})  {hist.probabilities[k]:.3f} "
          f"(haar {haar[k]:.3f})  {bar}")

# layering drives the distribution toward Haar
for layers in (1, 2, 3):
    result = expressibility(instantiate(templates["A14"], layers), n_pairs, n_bins, seed=5)
    print(f"A14 at L={layers}: expr' = {result.expr_prime:.3f}")

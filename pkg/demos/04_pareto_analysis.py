"""Evaluate a slice of the catalog and extract constrained Pareto fronts."""
from pqcdse import default_catalog
from pqcdse.pareto import pareto_front, redundancy_ranking
from pqcdse.runner import RunConfig, evaluate_catalog

# a fast, reduced-fidelity pass over the whole family (for real numbers
# use the CLI defaults: 5000 pairs and 500 gradient samples)
config = RunConfig(n_pairs=500, n_grad_samples=50, threads=4)
records = evaluate_catalog(default_catalog(), config)
print(f"evaluated {len(records)} circuit instances")

objectives = [("expr_prime", "max"), ("trainability", "max")]
for budget in (None, 0.2, 0.1):
    constraint = None if budget is None else (lambda r, b=budget: r.cost <= b)
    front = pareto_front(records, objectives, constraint)
    name = "unconstrained" if budget is None else f"cost <= {budget}"
    print(f"{name}: {', '.join(r.label for r in front)}")

print("\nhighest composite scores:")
for record in sorted(records, key=lambda r: -r.score)[:5]:
    print(f"  {record.label}: score {record.score:.3f} "
          f"(expr' {record.expr_prime:.2f} x train {record.trainability:.3f})")

print("\nmost redundant circuits (parameter overhang above the front):")
for record, distance in redundancy_ranking(records)[:5]:
    print(f"  {record.label}: {distance:.1f} parameters")

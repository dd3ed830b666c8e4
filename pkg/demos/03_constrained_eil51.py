"""Diverse near-optimal tours for eil51.

All tours must stay within 5% of the optimum (426). The edge frequencies of
the final population show which edges are hard to avoid.
"""
from pathlib import Path

from edotsp import EaConfig, bundled, emit_edge_frequencies, run

inst, opt = bundled("eil51")
cfg = EaConfig(mu=20, k=3, alpha=0.05, budget=60_000, seed=1, trace_every=10_000)
rec = run(inst, opt, cfg)

for p in rec.trace:
    print(f"{p.eval:7d}  H={p.H:.4f}  feasible offspring so far={p.feasible_offspring}")
print("worst tour cost:", rec.population.max_cost(), "bound:", cfg.cost_bound())

csv = emit_edge_frequencies(rec.population.tours, inst)
rows = [line.split(",") for line in csv.splitlines()[2:]]
fixed = [r for r in rows if int(r[2]) == cfg.mu]
print(f"{len(rows)} distinct edges, {len(fixed)} used by every tour")
Path("eil51_edges.csv").write_text(csv)

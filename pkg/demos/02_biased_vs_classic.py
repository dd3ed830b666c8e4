"""Convergence speed of frequency-biased 2-OPT against plain 2-OPT.

Unconstrained setting: on a unit-weight complete graph every tour is optimal,
so the only goal is spreading segments evenly.
"""
import numpy as np

from edotsp import EaConfig, run, unit_graph

g = unit_graph(100)
seeds = range(5)

res = {}
for mutation in ("biased", "classic"):
    evals = []
    for s in seeds:
        rec = run(g, None, EaConfig(mu=25, k=2, budget=100_000, mutation=mutation, seed=s))
        evals.append(rec.evals_to_hmax if rec.reached_hmax else np.nan)
    res[mutation] = np.array(evals, dtype=float)
    print(f"{mutation:8s} evals to H_max: {evals}")

print("median ratio biased/classic:", np.nanmedian(res["biased"]) / np.nanmedian(res["classic"]))

# the trace of the last run shows how fast the normalised entropy climbs
rec = run(g, None, EaConfig(mu=25, k=2, mutation="biased", seed=0, trace_every=250))
for p in rec.trace[::2]:
    print(f"{p.eval:6d}  {p.H_normalised:.4f}  C={p.C}")

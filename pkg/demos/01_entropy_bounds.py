"""How much segment entropy can a population of tours have?

Each tour on n nodes contributes 2n directed k-node segments. Entropy peaks
when those 2n*mu occurrences are spread as evenly as possible over the
n!/(n-k)! possible segments.
"""
import math

import numpy as np

from edotsp import build_table, entropy, entropy_bounds, unit_graph
from edotsp.tour import Tour

# Bounds for a few population sizes on a 10-node graph
for mu in (1, 6, 12, 24):
    for k in (2, 3):
        b = entropy_bounds(10, mu, k)
        print(f"n=10 mu={mu:2d} k={k}: H_min={b.H_min:.4f} H_max={b.H_max:.4f} "
              f"f_min*={b.f_min_star} C*={b.C_star} u={b.u}")

# mu copies of one tour sit at the floor
g = unit_graph(10)
t = Tour.from_perm(range(10), g)
print("copies:", entropy(build_table([t] * 6, 2), 10, 6))

# random tours land somewhere in between
rng = np.random.default_rng(0)
pop = [Tour.from_perm(rng.permutation(10), g) for _ in range(6)]
v = entropy(build_table(pop, 2), 10, 6)
print(f"random: H={v.H:.4f} normalised={v.normalised:.3f}")

# a lone tour has 2n distinct segments, each seen once
print("ln(2n) =", math.log(20))

"""Exact checks on tiny graphs: an LP model for external solvers and a brute-force oracle."""
import math
import tempfile
from pathlib import Path

from edotsp import brute_force_oracle, build_mip, entropy_bounds, ingest_solution, unit_graph, write_lp

g = unit_graph(5)
model = build_mip(g, 2, 2)
print("model sizes:", model.counts())

path = Path(tempfile.mkdtemp()) / "n5_mu2_k2.lp"
write_lp(model, str(path))
print("wrote", path)

try:
    import highspy
except ImportError:
    highspy = None

if highspy is not None:
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    lp = h.getLp()
    # a "name value" listing is all ingest needs
    text = "\n".join(f"{n} {v}" for n, v in zip(lp.col_names_, h.getSolution().col_value))
    tours, C, H = ingest_solution(model, text)
    print("HiGHS: C =", C, "H =", round(H, 6), [t.perm.tolist() for t in tours])

orc = brute_force_oracle(unit_graph(6), 2, 3)
print(f"oracle n=6 mu=2 k=3: best H={orc.best_H:.6f}, closed form {entropy_bounds(6, 2, 3).H_max:.6f}, "
      f"{len(orc.best_populations)} optimal populations of {orc.enumerated_count}")
print("ln(12) =", math.log(12))

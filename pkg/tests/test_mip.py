import io
import itertools
import math

import numpy as np
import pytest

from conftest import random_euclidean
from edotsp.entropy import entropy, entropy_bounds
from edotsp.errors import ConsistencyError, DecodeError, MipSizeError
from edotsp.instance import unit_graph
from edotsp.mip import (
    MipModel, assignment_text, brute_force_oracle, build_mip, ingest_solution, lp_text, write_lp, x_name, y_name,
)
from edotsp.segments import build_table
from edotsp.tour import Tour


@pytest.mark.parametrize("n,mu,k", [(5, 2, 2), (6, 3, 3), (7, 1, 2)])
def test_counts_match_closed_form(n, mu, k):
    m = build_mip(unit_graph(n), mu, k)
    assert m.counts() == MipModel.expected_counts(n, mu, k, False)


def test_constrained_adds_quality_rows():
    g = unit_graph(5)
    m = build_mip(g, 3, 2, alpha=0.1, opt_cost=5.0)
    assert m.counts() == MipModel.expected_counts(5, 3, 2, True)
    assert m.counts()["quality"] == 3
    assert "quality_0: x_0_1_0 + x_0_2_0" in lp_text(m)


def test_y_count_example():
    assert build_mip(unit_graph(5), 2, 2).counts()["y"] == 40


def test_guardrails():
    with pytest.raises(MipSizeError, match="variables"):
        build_mip(unit_graph(21), 2, 2)
    with pytest.raises(MipSizeError):
        build_mip(unit_graph(6), 25, 2)
    with pytest.raises(MipSizeError):
        build_mip(unit_graph(6), 2, 4)


def test_lp_is_deterministic_and_sectioned():
    m = build_mip(unit_graph(5), 2, 3)
    a = lp_text(m)
    buf = io.StringIO()
    write_lp(build_mip(unit_graph(5), 2, 3), buf)
    assert a == buf.getvalue()
    heads = [line for line in a.splitlines() if line and not line.startswith(" ")]
    assert heads[1:] == ["Minimize", "Subject To", "Bounds", "Generals", "Binaries", "End"]
    assert max(len(line) for line in a.splitlines()) <= 255


def test_lp_parses_with_highs(tmp_path):
    highspy = pytest.importorskip("highspy")
    m = build_mip(unit_graph(5), 2, 2)
    path = tmp_path / "m.lp"
    write_lp(m, str(path))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    c = m.counts()
    assert h.getNumCol() == c["x"] + c["w"] + c["y"] + 2
    assert h.getNumRow() == sum(v for key, v in c.items() if key not in ("x", "w", "y"))


def test_highs_solution_round_trips(tmp_path):
    highspy = pytest.importorskip("highspy")
    m = build_mip(unit_graph(5), 2, 2)
    path = tmp_path / "m.lp"
    write_lp(m, str(path))
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    lp = h.getLp()
    text = "\n".join(f"{name} {val}" for name, val in zip(lp.col_names_, h.getSolution().col_value))
    tours, C, H = ingest_solution(m, text)
    assert C == 0
    assert H == pytest.approx(entropy_bounds(5, 2, 2).H_max)


def test_copies_decode_to_c_equal_mu():
    g = unit_graph(5)
    m = build_mip(g, 3, 2)
    t = Tour.from_perm([0, 2, 4, 1, 3], g)
    tours, C, H = ingest_solution(m, assignment_text(m, [t] * 3))
    assert C == 3  # u = 20 > 2n, so some edge is never used
    assert H == pytest.approx(math.log(10))
    assert all(x.same_cycle(t) for x in tours)


def test_inconsistent_y_is_rejected():
    g = unit_graph(5)
    m = build_mip(g, 1, 2)
    t = Tour.from_perm(range(5), g)
    text = assignment_text(m, [t]).replace(f"{y_name((0, 2), 0)} 0", f"{y_name((0, 2), 0)} 1")
    with pytest.raises(ConsistencyError):
        ingest_solution(m, text)


def test_subtour_is_rejected():
    g = unit_graph(6)
    m = build_mip(g, 1, 2)
    edges = {(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)}
    text = "\n".join(f"{x_name(i, j, 0)} {int((i, j) in edges)}" for i in range(6) for j in range(6) if i != j)
    with pytest.raises(DecodeError, match="subtour"):
        ingest_solution(m, text)
    with pytest.raises(DecodeError, match="unassigned"):
        ingest_solution(m, "x_0_1_0 1")


def test_oracle_single_tour_is_minimum():
    res = brute_force_oracle(unit_graph(5), 1, 2)
    assert res.best_H == pytest.approx(math.log(10))
    assert res.enumerated_count == 24


def test_oracle_alpha_zero_unique_optimum():
    rng = np.random.default_rng(5)
    inst = random_euclidean(5, rng)
    costs = {}
    for rest in itertools.permutations(range(1, 5)):
        t = Tour.from_perm((0,) + rest, inst)
        costs.setdefault(round(t.cost, 9), set()).add(frozenset(map(frozenset, zip(t.perm, np.roll(t.perm, -1)))))
    best = min(costs)
    assert len(costs[best]) == 1  # the seed gives a unique optimal cycle
    res = brute_force_oracle(inst, 3, 2, alpha=0.0, opt_cost=best)
    assert res.best_H == pytest.approx(math.log(10))
    for pop in res.best_populations:
        assert all(Tour.from_perm(p, inst).cost == pytest.approx(best) for p in pop)


@pytest.mark.parametrize("n,mu,k", [(5, 2, 2), (6, 2, 3), (5, 3, 3)])
def test_oracle_respects_closed_form_and_eq4(n, mu, k):
    g = unit_graph(n)
    res = brute_force_oracle(g, mu, k)
    assert res.best_H <= entropy_bounds(n, mu, k).H_max + 1e-9
    # the frequency profile rebuilt from x-products agrees with the table-based entropy
    pop = [Tour.from_perm(p, g) for p in res.best_populations[0]]
    m = build_mip(g, mu, k)
    _, C, H = ingest_solution(m, assignment_text(m, pop))
    assert H == pytest.approx(entropy(build_table(pop, k), n, mu).H, abs=1e-12)
    assert H == pytest.approx(res.best_H, abs=1e-12)
    if res.best_C <= 1:
        assert C <= 1


def test_oracle_limit():
    with pytest.raises(MipSizeError):
        brute_force_oracle(unit_graph(12), 2, 2)

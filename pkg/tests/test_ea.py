import math

import numpy as np
import pytest

from edotsp.baselines import edge_diversity, pairwise_distance
from edotsp.ea import EaConfig, initialise, population_tours_text, run, step, trace_csv
from edotsp.errors import ConfigError
from edotsp.instance import OptimumInfo, bundled, unit_graph
from edotsp.mutation import make_rng
from edotsp.tour import Tour


def test_config_validation():
    with pytest.raises(ConfigError):
        EaConfig(mu=0, k=2)
    with pytest.raises(ConfigError):
        EaConfig(mu=3, k=2, measure="gini")
    with pytest.raises(ConfigError):
        EaConfig(mu=1, k=2, measure="ed")
    assert EaConfig(mu=3, k=2).selection == "parent-pool"
    assert EaConfig(mu=3, k=2, measure="pd").selection == "full-population"


def test_constrained_needs_optimal_tour():
    g = unit_graph(8)
    with pytest.raises(ConfigError):
        run(g, None, EaConfig(mu=3, k=2, alpha=0.1))
    with pytest.raises(ConfigError):
        run(g, OptimumInfo(8.0), EaConfig(mu=3, k=2, alpha=0.1))


def test_mu_one_terminates_at_once():
    rec = run(unit_graph(7), None, EaConfig(mu=1, k=2))
    assert rec.reached_hmax and rec.evals_used == 0
    assert rec.H_final == pytest.approx(math.log(14))


@pytest.mark.parametrize("mutation", ["classic", "biased", "dual"])
def test_entropy_never_decreases_and_bookkeeping_holds(mutation):
    g = unit_graph(15)
    rec = run(g, None, EaConfig(mu=6, k=3, budget=3000, mutation=mutation, trace_every=50, verify_every=25))
    H = [p.H for p in rec.trace]
    assert all(b >= a - 1e-12 for a, b in zip(H, H[1:]))
    rec.population.check()
    assert rec.trace[0].eval == 0 and rec.trace[-1].eval == rec.evals_used


def test_constrained_keeps_every_member_feasible():
    inst, opt = bundled("eil51")
    cfg = EaConfig(mu=8, k=2, alpha=0.03, budget=4000, verify_every=500)
    pop = initialise(inst, opt, cfg)
    rng = make_rng(3)
    for _ in range(1000):
        step(pop, inst, cfg, rng)
        assert pop.max_cost() <= 1.03 * 426 + 1e-6
    pop.check()


def test_full_population_selection_runs_and_improves():
    g = unit_graph(12)
    rec = run(g, None, EaConfig(mu=5, k=2, budget=2000, selection="full-population", verify_every=100))
    assert rec.H_final > math.log(24)


@pytest.mark.parametrize("measure,fn", [("ed", edge_diversity), ("pd", pairwise_distance)])
def test_baseline_measures_improve(measure, fn):
    g = unit_graph(12)
    rec = run(g, None, EaConfig(mu=5, k=2, budget=2000, measure=measure))
    tours = rec.population.tours
    assert fn(tours) > 0
    assert rec.population.diff.value(measure) == pytest.approx(fn(tours))
    rec.population.check()


def test_same_seed_same_trace():
    g = unit_graph(20)
    cfg = dict(mu=5, k=2, budget=1500, trace_every=100)
    a = run(g, None, EaConfig(seed=11, **cfg))
    b = run(g, None, EaConfig(seed=11, **cfg))
    assert trace_csv(a) == trace_csv(b)
    assert population_tours_text(a.population) == population_tours_text(b.population)
    c = run(g, None, EaConfig(seed=12, **cfg))
    assert population_tours_text(c.population) != population_tours_text(a.population)


def test_start_is_optimal_tour_when_given():
    inst, opt = bundled("eil51")
    pop = initialise(inst, opt, EaConfig(mu=3, k=2))
    assert all(np.array_equal(t.perm, opt.opt_tour.perm) for t in pop.tours)
    g = unit_graph(6)
    pop = initialise(g, None, EaConfig(mu=2, k=2))
    assert np.array_equal(pop.tours[0].perm, np.arange(6))


def test_trace_csv_format():
    rec = run(unit_graph(10), None, EaConfig(mu=3, k=2, budget=200, trace_every=100))
    lines = trace_csv(rec).splitlines()
    assert lines[0] == "# edotsp trace v1"
    assert lines[1] == "eval,H,H_normalised,f_min,f_max,C,feasible_offspring_count"
    assert len(lines[2].split(",")[1].split(".")[1]) == 6

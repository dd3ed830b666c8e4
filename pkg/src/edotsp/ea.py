"""Steady-state diversity-maximising EA over 2-OPT offspring."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .baselines import MEASURES, DiffMatrix
from .entropy import TIE_TOL, _h, entropy, entropy_bounds, entropy_delta, normalise
from .errors import ConfigError, ConsistencyError
from .instance import Instance, OptimumInfo
from .mutation import (
    MUTATION_MODES,
    bias_for,
    biased_two_opt,
    classic_two_opt,
    make_rng,
)
from .segments import build_table, codec, move_delta, summarise
from .tour import Tour, apply_two_opt

PARENT_POOL = "parent-pool"
FULL_POPULATION = "full-population"
SELECTIONS = (PARENT_POOL, FULL_POPULATION)
OPERATORS = ("classic", "biased", "dual")

FEASIBILITY_TOL = 1e-6
HMAX_TOL = 1e-9


@dataclass
class EaConfig:
    mu: int
    k: int
    alpha: float = math.inf
    opt_cost: Optional[float] = None
    budget: int = 100_000
    measure: str = "entropy"
    mutation: str = "dual"
    selection: Optional[str] = None
    bias: Optional[str] = None
    seed: int = 0
    trace_every: int = 1000
    verify_every: int = 0

    def __post_init__(self):
        if self.mu < 1:
            raise ConfigError(f"mu must be positive, got {self.mu}")
        if self.budget < 0:
            raise ConfigError(f"budget must be non-negative, got {self.budget}")
        if self.trace_every < 1:
            raise ConfigError(f"trace_every must be >= 1, got {self.trace_every}")
        if self.alpha < 0:
            raise ConfigError(f"alpha must be non-negative, got {self.alpha}")
        if self.measure not in MEASURES:
            raise ConfigError(f"unknown measure {self.measure!r}; choose from {MEASURES}")
        if self.mutation not in OPERATORS:
            raise ConfigError(f"unknown mutation {self.mutation!r}; choose from {OPERATORS}")
        if self.selection is None:
            self.selection = PARENT_POOL if self.measure == "entropy" else FULL_POPULATION
        if self.selection not in SELECTIONS:
            raise ConfigError(f"unknown selection {self.selection!r}; choose from {SELECTIONS}")
        if self.bias is not None and self.bias not in MUTATION_MODES[1:]:
            raise ConfigError(f"unknown bias {self.bias!r}")
        if self.measure != "entropy" and self.mu < 2:
            raise ConfigError("ED and PD need mu >= 2")

    @property
    def constrained(self) -> bool:
        return math.isfinite(self.alpha)

    def cost_bound(self) -> float:
        if not self.constrained:
            return math.inf
        return (1 + self.alpha) * self.opt_cost

    def bias_mode(self) -> str:
        return self.bias or bias_for(self.constrained)


class Population:
    """mu tours with their shared segment table and running entropy."""

    def __init__(self, tours, k: int):
        self.tours = list(tours)
        self.k = k
        self.n = self.tours[0].n
        self.mu = len(self.tours)
        self.codec = codec(self.n, k)
        self.keys = [self.codec.windows(t.perm).tolist() for t in self.tours]
        self.table = build_table(self.tours, k)
        self.bounds = entropy_bounds(self.n, self.mu, k)
        self.H = self.exact_entropy()
        self.diff: Optional[DiffMatrix] = None

    def exact_entropy(self) -> float:
        return entropy(self.table, self.n, self.mu).H

    def replace(self, q: int, child: Tour, removed, added, dH: float, child_keys=None) -> None:
        self.table.apply(removed, added)
        self.tours[q] = child
        self.keys[q] = child_keys if child_keys is not None else self.codec.windows(child.perm).tolist()
        self.H += dH

    def check(self) -> None:
        fresh = build_table(self.tours, self.k)
        if fresh != self.table:
            raise ConsistencyError("incremental segment table differs from a rebuild")
        exact = self.exact_entropy()
        if abs(exact - self.H) > 1e-9:
            raise ConsistencyError(f"tracked entropy {self.H} differs from recomputed {exact}")

    def max_cost(self) -> float:
        return max(t.cost for t in self.tours)


@dataclass(frozen=True)
class TracePoint:
    eval: int
    H: float
    H_normalised: float
    f_min: int
    f_max: int
    C: int
    feasible_offspring: int


@dataclass
class RunRecord:
    evals_used: int
    trace: list
    termination: str
    population: Population
    H_final: float
    evals_to_hmax: Optional[int] = None
    steps: int = 0
    feasible_offspring: int = 0
    wall_time: float = 0.0
    config: Optional[EaConfig] = field(default=None, repr=False)

    @property
    def reached_hmax(self) -> bool:
        return self.termination == "reached-hmax"

    @property
    def normalised_final(self) -> float:
        return normalise(self.H_final, self.population.bounds)


def initialise(inst: Instance, opt: Optional[OptimumInfo], cfg: EaConfig) -> Population:
    """mu copies of the optimal tour, or of the identity tour when no optimum is given."""
    if cfg.constrained:
        if opt is None or opt.opt_tour is None:
            raise ConfigError("constrained runs need an optimal tour to start from")
        if cfg.opt_cost is None:
            cfg.opt_cost = opt.opt_cost
    if opt is not None and opt.opt_tour is not None:
        start = opt.opt_tour
    else:
        start = Tour.from_perm(np.arange(inst.n), inst)
    if start.cost > cfg.cost_bound() + FEASIBILITY_TOL:
        raise ConfigError(f"start tour costs {start.cost}, above the bound {cfg.cost_bound()}")
    pop = Population([start] * cfg.mu, cfg.k)
    if cfg.measure != "entropy":
        pop.diff = DiffMatrix(pop.tours)
    return pop


def _offspring(pop: Population, idx: int, inst, cfg: EaConfig, rng) -> list:
    """[(label, move, child)] in tie-break preference order: classic child, biased child."""
    parent = pop.tours[idx]
    out = []
    if cfg.mutation in ("biased", "dual"):
        m = biased_two_opt(parent, pop.table, cfg.bias_mode(), rng, keys=pop.keys[idx])
        out.append(("biased", m, apply_two_opt(parent, m, inst)))
    if cfg.mutation in ("classic", "dual"):
        m = classic_two_opt(parent, rng)
        out.append(("classic", m, apply_two_opt(parent, m, inst)))
    out.reverse()
    return out


def _swap_delta(pop: Population, q: int, child_keys) -> tuple:
    """(dH, removed, added) for replacing member q by a tour with the given keys."""
    new = set(child_keys)
    old = set(pop.keys[q])
    added = [key for key in child_keys if key not in old]
    removed = [key for key in pop.keys[q] if key not in new]
    total = 2 * pop.n * pop.mu
    get = pop.table.counts.get
    dH = 0.0
    for key in added:
        f = get(key, 0)
        dH += _h(f + 1, total) - _h(f, total)
    for key in removed:
        f = get(key, 0)
        dH += _h(f - 1, total) - _h(f, total)
    return dH, removed, added


def step(pop: Population, inst, cfg: EaConfig, rng) -> tuple:
    """One iteration: pick a parent, make offspring, keep the best of parent and offspring.

    Returns ``(pop, evals_consumed, feasible_count)``; ``pop`` is updated in place.
    """
    if cfg.selection == FULL_POPULATION:
        return step_full_population(pop, inst, cfg, rng)
    idx = int(rng.integers(pop.mu))
    kids = _offspring(pop, idx, inst, cfg, rng)
    bound = cfg.cost_bound() + FEASIBILITY_TOL
    feasible = [(m, c) for _, m, c in kids if c.cost <= bound]

    if cfg.measure == "entropy":
        options = []
        for m, c in feasible:
            removed, added = move_delta(pop.tours[idx], m, pop.k)
            dH = entropy_delta(pop.table, removed, added, pop.n, pop.mu)
            options.append((dH, c, removed, added, None))
        best = max([0.0] + [o[0] for o in options])
        for dH, c, removed, added, _ in options:
            if dH >= best - TIE_TOL:
                pop.replace(idx, c, removed, added, dH)
                break
    else:
        diff = pop.diff
        current = diff.value(cfg.measure)
        options = []
        for _, c in feasible:
            dc = diff.distances(c.perm)
            val = diff.replacement_values(dc, cfg.measure)[idx]
            options.append((val - current, c, dc))
        best = max([0.0] + [o[0] for o in options])
        for gain, c, dc in options:
            if gain >= best - TIE_TOL:
                _accept_swap(pop, idx, c, dc)
                break
    return pop, len(kids), len(feasible)


def _accept_swap(pop: Population, q: int, child: Tour, dc=None) -> None:
    child_keys = pop.codec.windows(child.perm).tolist()
    dH, removed, added = _swap_delta(pop, q, child_keys)
    pop.replace(q, child, removed, added, dH, child_keys=child_keys)
    if pop.diff is not None:
        pop.diff.replace(q, child.perm, dc)


def step_full_population(pop: Population, inst, cfg: EaConfig, rng) -> tuple:
    """Like :func:`step`, but a feasible offspring may replace any member."""
    idx = int(rng.integers(pop.mu))
    kids = _offspring(pop, idx, inst, cfg, rng)
    bound = cfg.cost_bound() + FEASIBILITY_TOL
    feasible = [(m, c) for _, m, c in kids if c.cost <= bound]
    order = [idx] + [q for q in range(pop.mu) if q != idx]

    options = []  # (gain, child, q, payload)
    if cfg.measure == "entropy":
        for _, c in feasible:
            child_keys = pop.codec.windows(c.perm).tolist()
            for q in order:
                dH, removed, added = _swap_delta(pop, q, child_keys)
                options.append((dH, c, q, (removed, added, child_keys)))
    else:
        diff = pop.diff
        current = diff.value(cfg.measure)
        for _, c in feasible:
            dc = diff.distances(c.perm)
            vals = diff.replacement_values(dc, cfg.measure)
            for q in order:
                options.append((vals[q] - current, c, q, dc))
    best = max([0.0] + [o[0] for o in options])
    for gain, c, q, payload in options:
        if gain >= best - TIE_TOL:
            if cfg.measure == "entropy":
                removed, added, child_keys = payload
                pop.replace(q, c, removed, added, gain, child_keys=child_keys)
            else:
                _accept_swap(pop, q, c, payload)
            break
    return pop, len(kids), len(feasible)


def _trace_point(pop: Population, evals: int, feasible: int) -> TracePoint:
    s = summarise(pop.table, pop.n)
    return TracePoint(evals, pop.H, normalise(pop.H, pop.bounds), s.f_min, s.f_max, s.C, feasible)


def _at_hmax(pop: Population) -> bool:
    if pop.H < pop.bounds.H_max - 1e-7:
        return False
    pop.H = pop.exact_entropy()
    return pop.H >= pop.bounds.H_max - HMAX_TOL


def run(inst: Instance, opt: Optional[OptimumInfo], cfg: EaConfig, rng=None) -> RunRecord:
    """Iterate until H_max is reached or ``cfg.budget`` cost evaluations are spent."""
    t0 = time.perf_counter()
    rng = make_rng(cfg.seed) if rng is None else rng
    pop = initialise(inst, opt, cfg)
    evals = feasible = steps = 0
    trace = [_trace_point(pop, 0, 0)]
    next_trace = cfg.trace_every
    termination = "budget-exhausted"
    hit = None
    if _at_hmax(pop):
        termination, hit = "reached-hmax", 0
    else:
        while evals < cfg.budget:
            _, used, ok = step(pop, inst, cfg, rng)
            evals += used
            feasible += ok
            steps += 1
            if cfg.verify_every and steps % cfg.verify_every == 0:
                pop.check()
            done = _at_hmax(pop)
            if evals >= next_trace and not done:
                trace.append(_trace_point(pop, evals, feasible))
                next_trace = (evals // cfg.trace_every + 1) * cfg.trace_every
            if done:
                termination, hit = "reached-hmax", evals
                break
    if trace[-1].eval != evals:
        trace.append(_trace_point(pop, evals, feasible))
    H_final = pop.exact_entropy()
    return RunRecord(
        evals_used=evals,
        trace=trace,
        termination=termination,
        population=pop,
        H_final=H_final,
        evals_to_hmax=hit,
        steps=steps,
        feasible_offspring=feasible,
        wall_time=time.perf_counter() - t0,
        config=cfg,
    )


TRACE_COLUMNS = ("eval", "H", "H_normalised", "f_min", "f_max", "C", "feasible_offspring_count")


def trace_csv(record: RunRecord) -> str:
    lines = ["# edotsp trace v1", ",".join(TRACE_COLUMNS)]
    for p in record.trace:
        lines.append(
            f"{p.eval},{p.H:.6f},{p.H_normalised:.6f},{p.f_min},{p.f_max},{p.C},{p.feasible_offspring}"
        )
    return "\n".join(lines) + "\n"


def population_tours_text(pop: Population) -> str:
    """One tour per line, comma-separated node ids."""
    return "\n".join(t.to_csv() for t in pop.tours) + "\n"

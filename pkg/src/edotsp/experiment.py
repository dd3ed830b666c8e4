"""Multi-seed parameter sweeps with CSV output."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .ea import EaConfig, RunRecord, population_tours_text, run, trace_csv
from .entropy import entropy_bounds
from .errors import ConfigError
from .tour import Tour
from .instance import Instance, OptimumInfo, bundled, load_instance, load_opt, parse_opt_tour, unit_graph

SCHEMA = "# edotsp {kind} v1"
DEFAULT_JOB_CAP = 10_000


def parse_seeds(text: str) -> list:
    """"0-9" or "1,4,7" or a mix like "0-2,10"."""
    seeds = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if part[0] != "-" else (part, "")
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def _floats(text) -> list:
    return [math.inf if v.strip().lower() in ("inf", "none", "") else float(v) for v in str(text).split(",")]


def _ints(text) -> list:
    return [int(v) for v in str(text).split(",") if v.strip()]


def resolve_instance(instance: Optional[str] = None, unit: Optional[int] = None, opt: Optional[str] = None):
    """(Instance, OptimumInfo or None) from a path, a bundled name, or a unit-graph size."""
    if (instance is None) == (unit is None):
        raise ConfigError("give exactly one of an instance or a unit-graph size")
    if unit is not None:
        inst = unit_graph(int(unit))
        info = OptimumInfo(float(inst.n), Tour.from_perm(np.arange(inst.n), inst))  # every tour is optimal
    elif os.path.exists(instance):
        inst, info = load_instance(instance), None
    else:
        try:
            inst, info = bundled(instance)
        except FileNotFoundError as exc:
            raise ConfigError(f"no instance file or bundled instance named {instance!r}") from exc
    if opt is not None:
        info = load_opt(opt, inst) if os.path.exists(opt) else parse_opt_tour(opt, inst)
    return inst, info


@dataclass
class ExperimentSpec:
    inst: Instance
    opt: Optional[OptimumInfo]
    mus: list
    ks: list
    alphas: list = field(default_factory=lambda: [math.inf])
    seeds: list = field(default_factory=lambda: [0])
    budget: int = 100_000
    measure: str = "entropy"
    mutation: str = "dual"
    selection: Optional[str] = None
    trace_every: int = 1000
    jobs: int = 1
    job_cap: int = DEFAULT_JOB_CAP
    out_dir: Optional[str] = None

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("the seed list is empty")
        if not self.mus or not self.ks or not self.alphas:
            raise ConfigError("mu, k and alpha grids must be non-empty")
        size = len(self.mus) * len(self.ks) * len(self.alphas) * len(self.seeds)
        if size > self.job_cap:
            raise ConfigError(f"{size} runs exceed the job cap {self.job_cap}")
        if any(math.isfinite(a) for a in self.alphas) and (self.opt is None or self.opt.opt_tour is None):
            raise ConfigError("constrained runs need an optimal tour")
        for cfg in self.configs():  # validate every grid point before running anything
            if not 2 <= cfg.k <= self.inst.n:
                raise ConfigError(f"k={cfg.k} outside 2..n={self.inst.n}")

    def configs(self) -> list:
        out = []
        for mu, k, alpha in itertools.product(self.mus, self.ks, self.alphas):
            out.append(EaConfig(
                mu=mu, k=k, alpha=alpha,
                opt_cost=self.opt.opt_cost if self.opt is not None else None,
                budget=self.budget, measure=self.measure, mutation=self.mutation,
                selection=self.selection, trace_every=self.trace_every,
            ))
        return out

    @classmethod
    def from_text(cls, text: str, base_dir: str = ".") -> "ExperimentSpec":
        """Parse a ``key = value`` spec; ``#`` starts a comment."""
        kv = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            kv[key.replace("-", "_")] = val
        known = {"instance", "unit_graph", "opt", "opt_tour", "mu", "k", "alpha", "seeds", "budget",
                 "measure", "mutation", "selection", "trace_every", "jobs", "job_cap", "out_dir"}
        unknown = set(kv) - known
        if unknown:
            raise ConfigError(f"unknown spec keys: {sorted(unknown)}")

        def path(v):
            p = Path(base_dir) / v
            return str(p) if p.exists() else v

        opt = kv.get("opt", kv.get("opt_tour"))
        inst, info = resolve_instance(
            path(kv["instance"]) if "instance" in kv else None,
            int(kv["unit_graph"]) if "unit_graph" in kv else None,
            path(opt) if opt else None,
        )
        return cls(
            inst, info,
            mus=_ints(kv.get("mu", "")), ks=_ints(kv.get("k", "")),
            alphas=_floats(kv.get("alpha", "inf")),
            seeds=parse_seeds(kv.get("seeds", "")),
            budget=int(kv.get("budget", 100_000)),
            measure=kv.get("measure", "entropy"),
            mutation=kv.get("mutation", "dual"),
            selection=kv.get("selection") or None,
            trace_every=int(kv.get("trace_every", 1000)),
            jobs=int(kv.get("jobs", 1)),
            job_cap=int(kv.get("job_cap", DEFAULT_JOB_CAP)),
            out_dir=kv.get("out_dir"),
        )


def config_id(cfg: EaConfig) -> str:
    alpha = "inf" if not math.isfinite(cfg.alpha) else f"{cfg.alpha:g}"
    return f"mu{cfg.mu}_k{cfg.k}_a{alpha}_{cfg.measure}_{cfg.mutation}"


@dataclass(frozen=True)
class SummaryRow:
    config: str
    n: int
    mu: int
    k: int
    alpha: float
    runs: int
    mean_H: float
    min_H: float
    max_H: float
    reached: int
    mean_evals_to_hmax: Optional[float]
    H_min: float
    H_max: float

    def csv(self) -> str:
        ev = "" if self.mean_evals_to_hmax is None else f"{self.mean_evals_to_hmax:.6f}"
        return (f"{self.config},{self.n},{self.mu},{self.k},{self.alpha:g},{self.runs},"
                f"{self.mean_H:.6f},{self.min_H:.6f},{self.max_H:.6f},{self.reached},{ev},"
                f"{self.H_min:.6f},{self.H_max:.6f}")


SUMMARY_COLUMNS = "config,n,mu,k,alpha,runs,mean_H,min_H,max_H,reached_hmax,mean_evals_to_hmax,H_min,H_max"


def summarise_runs(cid: str, cfg: EaConfig, n: int, records) -> SummaryRow:
    H = np.array([r.H_final for r in records])
    hits = [r.evals_to_hmax for r in records if r.evals_to_hmax is not None]
    b = entropy_bounds(n, cfg.mu, cfg.k)
    return SummaryRow(cid, n, cfg.mu, cfg.k, cfg.alpha, len(records), float(H.mean()), float(H.min()),
                      float(H.max()), len(hits), float(np.mean(hits)) if hits else None, b.H_min, b.H_max)


def _job(args) -> RunRecord:
    inst, opt, cfg = args
    rec = run(inst, opt, cfg)
    rec.config = cfg
    return rec


@dataclass
class ExperimentResult:
    summary: list
    records: dict  # (config id, seed) -> RunRecord


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every (config, seed); output rows are ordered by config then seed."""
    jobs = []
    for cfg in spec.configs():
        for seed in spec.seeds:
            jobs.append((config_id(cfg), seed, replace(cfg, seed=seed)))
    payload = [(spec.inst, spec.opt, cfg) for _, _, cfg in jobs]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            recs = list(pool.map(_job, payload))
    else:
        recs = [_job(p) for p in payload]
    records = {(cid, seed): rec for (cid, seed, _), rec in zip(jobs, recs)}
    summary = []
    for cfg in spec.configs():
        cid = config_id(cfg)
        summary.append(summarise_runs(cid, cfg, spec.inst.n, [records[(cid, s)] for s in spec.seeds]))
    result = ExperimentResult(summary, records)
    if spec.out_dir:
        write_outputs(result, spec)
    return result


def edge_frequencies(tours, inst: Instance) -> list:
    """(i, j, count) for each undirected edge used by the population, i < j, sorted."""
    counts = {}
    for t in tours:
        p = t.perm
        for a, b in zip(p.tolist(), np.roll(p, -1).tolist()):
            key = (a, b) if a < b else (b, a)
            counts[key] = counts.get(key, 0) + 1
    return sorted((i, j, f) for (i, j), f in counts.items())


def emit_edge_frequencies(tours, inst: Instance) -> str:
    """CSV of undirected edge frequencies, with endpoint coordinates when known."""
    coords = inst.coords
    head = "node_i,node_j,frequency"
    if coords is not None:
        head += ",x_i,y_i,x_j,y_j"
    lines = [SCHEMA.format(kind="edges"), head]
    for i, j, f in edge_frequencies(tours, inst):
        row = f"{i},{j},{f}"
        if coords is not None:
            row += f",{coords[i][0]:.6f},{coords[i][1]:.6f},{coords[j][0]:.6f},{coords[j][1]:.6f}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def summary_csv(rows) -> str:
    return "\n".join([SCHEMA.format(kind="summary"), SUMMARY_COLUMNS] + [r.csv() for r in rows]) + "\n"


def finals_csv(result: ExperimentResult) -> str:
    lines = [SCHEMA.format(kind="finals"),
             "config,seed,H_final,H_normalised,termination,evals_used,evals_to_hmax,max_cost"]
    for (cid, seed), r in result.records.items():
        ev = "" if r.evals_to_hmax is None else str(r.evals_to_hmax)
        lines.append(f"{cid},{seed},{r.H_final:.6f},{r.normalised_final:.6f},{r.termination},"
                     f"{r.evals_used},{ev},{r.population.max_cost():.6f}")
    return "\n".join(lines) + "\n"


def timings_csv(result: ExperimentResult) -> str:
    lines = [SCHEMA.format(kind="timings"), "config,seed,wall_time_s,steps"]
    for (cid, seed), r in result.records.items():
        lines.append(f"{cid},{seed},{r.wall_time:.6f},{r.steps}")
    return "\n".join(lines) + "\n"


def write_outputs(result: ExperimentResult, spec: ExperimentSpec) -> Path:
    out = Path(spec.out_dir)
    for sub in ("traces", "populations", "edges"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    (out / "summary.csv").write_text(summary_csv(result.summary))
    (out / "finals.csv").write_text(finals_csv(result))
    (out / "timings.csv").write_text(timings_csv(result))
    for (cid, seed), r in result.records.items():
        stem = f"{cid}_seed{seed}"
        (out / "traces" / f"{stem}.csv").write_text(trace_csv(r))
        (out / "populations" / f"{stem}.txt").write_text(population_tours_text(r.population))
        (out / "edges" / f"{stem}.csv").write_text(emit_edge_frequencies(r.population.tours, spec.inst))
    return out

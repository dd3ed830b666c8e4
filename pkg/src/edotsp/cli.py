"""Command line: ``edotsp run``, ``edotsp sweep`` and ``edotsp verify``."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .errors import ConfigError
from .experiment import ExperimentSpec, parse_seeds, resolve_instance, run_experiment, summary_csv
from .mip import brute_force_oracle, build_mip, ingest_solution, write_lp
from .verification import run_all


def _add_run_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help="TSPLIB file or bundled name (eil51)")
    src.add_argument("--unit-graph", type=int, metavar="N", help="complete graph on N nodes, unit weights")
    p.add_argument("--opt", "--opt-tour", dest="opt", help="optimal tour file, or the optimal cost as a number")
    p.add_argument("--mu", default="10", help="population size(s), comma-separated")
    p.add_argument("--k", default="2", help="segment length(s), comma-separated")
    p.add_argument("--alpha", default=None, help="quality threshold(s); omit for unconstrained")
    p.add_argument("--budget", type=int, default=100_000, help="cost evaluations per run")
    p.add_argument("--measure", choices=("entropy", "ed", "pd"), default="entropy")
    p.add_argument("--mutation", choices=("classic", "biased", "dual"), default="dual")
    p.add_argument("--selection", choices=("parent-pool", "full-population"), default=None)
    p.add_argument("--seeds", default="0", help='e.g. "0-9" or "1,2,5"')
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trace-every", type=int, default=1000)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--emit-mip", metavar="PATH", help="write the LP model for the first (mu, k, alpha) and exit")
    p.add_argument("--ingest-solution", metavar="PATH", help="decode a 'name value' solver solution and exit")
    p.add_argument("--oracle", action="store_true", help="brute-force the exact optimum and exit")


def _ints(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


def _alphas(text) -> list:
    if text is None:
        return [math.inf]
    return [math.inf if v.strip().lower() == "inf" else float(v) for v in text.split(",")]


def _spec_from_args(a) -> ExperimentSpec:
    inst, opt = resolve_instance(a.instance, a.unit_graph, a.opt)
    return ExperimentSpec(
        inst, opt, mus=_ints(a.mu), ks=_ints(a.k), alphas=_alphas(a.alpha), seeds=parse_seeds(a.seeds),
        budget=a.budget, measure=a.measure, mutation=a.mutation, selection=a.selection,
        trace_every=a.trace_every, jobs=a.jobs, out_dir=a.out_dir,
    )


def _exact_tools(a, spec: ExperimentSpec) -> int:
    mu, k, alpha = spec.mus[0], spec.ks[0], spec.alphas[0]
    opt_cost = spec.opt.opt_cost if spec.opt is not None else None
    if a.oracle:
        res = brute_force_oracle(spec.inst, mu, k, alpha, opt_cost)
        print(f"best_H={res.best_H:.6f} best_C={res.best_C} optima={len(res.best_populations)} "
              f"enumerated={res.enumerated_count}")
        return 0
    model = build_mip(spec.inst, mu, k, alpha, opt_cost)
    if a.emit_mip:
        write_lp(model, a.emit_mip)
        print(f"wrote {a.emit_mip}")
    if a.ingest_solution:
        _, C, H = ingest_solution(model, Path(a.ingest_solution).read_text())
        print(f"C={C} H={H:.6f}")
    return 0


def cmd_run(a) -> int:
    spec = _spec_from_args(a)
    if a.oracle or a.emit_mip or a.ingest_solution:
        return _exact_tools(a, spec)
    res = run_experiment(spec)
    sys.stdout.write(summary_csv(res.summary))
    return 0


def cmd_sweep(a) -> int:
    path = Path(a.spec)
    spec = ExperimentSpec.from_text(path.read_text(), base_dir=str(path.parent))
    if a.out_dir:
        spec.out_dir = a.out_dir
    if a.jobs:
        spec.jobs = a.jobs
    res = run_experiment(spec)
    sys.stdout.write(summary_csv(res.summary))
    return 0


def cmd_verify(a) -> int:
    reports = run_all(trials=a.trials, seed=a.seed)
    for r in reports:
        print(r)
    return 0 if all(r.ok for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edotsp", description="Entropy-based diversity optimisation for TSP tours")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run the EA over a (mu, k, alpha) grid and seeds")
    _add_run_args(p)
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("sweep", help="run a key=value experiment spec file")
    p.add_argument("spec")
    p.add_argument("--out-dir", default=None)
    p.add_argument("--jobs", type=int, default=0)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify", help="golden bounds, transfer-gain properties and oracle agreement")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return a.func(a)
    except (ValueError, OSError) as exc:  # all package errors derive from ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

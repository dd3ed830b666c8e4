"""Linearised MIP for maximum-entropy populations, LP export, solution ingest,
and a brute-force oracle for tiny instances.

The model minimises C = f_max - f_min over mu tours. Node 0 is the MTZ depot.
Variable names use 0-based node ids: ``x_i_j_p``, ``w_i_p``,
``y_<nodes joined by _>_p``, ``fmin``, ``fmax``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .entropy import entropy, entropy_bounds, raw_entropy
from .errors import ConsistencyError, DecodeError, MipSizeError
from .instance import Instance
from .segments import build_table, codec, n_segments, summarise
from .tour import Tour

MAX_N = 20
MAX_MU = 24
MIP_K = (2, 3)
ORACLE_LIMIT = 10 ** 7
LINE_WIDTH = 250


@dataclass
class Constraint:
    name: str
    terms: list  # (coefficient, variable)
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass
class MipModel:
    inst: Instance
    mu: int
    k: int
    alpha: float
    opt_cost: Optional[float]
    segments: list
    constraints: list = field(default_factory=list)
    x_vars: list = field(default_factory=list)
    w_vars: list = field(default_factory=list)
    y_vars: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.inst.n

    @property
    def constrained(self) -> bool:
        return math.isfinite(self.alpha)

    @staticmethod
    def expected_counts(n: int, mu: int, k: int, constrained: bool) -> dict:
        """Closed-form variable and constraint counts."""
        u = n_segments(n, k)
        return {
            "x": mu * n * (n - 1),
            "w": mu * n,
            "y": mu * u,
            "degree": 2 * n * mu,
            "mtz": mu * (n - 1) * (n - 2),
            "position": mu * (n - 1),
            "link": 2 * mu * u,
            "ytotal": 1,
            "freq": 2 * u,
            "quality": mu if constrained else 0,
        }

    def counts(self) -> dict:
        kinds = {}
        for c in self.constraints:
            kind = c.name.split("_", 1)[0]
            kinds[kind] = kinds.get(kind, 0) + 1
        out = {"x": len(self.x_vars), "w": len(self.w_vars), "y": len(self.y_vars)}
        for kind in ("degree", "mtz", "position", "link", "ytotal", "freq", "quality"):
            out[kind] = kinds.get(kind, 0)
        return out


def x_name(i, j, p) -> str:
    return f"x_{i}_{j}_{p}"


def w_name(i, p) -> str:
    return f"w_{i}_{p}"


def y_name(seg, p) -> str:
    return "y_" + "_".join(map(str, seg)) + f"_{p}"


def build_mip(inst: Instance, mu: int, k: int, alpha: float = math.inf, opt_cost: Optional[float] = None) -> MipModel:
    n = inst.n
    if n > MAX_N or mu > MAX_MU or k not in MIP_K:
        est = MipModel.expected_counts(n, mu, k, False) if 2 <= k <= n else {}
        size = est.get("x", 0) + est.get("y", 0) + est.get("w", 0)
        raise MipSizeError(
            f"MIP limited to n <= {MAX_N}, mu <= {MAX_MU}, k in {MIP_K}; "
            f"got n={n}, mu={mu}, k={k} (~{size} variables)"
        )
    if mu < 1:
        raise MipSizeError(f"mu must be positive, got {mu}")
    if math.isfinite(alpha) and opt_cost is None:
        raise ValueError("a quality-constrained MIP needs the optimal cost")

    segs = list(itertools.permutations(range(n), k))
    model = MipModel(inst, mu, k, alpha, opt_cost, segs)
    P = range(mu)
    add = model.constraints.append
    model.x_vars = [x_name(i, j, p) for p in P for i in range(n) for j in range(n) if i != j]
    model.w_vars = [w_name(i, p) for p in P for i in range(n)]
    model.y_vars = [y_name(s, p) for p in P for s in segs]

    if model.constrained:
        bound = (1 + alpha) * opt_cost
        for p in P:
            terms = [(inst.dist[i, j], x_name(i, j, p)) for i in range(n) for j in range(n) if i != j]
            add(Constraint(f"quality_{p}", terms, "<=", bound))
    for p in P:
        for j in range(n):
            add(Constraint(f"degree_in_{j}_{p}", [(1, x_name(i, j, p)) for i in range(n) if i != j], "=", 1))
        for i in range(n):
            add(Constraint(f"degree_out_{i}_{p}", [(1, x_name(i, j, p)) for j in range(n) if j != i], "=", 1))
    for p in P:
        for i in range(1, n):
            for j in range(1, n):
                if i != j:
                    terms = [(1, w_name(i, p)), (-1, w_name(j, p)), (n, x_name(i, j, p))]
                    add(Constraint(f"mtz_{i}_{j}_{p}", terms, "<=", n - 1))
        for i in range(1, n):
            add(Constraint(f"position_{i}_{p}", [(1, w_name(i, p))], "<=", n - 1))
    for p in P:
        for s in segs:
            y = y_name(s, p)
            tag = "_".join(map(str, s))
            fwd = [(-1, x_name(a, b, p)) for a, b in zip(s, s[1:])]
            rev = [(-1, x_name(b, a, p)) for a, b in zip(s, s[1:])][::-1]
            add(Constraint(f"link_f_{tag}_{p}", [(1, y)] + fwd, ">=", 2 - k))
            add(Constraint(f"link_r_{tag}_{p}", [(1, y)] + rev, ">=", 2 - k))
    add(Constraint("ytotal", [(1, y) for y in model.y_vars], "<=", 2 * n * mu))
    for s in segs:
        tag = "_".join(map(str, s))
        ys = [(-1, y_name(s, p)) for p in P]
        add(Constraint(f"freq_max_{tag}", [(1, "fmax")] + ys, ">=", 0))
        add(Constraint(f"freq_min_{tag}", [(1, "fmin")] + ys, "<=", 0))
    return model


def _num(v) -> str:
    v = float(v)
    if v.is_integer():
        return str(int(v))
    return format(v, ".12g")


def _wrap(head: str, parts: list) -> list:
    lines = []
    cur = head
    for part in parts:
        if len(cur) + len(part) + 1 > LINE_WIDTH:
            lines.append(cur)
            cur = "   "
        cur += " " + part
    lines.append(cur)
    return lines


def _expr(terms) -> list:
    parts = []
    for coef, var in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{_num(mag)} {var}"
        parts.append(f"{sign} {body}")
    if parts and parts[0].startswith("+ "):
        parts[0] = parts[0][2:]
    return parts


def lp_text(model: MipModel) -> str:
    """CPLEX LP file text; identical models give identical text."""
    n, mu = model.n, model.mu
    out = [f"\\ max-entropy population MIP: n={n} mu={mu} k={model.k} alpha={model.alpha}"]
    out.append("Minimize")
    out.append(" obj: fmax - fmin")
    out.append("Subject To")
    for c in model.constraints:
        parts = _expr(c.terms) + [c.sense, _num(c.rhs)]
        out += _wrap(f" {c.name}:", parts)
    out.append("Bounds")
    out.append(f" 0 <= fmin <= {mu}")
    out.append(f" 0 <= fmax <= {mu}")
    for p in range(mu):
        out.append(f" {w_name(0, p)} = 0")
        for i in range(1, n):
            out.append(f" 0 <= {w_name(i, p)} <= {n - 1}")
    out.append("Generals")
    out += _wrap("", model.w_vars + ["fmin", "fmax"])
    out.append("Binaries")
    out += _wrap("", model.x_vars)
    out += _wrap("", model.y_vars)
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp(model: MipModel, out) -> None:
    """Write the LP text to a path or a text sink."""
    text = lp_text(model)
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def read_assignment(text: str, names) -> dict:
    """``name value`` pairs for known variable names.

    Other lines (comments, solver headers) are skipped, which lets HiGHS and
    CPLEX solution dumps be fed in after a plain ``name value`` export.
    """
    names = set(names)
    vals = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) < 2 or parts[0] not in names:
            continue
        try:
            vals[parts[0]] = float(parts[1])
        except ValueError as exc:
            raise DecodeError(f"bad value for {parts[0]}: {parts[1]!r}") from exc
    return vals


def _decode_tour(vals: dict, n: int, p: int, inst: Instance) -> Tour:
    succ = {}
    indeg = [0] * n
    for i in range(n):
        outs = [j for j in range(n) if j != i and vals[x_name(i, j, p)] > 0.5]
        if len(outs) != 1:
            raise DecodeError(f"tour {p}: node {i} has {len(outs)} outgoing edges")
        succ[i] = outs[0]
        indeg[outs[0]] += 1
    if any(d != 1 for d in indeg):
        raise DecodeError(f"tour {p}: in-degrees {indeg} are not all one")
    perm = [0]
    while len(perm) < n:
        nxt = succ[perm[-1]]
        if nxt == 0:
            raise DecodeError(f"tour {p}: subtour {perm} closes before visiting all {n} nodes")
        perm.append(nxt)
    return Tour.from_perm(perm, inst)


def ingest_solution(model: MipModel, text: str) -> tuple:
    """Decode a solver assignment into ``(tours, C, H)``.

    Every x variable must be assigned. y values, when present, must match the
    segments of the decoded tours exactly.
    """
    n, mu, k = model.n, model.mu, model.k
    vals = read_assignment(text, model.x_vars + model.y_vars + ["fmin", "fmax"])
    missing = [v for v in model.x_vars if v not in vals]
    if missing:
        raise DecodeError(f"{len(missing)} x variables unassigned, e.g. {missing[0]}")
    tours = [_decode_tour(vals, n, p, model.inst) for p in range(mu)]
    cod = codec(n, k)
    for p, t in enumerate(tours):
        present = set(cod.windows(t.perm).tolist())
        for s in model.segments:
            name = y_name(s, p)
            if name not in vals:
                continue
            want = 1 if cod.encode(s) in present else 0
            if round(vals[name]) != want:
                raise ConsistencyError(f"{name} = {vals[name]} but the decoded tour gives {want}")
    tab = build_table(tours, k)
    C = summarise(tab, n, mu).C
    return tours, C, entropy(tab, n, mu).H


def assignment_text(model: MipModel, tours) -> str:
    """``name value`` lines for x, w and y describing ``tours`` (one per member)."""
    n = model.n
    cod = codec(n, model.k)
    lines = []
    for p, t in enumerate(tours):
        perm = [int(v) for v in np.roll(t.perm, -int(np.flatnonzero(t.perm == 0)[0]))]
        edges = {(a, b) for a, b in zip(perm, perm[1:] + perm[:1])}
        lines += [f"{x_name(i, j, p)} {int((i, j) in edges)}" for i in range(n) for j in range(n) if i != j]
        lines += [f"{w_name(v, p)} {pos}" for pos, v in enumerate(perm)]
        present = set(cod.windows(t.perm).tolist())
        lines += [f"{y_name(s, p)} {int(cod.encode(s) in present)}" for s in model.segments]
    return "\n".join(lines) + "\n"


@dataclass
class OracleResult:
    best_H: float
    best_C: int
    best_populations: list  # tuples of perms, one tuple per optimal population
    enumerated_count: int


def _all_tours(inst: Instance, bound: float) -> list:
    n = inst.n
    out = []
    for rest in itertools.permutations(range(1, n)):
        t = Tour.from_perm((0,) + rest, inst)
        if t.cost <= bound + 1e-6:
            out.append(t)
    return out


def brute_force_oracle(inst: Instance, mu: int, k: int, alpha: float = math.inf, opt_cost: Optional[float] = None) -> OracleResult:
    """Exact maximum entropy over all multisets of mu feasible tours.

    Tours are fixed to start at node 0; both directions are kept as separate
    tours since a tour and its reversal give the same segment counts anyway.
    """
    n = inst.n
    if math.isfinite(alpha) and opt_cost is None:
        raise ValueError("a quality-constrained oracle needs the optimal cost")
    if math.factorial(n - 1) > ORACLE_LIMIT:
        raise MipSizeError(f"{math.factorial(n - 1)} tours exceed the oracle limit {ORACLE_LIMIT}")
    bound = (1 + alpha) * opt_cost if math.isfinite(alpha) else math.inf
    tours = _all_tours(inst, bound)
    m = len(tours)
    size = math.comb(m + mu - 1, mu)
    if size > ORACLE_LIMIT:
        raise MipSizeError(f"{size} populations of {m} feasible tours exceed the limit {ORACLE_LIMIT}")
    cod = codec(n, k)
    keys = [cod.windows(t.perm) for t in tours]
    total = 2 * n * mu
    best_H, best = -1.0, []
    for combo in itertools.combinations_with_replacement(range(m), mu):
        _, counts = np.unique(np.concatenate([keys[i] for i in combo]), return_counts=True)
        H = raw_entropy(counts, total)
        if H > best_H + 1e-12:
            best_H, best = H, [combo]
        elif H >= best_H - 1e-12:
            best.append(combo)
    pops = [tuple(tuple(int(v) for v in tours[i].perm) for i in combo) for combo in best]
    best_C = min(summarise(build_table([tours[i] for i in combo], k), n, mu).C for combo in best)
    bounds = entropy_bounds(n, mu, k)
    if best_H > bounds.H_max + 1e-9:
        raise ConsistencyError(f"oracle H {best_H} exceeds the closed-form maximum {bounds.H_max}")
    return OracleResult(best_H, best_C, pops, size)

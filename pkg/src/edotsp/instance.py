"""Symmetric TSP instances: TSPLIB parsing, unit graphs and optimum files."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from .errors import InstanceError, TsplibError

SUPPORTED_EXPLICIT = ("FULL_MATRIX", "UPPER_ROW", "LOWER_ROW", "UPPER_DIAG_ROW", "LOWER_DIAG_ROW")


@dataclass(frozen=True, eq=False)
class Instance:
    """Symmetric complete graph with positive edge weights.

    Node ids are 0..n-1. ``coords`` is only set for EUC_2D instances.
    """

    name: str
    dist: np.ndarray
    kind: str = "explicit"
    coords: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InstanceError(f"{self.name}: distance matrix must be square, got {d.shape}")
        n = d.shape[0]
        if n < 4:
            raise InstanceError(f"{self.name}: n={n} but at least 4 nodes are needed for 2-OPT")
        if not np.array_equal(d, d.T):
            i, j = np.argwhere(d != d.T)[0]
            raise InstanceError(f"{self.name}: asymmetric weights d({i},{j})={d[i, j]} != d({j},{i})={d[j, i]}")
        if np.any(np.diag(d) != 0):
            raise InstanceError(f"{self.name}: nonzero diagonal")
        off = d[~np.eye(n, dtype=bool)]
        if np.any(off <= 0):
            raise InstanceError(f"{self.name}: edge weights must be positive")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        if self.kind not in ("euclidean-2d", "explicit", "unit"):
            raise InstanceError(f"unknown instance kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.dist.shape[0]


@dataclass(frozen=True)
class OptimumInfo:
    opt_cost: float
    opt_tour: Optional["Tour"] = None  # noqa: F821

    def __post_init__(self):
        if not self.opt_cost > 0:
            raise InstanceError(f"optimum cost must be positive, got {self.opt_cost}")
        if self.opt_tour is not None:
            c = self.opt_tour.cost
            if abs(c - self.opt_cost) > 1e-6 * abs(self.opt_cost):
                raise InstanceError(f"optimal tour costs {c}, but the stated optimum is {self.opt_cost}")


def unit_graph(n: int) -> Instance:
    """Complete graph on ``n`` nodes where every edge weighs 1."""
    if n < 4:
        raise InstanceError(f"unit_graph needs n >= 4, got {n}")
    d = np.ones((n, n)) - np.eye(n)
    return Instance(name=f"unit{n}", dist=d, kind="unit")


def euc2d_distances(coords: np.ndarray) -> np.ndarray:
    """TSPLIB EUC_2D weights: nearest-integer rounding of the Euclidean norm."""
    diff = coords[:, None, :] - coords[None, :, :]
    return np.floor(np.sqrt((diff ** 2).sum(axis=-1)) + 0.5)


_HEADER = re.compile(r"^\s*([A-Z_]+)\s*:\s*(.*?)\s*$")


def _numbers(lines, first_lineno, what):
    out = []
    for k, line in enumerate(lines):
        for tok in line.split():
            try:
                out.append(float(tok))
            except ValueError:
                raise TsplibError(f"line {first_lineno + k}: bad number {tok!r} in {what}") from None
    return out


def parse_tsplib(text: str) -> Instance:
    """Parse a TSPLIB ``.tsp`` file (EUC_2D or EXPLICIT weights)."""
    header = {}
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if line.endswith("_SECTION") or line.split()[0].endswith("_SECTION"):
            current = line.split()[0].rstrip(":")
            sections[current] = (lineno + 1, [])
            continue
        m = _HEADER.match(line)
        if m:
            header[m.group(1)] = m.group(2)
            current = None
            continue
        if current is None:
            raise TsplibError(f"line {lineno}: cannot parse {line!r}")
        sections[current][1].append(line)

    if "DIMENSION" not in header:
        raise TsplibError("missing DIMENSION")
    try:
        n = int(header["DIMENSION"])
    except ValueError:
        raise TsplibError(f"DIMENSION: not an integer ({header['DIMENSION']!r})") from None
    name = header.get("NAME", "unnamed")
    ttype = header.get("TYPE", "TSP").split()[0]
    if ttype not in ("TSP",):
        raise TsplibError(f"TYPE: unsupported problem type {ttype!r}")
    wtype = header.get("EDGE_WEIGHT_TYPE")
    if wtype is None:
        raise TsplibError("missing EDGE_WEIGHT_TYPE")

    if wtype == "EUC_2D":
        if "NODE_COORD_SECTION" not in sections:
            raise TsplibError("EUC_2D instance without NODE_COORD_SECTION")
        start, lines = sections["NODE_COORD_SECTION"]
        coords = np.zeros((n, 2))
        seen = set()
        for k, line in enumerate(lines):
            parts = line.split()
            if len(parts) != 3:
                raise TsplibError(f"line {start + k}: expected 'id x y', got {line!r}")
            try:
                idx = int(parts[0]) - 1
                coords[idx] = float(parts[1]), float(parts[2])
            except (ValueError, IndexError):
                raise TsplibError(f"line {start + k}: bad coordinate record {line!r}") from None
            seen.add(idx)
        if seen != set(range(n)):
            raise TsplibError(f"NODE_COORD_SECTION: expected {n} nodes, found {len(seen)}")
        inst = Instance(name=name, dist=euc2d_distances(coords), kind="euclidean-2d", coords=coords)
        return inst

    if wtype == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT")
        if fmt not in SUPPORTED_EXPLICIT:
            raise TsplibError(f"EDGE_WEIGHT_FORMAT: unsupported format {fmt!r}")
        if "EDGE_WEIGHT_SECTION" not in sections:
            raise TsplibError("EXPLICIT instance without EDGE_WEIGHT_SECTION")
        start, lines = sections["EDGE_WEIGHT_SECTION"]
        vals = _numbers(lines, start, "EDGE_WEIGHT_SECTION")
        d = _explicit_matrix(vals, n, fmt)
        if not np.array_equal(d, d.T):
            i, j = np.argwhere(d != d.T)[0]
            raise TsplibError(
                f"EDGE_WEIGHT_SECTION: matrix is not symmetric at ({i + 1},{j + 1}): {d[i, j]} vs {d[j, i]}"
            )
        return Instance(name=name, dist=d, kind="explicit")

    raise TsplibError(f"EDGE_WEIGHT_TYPE: unsupported type {wtype!r}")


def _explicit_matrix(vals, n, fmt):
    d = np.zeros((n, n))
    if fmt == "FULL_MATRIX":
        need = n * n
        if len(vals) != need:
            raise TsplibError(f"EDGE_WEIGHT_SECTION: FULL_MATRIX needs {need} values, got {len(vals)}")
        return np.array(vals).reshape(n, n)
    if fmt == "UPPER_ROW":
        idx = [(i, j) for i in range(n) for j in range(i + 1, n)]
    elif fmt == "LOWER_ROW":
        idx = [(i, j) for i in range(n) for j in range(i)]
    elif fmt == "UPPER_DIAG_ROW":
        idx = [(i, j) for i in range(n) for j in range(i, n)]
    else:
        idx = [(i, j) for i in range(n) for j in range(i + 1)]
    if len(vals) != len(idx):
        raise TsplibError(f"EDGE_WEIGHT_SECTION: {fmt} needs {len(idx)} values, got {len(vals)}")
    for (i, j), v in zip(idx, vals):
        d[i, j] = d[j, i] = v
    return d


def _fmt_weight(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_tsplib(inst: Instance) -> str:
    """Serialise as an EXPLICIT FULL_MATRIX file; weights survive a round trip exactly."""
    out = [
        f"NAME : {inst.name}",
        "TYPE : TSP",
        f"DIMENSION : {inst.n}",
        "EDGE_WEIGHT_TYPE : EXPLICIT",
        "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    for row in inst.dist:
        out.append(" ".join(_fmt_weight(v) for v in row))
    out.append("EOF")
    return "\n".join(out) + "\n"


def parse_opt_tour(text: str, inst: Instance) -> OptimumInfo:
    """Read a TSPLIB ``.tour`` file, or a bare optimum cost."""
    from .tour import Tour

    if "TOUR_SECTION" not in text:
        try:
            return OptimumInfo(opt_cost=float(text.strip()))
        except ValueError:
            raise TsplibError(f"expected a TOUR_SECTION or a plain cost, got {text.strip()[:40]!r}") from None
    body = text.split("TOUR_SECTION", 1)[1]
    ids = []
    for tok in body.split():
        if tok in ("-1", "EOF"):
            break
        try:
            ids.append(int(tok))
        except ValueError:
            raise TsplibError(f"TOUR_SECTION: bad node id {tok!r}") from None
    n = inst.n
    if sorted(ids) != list(range(1, n + 1)):
        dup = sorted({i for i in ids if ids.count(i) > 1})
        raise InstanceError(
            f"tour is not a permutation of 1..{n} (length {len(ids)}, duplicates {dup[:5]})"
        )
    t = Tour.from_perm(np.array(ids) - 1, inst)
    return OptimumInfo(opt_cost=t.cost, opt_tour=t)


def load_instance(path) -> Instance:
    with open(path) as fh:
        return parse_tsplib(fh.read())


def load_opt(path, inst: Instance) -> OptimumInfo:
    with open(path) as fh:
        return parse_opt_tour(fh.read(), inst)


def bundled(name: str = "eil51"):
    """The instance and optimum shipped with the package (currently eil51)."""
    base = resources.files("edotsp") / "data"
    inst = parse_tsplib((base / f"{name}.tsp").read_text())
    opt = parse_opt_tour((base / f"{name}.opt.tour").read_text(), inst)
    return inst, opt

"""Tours, 2-OPT moves and edge sets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstanceError, InvalidMoveError


def closed_cost(perm, dist) -> float:
    perm = np.asarray(perm)
    return float(dist[perm, np.roll(perm, -1)].sum())


@dataclass(frozen=True, eq=False)
class Tour:
    """A cyclic permutation of 0..n-1 with its cost cached."""

    perm: np.ndarray
    cost: float

    @classmethod
    def from_perm(cls, perm, inst) -> "Tour":
        p = np.asarray(perm, dtype=np.int64)
        n = inst.n
        if p.shape != (n,) or not np.array_equal(np.sort(p), np.arange(n)):
            raise InstanceError(f"not a permutation of 0..{n - 1}: {p.tolist()[:12]}")
        p = p.copy()
        p.setflags(write=False)
        return cls(p, closed_cost(p, inst.dist))

    @property
    def n(self) -> int:
        return len(self.perm)

    def reversed(self, inst) -> "Tour":
        return Tour.from_perm(self.perm[::-1], inst)

    def rotated(self, shift: int, inst) -> "Tour":
        return Tour.from_perm(np.roll(self.perm, -shift), inst)

    def same_cycle(self, other: "Tour") -> bool:
        return undirected_edge_set(self) == undirected_edge_set(other)

    def to_csv(self) -> str:
        return ",".join(str(int(v)) for v in self.perm)

    def to_tsplib(self, name: str = "tour") -> str:
        lines = [f"NAME : {name}", "TYPE : TOUR", f"DIMENSION : {self.n}", "TOUR_SECTION"]
        lines += [str(int(v) + 1) for v in self.perm]
        lines += ["-1", "EOF"]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TwoOptMove:
    """Remove edges at positions ``i`` and ``j`` (edge ``e`` joins perm[e] and perm[e+1]).

    Stored with ``i < j``; the path perm[i+1..j] is reversed.
    """

    i: int
    j: int

    @classmethod
    def of(cls, a: int, b: int, n: int) -> "TwoOptMove":
        a %= n
        b %= n
        if (a - b) % n in (0, 1, n - 1):
            raise InvalidMoveError(f"cut edges {a} and {b} are equal or adjacent (n={n})")
        return cls(min(a, b), max(a, b))

    def check(self, n: int) -> None:
        if not (0 <= self.i < self.j < n) or (self.j - self.i) % n in (0, 1, n - 1):
            raise InvalidMoveError(f"invalid 2-OPT move ({self.i}, {self.j}) for n={n}")


def cost(t: Tour, inst) -> float:
    return closed_cost(t.perm, inst.dist)


def move_cost_delta(perm, m: TwoOptMove, dist) -> float:
    n = len(perm)
    a, b = perm[m.i], perm[m.i + 1]
    c, d = perm[m.j], perm[(m.j + 1) % n]
    return float(dist[a, c] + dist[b, d] - dist[a, b] - dist[c, d])


def apply_two_opt(t: Tour, m: TwoOptMove, inst) -> Tour:
    n = t.n
    m.check(n)
    p = t.perm
    new = np.concatenate((p[: m.i + 1], p[m.j : m.i : -1], p[m.j + 1 :]))
    new.setflags(write=False)
    return Tour(new, t.cost + move_cost_delta(p, m, inst.dist))


def undirected_edge_set(t: Tour) -> set:
    """Both orientations of every cycle edge, 2n directed pairs in total."""
    p = [int(v) for v in t.perm]
    q = p[1:] + p[:1]
    return set(zip(p, q)) | set(zip(q, p))


def edge_difference(p: Tour, q: Tour) -> int:
    """|E(p) minus E(q)| under the directed (both orientations) convention."""
    return len(undirected_edge_set(p) - undirected_edge_set(q))

"""Directed k-node segments of tours and their population-wide frequency table.

Segments are packed into integers, ``key = sum(node_i * n**(k-1-i))``. Keys fit
int64 whenever ``n**k < 2**62``; otherwise plain Python integers are used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, InvalidMoveError
from .tour import Tour, TwoOptMove


class SegmentCodec:
    def __init__(self, n: int, k: int):
        if not 2 <= k <= n:
            raise ValueError(f"segment length k={k} must satisfy 2 <= k <= n={n}")
        self.n = n
        self.k = k
        self.wide = n ** k >= 2 ** 62
        dtype = object if self.wide else np.int64
        self.weights = np.array([n ** (k - 1 - t) for t in range(k)], dtype=dtype)
        self.window_idx = (np.arange(n)[:, None] + np.arange(k)[None, :]) % n

    def encode(self, nodes) -> int:
        key = 0
        n = self.n
        for v in nodes:
            key = key * n + int(v)
        return key

    def decode(self, key: int) -> tuple:
        out = []
        for _ in range(self.k):
            key, r = divmod(int(key), self.n)
            out.append(r)
        return tuple(reversed(out))

    def windows(self, perm) -> np.ndarray:
        """Keys of the n forward windows followed by their n reversals."""
        fwd = np.asarray(perm)[self.window_idx]
        if self.wide:
            fwd = fwd.astype(object)
        return np.concatenate((fwd @ self.weights, fwd[:, ::-1] @ self.weights))

    def window_keys(self, perm, starts) -> list:
        """Forward and reversed keys of the windows at the given start positions."""
        n, k = self.n, self.k
        out = []
        for s in starts:
            nodes = [int(perm[(s + t) % n]) for t in range(k)]
            out.append(self.encode(nodes))
            out.append(self.encode(reversed(nodes)))
        return out


@lru_cache(maxsize=None)
def codec(n: int, k: int) -> SegmentCodec:
    return SegmentCodec(n, k)


def extract_segments(t: Tour, k: int) -> list:
    """The 2n directed segments of ``t``: n forward windows, then each one reversed."""
    n = t.n
    if not 2 <= k <= n:
        raise ValueError(f"segment length k={k} must satisfy 2 <= k <= n={n}")
    p = [int(v) for v in t.perm]
    fwd = [tuple(p[(s + j) % n] for j in range(k)) for s in range(n)]
    return fwd + [s[::-1] for s in fwd]


class SegmentTable:
    """Occurrence counts of directed segments; zero counts are never stored."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.codec = codec(n, k)
        self.counts: dict = {}
        self.total = 0

    def copy(self) -> "SegmentTable":
        other = SegmentTable(self.n, self.k)
        other.counts = dict(self.counts)
        other.total = self.total
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegmentTable):
            return NotImplemented
        return (self.n, self.k, self.total, self.counts) == (other.n, other.k, other.total, other.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def count(self, segment) -> int:
        return self.counts.get(self.codec.encode(segment), 0)

    def add_keys(self, keys) -> None:
        c = self.counts
        for key in keys:
            key = int(key)
            c[key] = c.get(key, 0) + 1
        self.total += len(keys)

    def remove_keys(self, keys) -> None:
        c = self.counts
        for key in keys:
            key = int(key)
            f = c.get(key, 0)
            if f <= 0:
                raise ConsistencyError(f"removing absent segment {self.codec.decode(key)}")
            if f == 1:
                del c[key]
            else:
                c[key] = f - 1
        self.total -= len(keys)

    def add_tour(self, t: Tour) -> None:
        self.add_keys(self.codec.windows(t.perm).tolist())

    def remove_tour(self, t: Tour) -> None:
        self.remove_keys(self.codec.windows(t.perm).tolist())

    def apply(self, removed, added) -> None:
        self.remove_keys(removed)
        self.add_keys(added)

    def lookup(self, keys) -> np.ndarray:
        get = self.counts.get
        return np.fromiter((get(key, 0) for key in keys), dtype=np.int64, count=len(keys))

    def items(self):
        """(segment tuple, count) pairs, sorted by segment."""
        dec = self.codec.decode
        return sorted((dec(key), f) for key, f in self.counts.items())

    def to_csv(self) -> str:
        lines = ["segment,count"]
        lines += [f"{'-'.join(map(str, s))},{f}" for s, f in self.items()]
        return "\n".join(lines) + "\n"


def build_table(tours, k: int) -> SegmentTable:
    tours = list(tours)
    if not tours:
        raise ValueError("a population needs at least one tour")
    n = tours[0].n
    if any(t.n != n for t in tours):
        raise ValueError("all tours must be over the same node set")
    tab = SegmentTable(n, k)
    for t in tours:
        tab.add_tour(t)
    return tab


def cut_window_starts(n: int, k: int, m: TwoOptMove) -> list:
    """Start positions of windows that contain either cut edge."""
    starts = set()
    for e in (m.i, m.j):
        for s in range(e - k + 2, e + 1):
            starts.add(s % n)
    return sorted(starts)


def move_delta(t: Tour, m: TwoOptMove, k: int) -> tuple:
    """Packed segment keys that disappear from, and appear in, ``t`` under move ``m``.

    Only windows overlapping a cut edge change; windows inside the reversed path
    reappear reversed, which both-direction counting absorbs. Keys within one
    tour are distinct, so set differences give the exact multiset delta.
    """
    n = t.n
    m.check(n)
    cod = codec(n, k)
    p = t.perm.tolist()
    i, j = m.i, m.j
    lo, hi = i + 1, j
    new_at = [p[lo + hi - x] if lo <= x <= hi else p[x] for x in range(n)] if k > n // 2 else None
    old_keys = []
    new_keys = []
    enc = cod.encode
    for s in cut_window_starts(n, k, m):
        pos = [(s + d) % n for d in range(k)]
        a = [p[x] for x in pos]
        if new_at is None:
            b = [p[lo + hi - x] if lo <= x <= hi else p[x] for x in pos]
        else:
            b = [new_at[x] for x in pos]
        old_keys.append(enc(a))
        old_keys.append(enc(reversed(a)))
        new_keys.append(enc(b))
        new_keys.append(enc(reversed(b)))
    old_set = set(old_keys)
    new_set = set(new_keys)
    removed = [key for key in old_keys if key not in new_set]
    added = [key for key in new_keys if key not in old_set]
    if len(removed) != len(added):
        raise InvalidMoveError("unbalanced segment delta")
    return removed, added


@dataclass(frozen=True)
class FrequencySummary:
    f_min: int
    f_max: int

    @property
    def C(self) -> int:
        return self.f_max - self.f_min


def n_segments(n: int, k: int) -> int:
    """u = n!/(n-k)!, the number of possible directed k-node segments."""
    return math.perm(n, k)


def summarise(tab: SegmentTable, n: int | None = None, mu: int | None = None) -> FrequencySummary:
    """f_min over all possible segments (absent ones count 0), f_max over stored ones."""
    n = tab.n if n is None else n
    if mu is not None and tab.total != 2 * n * mu:
        raise ConsistencyError(f"table holds {tab.total} occurrences, expected 2*n*mu = {2 * n * mu}")
    if not tab.counts:
        return FrequencySummary(0, 0)
    vals = tab.counts.values()
    f_max = max(vals)
    f_min = min(vals) if len(tab.counts) == n_segments(n, tab.k) else 0
    return FrequencySummary(f_min, f_max)

"""High-order entropy of a tour population, its closed-form bounds and deltas.

All values are in nats and use the convention 0 ln 0 = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .segments import SegmentTable, n_segments

TIE_TOL = 1e-12


def _h(f: int, total: int) -> float:
    if f <= 0:
        return 0.0
    x = f / total
    return -x * math.log(x)


@dataclass(frozen=True)
class EntropyBounds:
    H_max: float
    H_min: float
    f_min_star: int
    f_max_star: int
    C_star: int
    u: int


@dataclass(frozen=True)
class EntropyValue:
    H: float
    normalised: float


def entropy_bounds(n: int, mu: int, k: int) -> EntropyBounds:
    """Maximum entropy for (n, mu, k) from the equalised frequency profile, and ln(2n)."""
    if n < 2 or not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got n={n}, k={k}")
    if mu < 1:
        raise ValueError(f"population size must be positive, got {mu}")
    u = n_segments(n, k)
    total = 2 * n * mu
    f_lo = total // u
    n_hi = total - f_lo * u  # segments one above the floor
    c_star = 0 if n_hi == 0 else 1
    f_hi = f_lo + c_star
    n_lo = (f_lo + 1) * u - total if c_star else u
    h_max = n_hi * _h(f_hi, total) + n_lo * _h(f_lo, total)
    return EntropyBounds(h_max, math.log(2 * n), f_lo, f_hi, c_star, u)


def raw_entropy(counts, total: int) -> float:
    f = np.fromiter((v for v in counts if v > 0), dtype=float)
    if f.size == 0:
        return 0.0
    x = f / total
    return float(-(x * np.log(x)).sum())


def normalise(H: float, bounds: EntropyBounds) -> float:
    span = bounds.H_max - bounds.H_min
    if span <= 0:
        return 1.0
    return (H - bounds.H_min) / span


def entropy(tab: SegmentTable, n: int, mu: int) -> EntropyValue:
    total = 2 * n * mu
    if tab.total != total:
        raise ConsistencyError(f"table holds {tab.total} occurrences, expected 2*n*mu = {total}")
    H = raw_entropy(tab.counts.values(), total)
    return EntropyValue(H, normalise(H, entropy_bounds(n, mu, tab.k)))


def entropy_delta(tab: SegmentTable, removed, added, n: int, mu: int) -> float:
    """H after applying (removed, added) to ``tab`` minus H before; ``tab`` is not modified."""
    total = 2 * n * mu
    change = {}
    for key in added:
        change[key] = change.get(key, 0) + 1
    for key in removed:
        change[key] = change.get(key, 0) - 1
    get = tab.counts.get
    log = math.log
    acc = 0.0  # change in sum of f ln f
    for key, dc in change.items():
        if dc == 0:
            continue
        f0 = get(key, 0)
        f1 = f0 + dc
        if f1 < 0:
            raise ConsistencyError(f"removing absent segment {tab.codec.decode(key)}")
        acc += (f1 * log(f1) if f1 else 0.0) - (f0 * log(f0) if f0 else 0.0)
    return -acc / total


def transfer_gain(f: float, C: float, total: float) -> float:
    """Entropy gained by moving one occurrence from a count ``f`` to a count ``f - C``."""
    return _h(f - 1, total) + _h(f - C + 1, total) - _h(f, total) - _h(f - C, total)


def extreme_transfer_gain(f_vec, total: int) -> float:
    """Gain from a unit transfer between the largest and smallest entries of ``f_vec``."""
    f_vec = np.asarray(f_vec)
    f_max, f_min = int(f_vec.max()), int(f_vec.min())
    C = f_max - f_min
    if C < 2:
        raise ValueError(f"a unit transfer needs f_max - f_min >= 2, got {C}")
    return transfer_gain(f_max, C, total)

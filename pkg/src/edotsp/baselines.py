"""Edge-based diversity measures ED and PD, used as competing EA fitness functions.

Distances follow the directed convention: ``|E(p) \\ E(q)|`` counts both
orientations, so it is twice the number of undirected edges of p missing in q.
"""
from __future__ import annotations

import numpy as np

MEASURES = ("entropy", "ed", "pd")


def _check_mu(tours):
    if len(tours) < 2:
        raise ValueError(f"ED and PD need at least two tours, got {len(tours)}")


def adjacency(perm) -> tuple:
    perm = np.asarray(perm)
    n = len(perm)
    succ = np.empty(n, dtype=np.int64)
    pred = np.empty(n, dtype=np.int64)
    succ[perm] = np.roll(perm, -1)
    pred[perm] = np.roll(perm, 1)
    return succ, pred


def distances_to(perm, succ: np.ndarray, pred: np.ndarray) -> np.ndarray:
    """|E(c) \\ E(q)| for one tour c against every row of stacked adjacency arrays."""
    a = np.asarray(perm)
    b = np.roll(a, -1)
    shared = ((succ[:, a] == b) | (pred[:, a] == b)).sum(axis=1)
    return 2 * (len(a) - shared)


def difference_matrix(tours) -> np.ndarray:
    adj = [adjacency(t.perm) for t in tours]
    succ = np.stack([s for s, _ in adj])
    pred = np.stack([p for _, p in adj])
    return np.stack([distances_to(t.perm, succ, pred) for t in tours])


def edge_diversity(tours) -> float:
    """ED(P): sum over ordered pairs of |E(p) \\ E(q)|."""
    _check_mu(tours)
    return float(difference_matrix(tours).sum())


def _pd_from_matrix(D: np.ndarray, n: int) -> float:
    mu = D.shape[0]
    masked = D + np.where(np.eye(mu, dtype=bool), np.iinfo(np.int64).max // 4, 0)
    return float(masked.min(axis=1).sum()) / (n * mu)


def pairwise_distance(tours) -> float:
    """PD(P): (1/(n mu)) * sum over p of the distance to its nearest other tour."""
    _check_mu(tours)
    return _pd_from_matrix(difference_matrix(tours), tours[0].n)


class DiffMatrix:
    """Pairwise difference matrix maintained under single-member replacement."""

    BIG = np.iinfo(np.int64).max // 4

    def __init__(self, tours):
        _check_mu(tours)
        self.n = tours[0].n
        self.mu = len(tours)
        adj = [adjacency(t.perm) for t in tours]
        self.succ = np.stack([s for s, _ in adj])
        self.pred = np.stack([p for _, p in adj])
        self.D = np.stack([distances_to(t.perm, self.succ, self.pred) for t in tours])

    def distances(self, perm) -> np.ndarray:
        return distances_to(perm, self.succ, self.pred)

    def replace(self, q: int, perm, dc: np.ndarray | None = None) -> None:
        if dc is None:
            dc = self.distances(perm)
        dc = dc.copy()
        dc[q] = 0
        self.D[q, :] = dc
        self.D[:, q] = dc
        self.succ[q], self.pred[q] = adjacency(perm)

    def ed(self) -> float:
        return float(self.D.sum())

    def pd(self) -> float:
        return _pd_from_matrix(self.D, self.n)

    def value(self, measure: str) -> float:
        return self.ed() if measure == "ed" else self.pd()

    def replacement_values(self, dc: np.ndarray, measure: str) -> np.ndarray:
        """Measure value after replacing member q by the candidate, for every q."""
        D = self.D
        mu = self.mu
        if measure == "ed":
            rows = D.sum(axis=1)
            return self.ed() - 2 * rows + 2 * (dc.sum() - dc)
        # PD: each p keeps its nearest neighbour unless that neighbour is q
        masked = D + np.where(np.eye(mu, dtype=bool), self.BIG, 0)
        order = np.argsort(masked, axis=1, kind="stable")[:, :2]
        v1 = masked[np.arange(mu), order[:, 0]]
        v2 = masked[np.arange(mu), order[:, 1]]
        q_idx = np.arange(mu)[:, None]
        base = np.where(order[None, :, 0] == q_idx, v2[None, :], v1[None, :])
        newmin = np.minimum(base, dc[None, :])
        np.fill_diagonal(newmin, 0)
        sums = newmin.sum(axis=1)
        c_order = np.argsort(dc, kind="stable")[:2]
        c_min = np.where(c_order[0] == np.arange(mu), dc[c_order[1]], dc[c_order[0]])
        return (sums + c_min) / (self.n * mu)

"""Golden values, transfer-gain property checks and oracle agreement, as report objects."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ea import EaConfig, run
from .entropy import entropy_bounds, extreme_transfer_gain, transfer_gain
from .instance import unit_graph
from .mip import brute_force_oracle

GOLDEN_TOL = 0.005


@dataclass(frozen=True)
class GoldenCase:
    n: int
    mu: int
    k: int
    expected: float
    source: str
    quantity: str = "H_max"


def _grid(n, rows, source):
    return [GoldenCase(n, mu, k, v, source) for mu, k, v in rows]


# Unconstrained unit graphs, small n.
UNCONSTRAINED_SMALL = (
    _grid(5, [(6, 2, 3.00), (6, 3, 4.09), (12, 2, 3.00), (12, 3, 4.09), (24, 2, 3.00), (24, 3, 4.09)], "small n=5")
    + _grid(10, [(6, 2, 4.44), (6, 3, 4.79), (12, 2, 4.48), (12, 3, 5.48), (24, 2, 4.50), (24, 3, 6.17)], "small n=10")
    + _grid(15, [(6, 2, 5.19), (6, 3, 5.19), (12, 2, 5.31), (12, 3, 5.89), (24, 2, 5.34), (24, 3, 6.58)], "small n=15")
    + _grid(20, [(6, 2, 5.48), (6, 3, 5.48), (12, 2, 5.88), (12, 3, 6.17), (24, 2, 5.92), (24, 3, 6.87)], "small n=20")
)

_LARGE = {
    50: [7.0901, 7.0901, 7.0901, 7.6006, 7.6006, 7.6006, 7.7997, 8.5172, 8.5172,
         7.8017, 9.2103, 9.2103, 7.8036, 10.8198, 10.8198, 7.8038, 11.5129, 11.5129],
    100: [7.7832, 7.7832, 7.7832, 8.2940, 8.2940, 8.2940, 9.1965, 9.2103, 9.2103,
          9.1982, 9.9035, 9.9035, 9.1999, 11.5129, 11.5129, 9.2001, 12.2061, 12.2061],
}
_LARGE_KEYS = [(mu, k) for mu in (12, 20, 50, 100, 500, 1000) for k in (2, 3, 4)]

UNCONSTRAINED_LARGE = [
    GoldenCase(n, mu, k, v, f"large n={n}") for n, vals in _LARGE.items() for (mu, k), v in zip(_LARGE_KEYS, vals)
] + [GoldenCase(n, 12, 2, h, f"large n={n}", "H_min") for n, h in ((50, 4.6052), (100, 5.2983))]

CONSTRAINED_HMIN = [
    GoldenCase(51, 1, 2, 4.6250, "eil51", "H_min"),
    GoldenCase(76, 1, 2, 5.0239, "eil76", "H_min"),
    GoldenCase(101, 1, 2, 5.3083, "eil101", "H_min"),
]

GOLDEN = UNCONSTRAINED_SMALL + UNCONSTRAINED_LARGE + CONSTRAINED_HMIN


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def __str__(self) -> str:
        head = f"{self.name}: {'PASS' if self.ok else 'FAIL'} ({self.checked} checked, {len(self.failures)} failed)"
        return "\n".join([head] + [f"  {m}" for m in self.failures[:20]])


def check_golden_bounds(cases=GOLDEN, tol: float = GOLDEN_TOL) -> Report:
    rep = Report("golden bounds")
    for c in cases:
        b = entropy_bounds(c.n, c.mu, c.k)
        got = b.H_max if c.quantity == "H_max" else b.H_min
        rep.checked += 1
        if abs(got - c.expected) > tol:
            rep.fail(f"{c.source} n={c.n} mu={c.mu} k={c.k} {c.quantity}: expected {c.expected}, got {got:.6f}")
    return rep


def _random_vector(rng) -> np.ndarray:
    size = int(rng.integers(2, 50))
    f = rng.integers(0, 10 ** int(rng.integers(1, 5)), size=size)
    if f.max() - f.min() < 2:
        f[0] = f.max() + 2 + int(rng.integers(5))
    return f


def check_transfer_gain(trials: int = 10_000, seed=0) -> Report:
    """Transfer gain positive at C >= 2, decreasing in f, and vanishing for large f."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    rep = Report("transfer gain")
    for _ in range(trials):
        f = _random_vector(rng)
        total = int(f.sum()) + int(rng.integers(0, 1000))
        f_max, f_min = int(f.max()), int(f.min())
        C = f_max - f_min
        rep.checked += 1
        gain = extreme_transfer_gain(f, total)
        if not gain > 0:
            rep.fail(f"non-positive gain {gain} for {f.tolist()} (total {total})")
        # monotone decrease in f at fixed gap C, over the real-valued extension
        fr = float(max(f_max, C)) + float(rng.random())
        T = float(total) + 2 * fr
        g0, g1 = transfer_gain(fr, C, T), transfer_gain(fr + 1, C, T)
        if not g1 < g0:
            rep.fail(f"gain not decreasing at f={fr}, C={C}, total={T}: {g0} then {g1}")
    for C in (2, 3, 5):
        rep.checked += 1
        g = transfer_gain(1e6, C, 1e7)
        if not 0 < g < 1e-6:
            rep.fail(f"gain at f=1e6, C={C} is {g}, expected below 1e-6")
    return rep


DEFAULT_ORACLE_CASES = ((5, 1, 2), (5, 2, 2), (6, 2, 2), (6, 2, 3))


def check_oracle_agreement(cases=DEFAULT_ORACLE_CASES, seed: int = 0, budget: int = 20_000) -> Report:
    """EA final H, oracle best H and the closed-form maximum agree on tiny unit graphs."""
    rep = Report("oracle agreement")
    for n, mu, k in cases:
        g = unit_graph(n)
        orc = brute_force_oracle(g, mu, k)
        rec = run(g, None, EaConfig(mu=mu, k=k, budget=budget, seed=seed))
        h_max = entropy_bounds(n, mu, k).H_max
        rep.checked += 1
        if orc.best_H > h_max + 1e-9:
            rep.fail(f"n={n} mu={mu} k={k}: oracle {orc.best_H} above closed-form {h_max}")
        if abs(rec.H_final - orc.best_H) > 1e-9:
            rep.fail(f"n={n} mu={mu} k={k}: EA {rec.H_final} vs oracle {orc.best_H}")
        if abs(orc.best_H - h_max) > 1e-9:
            rep.fail(f"n={n} mu={mu} k={k}: oracle {orc.best_H} below closed-form {h_max} (attainability gap)")
    return rep


def run_all(trials: int = 10_000, seed=0) -> list:
    return [check_golden_bounds(), check_transfer_gain(trials, seed), check_oracle_agreement(seed=seed)]

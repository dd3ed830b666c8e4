import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edotsp.entropy import (
    entropy, entropy_bounds, entropy_delta, extreme_transfer_gain, normalise, raw_entropy, transfer_gain,
)
from edotsp.errors import ConsistencyError
from edotsp.instance import unit_graph
from edotsp.segments import build_table, move_delta, n_segments
from edotsp.tour import Tour, TwoOptMove, apply_two_opt


def equalised_entropy(n, mu, k):
    """Reference: spread 2n*mu occurrences over u segments as evenly as possible."""
    total = 2 * n * mu
    u = math.perm(n, k)
    base, extra = divmod(total, u)
    f = np.array([base + 1] * extra + [base] * (u - extra), dtype=float)
    return raw_entropy(f, total)


@pytest.mark.parametrize("n,mu,k", [(5, 6, 2), (5, 24, 3), (10, 12, 3), (20, 24, 3), (7, 1, 2), (12, 5, 4)])
def test_bounds_match_equalised_profile(n, mu, k):
    b = entropy_bounds(n, mu, k)
    assert b.H_max == pytest.approx(equalised_entropy(n, mu, k), abs=1e-12)
    assert b.H_min == pytest.approx(math.log(2 * n))
    assert b.C_star in (0, 1)
    assert b.u == n_segments(n, k)


def test_c_star_zero_when_divisible():
    b = entropy_bounds(5, 6, 2)  # 60 occurrences over 20 edges
    assert (b.f_min_star, b.C_star, b.H_max) == (3, 0, pytest.approx(math.log(20)))


def test_single_tour_has_minimum_entropy():
    g = unit_graph(9)
    t = Tour.from_perm(np.random.default_rng(1).permutation(9), g)
    v = entropy(build_table([t], 3), 9, 1)
    assert v.H == pytest.approx(math.log(18))


def test_copies_have_minimum_entropy_and_normalise_to_zero():
    g = unit_graph(8)
    t = Tour.from_perm(range(8), g)
    v = entropy(build_table([t] * 4, 2), 8, 4)
    assert v.H == pytest.approx(math.log(16))
    assert v.normalised == pytest.approx(0.0)


def test_normalise_degenerate_span():
    b = entropy_bounds(10, 1, 3)
    assert b.H_max == pytest.approx(b.H_min)
    assert normalise(b.H_min, b) == 1.0


def test_total_mismatch_raises():
    g = unit_graph(6)
    tab = build_table([Tour.from_perm(range(6), g)], 2)
    with pytest.raises(ConsistencyError):
        entropy(tab, 6, 2)


@settings(max_examples=300, deadline=None)
@given(st.integers(5, 30), st.integers(1, 6), st.integers(2, 4), st.integers(0, 10 ** 6), st.data())
def test_delta_matches_recompute(n, mu, k, seed, data):
    k = min(k, n)
    g = unit_graph(n)
    rng = np.random.default_rng(seed)
    tours = [Tour.from_perm(rng.permutation(n), g) for _ in range(mu)]
    tab = build_table(tours, k)
    q = data.draw(st.integers(0, mu - 1))
    a = data.draw(st.integers(0, n - 1))
    m = TwoOptMove.of(a, a + data.draw(st.integers(2, n - 2)), n)
    removed, added = move_delta(tours[q], m, k)
    d = entropy_delta(tab, removed, added, n, mu)
    tours[q] = apply_two_opt(tours[q], m, g)
    after = entropy(build_table(tours, k), n, mu).H
    before = entropy(tab, n, mu).H
    assert d == pytest.approx(after - before, abs=1e-9)


def test_transfer_gain_boundary_cases():
    assert extreme_transfer_gain([1, 3], 100) > 0
    assert extreme_transfer_gain([10, 30, 12], 1000) > 0
    with pytest.raises(ValueError):
        extreme_transfer_gain([1, 2], 100)
    assert transfer_gain(1e6, 2, 1e7) < 1e-6
    # C = 1 transfer only swaps the two counts
    assert transfer_gain(5, 1, 100) == pytest.approx(0.0, abs=1e-15)

"""Classic and frequency-biased 2-OPT mutation."""
from __future__ import annotations

import numpy as np

from .segments import SegmentTable, codec
from .tour import Tour, TwoOptMove, apply_two_opt

CLASSIC = "classic"
BIASED_ABSOLUTE = "biased-absolute"
BIASED_NORMALISED = "biased-normalised"
MUTATION_MODES = (CLASSIC, BIASED_ABSOLUTE, BIASED_NORMALISED)

MAX_RESAMPLES = 32


def make_rng(seed) -> np.random.Generator:
    """Counter-based Philox stream; independent runs get independent seeds."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def spawn_rngs(seed, count: int) -> list:
    return [np.random.Generator(np.random.Philox(s)) for s in np.random.SeedSequence(seed).spawn(count)]


def _partner(a: int, n: int, rng) -> int:
    return (a + 2 + int(rng.integers(n - 3))) % n


def classic_two_opt(t: Tour, rng) -> TwoOptMove:
    """Uniform over the n(n-3)/2 unordered pairs of non-adjacent edges."""
    n = t.n
    a = int(rng.integers(n))
    return TwoOptMove.of(a, _partner(a, n, rng), n)


def sample_segment(freqs: np.ndarray, mode: str, rng) -> int:
    """Index of one of the parent's 2n directed segments.

    ``freqs[s]`` is the population count of segment ``s``; normalised mode picks
    proportionally to it, absolute mode uniformly among the maxima.
    """
    if mode == BIASED_ABSOLUTE:
        top = np.flatnonzero(freqs == freqs.max())
        return int(top[rng.integers(len(top))])
    if mode == BIASED_NORMALISED:
        cum = np.cumsum(freqs)
        return int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    raise ValueError(f"not a biased mode: {mode!r}")


def _cut_edge(seg: int, n: int, k: int, rng) -> int:
    start = seg % n  # reversed windows share their forward twin's edges
    return (start + int(rng.integers(k - 1))) % n


def biased_two_opt(t: Tour, tab: SegmentTable, mode: str, rng, keys=None) -> TwoOptMove:
    """Both cut edges come from segments drawn by population frequency.

    The second edge is redrawn until it is valid against the first; after
    ``MAX_RESAMPLES`` failures it is taken uniformly among valid partners.
    ``keys`` may carry the parent's precomputed segment keys.
    """
    n, k = t.n, tab.k
    if keys is None:
        keys = codec(n, k).windows(t.perm).tolist()
    freqs = tab.lookup(keys)
    a = _cut_edge(sample_segment(freqs, mode, rng), n, k, rng)
    for _ in range(MAX_RESAMPLES):
        b = _cut_edge(sample_segment(freqs, mode, rng), n, k, rng)
        if (a - b) % n not in (0, 1, n - 1):
            return TwoOptMove.of(a, b, n)
    return TwoOptMove.of(a, _partner(a, n, rng), n)


def bias_for(constrained: bool) -> str:
    return BIASED_NORMALISED if constrained else BIASED_ABSOLUTE


def dual_offspring(t: Tour, tab: SegmentTable, constrained: bool, rng, inst, keys=None):
    """(p', p''): one biased 2-OPT child and one classic 2-OPT child of ``t``."""
    m1 = biased_two_opt(t, tab, bias_for(constrained), rng, keys=keys)
    m2 = classic_two_opt(t, rng)
    return apply_two_opt(t, m1, inst), apply_two_opt(t, m2, inst)

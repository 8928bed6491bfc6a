"""Seeded samplers for group elements and near-boundary Cartan data."""

from __future__ import annotations

import numpy as np
from scipy.stats import special_ortho_group

from .._validation import block_slices


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    if n == 1:
        return np.ones((1, 1))
    return special_ortho_group.rvs(n, random_state=rng)


def random_sl(n: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian matrix pushed into SL(n, R) (row sign flip, then det scaling)."""
    g = rng.standard_normal((n, n))
    det = np.linalg.det(g)
    if det < 0:
        g[0] *= -1
        det = -det
    return g / det ** (1.0 / n)


def random_breaks(n: int, rng: np.random.Generator, min_breaks: int = 0) -> tuple[int, ...]:
    """Uniform random subset of {1, ..., n-1} with at least ``min_breaks`` elements."""
    while True:
        mask = rng.random(n - 1) < 0.5
        breaks = tuple(int(c) for c in np.flatnonzero(mask) + 1)
        if len(breaks) >= min_breaks:
            return breaks


def graded_diagonal(n: int, breaks, gaps, within) -> np.ndarray:
    """Positive det-1 diagonal, non-increasing, with prescribed ratios.

    ``gaps[i]`` is the ratio across break i and ``within`` holds the n-1-r
    ratios between neighbours inside clusters, in order.
    """
    ratios = np.ones(n - 1)
    gap_pos = [c - 1 for c in breaks]
    other = [k for k in range(n - 1) if k not in gap_pos]
    ratios[gap_pos] = gaps
    ratios[other] = within
    logs = np.concatenate([[0.0], np.cumsum(np.log(ratios))])
    return np.exp(logs - logs.mean())


def sample_graded_diagonal(n: int, breaks, rng: np.random.Generator,
                           gap_range=(1e-6, 4e-4), within_range=(0.1, 1.0)) -> np.ndarray:
    """Random graded diagonal: log-uniform gaps and within-cluster ratios."""
    lg = np.log(gap_range)
    lw = np.log(within_range)
    gaps = np.exp(rng.uniform(*lg, size=len(breaks)))
    within = np.exp(rng.uniform(*lw, size=n - 1 - len(breaks)))
    return graded_diagonal(n, breaks, gaps, within)


def cluster_spreads(n: int, breaks, rng: np.random.Generator, within_range=(0.2, 0.8)) -> np.ndarray:
    """Within-cluster ratios bounded away from 1 so blocks are not scalar."""
    return np.exp(rng.uniform(*np.log(within_range), size=n - 1 - len(breaks)))


def cluster_of(n: int, breaks) -> np.ndarray:
    out = np.zeros(n, dtype=int)
    for b, sl in enumerate(block_slices(breaks, n)):
        out[sl] = b
    return out

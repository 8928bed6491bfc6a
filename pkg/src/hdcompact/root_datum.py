"""Root system of type A_{n-1}: nodes, positive roots, coroots and coweights.

Roots are stored as index pairs ``(i, j)`` with ``i < j`` (1-based), standing
for ``e_i - e_j``. Everything in this module except the floating point
helpers for Cartan vectors is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import InvalidRankError

TRACE_TOL = 1e-12


@dataclass(frozen=True)
class RootDatumA:
    """Combinatorial data of SL(n, R) with its standard positive system."""

    n: int
    nodes: tuple[int, ...]
    positive_roots: tuple[tuple[int, int], ...]
    sigma: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.n - 1

    def degree(self, root: tuple[int, int]) -> tuple[int, ...]:
        """Expansion of a positive root in simple roots (indicator of nodes i..j-1)."""
        return root_degree(self.n, *root)


@dataclass(frozen=True)
class CartanVector:
    """Diagonal of a trace-zero element of the Cartan subalgebra."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float).reshape(-1)
        if entries.size == 0 or not np.all(np.isfinite(entries)):
            raise ValueError("Cartan vector needs finite entries")
        if abs(entries.sum()) > TRACE_TOL * max(1.0, np.abs(entries).max()):
            raise ValueError(f"Cartan vector is not trace-zero (sum {entries.sum():.3g})")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.size

    def matrix(self) -> np.ndarray:
        return np.diag(self.entries)


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise InvalidRankError(f"n must be a positive integer, got {n!r}")
    return int(n)


def root_degree(n: int, i: int, j: int) -> tuple[int, ...]:
    """Degree vector of the root e_i - e_j (i < j): ones on nodes i..j-1."""
    if not 1 <= i < j <= n:
        raise ValueError(f"({i}, {j}) is not a positive root of A_{n - 1}")
    return tuple(1 if i <= k < j else 0 for k in range(1, n))


def _coroot_exact(n: int, k: int) -> list[Fraction]:
    return [Fraction(n - k, n) if idx < k else Fraction(-k, n) for idx in range(n)]


def build_root_datum(n: int) -> RootDatumA:
    """Build the type A_{n-1} root datum.

    ``sigma[k-1]`` is the value of the sum of positive roots on the k-th coroot,
    computed by direct summation in exact arithmetic.
    """
    n = _check_n(n)
    roots = tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    sigma = []
    for k in range(1, n):
        h = _coroot_exact(n, k)
        total = sum((h[i - 1] - h[j - 1] for i, j in roots), Fraction(0))
        assert total.denominator == 1
        sigma.append(int(total))
    return RootDatumA(n=n, nodes=tuple(range(1, n)), positive_roots=roots, sigma=tuple(sigma))


def coroot_matrix(n: int, k: int) -> np.ndarray:
    """Diagonal coroot H_k: first k entries 1 - k/n, the rest -k/n."""
    n = _check_n(n)
    if not 1 <= k <= n - 1:
        raise ValueError(f"coroot index {k} out of range 1..{n - 1}")
    return np.diag([float(x) for x in _coroot_exact(n, k)])


def _diag_entries(H) -> np.ndarray:
    if isinstance(H, CartanVector):
        return H.entries
    arr = np.asarray(H, dtype=float)
    if arr.ndim == 2:
        if np.any(arr - np.diag(np.diag(arr))):
            raise ValueError("expected a diagonal matrix")
        arr = np.diag(arr)
    return CartanVector(arr).entries


def simple_root_values(H) -> np.ndarray:
    """Values alpha_i(H) = H_i - H_{i+1} of the simple roots on H."""
    h = _diag_entries(H)
    return h[:-1] - h[1:]


def coweight_coordinates(a) -> np.ndarray:
    """Boundary parameters tau_j = a_{j+1}/a_j of a positive sorted diagonal.

    ``1/tau_j`` are the coweight coordinates t_j of ``a`` in A.
    """
    arr = np.asarray(a, dtype=float)
    d = np.diag(arr) if arr.ndim == 2 else arr.reshape(-1)
    if np.any(d <= 0):
        raise ValueError("diagonal entries must be positive")
    if np.any(np.diff(d) > 0):
        raise ValueError("diagonal entries must be sorted non-increasingly")
    if abs(np.sum(np.log(d))) > 1e-9 * max(1.0, np.abs(np.log(d)).max()):
        raise ValueError("diagonal must have determinant 1")
    return d[1:] / d[:-1]


def diagonal_from_coweights(tau) -> np.ndarray:
    """Inverse of :func:`coweight_coordinates`: det-1 diagonal with given ratios."""
    tau = np.asarray(tau, dtype=float).reshape(-1)
    if np.any(tau <= 0):
        raise ValueError("tau must be positive")
    logs = np.concatenate([[0.0], np.cumsum(np.log(tau))])
    return np.exp(logs - logs.mean())


def filtration_rank(n: int, alpha) -> int:
    """Count positive roots whose degree vector is componentwise <= ``alpha``."""
    n = _check_n(n)
    alpha = tuple(int(x) for x in alpha)
    if len(alpha) != n - 1:
        raise ValueError(f"alpha must have length {n - 1}")
    if any(x < 0 for x in alpha):
        raise ValueError("alpha must be componentwise non-negative")
    count = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if all(d <= x for d, x in zip(root_degree(n, i, j), alpha)):
                count += 1
    return count

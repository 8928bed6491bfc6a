"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .exceptions import WrongComponentError

SL_DET_TOL = 1e-6


def check_square(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite float64 square matrix or raise ``ValueError``."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_special_linear(g, tol: float = SL_DET_TOL, name: str = "g") -> np.ndarray:
    """Validate that ``g`` is in SL(n, R) up to ``tol`` and renormalize it.

    The returned copy is divided by ``det(g) ** (1/n)`` so its determinant is 1
    to working precision.
    """
    arr = check_square(g, name)
    n = arr.shape[0]
    sign, logdet = np.linalg.slogdet(arr)
    if sign <= 0:
        raise WrongComponentError(f"{name} has non-positive determinant")
    det = np.exp(logdet)
    if abs(det - 1.0) > tol:
        raise ValueError(f"{name} has determinant {det!r}, expected 1 within {tol}")
    return arr * np.exp(-logdet / n)


def check_orthogonal(k, tol: float = 1e-8, special: bool = True, name: str = "k") -> np.ndarray:
    arr = check_square(k, name)
    err = np.linalg.norm(arr.T @ arr - np.eye(arr.shape[0]))
    if err > tol:
        raise ValueError(f"{name} is not orthogonal (|k^T k - I| = {err:.3g})")
    if special and np.linalg.det(arr) < 0:
        raise ValueError(f"{name} has determinant -1, expected a rotation")
    return arr


def check_matrix_batch(X) -> np.ndarray:
    """Coerce ``X`` to a float array of shape (m, n, n).

    A single square matrix is promoted to a batch of one.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2] or arr.shape[1] == 0:
        raise ValueError(f"expected a batch of square matrices, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite entries")
    return arr


def nodes(n: int) -> tuple[int, ...]:
    return tuple(range(1, n))


def check_subset(S: Iterable[int], n: int, name: str = "S") -> frozenset[int]:
    """Validate a subset of the Dynkin nodes {1, ..., n-1}."""
    out = frozenset(int(i) for i in S)
    bad = [i for i in out if not 1 <= i <= n - 1]
    if bad:
        raise ValueError(f"{name} contains nodes {sorted(bad)} outside 1..{n - 1}")
    return out


def breaks_of(S: Iterable[int], n: int) -> tuple[int, ...]:
    """Break positions D minus S, sorted increasingly."""
    S = check_subset(S, n)
    return tuple(c for c in range(1, n) if c not in S)


def subset_of(breaks: Iterable[int], n: int) -> frozenset[int]:
    b = set(int(c) for c in breaks)
    return frozenset(c for c in range(1, n) if c not in b)


def check_breaks(breaks: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(int(c) for c in breaks)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ValueError(f"breaks must be strictly increasing, got {out}")
    if out and (out[0] < 1 or out[-1] > n - 1):
        raise ValueError(f"breaks must lie in 1..{n - 1}, got {out}")
    return out


def block_slices(breaks: Iterable[int], n: int) -> list[slice]:
    """Index ranges of the diagonal blocks cut out by ``breaks``."""
    edges = [0, *breaks, n]
    return [slice(a, b) for a, b in zip(edges, edges[1:])]


def block_sizes(breaks: Iterable[int], n: int) -> tuple[int, ...]:
    edges = [0, *breaks, n]
    return tuple(b - a for a, b in zip(edges, edges[1:]))

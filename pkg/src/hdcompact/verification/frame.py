"""Finite-difference velocities of group actions in chart coordinates.

Charts are K x K equivariant: rotating ``g`` on either side rotates the flags
and leaves tau and the cluster matrices' invariants alone. Velocities are
therefore measured at the diagonal representative ``diag(a)`` of a chart point
(the point's own singular frame), with generators transported into that frame.
Perturbed points are decomposed from their factored form ``diag(a) @ expm(hX)``
or ``expm(hX) @ diag(a)`` through the Jacobi SVD, so clusters far below the top
singular value keep full relative accuracy.

Coordinates are grouped as

* ``log_tau``: logarithms of the defining functions,
* ``left_flag`` / ``right_flag``: graph coordinates of every break subspace
  over the base subspace span(e_1, ..., e_c),
* ``blocks``: entries of the cluster matrices ``L_i B_i R_i^T``.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .._validation import block_slices
from ..boundary_chart import BoundaryChartPoint, chart_decompose_factored, cluster_matrices
from ..exceptions import StepTooLargeError
from ..root_datum import coroot_matrix

GROUPS = ("log_tau", "left_flag", "right_flag", "blocks")
STEP_FACTOR = 0.01


def elementary(n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit E_ij with 0-based indices."""
    e = np.zeros((n, n))
    e[i, j] = 1.0
    return e


def sl_basis(n: int) -> list[tuple[str, np.ndarray]]:
    """Basis of sl(n): off-diagonal units and the simple coroots (1-based labels)."""
    out = [(f"E{i + 1}{j + 1}", elementary(n, i, j)) for i in range(n) for j in range(n) if i != j]
    out += [(f"H{k}", coroot_matrix(n, k)) for k in range(1, n)]
    return out


def graph_coordinates(basis: np.ndarray, c: int) -> np.ndarray:
    """Coordinates of span(basis[:, :c]) as the graph of a map R^c -> R^(n-c)."""
    q = basis[:, :c]
    return np.linalg.solve(q[:c].T, q[c:].T).T


def coordinates(p: BoundaryChartPoint) -> dict[str, np.ndarray]:
    """Chart coordinates of ``p`` grouped as in the module docstring."""
    return {
        "log_tau": np.log(p.tau),
        "left_flag": np.concatenate([graph_coordinates(p.left_flag.basis, c).ravel() for c in p.breaks]
                                    or [np.zeros(0)]),
        "right_flag": np.concatenate([graph_coordinates(p.right_flag.basis, c).ravel() for c in p.breaks]
                                     or [np.zeros(0)]),
        "blocks": np.concatenate([m.ravel() for m in cluster_matrices(p)]),
    }


def acted_chart(a: np.ndarray, breaks, X: np.ndarray, h: float, side: str) -> BoundaryChartPoint:
    """Chart of ``diag(a) @ expm(hX)`` (side="right") or ``expm(hX) @ diag(a)``."""
    n = a.size
    e = expm(h * X)
    if side == "right":
        return chart_decompose_factored(np.eye(n), a, e, breaks=breaks)
    if side == "left":
        return chart_decompose_factored(e, a, np.eye(n), breaks=breaks)
    raise ValueError("side must be 'left' or 'right'")


def velocity(a: np.ndarray, breaks, X: np.ndarray, h: float, side: str = "right") -> dict[str, np.ndarray]:
    """Central-difference velocity of the chart coordinates along ``X``."""
    plus = coordinates(acted_chart(a, breaks, X, h, side))
    minus = coordinates(acted_chart(a, breaks, X, -h, side))
    return {k: (plus[k] - minus[k]) / (2 * h) for k in GROUPS}


def default_step(tau, h: float | None = None) -> float:
    """Step tied to the smallest defining function; rejects steps that are too large."""
    tau = np.asarray([] if tau is None else tau, dtype=float).reshape(-1)
    limit = STEP_FACTOR * float(np.min(tau)) if tau.size else STEP_FACTOR
    if h is None:
        return min(limit, 1e-6) if not tau.size else limit
    if not h > 0:
        raise ValueError("step must be positive")
    if h > limit * (1 + 1e-12):
        raise StepTooLargeError(f"step {h:g} exceeds 0.01 * min tau = {limit:g}")
    return float(h)


def singular_frame(p: BoundaryChartPoint):
    """Rotations k1, k2 and sorted diagonal a with ``k1 @ diag(a) @ k2`` the point of ``p``.

    Requires all tau > 0.
    """
    if np.any(p.tau <= 0):
        raise ValueError("point lies on the boundary; all tau must be positive")
    n = p.n
    left = np.zeros((n, n))
    right = np.zeros((n, n))
    a = np.zeros(n)
    factor = p.scale * np.exp(-float(p.weights @ np.log(p.tau)))
    for sl, c, blk in zip(block_slices(p.breaks, n), p.coefficients, p.blocks):
        u, s, vt = np.linalg.svd(blk)
        left[:, sl] = p.left_flag.basis[:, sl] @ u
        right[:, sl] = p.right_flag.basis[:, sl] @ vt.T
        a[sl] = factor * c * s
    if np.linalg.det(left) < 0:
        left[:, -1] *= -1
        right[:, -1] *= -1
    return left, a, right.T

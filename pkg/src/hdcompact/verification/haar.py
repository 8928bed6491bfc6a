"""Boundary exponent of Haar measure in Cartan coordinates.

The map ``(theta, u, phi) -> k1 expm(theta) a(u) expm(phi) k2`` is
differentiated factor by factor with central differences. Each partial
derivative is pulled back to the identity through the left-invariant
Maurer-Cartan form ``g^{-1} dg``, so the volume of the resulting n^2 - 1
columns is the Haar density up to a constant. Its log is regressed on
``log tau`` where ``tau = 1/t`` is the defining function attached to the
chosen simple root.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .._validation import nodes
from ..exceptions import InvalidRankError
from ..root_datum import build_root_datum, coroot_matrix
from .reports import AxiomReport, SlopeFit, fit_slope
from .sampling import random_rotation

DEFAULT_T_GRID = tuple(10.0 ** np.arange(2.0, 4.01, 0.5))
FD_STEP = 1e-5
MAX_RESIDUAL = 0.05
SLOPE_RTOL = 0.02


def _skew_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            k = np.zeros((n, n))
            k[i, j], k[j, i] = 1.0, -1.0
            out.append(k)
    return out


def _central(f, h: float) -> np.ndarray:
    return (f(h) - f(-h)) / (2 * h)


def log_haar_density(k2: np.ndarray, u: np.ndarray, h: float = FD_STEP) -> float:
    """log of the Haar density at ``k1 a(u) k2`` in Cartan coordinates.

    ``u`` holds the coordinates of ``log a`` on the coroot basis. The density
    does not depend on ``k1``.
    """
    n = k2.shape[0]
    coroots = [coroot_matrix(n, k) for k in range(1, n)]

    def diag_of(v):
        return np.exp(np.diag(sum(c * H for c, H in zip(v, coroots))))

    a = diag_of(u)
    cols = []
    for kappa in _skew_basis(n):
        # K1 factor: k1 expm(s kappa); pulled back through a and k2
        omega = _central(lambda s: expm(s * kappa), h)
        cols.append(k2.T @ (omega * (a[None, :] / a[:, None])) @ k2)
    for m in range(n - 1):
        e = np.zeros(n - 1)
        e[m] = 1.0
        da = _central(lambda s: diag_of(u + s * e), h)
        cols.append(k2.T @ np.diag(da / a) @ k2)
    for kappa in _skew_basis(n):
        omega = _central(lambda s: expm(s * kappa), h)
        cols.append(k2.T @ omega @ k2)
    w = np.column_stack([c.ravel() for c in cols])
    r = np.linalg.qr(w, mode="r")
    return float(np.sum(np.log(np.abs(np.diag(r)))))


def haar_exponent_fit(n: int, break_index: int, t_grid=None, seed: int = 0,
                      max_residual: float = MAX_RESIDUAL) -> SlopeFit:
    """Fit the exponent of the Haar density in the defining function of one break.

    ``a`` moves along the fundamental coweight of ``break_index``, which
    changes that simple root value (``log t``) and no other. The remaining
    simple-root values are frozen at seeded values in [1, 2].

    Raises
    ------
    ValueError
        ``n`` outside 2..5, invalid node, or a degenerate grid.
    UnreliableFitError
        Fit residual above ``max_residual``.
    """
    if not 2 <= n <= 5:
        raise InvalidRankError("haar_exponent_fit supports 2 <= n <= 5")
    if break_index not in nodes(n):
        raise ValueError(f"break_index must be one of {nodes(n)}")
    t = np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, dtype=float)
    if np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be positive and strictly increasing")
    rng = np.random.default_rng(seed)
    k2 = random_rotation(n, rng)
    base = rng.uniform(1.0, 2.0, size=n - 1)
    log_j = []
    for tv in t:
        u = base.copy()
        u[break_index - 1] = np.log(tv)
        log_j.append(log_haar_density(k2, u))
    return fit_slope(-np.log(t), log_j, parameter=break_index, max_residual=max_residual)


def haar_report(n: int, seed: int = 0, t_grid=None) -> AxiomReport:
    """Fit every break of SL(n); worst relative deviation from -sigma_k."""
    datum = build_root_datum(n)
    details = []
    worst = 0.0
    for k in datum.nodes:
        fit = haar_exponent_fit(n, k, t_grid=t_grid, seed=seed)
        sigma = float(datum.sigma[k - 1])
        dev = abs(fit.slope + sigma) / sigma
        worst = max(worst, dev)
        details.append({"break": k, "sigma": sigma, "slope": fit.slope,
                        "max_residual": fit.max_residual, "relative_error": dev})
    return AxiomReport.from_worst("haar", worst, SLOPE_RTOL, "max", details)

"""Polar, Cartan (KAK), Iwasawa (KAN) and horospherical decompositions of SL(n, R).

Besides the LAPACK-backed SVD, :func:`jacobi_svd` provides a one-sided Jacobi
SVD. For graded inputs of the form ``B @ diag(d)`` (or ``diag(d) @ B``) with
``B`` well conditioned it resolves every singular value and singular subspace
to high relative accuracy, which is what boundary-chart computations need once
singular values span many orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from ._validation import (
    block_slices,
    breaks_of,
    check_special_linear,
    check_square,
    check_subset,
)
from .exceptions import IllConditionedError, WrongComponentError

RECONSTRUCTION_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10
MAX_CONDITION = 1e14

SVDMethod = Literal["lapack", "jacobi-rows", "jacobi-columns"]


@dataclass(frozen=True)
class CartanFactorization:
    """``g = k1 @ a @ k2`` with rotations k1, k2 and sorted positive diagonal a."""

    k1: np.ndarray
    a: np.ndarray
    k2: np.ndarray
    unique: bool = True

    @property
    def singular_values(self) -> np.ndarray:
        return np.diag(self.a).copy()

    def reconstruct(self) -> np.ndarray:
        return (self.k1 * np.diag(self.a)) @ self.k2


@dataclass(frozen=True)
class IwasawaFactorization:
    """``g = k @ a @ n_upper`` with n_upper unit upper-triangular."""

    k: np.ndarray
    a: np.ndarray
    n_upper: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.k @ self.a @ self.n_upper


@dataclass(frozen=True)
class HorosphericalFactorization:
    """``g = k @ m @ a_S @ n_S`` relative to the standard parabolic of ``S``.

    ``m`` is block diagonal with unit-determinant blocks, ``a_S`` is a positive
    scalar on each block and ``n_S`` is block unipotent upper-triangular.
    """

    S: frozenset
    k: np.ndarray
    m: np.ndarray
    a_S: np.ndarray
    n_S: np.ndarray

    @property
    def block_scales(self) -> np.ndarray:
        n = self.k.shape[0]
        return np.array([self.a_S[sl.start, sl.start] for sl in block_slices(breaks_of(self.S, n), n)])

    def reconstruct(self) -> np.ndarray:
        return self.k @ self.m @ self.a_S @ self.n_S


def _sign_fix(u: np.ndarray, vt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # det g > 0 forces det u == det vt; flipping the last singular pair on both
    # sides leaves u @ diag(s) @ vt unchanged.
    if np.linalg.det(u) < 0:
        u = u.copy()
        vt = vt.copy()
        u[:, -1] *= -1
        vt[-1, :] *= -1
    return u, vt


def _jacobi_columns(a: np.ndarray, tol: float, max_sweeps: int):
    """One-sided Hestenes Jacobi on the columns of ``a``: a @ v = u @ diag(s)."""
    w = np.array(a, dtype=float, copy=True)
    n = w.shape[1]
    v = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp, wq = w[:, p], w[:, q]
                alpha = wp @ wp
                beta = wq @ wq
                gamma = wp @ wq
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                new_p = c * wp - s * wq
                new_q = s * wp + c * wq
                w[:, p], w[:, q] = new_p, new_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise np.linalg.LinAlgError("Jacobi SVD did not converge")
    sv = np.linalg.norm(w, axis=0)
    if np.any(sv == 0):
        raise IllConditionedError("matrix is singular")
    return w / sv, sv, v


def jacobi_svd(a, grading: Literal["rows", "columns"] = "columns", tol: float | None = None,
               max_sweeps: int = 60):
    """Singular value decomposition by one-sided Jacobi rotations.

    Parameters
    ----------
    a : (n, n) array_like
        Square invertible matrix.
    grading : {"columns", "rows"}
        ``"columns"`` orthogonalizes the columns of ``a`` (accurate for
        ``B @ diag(d)``); ``"rows"`` works on the rows (accurate for
        ``diag(d) @ B``).
    tol : float, optional
        Relative orthogonality threshold; defaults to ``n * eps``.

    Returns
    -------
    u, s, vt : ndarray
        ``a = u @ diag(s) @ vt`` with ``s`` sorted non-increasingly.
    """
    a = check_square(a, "a")
    n = a.shape[0]
    tol = n * np.finfo(float).eps if tol is None else tol
    if grading == "columns":
        u, s, v = _jacobi_columns(a, tol, max_sweeps)
    elif grading == "rows":
        v, s, u = _jacobi_columns(a.T, tol, max_sweeps)
    else:
        raise ValueError(f"unknown grading {grading!r}")
    order = np.argsort(-s, kind="stable")
    return u[:, order], s[order], v[:, order].T


def svd(a, method: SVDMethod = "lapack"):
    """Full SVD ``a = u @ diag(s) @ vt`` with non-increasing ``s``."""
    if method == "lapack":
        return np.linalg.svd(check_square(a, "a"))
    if method == "jacobi-rows":
        return jacobi_svd(a, grading="rows")
    if method == "jacobi-columns":
        return jacobi_svd(a, grading="columns")
    raise ValueError(f"unknown SVD method {method!r}")


def polar(g, max_condition: float = MAX_CONDITION) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition ``g = q @ p`` with q orthogonal, p SPD."""
    g = check_square(g, "g")
    u, s, vt = np.linalg.svd(g)
    if s[-1] <= 0 or s[0] / s[-1] > max_condition:
        raise IllConditionedError(f"condition number exceeds {max_condition:g}")
    q = u @ vt
    p = (vt.T * s) @ vt
    return q, (p + p.T) / 2


def _is_repeated(s: np.ndarray, rtol: float = 1e-10) -> bool:
    return bool(np.any(np.isclose(s[1:], s[:-1], rtol=rtol, atol=0.0)))


def cartan_kak(g, method: SVDMethod = "lapack", det_tol: float = 1e-6) -> CartanFactorization:
    """Cartan decomposition ``g = k1 @ a @ k2`` computed from the SVD.

    Singular values are sorted non-increasingly. When ``det u = -1`` the last
    column of ``k1`` and the last row of ``k2`` are negated together, which is
    the canonical representative modulo the finite centralizer of A.
    Repeated singular values leave the factorization non-unique; this is
    reported through ``unique=False``.
    """
    u, s, vt = normalized_svd(g, method, det_tol)
    return CartanFactorization(k1=u, a=np.diag(s), k2=vt, unique=not _is_repeated(s))


def normalized_svd(g, method: SVDMethod = "lapack", det_tol: float = 1e-6):
    """SVD of an SL(n) element with the determinant renormalized on ``s``.

    The determinant is read off the singular values. A floating-point matrix
    only determines its determinant to relative accuracy about
    ``n * eps * cond``, so that amount is added to ``det_tol``; otherwise
    well-formed matrices deep in a boundary corner would be rejected.

    The part of the determinant defect inside that rounding envelope is
    charged to the smallest singular value, whose absolute error is of the
    same size; only the remainder rescales all of ``s``. Spreading rounding
    noise of the tiny singular values over the dominant ones would move the
    reconstruction by ``eps * cond`` relative.
    """
    g = check_square(g, "g")
    u, s, vt = svd(g, method)
    if np.any(s <= 0):
        raise IllConditionedError("matrix is singular")
    sign = np.sign(np.linalg.det(u) * np.linalg.det(vt))
    logdet = float(np.sum(np.log(s)))
    if sign <= 0:
        raise WrongComponentError("g has non-positive determinant")
    slack = 10 * s.size * np.finfo(float).eps * s[0] / s[-1]
    if abs(np.expm1(logdet)) > det_tol + slack:
        raise ValueError(f"g has determinant {np.exp(logdet)!r}, expected 1 within {det_tol}")
    u, vt = _sign_fix(u, vt)
    rounding = float(np.clip(logdet, -slack, slack))
    s = s * np.exp(-(logdet - rounding) / s.size)
    s[-1] *= np.exp(-rounding)
    return u, s, vt


def iwasawa_kan(g, det_tol: float = 1e-6) -> IwasawaFactorization:
    """Iwasawa decomposition from a QR factorization with positive diagonal."""
    g = check_special_linear(g, tol=det_tol)
    return _iwasawa(g)


def _iwasawa(g: np.ndarray) -> IwasawaFactorization:
    q, r = np.linalg.qr(g)
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    q = q * signs
    r = signs[:, None] * r
    d = np.diag(r)
    n_upper = r / d[:, None]
    return IwasawaFactorization(k=q, a=np.diag(d), n_upper=np.triu(n_upper))


def horospherical(g, S: Iterable[int], det_tol: float = 1e-6) -> HorosphericalFactorization:
    """Decompose ``g = k m a_S n_S`` relative to the standard parabolic P_S.

    Blocks are cut at the breaks D minus S. Each block of the triangular
    Iwasawa part is split as ``scale * (unit-determinant block)`` with
    ``scale = det(block) ** (1/d)``.
    """
    g = check_special_linear(g, tol=det_tol)
    return _horospherical(g, S)


def _horospherical(g: np.ndarray, S: Iterable[int]) -> HorosphericalFactorization:
    n = g.shape[0]
    S = check_subset(S, n)
    iw = _iwasawa(g)
    r = iw.a @ iw.n_upper
    m = np.zeros_like(r)
    scales = np.zeros(n)
    for sl in block_slices(breaks_of(S, n), n):
        blk = r[sl, sl]
        d = blk.shape[0]
        # triangular with positive diagonal, so the determinant is the diagonal product
        scale = np.exp(np.mean(np.log(np.diag(blk))))
        m[sl, sl] = blk / scale
        scales[sl] = scale
    a_S = np.diag(scales)
    n_S = np.linalg.solve(m @ a_S, r)
    for sl in block_slices(breaks_of(S, n), n):
        n_S[sl, sl] = np.eye(sl.stop - sl.start)
    n_S = np.triu(n_S)
    return HorosphericalFactorization(S=S, k=iw.k, m=m, a_S=a_S, n_S=n_S)


def conjugation_weights(n: int, S: Iterable[int], block_scales) -> np.ndarray:
    """Entrywise factors of ``X -> a X a^{-1}`` for ``a`` in A_S.

    ``block_scales`` holds the positive scalar of ``a`` on each block. The
    factor at (i, j) is the product of ``1/tau`` over the breaks between the
    blocks of i and j, where ``tau_l = scale_{l+1} / scale_l``.
    """
    breaks = breaks_of(S, n)
    scales = np.asarray(block_scales, dtype=float)
    if scales.shape != (len(breaks) + 1,) or np.any(scales <= 0):
        raise ValueError("need one positive scale per block")
    tau = scales[1:] / scales[:-1]
    block_of = np.zeros(n, dtype=int)
    for b, sl in enumerate(block_slices(breaks, n)):
        block_of[sl] = b
    w = np.ones((n, n))
    for i in range(n):
        for j in range(n):
            lo, hi = sorted((block_of[i], block_of[j]))
            prod = np.prod(tau[lo:hi])
            w[i, j] = 1.0 / prod if block_of[i] < block_of[j] else prod
    return w

"""Boundary charts of the compactification of SL(n, R).

A chart point records where a matrix sits relative to the corners of the
resolved homomorphism sphere: break positions between clusters of singular
values, a left (range side) and right (domain side) partial flag, one
boundary defining function ``tau`` per break, unit Hilbert-Schmidt blocks per
cluster and a positive scalar fixed by ``det = 1``.

Conventions. Clusters are ordered by decreasing singular-value scale;
``tau[i]`` is the ratio of the HS scales of cluster i+1 and cluster i and is
attached to the break after cumulative dimension ``breaks[i]``. The matrix is

    g = scale * prod(tau_l ** -w_l) * sum_i coeff_i * L_i @ B_i @ R_i.T

with ``coeff_1 = 1``, ``coeff_{i+1} = coeff_i * tau_i`` and
``w_l = (n - breaks[l]) / n``, the exponents that make the determinant
independent of tau.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import (
    block_sizes,
    block_slices,
    check_breaks,
    check_orthogonal,
    check_square,
)
from .decompositions import SVDMethod, _sign_fix, normalized_svd, svd
from .exceptions import (
    AmbiguousClusteringWarning,
    ChamberError,
    SingularBlockError,
    WrongComponentError,
)
from .face_lattice import FaceDescriptor, describe_face
from .flags import PartialFlag, flag_distance
from .root_datum import CartanVector, simple_root_values

DEFAULT_EPS_BREAK = 1e-3
BLOCK_NORM_TOL = 1e-10
DET_TOL = 1e-9
MAX_BLOCK_CONDITION = 1e14

__all__ = [
    "BoundaryChartPoint",
    "FaceLimit",
    "sphere_project",
    "sl_normalize",
    "corank",
    "tau_profile",
    "chart_decompose",
    "chart_decompose_factored",
    "chart_reconstruct",
    "invert_in_chart",
    "curve_limit",
    "cluster_matrices",
    "fiber_matrix",
    "chart_distance",
    "face_distance",
]


def _log_abs_det(a: np.ndarray) -> tuple[float, float]:
    sign, logdet = np.linalg.slogdet(a)
    return float(sign), float(logdet)


@dataclass(frozen=True)
class BoundaryChartPoint:
    """A point of the compactification in the chart attached to ``breaks``."""

    breaks: tuple[int, ...]
    left_flag: PartialFlag
    right_flag: PartialFlag
    tau: np.ndarray
    blocks: tuple[np.ndarray, ...]
    scale: float

    def __post_init__(self):
        n = self.left_flag.n
        breaks = check_breaks(self.breaks, n)
        object.__setattr__(self, "breaks", breaks)
        if self.right_flag.n != n:
            raise ValueError("left and right flags have different dimensions")
        if self.left_flag.breaks != breaks or self.right_flag.breaks != breaks:
            raise ValueError("flag breaks must match the chart breaks")

        tau = np.array(self.tau, dtype=float).reshape(-1)
        if tau.shape != (len(breaks),):
            raise ValueError(f"need {len(breaks)} tau values, got {tau.size}")
        if not np.all(np.isfinite(tau)) or np.any(tau < 0):
            raise ValueError("tau must be finite and non-negative")
        tau.setflags(write=False)
        object.__setattr__(self, "tau", tau)

        sizes = block_sizes(breaks, n)
        if len(self.blocks) != len(sizes):
            raise ValueError(f"need {len(sizes)} blocks, got {len(self.blocks)}")
        blocks = []
        for d, blk in zip(sizes, self.blocks):
            blk = check_square(blk, "block").copy()
            if blk.shape != (d, d):
                raise ValueError(f"block has shape {blk.shape}, expected {(d, d)}")
            if abs(np.linalg.norm(blk) - 1.0) > BLOCK_NORM_TOL:
                raise ValueError("blocks must have unit Hilbert-Schmidt norm")
            if np.linalg.cond(blk) > MAX_BLOCK_CONDITION:
                raise SingularBlockError("chart block is not invertible")
            blk.setflags(write=False)
            blocks.append(blk)
        object.__setattr__(self, "blocks", tuple(blocks))

        scale = float(self.scale)
        if not np.isfinite(scale) or scale <= 0:
            raise ValueError("scale must be a positive real number")
        object.__setattr__(self, "scale", scale)
        sign, logdet = self._unscaled_logdet()
        if sign <= 0 or abs(n * np.log(scale) + logdet) > DET_TOL:
            raise ValueError("scale is inconsistent with det = 1")

    def _unscaled_logdet(self) -> tuple[float, float]:
        sign, total = 1.0, 0.0
        for m in (self.left_flag.basis, self.right_flag.basis, *self.blocks):
            s, l = _log_abs_det(m)
            sign *= s
            total += l
        return sign, total

    @property
    def n(self) -> int:
        return self.left_flag.n

    @property
    def codim(self) -> int:
        return len(self.breaks)

    @property
    def weights(self) -> np.ndarray:
        return np.array([(self.n - c) / self.n for c in self.breaks])

    @property
    def coefficients(self) -> np.ndarray:
        return np.concatenate([[1.0], np.cumprod(self.tau)])

    @property
    def is_boundary(self) -> bool:
        return bool(np.any(self.tau == 0))

    @property
    def face(self) -> FaceDescriptor:
        """Face whose interior contains the point (breaks with tau = 0)."""
        zero = {c for c, t in zip(self.breaks, self.tau) if t == 0}
        return describe_face(self.n, [c for c in range(1, self.n) if c not in zero])


def sphere_project(g) -> np.ndarray:
    """Radial projection onto the unit Hilbert-Schmidt sphere."""
    g = check_square(g, "g")
    norm = np.linalg.norm(g)
    if norm == 0:
        raise ValueError("cannot project the zero matrix")
    return g / norm


def sl_normalize(e) -> np.ndarray:
    """Inverse of radial projection on the positive-determinant part of the sphere."""
    e = check_square(e, "e")
    sign, logdet = np.linalg.slogdet(e)
    if sign <= 0:
        raise WrongComponentError("determinant must be positive")
    return e * np.exp(-logdet / e.shape[0])


def corank(e, tol: float = 1e-8) -> int:
    """Number of singular values below ``tol`` times the largest one."""
    e = check_square(e, "e")
    if abs(np.linalg.norm(e) - 1.0) > 1e-8:
        raise ValueError("corank expects a matrix of unit Hilbert-Schmidt norm")
    s = np.linalg.svd(e, compute_uv=False)
    return int(np.sum(s < tol * s[0]))


def tau_profile(singular_values) -> np.ndarray:
    """Successive ratios s[j+1]/s[j] of non-increasing singular values."""
    s = np.asarray(singular_values, dtype=float)
    return s[1:] / s[:-1]


def _detect_breaks(s: np.ndarray, eps_break: float) -> tuple[int, ...]:
    ratios = tau_profile(s)
    close = (ratios >= eps_break) & (ratios < 2 * eps_break)
    if np.any(close):
        warnings.warn(
            f"singular value ratio {ratios[close].min():.3g} is within a factor 2 of "
            f"eps_break={eps_break:g}; clustering is ambiguous",
            AmbiguousClusteringWarning,
            stacklevel=3,
        )
    return tuple(int(c) for c in np.flatnonzero(ratios < eps_break) + 1)


def _chart_from_svd(u, s, vt, eps_break, breaks) -> BoundaryChartPoint:
    n = s.size
    if not 0 < eps_break < 1:
        raise ValueError("eps_break must lie in (0, 1)")
    breaks = _detect_breaks(s, eps_break) if breaks is None else check_breaks(breaks, n)
    slices = block_slices(breaks, n)
    scales = np.array([np.linalg.norm(s[sl]) for sl in slices])
    blocks = tuple(np.diag(s[sl] / h) for sl, h in zip(slices, scales))
    log_tau = np.log(scales[1:]) - np.log(scales[:-1])
    weights = np.array([(n - c) / n for c in breaks])
    log_scale = np.log(scales[0]) + float(weights @ log_tau)
    return BoundaryChartPoint(
        breaks=breaks,
        left_flag=PartialFlag(u, breaks),
        right_flag=PartialFlag(vt.T, breaks),
        tau=np.exp(log_tau),
        blocks=blocks,
        scale=float(np.exp(log_scale)),
    )


def chart_decompose(g, eps_break: float = DEFAULT_EPS_BREAK, *, breaks=None,
                    method: SVDMethod = "lapack", det_tol: float = 1e-6) -> BoundaryChartPoint:
    """Chart coordinates of ``g`` computed from its Cartan decomposition.

    Parameters
    ----------
    g : (n, n) array_like
        Element of SL(n, R).
    eps_break : float
        Successive singular-value ratios below this value become breaks.
        Ratios in ``[eps_break, 2 * eps_break)`` trigger an
        :class:`AmbiguousClusteringWarning`.
    breaks : sequence of int, optional
        Pin the chart to these break positions instead of detecting them.
    method : {"lapack", "jacobi-rows", "jacobi-columns"}
        SVD backend.
    det_tol : float
        Allowed deviation of the determinant from 1 before renormalization.
    """
    u, s, vt = normalized_svd(g, method, det_tol)
    return _chart_from_svd(u, s, vt, eps_break, breaks)


def chart_decompose_factored(left, diagonal, right, eps_break: float = DEFAULT_EPS_BREAK, *,
                             breaks=None) -> BoundaryChartPoint:
    """Chart of ``left @ diag(diagonal) @ right`` without forming the product.

    One of ``left``/``right`` must be a rotation; the other may be any
    well-conditioned matrix. The graded core is decomposed with a Jacobi SVD
    so that clusters far below the largest singular value keep full relative
    accuracy, then the rotation is applied to the corresponding flag.
    """
    left = check_square(left, "left")
    right = check_square(right, "right")
    d = np.asarray(diagonal, dtype=float).reshape(-1)
    if d.shape != (left.shape[0],) or right.shape != left.shape:
        raise ValueError("shape mismatch between factors")
    n = d.size
    sign_l, logdet_l = _log_abs_det(left)
    sign_r, logdet_r = _log_abs_det(right)
    if sign_l * sign_r * np.prod(np.sign(d)) <= 0:
        raise WrongComponentError("product must have positive determinant")
    d = d * np.exp(-(logdet_l + logdet_r + np.sum(np.log(np.abs(d)))) / n)

    eye = np.eye(n)
    if np.linalg.norm(left.T @ left - eye) < 1e-10:
        u, s, vt = svd(d[:, None] * right, "jacobi-rows")
        u = left @ u
    elif np.linalg.norm(right @ right.T - eye) < 1e-10:
        u, s, vt = svd(left * d, "jacobi-columns")
        vt = vt @ right
    else:
        raise ValueError("one of left/right must be orthogonal")
    u, vt = _sign_fix(u, vt)
    return _chart_from_svd(u, s, vt, eps_break, breaks)


def _assemble(p: BoundaryChartPoint, coefficients) -> np.ndarray:
    n = p.n
    core = np.zeros((n, n))
    for sl, c, blk in zip(block_slices(p.breaks, n), coefficients, p.blocks):
        core[sl, sl] = c * blk
    return p.left_flag.basis @ core @ p.right_flag.basis.T


def chart_reconstruct(p: BoundaryChartPoint) -> np.ndarray:
    """Matrix represented by a chart point.

    With all ``tau > 0`` this is the element of SL(n, R). If some tau vanish
    the point lies on the boundary and the unit-HS representative built from
    the surviving dominant clusters is returned instead.
    """
    if np.any(p.tau < 0):
        raise ValueError("tau must be non-negative")
    coeff = p.coefficients
    if np.all(p.tau > 0):
        factor = p.scale * np.exp(-float(p.weights @ np.log(p.tau)))
        return factor * _assemble(p, coeff)
    return sphere_project(_assemble(p, coeff))


def invert_in_chart(p: BoundaryChartPoint) -> BoundaryChartPoint:
    """Chart point of the inverse, valid on the boundary as well.

    Breaks are reflected (c -> n - c), the flags are swapped and their
    clusters listed in reverse order (the opposite-parabolic convention), and
    block i becomes the renormalized inverse of block r+2-i. Renormalizing
    the inverse blocks rescales the defining functions by smooth positive
    factors, so ``tau'_j = tau_{r+1-j} * nu_{r+1-j} / nu_{r+2-j}`` with
    ``nu_i = |B_i^{-1}|_HS``; for 1x1 blocks this is pure reversal.
    """
    n = p.n
    r = p.codim
    inverses = []
    for blk in p.blocks:
        if np.linalg.cond(blk) > MAX_BLOCK_CONDITION:
            raise SingularBlockError("cannot invert a singular chart block")
        inverses.append(np.linalg.inv(blk))
    nu = np.array([np.linalg.norm(b) for b in inverses])
    tau = np.array([p.tau[r - 1 - j] * nu[r - 1 - j] / nu[r - j] for j in range(r)])
    new_breaks = tuple(n - c for c in reversed(p.breaks))
    order = list(range(r, -1, -1))
    left_basis = np.hstack([p.right_flag.cluster(i) for i in order])
    right_basis = np.hstack([p.left_flag.cluster(i) for i in order])
    blocks = tuple(inverses[i] / nu[i] for i in order)

    sign, logdet = 1.0, 0.0
    for m in (left_basis, right_basis, *blocks):
        s_, l_ = _log_abs_det(m)
        sign *= s_
        logdet += l_
    if sign <= 0:
        raise WrongComponentError("chart point has negative orientation")
    return BoundaryChartPoint(
        breaks=new_breaks,
        left_flag=PartialFlag(left_basis, new_breaks),
        right_flag=PartialFlag(right_basis, new_breaks),
        tau=tau,
        blocks=blocks,
        scale=float(np.exp(-logdet / n)),
    )


def cluster_matrices(p: BoundaryChartPoint) -> list[np.ndarray]:
    """Basis-free block data: ``L_i @ B_i @ R_i.T`` for every cluster."""
    return [
        p.left_flag.cluster(i) @ blk @ p.right_flag.cluster(i).T
        for i, blk in enumerate(p.blocks)
    ]


def fiber_matrix(p: BoundaryChartPoint) -> np.ndarray:
    """Element of K.M_P carrying the right flag onto the left flag.

    Each block is rescaled to unit absolute determinant, i.e. pushed into M_S.
    """
    out = np.zeros((p.n, p.n))
    for i, blk in enumerate(p.blocks):
        d = blk.shape[0]
        _, logdet = _log_abs_det(blk)
        out += p.left_flag.cluster(i) @ (blk * np.exp(-logdet / d)) @ p.right_flag.cluster(i).T
    return out


def chart_distance(p: BoundaryChartPoint, q: BoundaryChartPoint) -> dict:
    """Componentwise discrepancy between two chart points with equal breaks.

    Flags are compared by principal angles, blocks through
    :func:`cluster_matrices` and tau in absolute value, so the result does
    not depend on bases chosen inside clusters.
    """
    if p.n != q.n or p.breaks != q.breaks:
        raise ValueError("chart points live in different charts")
    blocks = max(
        (float(np.linalg.norm(a - b)) for a, b in zip(cluster_matrices(p), cluster_matrices(q))),
        default=0.0,
    )
    return {
        "left_flag": flag_distance(p.left_flag, q.left_flag),
        "right_flag": flag_distance(p.right_flag, q.right_flag),
        "tau": float(np.max(np.abs(p.tau - q.tau), initial=0.0)),
        "blocks": blocks,
    }


@dataclass(frozen=True)
class FaceLimit:
    """Limit of a ray ``k1 exp(tH) k2`` in a closed boundary face."""

    face: FaceDescriptor
    left_flag: PartialFlag
    right_flag: PartialFlag
    fiber_representative: np.ndarray


def curve_limit(k1, H, k2, tol: float = 1e-10) -> FaceLimit:
    """Boundary limit of ``k1 @ expm(t H) @ k2`` as t -> infinity.

    ``H`` must be a non-zero element of the closed positive chamber. The
    face is the set S of simple roots vanishing on H; the flags come from the
    columns of ``k1`` and ``k2.T`` and the fibre point is the block-diagonal
    part of ``k1 @ k2`` in those bases.
    """
    k1 = check_orthogonal(k1, name="k1")
    k2 = check_orthogonal(k2, name="k2")
    H = H if isinstance(H, CartanVector) else CartanVector(np.diag(H) if np.ndim(H) == 2 else H)
    n = H.n
    if k1.shape != (n, n) or k2.shape != (n, n):
        raise ValueError("k1, k2 and H must have matching dimension")
    alpha = simple_root_values(H)
    if np.any(alpha < -tol):
        raise ChamberError("H is outside the closed positive chamber; sort it with KAK first")
    if np.all(np.abs(alpha) <= tol):
        raise ValueError("H must be non-zero")
    S = [i + 1 for i, a in enumerate(alpha) if abs(a) <= tol]
    face = describe_face(n, S)
    left = PartialFlag(k1, face.breaks)
    right = PartialFlag(k2.T, face.breaks)
    f = k1 @ k2
    fiber = sum(
        left.cluster(i) @ left.cluster(i).T @ f @ right.cluster(i) @ right.cluster(i).T
        for i in range(face.codim + 1)
    )
    return FaceLimit(face=face, left_flag=left, right_flag=right, fiber_representative=fiber)


def face_distance(p: BoundaryChartPoint, limit: FaceLimit) -> dict:
    """Distance from a chart point to a declared face limit.

    Reports flag angles, the fibre discrepancy and the largest tau on the
    face's breaks (the defining functions that must vanish in the limit).
    """
    if p.breaks != limit.face.breaks:
        raise ValueError("chart point and limit use different breaks")
    return {
        "left_flag": flag_distance(p.left_flag, limit.left_flag),
        "right_flag": flag_distance(p.right_flag, limit.right_flag),
        "fiber": float(np.linalg.norm(fiber_matrix(p) - limit.fiber_representative)),
        "tau": float(np.max(p.tau, initial=0.0)),
    }


"""Partial flags in R^n given by an orthonormal basis and break positions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import subspace_angles

from ._validation import check_breaks, check_square

BASIS_TOL = 1e-10


@dataclass(frozen=True)
class PartialFlag:
    """Nested subspaces ``span(basis[:, :c])`` for each break ``c``.

    Bases are only defined up to block-orthogonal changes inside each
    cluster, so flags should be compared through :func:`flag_distance`, never
    through their basis matrices.
    """

    basis: np.ndarray
    breaks: tuple[int, ...]

    def __post_init__(self):
        basis = check_square(self.basis, "flag basis").copy()
        n = basis.shape[0]
        err = np.linalg.norm(basis.T @ basis - np.eye(n))
        if err > BASIS_TOL * max(1, n):
            raise ValueError(f"flag basis is not orthonormal (error {err:.3g})")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "breaks", check_breaks(self.breaks, n))

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def subspace(self, i: int) -> np.ndarray:
        """Orthonormal basis of the i-th subspace (0-based over the breaks)."""
        return self.basis[:, : self.breaks[i]]

    def projectors(self) -> list[np.ndarray]:
        return [self.subspace(i) @ self.subspace(i).T for i in range(len(self.breaks))]

    def cluster(self, i: int) -> np.ndarray:
        """Columns spanning the i-th graded piece (0-based, r+1 pieces)."""
        edges = [0, *self.breaks, self.n]
        return self.basis[:, edges[i]: edges[i + 1]]

    def rotated(self, u) -> "PartialFlag":
        """Image of the flag under the orthogonal map ``u``."""
        return PartialFlag(np.asarray(u) @ self.basis, self.breaks)

    @classmethod
    def standard(cls, n: int, breaks=()) -> "PartialFlag":
        return cls(np.eye(n), tuple(breaks))


def flag_distance(f1: PartialFlag, f2: PartialFlag) -> float:
    """Largest principal angle between corresponding subspaces of two flags."""
    if f1.n != f2.n or f1.breaks != f2.breaks:
        raise ValueError("flags must have the same dimension and breaks")
    worst = 0.0
    for i in range(len(f1.breaks)):
        worst = max(worst, float(np.max(subspace_angles(f1.subspace(i), f2.subspace(i)))))
    return worst


def opposite_flag(flag: PartialFlag) -> PartialFlag:
    """Flag of orthocomplements, in reversed order (breaks c -> n - c)."""
    n = flag.n
    return PartialFlag(flag.basis[:, ::-1], tuple(n - c for c in reversed(flag.breaks)))

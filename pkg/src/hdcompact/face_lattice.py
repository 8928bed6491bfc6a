"""Boundary faces indexed by subsets S of the Dynkin nodes D = {1, ..., n-1}.

Parabolic subgroups are represented by the flags they stabilize; all membership
tests work with orthogonal projectors so they do not depend on a choice of
basis inside the flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from ._validation import block_sizes, breaks_of, check_square, check_subset
from .decompositions import _horospherical
from .flags import PartialFlag, opposite_flag

__all__ = [
    "FaceDescriptor",
    "ParabolicDescriptor",
    "describe_face",
    "enumerate_faces",
    "face_partial_order",
    "standard_parabolic_membership",
    "flag_stabilizer_check",
    "is_fiber_element",
    "opposite_face",
    "opposite_flag",
]


@dataclass(frozen=True)
class FaceDescriptor:
    """Dimension bookkeeping for the closed face attached to S.

    The face fibres over two copies of the flag variety with fibre the
    compactified Levi factor M_S, so ``dim_face = 2 * dim_flag + dim_levi``.
    """

    n: int
    S: frozenset
    block_sizes: tuple[int, ...]
    codim: int
    dim_flag: int
    dim_levi: int
    dim_face: int

    @property
    def breaks(self) -> tuple[int, ...]:
        return breaks_of(self.S, self.n)

    @property
    def is_interior(self) -> bool:
        return self.codim == 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "S": sorted(self.S),
            "breaks": list(self.breaks),
            "block_sizes": list(self.block_sizes),
            "codim": self.codim,
            "dim_flag": self.dim_flag,
            "dim_levi": self.dim_levi,
            "dim_face": self.dim_face,
        }


@dataclass(frozen=True)
class ParabolicDescriptor:
    """A parabolic subgroup conjugate to P_S, given by the flag it stabilizes."""

    flag: PartialFlag
    S: frozenset

    def __post_init__(self):
        S = check_subset(self.S, self.flag.n)
        if breaks_of(S, self.flag.n) != self.flag.breaks:
            raise ValueError("flag breaks must equal D minus S")
        object.__setattr__(self, "S", S)

    @classmethod
    def standard(cls, n: int, S: Iterable[int]) -> "ParabolicDescriptor":
        S = check_subset(S, n)
        return cls(PartialFlag.standard(n, breaks_of(S, n)), S)


def describe_face(n: int, S: Iterable[int]) -> FaceDescriptor:
    S = check_subset(S, n)
    sizes = block_sizes(breaks_of(S, n), n)
    r = len(sizes) - 1
    dim_flag = sum(a * b for a, b in combinations(sizes, 2))
    dim_levi = sum(d * d for d in sizes) - 1 - r
    return FaceDescriptor(
        n=n,
        S=S,
        block_sizes=sizes,
        codim=r,
        dim_flag=dim_flag,
        dim_levi=dim_levi,
        dim_face=2 * dim_flag + dim_levi,
    )


def enumerate_faces(n: int) -> list[FaceDescriptor]:
    """All 2^(n-1) faces, interior (S = D) first, then by decreasing |S|."""
    if n < 1:
        raise ValueError("n must be >= 1")
    D = tuple(range(1, n))
    faces = []
    for size in range(len(D), -1, -1):
        for S in combinations(D, size):
            faces.append(describe_face(n, S))
    return faces


def face_partial_order(S1: Iterable[int], S2: Iterable[int]) -> bool:
    """True iff the face of S1 lies in the closure of the face of S2."""
    return frozenset(S1) <= frozenset(S2)


def opposite_face(S: Iterable[int], n: int) -> frozenset:
    """Image of S under the diagram flip i -> n - i."""
    S = check_subset(S, n)
    return frozenset(n - i for i in S)


def standard_parabolic_membership(g, S: Iterable[int], tol: float = 1e-8) -> bool:
    """Whether ``g`` is block upper-triangular for the blocks of S."""
    g = check_square(g, "g")
    n = g.shape[0]
    edges = [0, *breaks_of(S, n), n]
    for lo, hi in zip(edges[1:-1], edges[2:]):
        if np.max(np.abs(g[lo:hi, :lo])) > tol:
            return False
    return True


def flag_stabilizer_check(g, flag: PartialFlag, tol: float = 1e-8) -> bool:
    """Whether ``g`` maps every subspace of ``flag`` into itself."""
    g = check_square(g, "g")
    eye = np.eye(g.shape[0])
    return all(np.linalg.norm((eye - P) @ g @ P) <= tol for P in flag.projectors())


def _intertwines(g, source: PartialFlag, target: PartialFlag, tol: float) -> bool:
    eye = np.eye(g.shape[0])
    for P, Q in zip(source.projectors(), target.projectors()):
        if np.linalg.norm((eye - Q) @ g @ P) > tol:
            return False
    return True


def is_fiber_element(g, P: ParabolicDescriptor, P_prime: ParabolicDescriptor,
                     tol: float = 1e-8) -> bool:
    """Whether ``g`` lies in the fibre F(P, P') of the face over (P', P).

    Two conditions are checked: ``g`` carries each subspace of P's flag onto
    the matching subspace of P''s flag, and in P's flag basis the
    horospherical factorization of ``g`` has trivial A_S and N_S parts, which
    is the operational form of ``g in K . M_P``.
    """
    if P.S != P_prime.S:
        raise ValueError("P and P_prime must belong to the same face (same S)")
    g = check_square(g, "g")
    if not _intertwines(g, P.flag, P_prime.flag, tol):
        return False
    basis = P.flag.basis
    local = basis.T @ g @ basis
    sign, logdet = np.linalg.slogdet(local)
    if sign == 0 or abs(logdet) > tol:
        return False
    n = g.shape[0]
    if sign < 0:
        # K . M_P may contain det -1 representatives of the finite centralizer
        local = local.copy()
        local[:, -1] *= -1
    h = _horospherical(local, P.S)
    eye = np.eye(n)
    return bool(
        np.max(np.abs(h.a_S - eye)) <= tol and np.max(np.abs(h.n_S - eye)) <= tol
    )

"""Boundary charts, faces and numerical certification for the hd-compactification of SL(n, R)."""

from .boundary_chart import (
    BoundaryChartPoint,
    FaceLimit,
    chart_decompose,
    chart_decompose_factored,
    chart_distance,
    chart_reconstruct,
    cluster_matrices,
    corank,
    curve_limit,
    face_distance,
    fiber_matrix,
    invert_in_chart,
    sl_normalize,
    sphere_project,
    tau_profile,
)
from .decompositions import (
    CartanFactorization,
    HorosphericalFactorization,
    IwasawaFactorization,
    cartan_kak,
    conjugation_weights,
    horospherical,
    iwasawa_kan,
    jacobi_svd,
    polar,
)
from .estimators import BoundaryChartEncoder, BoundaryFaceClassifier, KAKTransformer
from .exceptions import (
    AmbiguousClusteringWarning,
    ChamberError,
    HDCompactError,
    IllConditionedError,
    InvalidRankError,
    SingularBlockError,
    StepTooLargeError,
    UnreliableFitError,
    WrongComponentError,
)
from .face_lattice import (
    FaceDescriptor,
    ParabolicDescriptor,
    describe_face,
    enumerate_faces,
    face_partial_order,
    flag_stabilizer_check,
    is_fiber_element,
    opposite_face,
    standard_parabolic_membership,
)
from .flags import PartialFlag, flag_distance, opposite_flag
from .root_datum import (
    CartanVector,
    RootDatumA,
    build_root_datum,
    coroot_matrix,
    coweight_coordinates,
    diagonal_from_coweights,
    filtration_rank,
    simple_root_values,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

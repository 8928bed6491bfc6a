"""Finite-difference certification of the axioms D1-D4 and related exponents."""

from __future__ import annotations

import numpy as np

from .._validation import block_slices, breaks_of, check_subset, nodes
from ..boundary_chart import (
    chart_decompose,
    chart_decompose_factored,
    chart_distance,
    curve_limit,
    face_distance,
    invert_in_chart,
)
from ..exceptions import InvalidRankError
from ..face_lattice import ParabolicDescriptor, is_fiber_element
from ..flags import PartialFlag, flag_distance
from ..root_datum import CartanVector, coroot_matrix, root_degree
from .frame import acted_chart, default_step, elementary, singular_frame, sl_basis, velocity
from .reports import AxiomReport, fit_slope
from .sampling import (
    cluster_of,
    cluster_spreads,
    graded_diagonal,
    random_breaks,
    random_rotation,
    sample_graded_diagonal,
)

D1_TOL = 1e-7
SLOPE_MIN = 0.95
FIBER_VELOCITY_MIN = 0.1
WITNESS_TOL = 0.05
RANK_RTOL = 1e-6
DEFAULT_TAU_GRID = tuple(10.0 ** -np.arange(2.0, 4.01, 0.5))
D1_MAX_CONDITION = 1e8
ZERO_VELOCITY = 1e-300


def _log_velocity_slope(log_tau, vel) -> float:
    vel = np.asarray(vel, dtype=float)
    if np.all(vel <= ZERO_VELOCITY):
        # identically vanishing velocity: vanishes to every order
        return float("inf")
    return fit_slope(log_tau, np.log(np.maximum(vel, ZERO_VELOCITY))).slope


def _norm(v: dict, groups) -> float:
    return float(np.sqrt(sum(np.sum(v[g] ** 2) for g in groups)))


# ---------------------------------------------------------------- D1


def _resolvable(a: np.ndarray, breaks) -> bool:
    # a dense SVD resolves everything except a lone smallest singular value
    # to relative accuracy eps * a[0] / a[m]; the same must hold for 1 / a
    n = a.size
    last = n - 2 if breaks and breaks[-1] == n - 1 else n - 1
    first = 1 if breaks and breaks[0] == 1 else 0
    return a[0] / a[last] <= D1_MAX_CONDITION and a[first] / a[-1] <= D1_MAX_CONDITION


def _d1_sample(n: int, rng: np.random.Generator, eps_break: float):
    while True:
        breaks = random_breaks(n, rng)
        a = sample_graded_diagonal(n, breaks, rng)
        if not _resolvable(a, breaks):
            continue
        k1 = random_rotation(n, rng)
        k2 = random_rotation(n, rng)
        p = chart_decompose((k1 * a) @ k2, eps_break)
        if p.breaks == breaks and np.all(p.tau >= 1e-6):
            return k1, a, k2, p


def inversion_discrepancy(g, g_inv, eps_break: float = 1e-3) -> dict:
    """Chart discrepancy between inverting in the chart and inverting the matrix."""
    p = chart_decompose(g, eps_break)
    q = invert_in_chart(p)
    direct = chart_decompose(g_inv, eps_break, breaks=q.breaks)
    d = chart_distance(q, direct)
    d["breaks"] = list(p.breaks)
    d["tau_reversal"] = float(np.max(np.abs(q.tau - p.tau[::-1]), initial=0.0)) \
        if all(b.shape == (1, 1) for b in p.blocks) else None
    d["total"] = max(d["left_flag"], d["right_flag"], d["tau"], d["blocks"])
    return d


def inversion_diffeo_check(n: int, samples: int = 500, seed: int = 0,
                           eps_break: float = 1e-3) -> AxiomReport:
    """D1: inversion in chart coordinates against the chart of the inverse matrix.

    Samples are ``k1 @ diag(a) @ k2`` with Haar-random rotations, a random
    break set and log-uniform gaps in [1e-6, 4e-4]. The first sample is the
    identity. Samples are redrawn unless both ``g`` and its inverse keep every
    cluster except a lone smallest singular value within a factor 1e8 of the
    largest: beyond that a dense double-precision SVD cannot resolve the
    small clusters to 1e-7.
    """
    if n < 1:
        raise InvalidRankError("n must be >= 1")
    rng = np.random.default_rng(seed)
    details = []
    worst = 0.0
    for idx in range(samples):
        if idx == 0 or n == 1:
            g = np.eye(n)
            g_inv = np.eye(n)
        else:
            k1, a, k2, _ = _d1_sample(n, rng, eps_break)
            g = (k1 * a) @ k2
            g_inv = (k2.T / a) @ k1.T
        d = inversion_discrepancy(g, g_inv, eps_break)
        d["sample"] = idx
        worst = max(worst, d["total"])
        details.append(d)
    return AxiomReport.from_worst("D1", worst, D1_TOL, "max", details)


# ---------------------------------------------------------------- D2


def _isotropy_generators(n: int, breaks):
    """Right-action generators split into a_S, n_S and m_S parts (0-based)."""
    block = cluster_of(n, breaks)
    a_gen = [(f"H{c}", c) for c in breaks]
    n_gen = [(f"E{i + 1}{j + 1}", elementary(n, i, j))
             for i in range(n) for j in range(n) if block[i] > block[j]]
    m_gen = [(f"E{i + 1}{j + 1}", elementary(n, i, j))
             for i in range(n) for j in range(n) if i != j and block[i] == block[j]]
    for k in range(n - 1):
        if block[k] == block[k + 1]:
            h = np.zeros((n, n))
            h[k, k], h[k + 1, k + 1] = 1.0, -1.0
            m_gen.append((f"E{k + 1}{k + 1}-E{k + 2}{k + 2}", h))
    return a_gen, n_gen, m_gen


def isotropy_vanishing_check(n: int, S, tau_magnitudes=None, seed: int = 0,
                             samples: int = 3) -> AxiomReport:
    """D2: right-action isotropy of the face of S, measured near that face.

    For each sample, diagonal points ``diag(a)`` with every gap proportional
    to one parameter ``tau`` (seeded factors in [0.5, 2]) are generated over
    ``tau_magnitudes``. Dominant clusters come first, so the isotropy of the
    boundary point is block *lower* triangular in this frame:

    * n_S (units below the block diagonal): the velocity of flags and
      cluster matrices must vanish, log-log slope >= 0.95;
    * a_S (fundamental coweights of the breaks): the response of tau_c must
      be ``tau_c`` times a bounded factor, slope >= 0.95;
    * m_S (inside blocks): cluster matrices must keep moving, velocity >= 0.1.

    ``worst_case`` is the smallest ratio measured/threshold, passing at >= 1.
    """
    S = check_subset(S, n)
    breaks = breaks_of(S, n)
    if not breaks:
        raise ValueError("S must be a proper subset of the nodes")
    grid = np.asarray(DEFAULT_TAU_GRID if tau_magnitudes is None else tau_magnitudes, dtype=float)
    log_grid = np.log(grid)
    rng = np.random.default_rng(seed)
    a_gen, n_gen, m_gen = _isotropy_generators(n, breaks)
    details = []
    worst = np.inf
    for sample in range(samples):
        spreads = cluster_spreads(n, breaks, rng)
        factors = np.exp(rng.uniform(np.log(0.5), np.log(2.0), size=len(breaks)))
        points = [graded_diagonal(n, breaks, t * factors, spreads) for t in grid]
        steps = []
        for a in points:
            base = chart_decompose_factored(np.eye(n), a, np.eye(n), breaks=breaks)
            steps.append((a, default_step(base.tau), base.tau))

        for name, c in a_gen:
            X = coroot_matrix(n, c)
            idx = breaks.index(c)
            resp = [tau[idx] * abs(velocity(a, breaks, X, h)["log_tau"][idx]) for a, h, tau in steps]
            slope = _log_velocity_slope(log_grid, resp)
            ratio = slope / SLOPE_MIN
            worst = min(worst, ratio)
            details.append({"sample": sample, "part": "a_S", "generator": name,
                            "slope": slope, "passed": bool(ratio >= 1)})
        for name, X in n_gen:
            vel = [_norm(velocity(a, breaks, X, h), ("left_flag", "right_flag", "blocks"))
                   for a, h, _ in steps]
            slope = _log_velocity_slope(log_grid, vel)
            ratio = slope / SLOPE_MIN
            worst = min(worst, ratio)
            details.append({"sample": sample, "part": "n_S", "generator": name,
                            "slope": slope, "passed": bool(ratio >= 1)})
        for name, X in m_gen:
            vel = min(_norm(velocity(a, breaks, X, h), ("blocks",)) for a, h, _ in steps)
            ratio = vel / FIBER_VELOCITY_MIN
            worst = min(worst, ratio)
            details.append({"sample": sample, "part": "m_S", "generator": name,
                            "min_velocity": vel, "passed": bool(ratio >= 1)})
    return AxiomReport.from_worst("D2", worst, 1.0, "min", details)


# ---------------------------------------------------------------- left-flag velocity


def left_flag_velocity(g, i: int, j: int, h: float | None = None,
                       eps_break: float = 1e-3, breaks=None) -> float:
    """Principal-angle speed of the left flag of g under ``g -> g expm(h E_ij)``.

    ``i < j`` are 1-based. The flag is the one of the chart detected at
    ``g`` (or pinned by ``breaks``); the step defaults to ``0.01 * min tau``
    and larger steps raise :class:`StepTooLargeError`. At interior points
    (no breaks) the flag is trivial and the velocity is 0.
    """
    p = chart_decompose(g, eps_break, breaks=breaks)
    n = p.n
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    h = default_step(p.tau, h)
    if not p.breaks:
        return 0.0
    _, a, k2 = singular_frame(p)
    X = k2 @ elementary(n, i - 1, j - 1) @ k2.T
    moved = acted_chart(a, p.breaks, X, h, "right")
    return flag_distance(PartialFlag.standard(n, p.breaks), moved.left_flag) / h


def vanishing_exponent_table(n: int, base_tau: float = 10 ** -2.5, tau_grid=None) -> dict:
    """Measured vanishing order of the left-flag velocity of every E_ij in every tau_k.

    Diagonal points with all clusters of size one are used; ``tau_k`` runs
    over ``tau_grid`` while the others stay at ``base_tau``. Rows also carry
    two candidate exponent sets for comparison: the root grading
    (1 for i <= k <= j-1) and the alternative 1 for k >= j-1.
    """
    grid = np.asarray(DEFAULT_TAU_GRID if tau_grid is None else tau_grid, dtype=float)
    breaks = nodes(n)
    rows = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            slopes = []
            for k in breaks:
                vel = []
                for t in grid:
                    gaps = np.full(n - 1, base_tau)
                    gaps[k - 1] = t
                    g = np.diag(graded_diagonal(n, breaks, gaps, []))
                    vel.append(left_flag_velocity(g, i, j, breaks=breaks))
                slopes.append(_log_velocity_slope(np.log(grid), vel))
            rows.append({
                "generator": f"E{i}{j}",
                "measured": slopes,
                "root_grading": [int(i <= k <= j - 1) for k in breaks],
                "tail_product": [int(k >= j - 1) for k in breaks],
            })
    return {"n": n, "breaks": list(breaks), "rows": rows}


# ---------------------------------------------------------------- D3


def b_transitivity_rank(p, h: float | None = None, rtol: float = RANK_RTOL) -> int:
    """D3: numerical rank of left and right generator velocities at ``p``.

    Velocities of all n^2 - 1 left-invariant and n^2 - 1 right-invariant
    generators are stacked in coordinates (log tau, flag graph coordinates,
    cluster matrices) and the singular values above ``rtol`` times the
    largest are counted.
    """
    k1, a, k2 = singular_frame(p)
    n = p.n
    h = default_step(p.tau, h)
    rows = []
    for side, frame in (("left", k1), ("right", k2)):
        for _, X in sl_basis(n):
            # transport the generator into the singular frame of p
            Y = frame.T @ X @ frame if side == "left" else frame @ X @ frame.T
            v = velocity(a, p.breaks, Y, h, side)
            rows.append(np.concatenate([v[g] for g in v]))
    s = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(s > rtol * s[0]))


def near_boundary_point(n: int, rng: np.random.Generator, tau_range=(1e-4, 1e-2), min_breaks: int = 1):
    """Seeded chart point ``k1 diag(a) k2`` with gaps log-uniform in ``tau_range``."""
    breaks = random_breaks(n, rng, min_breaks=min(min_breaks, n - 1))
    a = sample_graded_diagonal(n, breaks, rng, gap_range=tau_range, within_range=(0.2, 1.0))
    k1 = random_rotation(n, rng)
    k2 = random_rotation(n, rng)
    return chart_decompose_factored(k1, a, k2, breaks=breaks)


def b_transitivity_report(n: int, samples: int = 100, seed: int = 0) -> AxiomReport:
    rng = np.random.default_rng(seed)
    target = n * n - 1
    details = []
    worst = np.inf
    for idx in range(samples):
        p = near_boundary_point(n, rng)
        rank = b_transitivity_rank(p)
        worst = min(worst, rank)
        details.append({"sample": idx, "breaks": list(p.breaks), "min_tau": float(p.tau.min()),
                        "rank": rank})
    return AxiomReport.from_worst("D3", worst, target, "min", details)


# ---------------------------------------------------------------- D4


def minimality_probe(p, tau_steps: int = 5) -> AxiomReport:
    """D4: for each break, a right-action generator whose left-flag speed is ~ tau_j.

    Starting from ``p``, tau_j alone is lowered by factors 10^(-m/2),
    m = 0..tau_steps-1. Candidates are the units E_ab with a, b on opposite
    sides of the break: at the boundary they would move only the right flag,
    so any motion of the left flag is transverse to the right-action span.
    The witness is the candidate whose fitted slope is closest to 1.
    ``worst_case`` is the largest |slope - 1| over breaks.
    """
    if not p.breaks:
        raise ValueError("point has no boundary hypersurfaces")
    if np.any(p.tau <= 0) or np.any(p.tau >= 1e-2):
        raise ValueError("all tau must lie in (0, 1e-2)")
    _, a0, _ = singular_frame(p)
    n = p.n
    details = []
    worst = 0.0
    for b, c in enumerate(p.breaks):
        points = []
        for m in range(tau_steps):
            a = a0.copy()
            a[c:] *= 10.0 ** (-m / 2)
            a *= np.exp(-np.mean(np.log(a)))
            base = chart_decompose_factored(np.eye(n), a, np.eye(n), breaks=p.breaks)
            points.append((a, default_step(base.tau), np.log(base.tau[b])))
        log_tau = [lt for _, _, lt in points]
        best = None
        for i in range(c):
            for j in range(c, n):
                X = elementary(n, i, j)
                vel = [_norm(velocity(a, p.breaks, X, h), ("left_flag",)) for a, h, _ in points]
                slope = _log_velocity_slope(log_tau, vel)
                key = (abs(slope - 1), j - i)
                if best is None or key < best[0]:
                    best = (key, f"E{i + 1}{j + 1}", slope)
        (dev, _), name, slope = best
        worst = max(worst, dev)
        details.append({"break": c, "witness": name, "slope": slope,
                        "passed": bool(dev <= WITNESS_TOL)})
    return AxiomReport.from_worst("D4", worst, WITNESS_TOL, "max", details)


def minimality_report(n: int, samples: int = 20, seed: int = 0) -> AxiomReport:
    rng = np.random.default_rng(seed)
    details = []
    worst = 0.0
    for idx in range(samples):
        p = near_boundary_point(n, rng, tau_range=(1e-4, 5e-3))
        rep = minimality_probe(p)
        worst = max(worst, rep.worst_case)
        for d in rep.details:
            details.append({"sample": idx, **d})
    return AxiomReport.from_worst("D4", worst, WITNESS_TOL, "max", details)


# ---------------------------------------------------------------- brackets


def _kappa(n: int, i: int, j: int) -> np.ndarray:
    k = np.zeros((n, n), dtype=np.int64)
    k[i, j], k[j, i] = 1, -1
    return k


def bracket_violations(n: int) -> list[dict]:
    """Components of [kappa_ij, kappa_kl] whose degree exceeds the sum of degrees.

    Integer arithmetic throughout. A commutator of antisymmetric matrices is
    antisymmetric, so its expansion is read off the strict upper triangle
    (the coefficient of kappa_ab is C[a, b]); any symmetric remainder is
    reported as a violation as well.
    """
    if not 1 <= n <= 8:
        raise InvalidRankError("bracket_filtration_check supports 1 <= n <= 8")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    deg = {(i, j): np.array(root_degree(n, i + 1, j + 1), dtype=np.int64) for i, j in pairs}
    out = []
    for p in pairs:
        for q in pairs:
            A, B = _kappa(n, *p), _kappa(n, *q)
            C = A @ B - B @ A
            if np.any(C + C.T):
                out.append({"pair": [p, q], "reason": "symmetric remainder"})
            bound = deg[p] + deg[q]
            for a, b in pairs:
                if C[a, b] != 0 and np.any(deg[(a, b)] > bound):
                    out.append({"pair": [p, q], "component": (a, b)})
    return out


def bracket_filtration_check(n: int) -> bool:
    """Whether every commutator of kappa generators respects the degree filtration."""
    return not bracket_violations(n)


def bracket_report(n: int) -> AxiomReport:
    v = bracket_violations(n)
    return AxiomReport.from_worst("brackets", len(v), 0, "max", v)


# ---------------------------------------------------------------- curve limits


def _random_chamber_vector(n: int, rng: np.random.Generator, alpha_range=(0.25, 0.5)) -> CartanVector:
    zero = set(random_breaks(n, rng)) if n > 2 else set()
    if len(zero) == n - 1:
        zero.discard(int(rng.integers(1, n)))
    alpha = np.array([0.0 if k in zero else rng.uniform(*alpha_range) for k in range(1, n)])
    entries = np.concatenate([[0.0], -np.cumsum(alpha)])
    return CartanVector(entries - entries.mean())


def curve_limit_report(n: int, samples: int = 100, seed: int = 0, t: float = 30.0,
                       tol: float = 1e-6) -> AxiomReport:
    """Chart of ``k1 expm(tH) k2`` against the declared limit of the ray.

    ``H`` has simple-root values 0 on a random subset and in [0.25, 0.5]
    elsewhere, so at t = 30 the clusters stay resolvable by a dense SVD.
    Each sample also checks the fibre representative with
    :func:`is_fiber_element` for the limit's flag pair.
    """
    rng = np.random.default_rng(seed)
    details = []
    worst = 0.0
    fiber_ok = True
    for idx in range(samples):
        H = _random_chamber_vector(n, rng)
        k1 = random_rotation(n, rng)
        k2 = random_rotation(n, rng)
        limit = curve_limit(k1, H, k2)
        g = (k1 * np.exp(t * H.entries)) @ k2
        p = chart_decompose(g, breaks=limit.face.breaks)
        d = face_distance(p, limit)
        err = max(d["left_flag"], d["right_flag"])
        P = ParabolicDescriptor(limit.right_flag, limit.face.S)
        P_prime = ParabolicDescriptor(limit.left_flag, limit.face.S)
        ok = is_fiber_element(limit.fiber_representative, P, P_prime)
        fiber_ok &= ok
        worst = max(worst, err)
        details.append({"sample": idx, "S": sorted(limit.face.S), "flag_error": err,
                        "fiber_error": d["fiber"], "max_tau": d["tau"], "is_fiber_element": ok})
    if not fiber_ok:
        worst = float("inf")
    return AxiomReport.from_worst("curve-limit", worst, tol, "max", details)


__all__ = [
    "inversion_discrepancy",
    "inversion_diffeo_check",
    "isotropy_vanishing_check",
    "left_flag_velocity",
    "vanishing_exponent_table",
    "b_transitivity_rank",
    "b_transitivity_report",
    "near_boundary_point",
    "minimality_probe",
    "minimality_report",
    "bracket_violations",
    "bracket_filtration_check",
    "bracket_report",
    "curve_limit_report",
]

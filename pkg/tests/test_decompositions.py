import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import diag_det1, random_sl, rotation
from hdcompact import (
    IllConditionedError,
    WrongComponentError,
    cartan_kak,
    conjugation_weights,
    horospherical,
    iwasawa_kan,
    jacobi_svd,
    polar,
    standard_parabolic_membership,
)
from hdcompact._validation import block_slices, breaks_of
from hdcompact.decompositions import svd

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)


def test_polar_examples():
    q, p = polar(np.eye(3))
    np.testing.assert_allclose(q, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(p, np.eye(3), atol=1e-14)
    r = rotation(3, np.random.default_rng(0))
    q, p = polar(r)
    np.testing.assert_allclose(q, r, atol=1e-12)
    np.testing.assert_allclose(p, np.eye(3), atol=1e-12)
    q, p = polar(np.diag([2.0, 0.5]))
    np.testing.assert_allclose(q, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(p, np.diag([2.0, 0.5]), atol=1e-14)


def test_polar_rejects_singular():
    with pytest.raises(IllConditionedError):
        polar(np.diag([1.0, 1e-16]))


@given(dims, seeds)
def test_polar_properties(n, seed):
    g = random_sl(n, np.random.default_rng(seed))
    q, p = polar(g)
    np.testing.assert_allclose(q @ p, g, atol=1e-10 * np.linalg.norm(g))
    np.testing.assert_allclose(q.T @ q, np.eye(n), atol=1e-12)
    assert np.all(np.linalg.eigvalsh(p) > 0)
    np.testing.assert_array_equal(p, p.T)


def test_kak_examples():
    f = cartan_kak(np.eye(3))
    np.testing.assert_allclose(f.reconstruct(), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(f.a, np.eye(3))
    assert not f.unique
    f = cartan_kak(np.diag([3.0, 1 / 3]))
    np.testing.assert_allclose(f.a, np.diag([3.0, 1 / 3]), rtol=1e-14)
    # the sign ambiguity is shared between the two factors
    np.testing.assert_allclose(np.abs(f.k1), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(f.k1 @ f.k2, np.eye(2), atol=1e-15)
    assert f.unique


@given(dims, seeds)
def test_kak_properties(n, seed):
    rng = np.random.default_rng(seed)
    g = random_sl(n, rng)
    f = cartan_kak(g)
    np.testing.assert_allclose(f.reconstruct(), g, atol=1e-10 * np.linalg.norm(g))
    for k in (f.k1, f.k2):
        np.testing.assert_allclose(k.T @ k, np.eye(n), atol=1e-12)
        assert np.linalg.det(k) > 0
    s = f.singular_values
    assert np.all(np.diff(s) <= 0) and np.all(s > 0)
    assert abs(np.sum(np.log(s))) < 1e-12
    # singular values are K x K invariant
    u, v = rotation(n, rng), rotation(n, rng)
    np.testing.assert_allclose(cartan_kak(u @ g @ v).singular_values, s, rtol=1e-10)


def test_kak_rejects_negative_determinant():
    with pytest.raises(WrongComponentError):
        cartan_kak(np.diag([-1.0, 1.0]))


def test_iwasawa_examples():
    f = iwasawa_kan(np.eye(3))
    for m in (f.k, f.a, f.n_upper):
        np.testing.assert_allclose(m, np.eye(3), atol=1e-15)
    u = np.array([[1.0, 3.0, -2.0], [0, 1, 4], [0, 0, 1]])
    f = iwasawa_kan(u)
    np.testing.assert_allclose(f.k, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(f.a, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(f.n_upper, u, atol=1e-14)
    g = np.diag([2.0, 0.5]) @ np.array([[1.0, 5.0], [0.0, 1.0]])
    f = iwasawa_kan(g)
    np.testing.assert_allclose(f.k, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(f.a, np.diag([2.0, 0.5]), atol=1e-14)
    assert f.n_upper[0, 1] == pytest.approx(5.0, abs=1e-13)


@given(dims, seeds)
def test_iwasawa_properties(n, seed):
    g = random_sl(n, np.random.default_rng(seed))
    f = iwasawa_kan(g)
    np.testing.assert_allclose(f.reconstruct(), g, atol=1e-10 * np.linalg.norm(g))
    np.testing.assert_allclose(np.diag(f.n_upper), 1.0)
    np.testing.assert_array_equal(np.tril(f.n_upper, -1), 0.0)
    assert np.linalg.det(f.k) > 0
    assert abs(np.prod(np.diag(f.a)) - 1) < 1e-10


def test_horospherical_examples():
    for S in ([], [1], [1, 2]):
        f = horospherical(np.eye(3), S)
        for m in (f.k, f.m, f.a_S, f.n_S):
            np.testing.assert_allclose(m, np.eye(3), atol=1e-15)
    g = np.diag([4.0, 1.0, 0.25])
    f = horospherical(g, [])
    np.testing.assert_allclose(f.k, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(f.m, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(f.a_S, g, atol=1e-15)
    np.testing.assert_allclose(f.n_S, np.eye(3), atol=1e-15)


@given(dims, seeds)
def test_horospherical_no_breaks(n, seed):
    g = random_sl(n, np.random.default_rng(seed))
    f = horospherical(g, range(1, n))
    np.testing.assert_allclose(f.a_S, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(f.n_S, np.eye(n), atol=1e-15)
    np.testing.assert_allclose(f.k @ f.m, g, atol=1e-10 * np.linalg.norm(g))
    assert np.linalg.det(f.m) == pytest.approx(1.0, abs=1e-10)


@given(dims, seeds, st.data())
def test_horospherical_structure(n, seed, data):
    g = random_sl(n, np.random.default_rng(seed))
    S = data.draw(st.sets(st.integers(1, n - 1)))
    f = horospherical(g, S)
    np.testing.assert_allclose(f.reconstruct(), g, atol=1e-10 * np.linalg.norm(g))
    breaks = breaks_of(S, n)
    for sl in block_slices(breaks, n):
        assert abs(abs(np.linalg.det(f.m[sl, sl])) - 1) < 1e-10
        np.testing.assert_allclose(f.n_S[sl, sl], np.eye(sl.stop - sl.start))
        np.testing.assert_allclose(f.a_S[sl, sl], f.a_S[sl.start, sl.start] * np.eye(sl.stop - sl.start))
    assert standard_parabolic_membership(f.m @ f.a_S @ f.n_S, S)
    # the empty subset refines Iwasawa
    if not S:
        np.testing.assert_allclose(f.a_S, iwasawa_kan(g).a, rtol=1e-12)
        np.testing.assert_allclose(f.m, np.eye(n), atol=1e-12)


@given(st.integers(2, 6), seeds, st.data())
def test_graded_conjugation(n, seed, data):
    rng = np.random.default_rng(seed)
    S = data.draw(st.sets(st.integers(1, n - 1), max_size=n - 2))
    breaks = breaks_of(S, n)
    scales = np.exp(rng.uniform(-3, 3, size=len(breaks) + 1))
    a = np.zeros(n)
    for sl, s in zip(block_slices(breaks, n), scales):
        a[sl] = s
    # random block-unipotent upper element of N_S
    mask = np.zeros((n, n), dtype=bool)
    for i, si in enumerate(block_slices(breaks, n)):
        for sj in block_slices(breaks, n)[i + 1:]:
            mask[si, sj] = True
    nil = np.eye(n) + np.where(mask, rng.standard_normal((n, n)), 0.0)
    conj = np.diag(a) @ nil @ np.diag(1 / a)
    assert standard_parabolic_membership(conj, S)
    np.testing.assert_allclose(np.where(mask, 0, conj), np.eye(n), atol=1e-12)
    w = conjugation_weights(n, S, scales)
    np.testing.assert_allclose(conj, w * nil, rtol=1e-12, atol=1e-300)


def test_conjugation_weights_product_of_tau():
    # blocks (1, 2, 1) with scales 8, 2, 1/32: tau = (1/4, 1/64)
    w = conjugation_weights(4, {2}, [8.0, 2.0, 1 / 32])
    assert w[0, 1] == pytest.approx(4.0)
    assert w[0, 3] == pytest.approx(256.0)
    assert w[1, 3] == pytest.approx(64.0)
    assert w[1, 2] == 1.0
    assert w[3, 0] == pytest.approx(1 / 256)


@pytest.mark.parametrize("grading", ["rows", "columns"])
def test_jacobi_svd_matches_lapack(grading, rng):
    g = random_sl(5, rng)
    u, s, vt = jacobi_svd(g, grading)
    np.testing.assert_allclose(u * s @ vt, g, atol=1e-12)
    np.testing.assert_allclose(s, np.linalg.svd(g, compute_uv=False), rtol=1e-12)
    np.testing.assert_allclose(u.T @ u, np.eye(5), atol=1e-13)


def test_jacobi_svd_graded_relative_accuracy(rng):
    # singular values spanning 30 orders of magnitude, reached only through the graded form
    b = rotation(4, rng) + 0.3 * rng.standard_normal((4, 4))
    d = np.array([1e10, 1e0, 1e-8, 1e-20])
    u, s, vt = svd(d[:, None] * b, "jacobi-rows")
    # an exact oracle: the singular values of diag(d) B equal those of the scaled QR factor
    # for strongly graded rows, s_i = d_i times the distance of row i of B to the
    # span of the previous rows, up to relative O(d_{i+1}/d_i)
    r = np.linalg.qr(b.T, mode="r")
    expected = np.abs(np.diag(r)) * d
    np.testing.assert_allclose(s, expected, rtol=1e-6)

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdcompact import (
    CartanVector,
    InvalidRankError,
    build_root_datum,
    coroot_matrix,
    coweight_coordinates,
    diagonal_from_coweights,
    filtration_rank,
    simple_root_values,
)
from hdcompact.root_datum import root_degree


def brute_force_sigma(n):
    # sum of e_i - e_j over i < j, evaluated on the diagonal coroot entries
    out = []
    for k in range(1, n):
        h = [Fraction(n - k, n)] * k + [Fraction(-k, n)] * (n - k)
        out.append(sum(h[i] - h[j] for i, j in combinations(range(n), 2)))
    return tuple(out)


def test_rank_zero_datum():
    d = build_root_datum(1)
    assert d.nodes == () and d.positive_roots == () and d.sigma == ()


def test_sl2_and_sl3_datum():
    assert build_root_datum(2).sigma == (1,)
    assert build_root_datum(2).positive_roots == ((1, 2),)
    d3 = build_root_datum(3)
    assert set(d3.positive_roots) == {(1, 2), (1, 3), (2, 3)}
    assert d3.sigma == (2, 2)


@pytest.mark.parametrize("n", range(1, 13))
def test_sigma_matches_brute_force_and_closed_form(n):
    d = build_root_datum(n)
    assert d.sigma == brute_force_sigma(n)
    assert d.sigma == tuple(k * (n - k) for k in range(1, n))
    assert len(d.positive_roots) == n * (n - 1) // 2
    assert d.nodes == tuple(range(1, n))


@pytest.mark.parametrize("n", [0, -3])
def test_invalid_rank(n):
    with pytest.raises(InvalidRankError):
        build_root_datum(n)


def test_coroot_matrices():
    np.testing.assert_allclose(coroot_matrix(2, 1), np.diag([0.5, -0.5]))
    np.testing.assert_allclose(coroot_matrix(3, 2), np.diag([1 / 3, 1 / 3, -2 / 3]))
    for n in range(2, 7):
        for k in range(1, n):
            assert abs(np.trace(coroot_matrix(n, k))) < 1e-15
    with pytest.raises(ValueError):
        coroot_matrix(3, 3)


def test_coroots_are_dual_to_simple_roots():
    for n in range(2, 7):
        vals = np.array([simple_root_values(np.diag(coroot_matrix(n, k))) for k in range(1, n)])
        np.testing.assert_allclose(vals, np.eye(n - 1), atol=1e-15)


def test_simple_root_values_examples():
    np.testing.assert_allclose(simple_root_values(CartanVector([1.0, -1.0])), [2.0])
    np.testing.assert_allclose(simple_root_values(np.zeros(3)), [0.0, 0.0])
    np.testing.assert_allclose(simple_root_values(coroot_matrix(3, 1)), [1.0, 0.0], atol=1e-15)


def test_cartan_vector_requires_trace_zero():
    with pytest.raises(ValueError):
        CartanVector([1.0, 0.0])


def test_coweight_coordinates_examples():
    np.testing.assert_allclose(coweight_coordinates(np.eye(3)), [1.0, 1.0])
    np.testing.assert_allclose(coweight_coordinates(np.diag([10, 0.1])), [0.01])
    np.testing.assert_allclose(coweight_coordinates(np.diag([4, 1, 0.25])), [0.25, 0.25])
    with pytest.raises(ValueError):
        coweight_coordinates(np.diag([0.5, 2.0]))
    with pytest.raises(ValueError):
        coweight_coordinates(np.diag([-1.0, -1.0]))


@given(st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=6))
def test_coweights_invert_reconstruction(tau):
    a = diagonal_from_coweights(tau)
    np.testing.assert_allclose(coweight_coordinates(np.diag(a)), tau, rtol=1e-12)
    assert abs(np.sum(np.log(a))) < 1e-12


def test_filtration_rank_examples():
    assert filtration_rank(3, (0, 0)) == 0
    assert filtration_rank(3, (1, 1)) == 3
    assert filtration_rank(3, (1, 0)) == 1
    with pytest.raises(ValueError):
        filtration_rank(3, (-1, 0))


@given(st.integers(2, 7), st.data())
def test_filtration_rank_monotone(n, data):
    alpha = data.draw(st.lists(st.integers(0, 2), min_size=n - 1, max_size=n - 1))
    bump = data.draw(st.integers(0, n - 2))
    beta = list(alpha)
    beta[bump] += 1
    assert filtration_rank(n, alpha) <= filtration_rank(n, beta)
    assert filtration_rank(n, [1] * (n - 1)) == n * (n - 1) // 2


def test_root_degree():
    assert root_degree(3, 1, 3) == (1, 1)
    assert root_degree(4, 2, 3) == (0, 1, 0)
    assert build_root_datum(3).degree((1, 2)) == (1, 0)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatrigid import gradedhodge as gh
from quatrigid import liecore as lc
from quatrigid.quatmat import antidiag

FROZEN_DIMS = {2: {-2: 1, -1: 4, 0: 11, 1: 4, 2: 1}, 3: {-2: 1, -1: 6, 0: 22, 1: 6, 2: 1}}


@pytest.mark.parametrize("n", [2, 3])
def test_graded_dims(n):
    dims = gh.graded_dims(n)
    assert dims == FROZEN_DIMS[n]
    assert sum(dims.values()) == (n + 1) * (2 * n + 3)
    assert all(dims[k] == dims[-k] for k in (1, 2))


@pytest.mark.parametrize("n", [2, 3])
def test_ad_v_spectrum(n):
    eig = gh.ad_spectrum(n)
    rounded = np.round(eig.real)
    assert np.max(np.abs(eig - rounded)) < 1e-11
    assert set(rounded.astype(int)) == {-2, -1, 0, 1, 2}
    # multiplicities over R are twice the complex graded dimensions
    counts = {k: int(np.sum(rounded == k)) for k in gh.DEGREES}
    assert counts == {k: 2 * v for k, v in FROZEN_DIMS[n].items()}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decomposition_recovers_element(seed):
    n = 2
    x = lc.random_element(gh.spc_tag(n), seed).mat
    g = gh.grade_decompose(x, n)
    assert np.allclose(g.total(), x)
    assert gh.eigen_residual(g, n) < 1e-11 * (1 + np.linalg.norm(x) ** 2)


def test_grade_decompose_rejects_non_members():
    with pytest.raises(ValueError):
        gh.grade_decompose(np.eye(6), 2)


@pytest.mark.parametrize("n", [2, 3])
def test_grading_report(n):
    r = gh.grading_report(n, 100, 61)
    assert r.bracket_residual <= 1e-11
    assert r.eigen_residual <= 1e-11
    assert r.subalgebra_residual <= 1e-11
    assert max(r.pattern_residuals.values()) <= 1e-12
    assert r.gl_image_dims == {-2: 0, -1: n, 0: n * n + 1, 1: n, 2: 0}


def test_block_patterns_have_their_degree():
    n = 3
    rng = np.random.default_rng(62)
    u, w = rng.normal(size=n) + 0j, rng.normal(size=n) + 0j
    assert gh.pure_degree(gh.gr_minus2(1.5, n), n) == -2
    assert gh.pure_degree(gh.gr_minus1(u, w, n), n) == -1
    assert gh.pure_degree(gh.random_gr_zero(n, rng), n) == 0
    assert gh.pure_degree(lc.random_element(gh.spc_tag(n), rng).mat, n) is None


def test_unsigned_minus_one_column_is_not_symplectic():
    """With both reversed vectors entering the last column with a plus sign the
    matrix leaves sp(2n+2,C); the u-part needs a minus sign."""
    n = 2
    u, w = np.array([1.0, 2.0]), np.array([0.5, -1.0])
    x = gh.gr_minus1(u, w, n)
    x[n + 1 : 2 * n + 1, 2 * n + 1] = u[::-1]
    assert lc.membership_residual(x, gh.spc_tag(n)) > 1
    assert lc.membership_residual(gh.gr_minus1(u, w, n), gh.spc_tag(n)) < 1e-14


def test_gr_zero_conditions():
    n = 2
    j0 = antidiag(n)
    r = np.array([[1.0, 2.0], [3.0, 1.0]])  # J0 R is symmetric
    assert np.allclose(j0 @ r, (j0 @ r).T)
    x = gh.gr_zero(0.3, np.eye(n), r, r, n)
    assert lc.membership_residual(x, gh.spc_tag(n)) < 1e-14
    # diag(1, 2) gives J0 R = [[0, 2], [1, 0]], not symmetric
    bad = gh.gr_zero(0.3, np.eye(n), np.diag([1.0, 2.0]), r, n)
    assert lc.membership_residual(bad, gh.spc_tag(n)) > 0.1


def test_gl_image():
    a = np.arange(9.0).reshape(3, 3)
    x = gh.gl_image(a)
    assert lc.membership_residual(x, gh.spc_tag(2)) < 1e-12
    assert np.array_equal(x[:3, :3], a)


def test_invalid_n():
    with pytest.raises(ValueError):
        gh.grading_report(1)

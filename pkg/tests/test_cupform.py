import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatrigid import cupform as cf
from quatrigid import liecore as lc
from quatrigid import weitzenbock as wz

seeds = st.integers(0, 2**32 - 1)


def random_two_form(n, rng):
    a = rng.normal(size=(2 * n, 2 * n))
    return a - a.T


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_fast_wedge_matches_permutation_oracle(seed, n):
    ks = cf.KahlerStructure(n)
    phi = random_two_form(n, np.random.default_rng(seed))
    fast, slow = cf.wedge_top_ratio(phi, ks), cf.wedge_top_ratio_oracle(phi, ks)
    assert abs(fast - slow) <= 1e-12 * (1 + np.sum(phi**2))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wedge_calibration(n):
    ks = cf.KahlerStructure(n)
    assert cf.wedge_top_ratio_oracle(ks.omega, ks) == pytest.approx(1.0, abs=1e-12)
    assert cf.wedge_top_ratio(ks.omega, ks) == pytest.approx(1.0, abs=1e-12)
    # a single pair form dx1 ^ dy1 carries 1/n of the top form
    e = np.zeros((2 * n, 2 * n))
    e[0, 1], e[1, 0] = 1.0, -1.0
    assert cf.wedge_top_ratio_oracle(e, ks) == pytest.approx(1.0 / n, abs=1e-12)


def test_wedge_rejects_symmetric_input():
    with pytest.raises(ValueError):
        cf.wedge_top_ratio(np.eye(4), cf.KahlerStructure(2))


def test_top_form_value_is_alternating():
    rng = np.random.default_rng(41)
    forms = [random_two_form(2, rng) for _ in range(2)]
    assert cf.top_form_value(forms) == pytest.approx(cf.top_form_value(forms[::-1]), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_lemma_square_constant(n):
    r = cf.lemma_square_check(n, 100, 42 + n)
    assert r["spread"] <= 1e-9
    assert r["same_sign"] and r["sign"] == -1
    # frozen: the ratio is -2/n with omega(E_k, iE_k) = 1
    assert r["c_estimate"] == pytest.approx(-2.0 / n, rel=1e-9)
    assert r["delta_factor"] == pytest.approx(-4.0, rel=1e-9)
    assert r["delta_factor_spread"] <= 1e-9
    assert r["lambda_y_iy_over_delta_sq"] == pytest.approx(-8.0, rel=1e-9)
    assert r["delta_formula_residual"] <= 1e-12
    assert r["type_defect"] <= 1e-12


def test_bracket_square_is_antisymmetric():
    eta = cf.random_kernel_cochain(2, 43)
    sq = cf.bracket_square(cf.sp_form_from_cochain(eta))
    assert sq.antisymmetry_defect() < 1e-12


def test_lambda_sp_checks_membership():
    x = lc.random_element(lc.AlgebraTag(lc.Kind.SP, 2), 44)
    assert np.isfinite(cf.lambda_sp(x))
    with pytest.raises(ValueError):
        cf.lambda_sp(np.eye(6))
    with pytest.raises(ValueError):
        cf.lambda_primes(np.eye(12))


def test_jq_image_lies_in_sp():
    rng = np.random.default_rng(45)
    alg = lc.AlgebraTag(lc.Kind.SP, 2)
    e = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    x = cf.jq_image(e + e.T)
    assert lc.membership_residual(x, alg) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_lambda_prime_identities(n):
    r = cf.lambdappp_vanishing(n, 100, 46)
    for key in ("lp_on_bar", "lpp_on_s2", "mixed_lp", "mixed_lpp"):
        assert r[key] <= 1e-11
    assert r["trace_formula"] <= 1e-10
    assert r["eight_formula"] <= 1e-10
    assert r["lp_jz"] == pytest.approx(-2.0, rel=1e-10)
    assert r["lpp_jz"] == pytest.approx(2.0, rel=1e-10)
    assert r["lp_jz_spread"] <= 1e-10 and r["lpp_jz_spread"] <= 1e-10
    assert r["norm_ratio"] <= 1e-12


def test_z_blocks_in_so():
    rng = np.random.default_rng(47)
    alg = lc.AlgebraTag(lc.Kind.SO, 2)
    for side in (False, True):
        z = cf.z_block(cf.random_s2_block(2, rng, side))
        assert lc.membership_residual(z, alg) < 1e-12
        assert np.allclose(cf.b_of_z(cf.z_block(cf.b_of_z(z))), cf.b_of_z(z))


@pytest.mark.parametrize("n", [2, 3])
def test_anisotropy(n):
    r = cf.anisotropy_check(n, 100, 48, unit_samples=10000)
    assert r["spread"] <= 1e-9
    assert max(r["cross_lambda_prime"], r["cross_lambda_double_prime"]) <= 1e-11
    assert r["type_defect"] <= 1e-12
    assert r["unit_min_ratio"] >= 0.9
    # frozen: same constant as the sp(n,1) square, -2/n
    assert r["c_estimate"] == pytest.approx(-2.0 / n, rel=1e-9)
    assert r["alpha_only_constant"] == pytest.approx(-2.0 / n, rel=1e-9)


def test_type_labels_are_honest():
    eta = cf.random_kernel_cochain(2, 49)
    p = cf.random_kernel_cochain(2, 50, conjugate=True)
    a, ap = cf.so_form_from_cochain(eta), cf.so_form_from_conjugate_cochain(p)
    assert a.type_label == cf.TYPE_10 and ap.type_label == cf.TYPE_01
    assert cf.type_defect(a, cf._so_j(False)) < 1e-12
    assert cf.type_defect(ap, lambda z: -cf._so_j(True)(z)) < 1e-12
    assert (a + ap).type_label == cf.UNRESTRICTED


def test_ratio_functional_is_quadratic():
    ks = cf.KahlerStructure(2)
    eta = cf.random_kernel_cochain(2, 51)
    a = cf.so_form_from_cochain(eta)
    zero = cf._zero_like(a)
    doubled = cf.PValuedOneForm(2, a.target, 2 * a.values, a.type_label)
    assert cf.ratio_functional(doubled, zero, ks) == pytest.approx(4 * cf.ratio_functional(a, zero, ks))


def test_forms_are_invariant():
    r = cf.lambda_invariance(2, 30, 52)
    assert r["lambda_sp"] < 1e-11
    assert r["lambda_primes"] < 1e-11


def test_kernel_cochains_are_in_kernel():
    eta = cf.random_kernel_cochain(2, 53)
    assert wz.energy_identity(eta).t_energy < 1e-10 * (1 + eta.norm_sq())

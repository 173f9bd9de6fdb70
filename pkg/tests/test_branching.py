import numpy as np
import pytest

from quatrigid import branching as br
from quatrigid import liecore as lc
from quatrigid.liecore import Kind

# frozen from an independent count: dim S^2 C^m = m(m+1), dim L^2 C^m = m(m-1) (real)
FROZEN_TABLES = {
    (Kind.SP, 2, "blockwise"): {"u(n,1)": 9, "S2V*": 12},
    (Kind.U22, 2, "blockwise"): {"u(n,1)": 18, "L2V*": 6, "S2V*": 12},
    (Kind.SO, 2, "blockwise"): {"z": 2, "su(n,1)": 16, "L2V*": 12, "L2Vbar*": 12, "S2V*": 12, "S2Vbar*": 12},
    (Kind.SO, 2, "adjoint"): {"z": 4, "su(n,1)": 32, "L2V*": 12, "L2Vbar*": 6, "S2V*": 12},
    (Kind.SP, 3, "blockwise"): {"u(n,1)": 16, "S2V*": 20},
    (Kind.U22, 3, "blockwise"): {"u(n,1)": 32, "L2V*": 12, "S2V*": 20},
    (Kind.SO, 3, "blockwise"): {"z": 2, "su(n,1)": 30, "L2V*": 24, "L2Vbar*": 24, "S2V*": 20, "S2Vbar*": 20},
}


@pytest.mark.parametrize("key", list(FROZEN_TABLES))
def test_frozen_dim_tables(key):
    kind, n, recipe = key
    rep = br.decompose(kind, n, recipe)
    assert rep.dim_table == FROZEN_TABLES[key]
    assert br.expected_dim_table(kind, n, recipe) == FROZEN_TABLES[key]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("kind", [Kind.SP, Kind.U22, Kind.SO])
def test_tables_sum_to_dimension(kind, n):
    table = br.expected_dim_table(kind, n)
    assert sum(table.values()) == lc.expected_dimension(kind, n)


def test_n2_totals():
    assert [br.decompose(k, 2).total_dim for k in (Kind.SP, Kind.U22, Kind.SO)] == [21, 36, 66]


@pytest.mark.parametrize("kind,recipe", [(Kind.SP, "blockwise"), (Kind.U22, "blockwise"),
                                         (Kind.SO, "blockwise"), (Kind.SO, "adjoint")])
def test_direct_sum(kind, recipe):
    rep = br.decompose(kind, 3, recipe)
    assert max(rep.residuals.values()) < 1e-11


@pytest.mark.parametrize("kind,recipe", [(Kind.SP, "blockwise"), (Kind.U22, "blockwise"), (Kind.SO, "adjoint")])
def test_equivariant_summands(kind, recipe):
    rep = br.decompose(kind, 2, recipe)
    leaks = br.check_equivariance(rep, 50, 21)
    assert max(leaks.values()) < 1e-9


def test_so_symmetric_block_recipe_leaks_only_on_antilinear_offdiagonal():
    """U(n,1) acts on the antilinear off-diagonal block of so(4n,4) by conjugation,
    so only the two summands built there fail to be invariant."""
    leaks = br.check_equivariance(br.decompose(Kind.SO, 2), 20, 22)
    bad = {k for k, v in leaks.items() if v > 1e-9}
    assert bad == {"S2Vbar*#0", "L2Vbar*#1"}
    assert min(leaks[k] for k in bad) > 1e-2


def test_identity_action_has_no_leak():
    rep = br.decompose(Kind.SO, 2)
    assert max(br.check_equivariance(rep, 2, 0, identity=True).values()) < 1e-13


@pytest.mark.parametrize("kind", [Kind.SP, Kind.U22])
def test_negative_control(kind):
    rep = br.decompose(kind, 2)
    bad = br.corrupt(rep, 0, 1)
    assert max(br.check_equivariance(bad, 5, 23).values()) >= 1e-2


def test_invalid_inputs():
    with pytest.raises(ValueError):
        br.decompose(Kind.SU, 2)
    with pytest.raises(ValueError):
        br.decompose(Kind.SO, 2, "nope")
    with pytest.raises(ValueError):
        br.decompose(Kind.SP, 1)
    with pytest.raises(KeyError):
        br.decompose(Kind.SP, 2).summand("L2V*")


@pytest.mark.parametrize("n,s3,total", [(2, 8, 48), (3, 20, 120), (4, 40, 240)])
def test_hom_p_split(n, s3, total):
    rep = br.hom_p_decompose(n)
    assert rep.summand("S3p*").dim == s3 == br.expected_s3_dim(n)
    assert rep.total_dim == total == br.cochain_dim(n)
    assert max(rep.residuals.values()) < 1e-11


def test_hom_p_k_equivariance():
    rep = br.hom_p_decompose(2)
    assert max(br.check_equivariance(rep, 10, 24).values()) < 1e-9


def test_s3_cochain_is_symmetric_in_all_slots():
    n = 3
    t = br.symmetric_cubic_tensor(n, (0, 1, 1))
    vals = br.s3_cochain(t, n)
    # A(e_l)_jk = T_jkl; reading back the tensor gives a totally symmetric array
    back = np.array([vals[2 * l][:n, :n] * np.sqrt(2) for l in range(n)])
    assert np.allclose(back, np.transpose(back, (1, 2, 0)))
    assert np.allclose(back, np.transpose(back, (0, 2, 1)))


def test_cochain_coords_round_trip():
    rng = np.random.default_rng(25)
    v = rng.normal(size=br.cochain_dim(2))
    vals = br.cochain_from_coords(v, 2)
    assert np.allclose(br.cochain_to_coords(vals), v)
    assert np.allclose(vals, np.swapaxes(vals, 1, 2))

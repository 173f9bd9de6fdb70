"""Bracket squares of algebra-valued 1-forms on p and the invariant linear
forms that turn them into scalar (1,1)-forms.

Normalizations used throughout:

* p carries the orthonormal basis ``(E_1, iE_1, ..., E_n, iE_n)`` and the
  Kahler form ``omega(E_k, iE_k) = 1``.
* On sp(n,1), ``lambda(X) = Re Tr(X W^*)`` with W the image of ``i I``.
* On so(4n,4), ``lambda'(X) = Tr(X J')`` and ``lambda''(X) = Tr(X J'')`` with
  ``J' = diag(J, -J)``, ``J'' = diag(J, J)`` and ``J`` the realified ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .branching import _offdiag, sym_complex_basis
from .liecore import (
    AlgebraTag,
    Kind,
    LieElement,
    _rng,
    embed_group,
    membership_residual,
    p_complex_structure,
    random_group_element,
)
from .quatmat import StructuredMatrix, complexify, real_form, realify
from .weitzenbock import Cochain, null_space

TYPE_10 = "(1,0)"
TYPE_01 = "(0,1)"
UNRESTRICTED = "unrestricted"


@dataclass(frozen=True, eq=False)
class KahlerStructure:
    n: int

    @property
    def complex_structure(self) -> np.ndarray:
        return p_complex_structure(self.n)

    @property
    def omega(self) -> np.ndarray:
        w = np.zeros((2 * self.n, 2 * self.n))
        for k in range(self.n):
            w[2 * k, 2 * k + 1] = 1.0
            w[2 * k + 1, 2 * k] = -1.0
        return w

    def pairs(self):
        return [(2 * k, 2 * k + 1) for k in range(self.n)]


@dataclass(frozen=True, eq=False)
class PValuedOneForm:
    n: int
    target: AlgebraTag
    values: np.ndarray  # values on the p-basis, shape (2n, size, size)
    type_label: str = UNRESTRICTED

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def __add__(self, other: "PValuedOneForm") -> "PValuedOneForm":
        if self.target != other.target:
            raise ValueError("target mismatch")
        label = self.type_label if self.type_label == other.type_label else UNRESTRICTED
        return PValuedOneForm(self.n, self.target, self.values + other.values, label)


@dataclass(frozen=True, eq=False)
class AlgebraTwoForm:
    values: np.ndarray  # shape (2n, 2n, size, size), antisymmetric in the first two axes

    def antisymmetry_defect(self) -> float:
        return float(np.linalg.norm(self.values + np.swapaxes(self.values, 0, 1)))

    def apply(self, functional) -> np.ndarray:
        d = self.values.shape[0]
        return np.array([[functional(self.values[a, b]) for b in range(d)] for a in range(d)])


def bracket_square(alpha: PValuedOneForm) -> AlgebraTwoForm:
    """``[alpha, alpha](Y, Y') = 2 [alpha(Y), alpha(Y')]``."""
    v = alpha.values
    return AlgebraTwoForm(2 * np.einsum("aij,bjk->abik", v, v) - 2 * np.einsum("bij,ajk->abik", v, v))


def bracket_wedge(alpha: PValuedOneForm, beta: PValuedOneForm) -> AlgebraTwoForm:
    """``[alpha ^ beta](Y, Y') = [alpha(Y), beta(Y')] - [alpha(Y'), beta(Y)]``."""
    a, b = alpha.values, beta.values
    ab = np.einsum("aij,bjk->abik", a, b) - np.einsum("bij,ajk->abik", b, a)
    return AlgebraTwoForm(ab - np.swapaxes(ab, 0, 1))


# -- sp(n,1) side ------------------------------------------------------------

@lru_cache(maxsize=None)
def _w_sp(n: int) -> np.ndarray:
    return complexify(StructuredMatrix.quaternionic(1j * np.eye(n + 1)))


def lambda_sp(x, tol: float = 1e-9) -> float:
    """Trace pairing with the image of ``i I_{n+1}``."""
    mat = x.mat if isinstance(x, LieElement) else np.asarray(x)
    n = mat.shape[0] // 2 - 1
    alg = AlgebraTag(Kind.SP, n)
    res = membership_residual(mat, alg)
    if res > tol * (1 + np.linalg.norm(mat) ** 2):
        raise ValueError(f"not an sp(n,1) element (residual {res:.3e})")
    return float(np.real(np.trace(mat @ _w_sp(n).conj().T)))


def _lambda_sp_raw(mat: np.ndarray) -> float:
    n = mat.shape[0] // 2 - 1
    return float(np.real(np.trace(mat @ _w_sp(n).conj().T)))


def jq_image(e: np.ndarray) -> np.ndarray:
    """``E -> j Q E``: a symmetric form as an element of sp(n,1)."""
    m = e.shape[0]
    q = real_form(m, "block")
    return complexify(StructuredMatrix.quaternionic(np.zeros((m, m)), q @ e))


def sp_form_from_cochain(eta: Cochain) -> PValuedOneForm:
    vals = np.array([jq_image(v) for v in eta.values])
    return PValuedOneForm(eta.n, AlgebraTag(Kind.SP, eta.n), vals, TYPE_10)


def delta_formula(delta: np.ndarray) -> np.ndarray:
    """``-2 (conj(d_a) d_b - conj(d_b) d_a)`` for all basis pairs."""
    d = np.asarray(delta)
    t = np.einsum("aij,bjk->abik", d.conj(), d)
    return -2 * (t - np.swapaxes(t, 0, 1))


# -- wedge ratios ------------------------------------------------------------

def _check_antisymmetric(phi: np.ndarray, tol: float = 1e-12):
    phi = np.asarray(phi, dtype=float)
    if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
        raise ValueError("a 2-form must be a square array")
    if np.linalg.norm(phi + phi.T) > tol * max(1.0, np.linalg.norm(phi)):
        raise ValueError("2-form is not antisymmetric")
    return phi


def wedge_top_ratio(phi: np.ndarray, ks: KahlerStructure) -> float:
    """``phi ^ omega^{n-1} / omega^n`` through the trace over unitary pairs."""
    phi = _check_antisymmetric(phi)
    om = ks.omega
    c = 1.0 / sum(om[a, b] for a, b in ks.pairs())
    return float(c * sum(phi[a, b] for a, b in ks.pairs()))


@lru_cache(maxsize=None)
def _perm_table(d: int) -> tuple[np.ndarray, np.ndarray]:
    perms = np.array(list(permutations(range(d))))
    # sign via cycle parity of each permutation
    signs = np.empty(len(perms))
    for i, p in enumerate(perms):
        seen = np.zeros(d, dtype=bool)
        parity = 0
        for s in range(d):
            if not seen[s]:
                j, length = s, 0
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    length += 1
                parity += length - 1
        signs[i] = -1.0 if parity % 2 else 1.0
    return perms, signs


def top_form_value(forms: list[np.ndarray]) -> float:
    """Alternating sum of the product of 2-forms on the standard basis vectors."""
    d = 2 * len(forms)
    perms, signs = _perm_table(d)
    prod = np.ones(len(perms))
    for i, f in enumerate(forms):
        prod *= f[perms[:, 2 * i], perms[:, 2 * i + 1]]
    return float(signs @ prod)


def wedge_top_ratio_oracle(phi: np.ndarray, ks: KahlerStructure) -> float:
    """Same ratio by brute-force expansion over all permutations (n <= 4)."""
    if ks.n > 4:
        raise ValueError("the permutation oracle is limited to n <= 4")
    phi = _check_antisymmetric(phi)
    om = ks.omega
    den = top_form_value([om] * ks.n)
    if abs(den) < 1e-12:
        raise ValueError("omega^n vanishes: degenerate Kahler structure")
    return top_form_value([phi] + [om] * (ks.n - 1)) / den


# -- kernel-valued forms -----------------------------------------------------

def _kernel_basis(n: int, conjugate: bool = False) -> np.ndarray:
    return null_space(n, conjugate=conjugate).summand.basis


def random_kernel_cochain(n: int, seed=None, conjugate: bool = False) -> Cochain:
    k = _kernel_basis(n, conjugate)
    return Cochain.from_coords(_rng(seed).normal(size=k.shape[0]) @ k, n)


def type_defect(alpha: PValuedOneForm, structure) -> float:
    """Defect of ``alpha(iY) = s(alpha(Y))`` over the p-basis."""
    v = alpha.values
    worst = 0.0
    for k in range(alpha.n):
        worst = max(worst, float(np.linalg.norm(v[2 * k + 1] - structure(v[2 * k]))))
    return worst


def lemma_square_check(n: int, trials: int = 100, seed=None) -> dict:
    """Constancy of ``(lambda o [alpha, alpha] ^ omega^{n-1} / omega^n) / |alpha|^2``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    ks = KahlerStructure(n)
    ratios, factors, pos_ratios = [], [], []
    worst_type = worst_delta = 0.0
    for _ in range(trials):
        eta = random_kernel_cochain(n, rng)
        alpha = sp_form_from_cochain(eta)
        worst_type = max(worst_type, type_defect(alpha, _sp_j))
        sq = bracket_square(alpha)
        top = sq.values[..., : n + 1, : n + 1]
        worst_delta = max(worst_delta, float(np.linalg.norm(top - delta_formula(eta.values))))
        phi = sq.apply(_lambda_sp_raw)
        r = wedge_top_ratio(phi, ks) / alpha.norm_sq()
        ratios.append(r)
        dk = sum(np.sum(np.abs(eta.values[2 * k]) ** 2) for k in range(n))
        factors.append(r / ((2.0 / n) * dk / alpha.norm_sq()))
        pos_ratios.append(phi[0, 1] / np.sum(np.abs(eta.values[0]) ** 2))
    ratios = np.array(ratios)
    mean = float(np.mean(ratios))
    return {
        "n": n,
        "c_estimate": mean,
        "spread": float(np.ptp(ratios) / abs(mean)),
        "sign": int(np.sign(mean)),
        "same_sign": bool(np.all(np.sign(ratios) == np.sign(mean))),
        "predicted": -2.0 / n,
        "delta_factor": float(np.mean(factors)),
        "delta_factor_spread": float(np.ptp(factors) / abs(np.mean(factors))),
        "lambda_y_iy_over_delta_sq": float(np.mean(pos_ratios)),
        "lambda_y_iy_spread": float(np.ptp(pos_ratios) / abs(np.mean(pos_ratios))),
        "type_defect": worst_type,
        "delta_formula_residual": worst_delta,
    }


def _sp_j(x: np.ndarray) -> np.ndarray:
    """Complex structure ``jQE -> jQ(iE)`` on the S^2 V* part of sp(n,1)."""
    m = x.shape[0] // 2
    d = x[m:, :m]
    q = real_form(m, "block")
    return jq_image(1j * (q @ d))


# -- so(4n,4) side -----------------------------------------------------------

@lru_cache(maxsize=None)
def _j_blocks(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = n + 1
    j = realify(1j * np.eye(m))
    z = np.zeros_like(j)
    jp = np.block([[j, z], [z, -j]])
    jpp = np.block([[j, z], [z, j]])
    return j, jp, jpp


def lambda_primes(x, tol: float = 1e-9) -> tuple[float, float]:
    mat = x.mat if isinstance(x, LieElement) else np.asarray(x)
    n = mat.shape[0] // 4 - 1
    res = membership_residual(mat, AlgebraTag(Kind.SO, n))
    if res > tol * (1 + np.linalg.norm(mat) ** 2):
        raise ValueError(f"not an so(4n,4) element (residual {res:.3e})")
    return _lambda_primes_raw(mat)


def _lambda_primes_raw(mat: np.ndarray) -> tuple[float, float]:
    n = mat.shape[0] // 4 - 1
    _, jp, jpp = _j_blocks(n)
    return float(np.trace(mat @ jp)), float(np.trace(mat @ jpp))


def z_block(b: np.ndarray) -> np.ndarray:
    """``[[0, B Q'], [-B^T Q', 0]]`` with ``Q'`` the realified Q."""
    m = b.shape[0] // 2
    return _offdiag(b, realify(real_form(m, "block")), False)


def b_of_z(z: np.ndarray) -> np.ndarray:
    s = z.shape[0] // 2
    qr = realify(real_form(s // 2, "block"))
    return z[:s, s:] @ qr


def lambda_prime_trace_formula(b: np.ndarray, b2: np.ndarray) -> float:
    """``Tr(J [-B B2^* + B2 B^* + B^* B2 - B2^* B])``."""
    j = realify(1j * np.eye(b.shape[0] // 2))
    return float(np.trace(j @ (-b @ b2.T + b2 @ b.T + b.T @ b2 - b2.T @ b)))


def script_j(b: np.ndarray, conjugate_side: bool) -> np.ndarray:
    """Complex structure on the B-blocks: ``B -> JB``, or ``-JB`` on the conjugate side."""
    j = realify(1j * np.eye(b.shape[0] // 2))
    return -j @ b if conjugate_side else j @ b


def random_s2_block(n: int, rng, conjugate_side: bool, corner: bool = False) -> np.ndarray:
    """Random B for S^2 V* (linear) or S^2 V-bar* (antilinear), optionally in the n-corner."""
    m = n + 1
    sb = sym_complex_basis(m)
    e = np.einsum("d,dij->ij", rng.normal(size=len(sb)), sb)
    if corner:
        e[n, :] = 0
        e[:, n] = 0
    return realify(e, antilinear=conjugate_side)


def _bracket(a, b):
    return a @ b - b @ a


def lambdappp_vanishing(n: int, trials: int = 100, seed=None) -> dict:
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    out = {"lp_on_bar": 0.0, "lpp_on_s2": 0.0, "mixed_lp": 0.0, "mixed_lpp": 0.0,
           "trace_formula": 0.0, "eight_formula": 0.0, "lp_jz": [], "lpp_jz": [], "norm_ratio": 0.0}
    for _ in range(trials):
        b1, b2 = random_s2_block(n, rng, False), random_s2_block(n, rng, False)
        c1, c2 = random_s2_block(n, rng, True), random_s2_block(n, rng, True)
        z1, z2, y1, y2 = z_block(b1), z_block(b2), z_block(c1), z_block(c2)
        scale = np.linalg.norm(z1) * np.linalg.norm(z2) + np.linalg.norm(y1) * np.linalg.norm(y2)
        out["lp_on_bar"] = max(out["lp_on_bar"], abs(_lambda_primes_raw(_bracket(y1, y2))[0]) / scale)
        out["lpp_on_s2"] = max(out["lpp_on_s2"], abs(_lambda_primes_raw(_bracket(z1, z2))[1]) / scale)
        mixed = _lambda_primes_raw(_bracket(z1, y1))
        out["mixed_lp"] = max(out["mixed_lp"], abs(mixed[0]) / scale)
        out["mixed_lpp"] = max(out["mixed_lpp"], abs(mixed[1]) / scale)
        # the explicit trace identities need Q' to commute with B, as on the n-corner S^2 p*
        bc1, bc2 = random_s2_block(n, rng, False, True), random_s2_block(n, rng, False, True)
        cc = random_s2_block(n, rng, True, True)
        zc1, zc2, yc = z_block(bc1), z_block(bc2), z_block(cc)
        cscale = np.linalg.norm(zc1) * np.linalg.norm(zc2)
        lp = _lambda_primes_raw(_bracket(zc1, zc2))[0]
        out["trace_formula"] = max(
            out["trace_formula"], abs(lp - lambda_prime_trace_formula(bc1, bc2)) / cscale
        )
        m = n + 1
        c, d = bc1[:m, :m], bc1[m:, :m]
        cp, dp = bc2[:m, :m], bc2[m:, :m]
        ref = 8 * np.trace(d @ cp - c @ dp)
        out["eight_formula"] = max(out["eight_formula"], abs(lp - ref) / cscale)
        out["lp_jz"].append(
            _lambda_primes_raw(_bracket(zc1, z_block(script_j(bc1, False))))[0] / np.sum(zc1**2)
        )
        out["lpp_jz"].append(
            _lambda_primes_raw(_bracket(yc, z_block(script_j(cc, True))))[1] / np.sum(yc**2)
        )
        out["norm_ratio"] = max(out["norm_ratio"], abs(np.sum(z1**2) / np.sum(b1**2) - 2))
    for key in ("lp_jz", "lpp_jz"):
        arr = np.array(out[key])
        out[key] = float(np.mean(arr))
        out[key + "_spread"] = float(np.ptp(arr))
    return {k: float(v) for k, v in out.items()}


def so_form_from_cochain(eta: Cochain) -> PValuedOneForm:
    """Kernel cochain to an S^2 V*-valued (1,0)-form: ``B = realify(eta(Y))``."""
    vals = np.array([z_block(realify(v)) for v in eta.values])
    return PValuedOneForm(eta.n, AlgebraTag(Kind.SO, eta.n), vals, TYPE_10)


def so_form_from_conjugate_cochain(p: Cochain) -> PValuedOneForm:
    """Conjugate-kernel cochain to an S^2 V-bar*-valued (0,1)-form: ``B' = anti(conj P(Y))``."""
    vals = np.array([z_block(realify(np.conj(v), antilinear=True)) for v in p.values])
    return PValuedOneForm(p.n, AlgebraTag(Kind.SO, p.n), vals, TYPE_01)


def _so_j(conjugate_side: bool):
    return lambda z: z_block(script_j(b_of_z(z), conjugate_side))


def ratio_functional(alpha: PValuedOneForm, alpha_p: PValuedOneForm, ks: KahlerStructure) -> float:
    beta = alpha + alpha_p
    phi = bracket_square(beta).apply(lambda x: sum(_lambda_primes_raw(x)))
    return wedge_top_ratio(phi, ks)


@lru_cache(maxsize=None)
def _quadratic_matrix(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrix of the ratio functional on kernel (+) conjugate-kernel coordinates."""
    ks = KahlerStructure(n)
    k = _kernel_basis(n)
    kc = _kernel_basis(n, conjugate=True)
    forms = [so_form_from_cochain(Cochain.from_coords(v, n)) for v in k]
    forms += [so_form_from_conjugate_cochain(Cochain.from_coords(v, n)) for v in kc]
    d = len(forms)
    diag = np.array([ratio_functional(f, _zero_like(f), ks) for f in forms])
    mat = np.diag(diag)
    for i in range(d):
        for j in range(i + 1, d):
            both = ratio_functional(forms[i], forms[j], ks)
            mat[i, j] = mat[j, i] = (both - diag[i] - diag[j]) / 2
    norms = np.array([[np.sum(a.values * b.values) for b in forms] for a in forms])
    return mat, norms, np.array([f.type_label == TYPE_10 for f in forms])


def _zero_like(f: PValuedOneForm) -> PValuedOneForm:
    return PValuedOneForm(f.n, f.target, np.zeros_like(f.values), f.type_label)


def anisotropy_check(n: int, trials: int = 100, seed=None, unit_samples: int = 10000) -> dict:
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    ks = KahlerStructure(n)
    ratios, alpha_only = [], []
    cross_lp = cross_lpp = 0.0
    worst_type = 0.0
    for _ in range(trials):
        eta = random_kernel_cochain(n, rng)
        p = random_kernel_cochain(n, rng, conjugate=True)
        a = so_form_from_cochain(eta)
        ap = so_form_from_conjugate_cochain(p)
        worst_type = max(worst_type, type_defect(a, _so_j(False)),
                         type_defect(ap, lambda z: -_so_j(True)(z)))
        total = a.norm_sq() + ap.norm_sq()
        ratios.append(ratio_functional(a, ap, ks) / total)
        alpha_only.append(ratio_functional(a, _zero_like(ap), ks) / a.norm_sq())
        cw = bracket_wedge(a, ap)
        scale = np.sqrt(a.norm_sq() * ap.norm_sq())
        cross_lp = max(cross_lp, float(np.max(np.abs(cw.apply(lambda x: _lambda_primes_raw(x)[0])))) / scale)
        cross_lpp = max(cross_lpp, float(np.max(np.abs(cw.apply(lambda x: _lambda_primes_raw(x)[1])))) / scale)
    ratios = np.array(ratios)
    c = float(np.mean(ratios))
    sign = int(np.sign(c))
    # sampled unit sphere in kernel (+) conjugate-kernel coordinates
    mat, gram, _ = _quadratic_matrix(n)
    v = rng.normal(size=(unit_samples, mat.shape[0]))
    v /= np.sqrt(np.einsum("si,ij,sj->s", v, gram, v))[:, None]
    vals = np.einsum("si,ij,sj->s", v, mat, v)
    return {
        "n": n,
        "c_estimate": c,
        "spread": float(np.ptp(ratios) / abs(c)),
        "sign": sign,
        "predicted": -2.0 / n,
        "alpha_only_constant": float(np.mean(alpha_only)),
        "cross_lambda_prime": cross_lp,
        "cross_lambda_double_prime": cross_lpp,
        "type_defect": worst_type,
        "unit_min_signed": float(np.min(sign * vals)),
        "unit_min_ratio": float(np.min(sign * vals) / abs(c)),
    }


def lambda_invariance(n: int, trials: int = 50, seed=None) -> dict[str, float]:
    """Invariance of lambda and lambda', lambda'' under the embedded SU(n,1)."""
    rng = _rng(seed)
    from .liecore import random_element

    sp_alg, so_alg = AlgebraTag(Kind.SP, n), AlgebraTag(Kind.SO, n)
    worst_sp = worst_so = 0.0
    for _ in range(trials):
        g = random_group_element(n, rng)
        g = g / np.linalg.det(g) ** (1 / (n + 1))
        x = random_element(sp_alg, rng).mat
        gs = embed_group(g, n, Kind.SP)
        y = gs @ x @ np.linalg.inv(gs)
        worst_sp = max(worst_sp, abs(_lambda_sp_raw(y) - _lambda_sp_raw(x)) / (1 + np.sum(np.abs(x) ** 2)))
        z = random_element(so_alg, rng).mat
        go = embed_group(g, n, Kind.SO)
        w = go @ z @ np.linalg.inv(go)
        d = np.subtract(_lambda_primes_raw(w), _lambda_primes_raw(z))
        worst_so = max(worst_so, float(np.max(np.abs(d))) / (1 + np.sum(z**2)))
    return {"lambda_sp": worst_sp, "lambda_primes": worst_so}

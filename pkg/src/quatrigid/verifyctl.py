"""Command-line front end: seeded verification suites and machine-readable reports.

    quatrigid run --n 2 --trials 100 --seed 42 --format machine
    quatrigid list
    quatrigid decompose --alg so --recipe adjoint
    quatrigid kernel --n 3
    quatrigid grade --n 2
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from . import branching, cupform, gradedhodge, liecore, quatmat, weitzenbock
from .liecore import AlgebraTag, Kind

SUITES = ("quatmat", "liecore", "branching", "weitzenbock", "cupform", "gradedhodge")
BASE_TOL = 1e-9


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: tuple = (2,)
    suites: tuple = SUITES
    trials: int = 100
    seed: int = 42
    tolerance: float = BASE_TOL
    out: str | None = None
    format: str = "human"
    jobs: int = 1

    def validate(self):
        if not self.n or any(int(k) != k or k < 2 for k in self.n):
            raise ConfigError(f"n must be integers >= 2, got {list(self.n)}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.format not in ("human", "machine"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    check: str
    anchor: str
    n: int
    value: float
    threshold: float
    comparison: str  # "le" or "ge"
    passed: bool
    wall_time: float = field(default=0.0, compare=False)

    def machine(self) -> str:
        # wall time is left out so that reports are byte-identical across runs
        rec = {
            "suite": self.suite,
            "check": self.check,
            "anchor": self.anchor,
            "n": self.n,
            "value": float(f"{self.value:.6e}"),
            "threshold": self.threshold,
            "comparison": self.comparison,
            "pass": self.passed,
        }
        return json.dumps(rec)

    def human(self) -> str:
        op = "<=" if self.comparison == "le" else ">="
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.suite:<11} {self.check:<32} n={self.n} "
            f"{self.value:.3e} {op} {self.threshold:.1e}  ({self.wall_time:.2f}s)"
        )


@dataclass(frozen=True)
class Measurement:
    name: str
    value: float
    scale: float  # threshold = scale * tolerance / BASE_TOL, or absolute when exact
    comparison: str = "le"
    exact: bool = False  # integer identities ignore the tolerance knob


@dataclass(frozen=True)
class Check:
    name: str
    suite: str
    anchor: str
    fn: Callable  # (n, trials, rng) -> list[Measurement]


# -- quatmat -----------------------------------------------------------------

def _quat_checks(n, trials, rng):
    from .quatmat import Quaternion, left_mult_matrix, quat_mul, random_quaternion

    assoc = norm = lm = 0.0
    for _ in range(trials):
        p, q, r = (random_quaternion(rng) for _ in range(3))
        a = quat_mul(quat_mul(p, q), r)
        b = quat_mul(p, quat_mul(q, r))
        s = 1 + p.norm2() * q.norm2() * r.norm2()
        assoc = max(assoc, abs(a.a - b.a) / s, abs(a.b - b.b) / s)
        norm = max(norm, abs(quat_mul(p, q).norm2() - p.norm2() * q.norm2()) / (1 + p.norm2() * q.norm2()))
        lm = max(lm, np.linalg.norm(left_mult_matrix(quat_mul(p, q)) - left_mult_matrix(p) @ left_mult_matrix(q)) / (1 + p.norm2() * q.norm2()))
    jj = quat_mul(quatmat.J, quatmat.J)
    ij = quat_mul(quatmat.I, quatmat.J)
    trivial = abs(jj.a + 1) + abs(jj.b) + abs(ij.a) + abs(ij.b + 1j)
    return [
        Measurement("associativity", assoc, 1e-12),
        Measurement("norm_multiplicative", norm, 1e-12),
        Measurement("left_mult_homomorphism", lm, 1e-12),
        Measurement("unit_products", trivial, 1e-12),
    ]


def _complexify_checks(n, trials, rng):
    m = n + 1
    worst = {c: 0.0 for c in quatmat.Convention}
    real = {c: 0.0 for c in quatmat.Convention}
    rl = ra = 0.0
    for _ in range(trials):
        a, b = quatmat.random_hmatrix(m, rng), quatmat.random_hmatrix(m, rng)
        s = 1 + a.norm() ** 2 * b.norm() ** 2
        for c in quatmat.Convention:
            x = quatmat.complexify(a, c)
            worst[c] = max(worst[c], np.linalg.norm(quatmat.complexify(a @ b, c) - x @ quatmat.complexify(b, c)) / s)
            real[c] = max(real[c], quatmat.reality_residual(x, c) / (1 + a.norm() ** 2))
        z = rng.normal(size=(2, m, m)) + 1j * rng.normal(size=(2, m, m))
        s2 = 1 + np.linalg.norm(z[0]) ** 2 * np.linalg.norm(z[1]) ** 2
        rl = max(rl, np.linalg.norm(quatmat.realify(z[0] @ z[1]) - quatmat.realify(z[0]) @ quatmat.realify(z[1])) / s2)
        ra = max(ra, np.linalg.norm(quatmat.realify(z[0] @ z[1].conj()) - quatmat.realify(z[0], True) @ quatmat.realify(z[1], True)) / s2)
    return [
        Measurement("complexify_hom_block", worst[quatmat.Convention.BLOCK], 1e-12),
        Measurement("complexify_hom_fbasis", worst[quatmat.Convention.FBASIS], 1e-12),
        Measurement("reality_condition", max(real.values()), 1e-12),
        Measurement("realify_linear_hom", rl, 1e-12),
        Measurement("realify_antilinear_hom", ra, 1e-12),
    ]


def _convention_checks(n, trials, rng):
    m = n + 1
    rt = 0.0
    for _ in range(trials):
        x = rng.normal(size=(2 * m, 2 * m)) + 1j * rng.normal(size=(2 * m, 2 * m))
        y = quatmat.change_convention(x, "block", "fbasis")
        back = quatmat.change_convention(y, "fbasis", "block")
        rt = max(rt, np.linalg.norm(back - x) / (1 + np.linalg.norm(x) ** 2))
    forms = 0.0
    for fn in (quatmat.hermitian_form, quatmat.symplectic_form):
        moved = quatmat.change_convention(fn(m, "block"), "block", "fbasis")
        forms = max(forms, np.linalg.norm(moved - fn(m, "fbasis")))
    return [Measurement("round_trip", rt, 1e-14), Measurement("forms_intertwined", forms, 1e-14)]


# -- liecore -----------------------------------------------------------------

def _dimension_checks(n, trials, rng):
    out = []
    for kind in Kind:
        for conv in quatmat.Convention:
            d = liecore.dimension(AlgebraTag(kind, n, conv))
            out.append(Measurement(f"dim {kind.value} {conv.value}", abs(d - liecore.expected_dimension(kind, n)), 0, exact=True))
    return out


def _membership_checks(n, trials, rng):
    memb = closure = jac = 0.0
    for kind in Kind:
        alg = AlgebraTag(kind, n)
        for _ in range(max(1, trials // len(Kind))):
            x, y, z = (liecore.random_element(alg, rng) for _ in range(3))
            s = 1 + x.norm() ** 2
            memb = max(memb, liecore.membership_residual(x.mat, alg) / s)
            b = liecore.bracket(x, y)
            closure = max(closure, liecore.membership_residual(b.mat, alg) / (1 + x.norm() ** 2 * y.norm() ** 2))
            jsum = (liecore.bracket(x, liecore.bracket(y, z)) + liecore.bracket(y, liecore.bracket(z, x))
                    + liecore.bracket(z, liecore.bracket(x, y)))
            jac = max(jac, jsum.norm() / (1 + (x.norm() * y.norm() * z.norm()) ** 2))
    return [
        Measurement("random_membership", memb, 1e-12),
        Measurement("bracket_closure", closure, 1e-11),
        Measurement("jacobi", jac, 1e-12),
    ]


def _embedding_checks(n, trials, rng):
    hom = comp = 0.0
    for conv in quatmat.Convention:
        src = AlgebraTag(Kind.SU, n, conv)
        for _ in range(max(1, trials // 2)):
            x, y = liecore.random_element(src, rng), liecore.random_element(src, rng)
            s = 1 + x.norm() ** 2 * y.norm() ** 2
            for target in liecore.CHAIN[1:]:
                ex, ey = liecore.embed(x, target), liecore.embed(y, target)
                d = liecore.embed(liecore.bracket(x, y), target).mat - liecore.bracket(ex, ey).mat
                hom = max(hom, np.linalg.norm(d) / s)
            steps = x
            for target in liecore.CHAIN[1:]:
                steps = liecore.embed(steps, target)
            comp = max(comp, np.linalg.norm(steps.mat - liecore.embed(x, Kind.SO).mat) / (1 + x.norm() ** 2))
    return [Measurement("embedding_homomorphism", hom, 1e-12), Measurement("chain_composes", comp, 1e-12)]


def _cartan_checks(n, trials, rng):
    alg = AlgebraTag(Kind.SU, n)
    kp = recon = 0.0
    for _ in range(trials):
        x, y = liecore.random_element(alg, rng), liecore.random_element(alg, rng)
        sx, sy = liecore.cartan_split(x), liecore.cartan_split(y)
        recon = max(recon, np.linalg.norm(sx.k_part.mat + sx.p_part.mat - x.mat))
        th = liecore.cartan_involution
        kk = liecore.bracket(sx.k_part, sy.p_part).mat  # should be in p
        pp = liecore.bracket(sx.p_part, sy.p_part).mat  # should be in k
        s = 1 + x.norm() ** 2 * y.norm() ** 2
        kp = max(kp, np.linalg.norm(th(kk) + kk) / s, np.linalg.norm(th(pp) - pp) / s)
    return [Measurement("split_reconstructs", recon, 1e-12), Measurement("symmetric_pair", kp, 1e-12)]


def _intersection_checks(n, trials, rng):
    r = liecore.verify_intersection(n, trials, rng)
    return [
        Measurement("sp_in_u22", r["u22_residual"], 1e-12),
        Measurement("sp_in_spc", r["spc_residual"], 1e-12),
        Measurement("joint_dimension", abs(r["joint_dimension"] - r["expected_dimension"]), 0, exact=True),
    ]


def _pairing_checks(n, trials, rng):
    alg = AlgebraTag(Kind.U, n)
    kb = liecore.k_basis(n)
    gram = np.array([[liecore.trace_pairing(a, b) for b in kb] for a in kb])
    inv = 0.0
    for _ in range(min(trials, 50)):
        k = liecore.random_compact_element(n, rng)
        x, y = liecore.random_element(alg, rng).mat, liecore.random_element(alg, rng).mat
        kx, ky = liecore.adjoint_action(k, x), liecore.adjoint_action(k, y)
        inv = max(inv, abs(liecore.trace_pairing(kx, ky) - liecore.trace_pairing(x, y)) / (1 + np.linalg.norm(x) * np.linalg.norm(y)))
    return [
        Measurement("compact_positive", float(np.linalg.eigvalsh(gram)[0]), 0.5, comparison="ge", exact=True),
        Measurement("ad_k_invariant", inv, 1e-11),
    ]


# -- branching ---------------------------------------------------------------

def _decomp_checks(kind, recipe="blockwise"):
    def fn(n, trials, rng):
        rep = branching.decompose(kind, n, recipe)
        table = branching.expected_dim_table(kind, n, recipe)
        dim_gap = sum(abs(rep.dim_table.get(k, 0) - v) for k, v in table.items()) + abs(
            rep.total_dim - liecore.expected_dimension(kind, n)
        )
        eq = max(branching.check_equivariance(rep, min(trials, 50), rng).values())
        neg = min(
            max(branching.check_equivariance(branching.corrupt(rep, i, i + 1), 5, rng).values())
            for i in range(len(rep.summands) - 1)
        )
        return [
            Measurement("dim_table", dim_gap, 0, exact=True),
            Measurement("direct_sum", max(rep.residuals.values()), 1e-11),
            Measurement("equivariance", eq, 1e-9),
            Measurement("negative_control", neg, 1e-2, comparison="ge", exact=True),
        ]

    return fn


def _hom_checks(n, trials, rng):
    rep = branching.hom_p_decompose(n)
    s3 = rep.summand("S3p*").dim
    eq = max(branching.check_equivariance(rep, min(trials, 20), rng).values())
    return [
        Measurement("s3_dimension", abs(s3 - branching.expected_s3_dim(n)), 0, exact=True),
        Measurement("ambient_dimension", abs(rep.total_dim - branching.cochain_dim(n)), 0, exact=True),
        Measurement("direct_sum", max(rep.residuals.values()), 1e-11),
        Measurement("k_equivariance", eq, 1e-9),
    ]


# -- weitzenbock -------------------------------------------------------------

def _rho_checks(n, trials, rng):
    worst = sym = 0.0
    for _ in range(trials):
        y = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = liecore.p_from_vector(y, n)
        q = weitzenbock.random_cochain(n, rng).values[0]
        r = weitzenbock.rho_action(x, q)
        s = 1 + np.linalg.norm(x) ** 2 * np.linalg.norm(q) ** 2
        worst = max(worst, np.linalg.norm(r - weitzenbock.rho_action_blocks(x, q)) / s)
        sym = max(sym, np.linalg.norm(r - r.T) / s)
    return [Measurement("block_formula", worst, 1e-13), Measurement("output_symmetric", sym, 1e-13)]


def _energy_checks(n, trials, rng):
    ident = tsym = basis_inv = psd = orth = 0.0
    for _ in range(trials):
        eta, zeta = weitzenbock.random_cochain(n, rng), weitzenbock.random_cochain(n, rng)
        e = weitzenbock.energy_identity(eta)
        s = 1 + eta.norm_sq()
        ident = max(ident, e.residual / s)
        psd = max(psd, -e.t_energy / s)
        a = weitzenbock.hom_inner(weitzenbock.t_apply(eta), zeta)
        b = weitzenbock.hom_inner(eta, weitzenbock.t_apply(zeta))
        tsym = max(tsym, abs(a - b) / (1 + eta.norm_sq() * zeta.norm_sq()))
        frame, o = weitzenbock.rotated_frame(n, rng)
        e2 = weitzenbock.hom_inner(weitzenbock.t_apply(weitzenbock.reexpress(eta, o), frame), weitzenbock.reexpress(eta, o))
        basis_inv = max(basis_inv, abs(e2 - e.t_energy) / s)
        bf = weitzenbock.beta_of(eta)
        orth = max(orth, abs(float(np.real(np.sum(bf.sigma * bf.alpha.conj())))) / s)
    return [
        Measurement("energy_identity", ident, 1e-9),
        Measurement("t_symmetric", tsym, 1e-11),
        Measurement("basis_invariance", basis_inv, 1e-11),
        Measurement("energy_nonnegative", psd, 1e-10),
        Measurement("sigma_alpha_orthogonal", orth, 1e-12),
    ]


def _kernel_checks(n, trials, rng):
    ker = weitzenbock.null_space(n)
    cmp = weitzenbock.kernel_vs_s3(n)
    expected = 2 * comb(n + 2, 3)
    return [
        Measurement("kernel_dimension", abs(ker.kernel_dim - expected), 0, exact=True),
        Measurement("spectral_gap", ker.gap_ratio, 1e3, comparison="ge", exact=True),
        Measurement("gram_psd", max(0.0, -ker.min_eigenvalue), 1e-10),
        Measurement("kernel_equals_s3", max(cmp["kernel_in_s3"], cmp["s3_in_kernel"]), 1e-9),
        Measurement("conjugate_kernel", cmp["conj_kernel_match"] + abs(cmp["conj_kernel_dim"] - expected), 1e-10),
        Measurement("d_block_positive", weitzenbock.d_block_min_energy(n), 1e-6, comparison="ge", exact=True),
    ]


# -- cupform -----------------------------------------------------------------

def _wedge_checks(n, trials, rng):
    if n > 4:
        return []
    ks = cupform.KahlerStructure(n)
    worst = 0.0
    for _ in range(min(trials, 20 if n == 4 else trials)):
        a = rng.normal(size=(2 * n, 2 * n))
        a = a - a.T
        worst = max(worst, abs(cupform.wedge_top_ratio(a, ks) - cupform.wedge_top_ratio_oracle(a, ks)) / (1 + np.sum(a**2)))
    calib = abs(cupform.wedge_top_ratio_oracle(ks.omega, ks) - 1)
    return [Measurement("fast_equals_oracle", worst, 1e-12), Measurement("omega_calibration", calib, 1e-12)]


def _square_checks(n, trials, rng):
    r = cupform.lemma_square_check(n, trials, rng)
    return [
        Measurement("ratio_spread", r["spread"], 1e-9),
        Measurement("fixed_sign", 0.0 if r["same_sign"] and r["sign"] != 0 else 1.0, 0, exact=True),
        Measurement("delta_factor_spread", r["delta_factor_spread"], 1e-9),
        Measurement("delta_formula", r["delta_formula_residual"], 1e-12),
        Measurement("type_10", r["type_defect"], 1e-12),
    ]


def _lambdappp_checks(n, trials, rng):
    r = cupform.lambdappp_vanishing(n, trials, rng)
    return [
        Measurement("lambda1_on_conj_pairs", r["lp_on_bar"], 1e-11),
        Measurement("lambda2_on_pairs", r["lpp_on_s2"], 1e-11),
        Measurement("mixed_pairs", max(r["mixed_lp"], r["mixed_lpp"]), 1e-11),
        Measurement("eight_trace_formula", r["eight_formula"], 1e-10),
        Measurement("lambda1_JZ_minus2", abs(r["lp_jz"] + 2) / 2 + r["lp_jz_spread"], 1e-10),
        Measurement("lambda2_JZ_plus2", abs(r["lpp_jz"] - 2) / 2 + r["lpp_jz_spread"], 1e-10),
        Measurement("norm_Z_twice_B", r["norm_ratio"], 1e-12),
    ]


def _anisotropy_checks(n, trials, rng):
    r = cupform.anisotropy_check(n, trials, rng)
    sq = cupform.lemma_square_check(n, 5, rng)
    return [
        Measurement("ratio_spread", r["spread"], 1e-9),
        Measurement("cross_terms", max(r["cross_lambda_prime"], r["cross_lambda_double_prime"]), 1e-11),
        Measurement("unit_sphere_min", r["unit_min_ratio"], 0.9, comparison="ge", exact=True),
        Measurement("alpha_only_matches_square", abs(r["alpha_only_constant"] - sq["c_estimate"]) / abs(sq["c_estimate"]), 1e-9),
        Measurement("type_labels", r["type_defect"], 1e-12),
        Measurement("constant_positive", r["c_estimate"], 0.0, comparison="ge", exact=True),
    ]


def _lambda_invariance_checks(n, trials, rng):
    r = cupform.lambda_invariance(n, min(trials, 50), rng)
    return [Measurement("lambda_sp_invariant", r["lambda_sp"], 1e-11),
            Measurement("lambda_primes_invariant", r["lambda_primes"], 1e-11)]


# -- gradedhodge -------------------------------------------------------------

def _grading_checks(n, trials, rng):
    r = gradedhodge.grading_report(n, trials, rng)
    dims = r.dims
    total = sum(dims.values())
    expected_total = (n + 1) * (2 * n + 3)
    dim_gap = (abs(total - expected_total) + abs(dims[-2] - 1) + abs(dims[-1] - 2 * n)
               + sum(abs(dims[k] - dims[-k]) for k in (1, 2)))
    eig = gradedhodge.ad_spectrum(n)
    eig_res = float(np.max(np.abs(eig - np.round(eig.real))))
    eig_set = set(int(k) for k in np.round(eig.real))
    gl = r.gl_image_dims
    gl_gap = abs(gl[-1] - n) + abs(gl[0] - n * n - 1) + abs(gl[1] - n) + gl[-2] + gl[2]
    return [
        Measurement("graded_dims", dim_gap, 0, exact=True),
        Measurement("ad_v_spectrum", eig_res + (0 if eig_set == set(gradedhodge.DEGREES) else 1), 1e-11),
        Measurement("eigen_components", r.eigen_residual, 1e-11),
        Measurement("bracket_additivity", r.bracket_residual, 1e-11),
        Measurement("block_patterns", max(r.pattern_residuals.values()), 1e-12),
        Measurement("f0_subalgebra", r.subalgebra_residual, 1e-11),
        Measurement("gl_image_grading", gl_gap, 0, exact=True),
    ]


CHECKS: tuple[Check, ...] = (
    Check("quaternion_algebra", "quatmat", "quaternion product (a+jb)(c+jd) = (ac - conj(b)d) + j(conj(a)d + bc); left multiplication [[a,-conj(b)],[b,conj(a)]]", _quat_checks),
    Check("complexify_realify", "quatmat", "C + jD -> [[C,-conj(D)],[D,conj(C)]]; antilinear A + iB -> [[A,B],[B,-A]]", _complexify_checks),
    Check("change_convention", "quatmat", "unitary change of basis between diag(I_n,-1) and diag(-1,I_2n,-1) conventions", _convention_checks),
    Check("algebra_dimensions", "liecore", "dim sp(n,1) = (n+1)(2n+3), dim u(2n,2) = 4(n+1)^2, dim so(4n,4) = 2(n+1)(4n+3)", _dimension_checks),
    Check("membership_closure", "liecore", "defining equations X*H + HX = 0, X^T Omega + Omega X = 0; closure and Jacobi", _membership_checks),
    Check("embedding_chain", "liecore", "su(n,1) -> u(n,1) -> sp(n,1) -> u(2n,2) -> so(4n,4); A -> diag(A, -J0 A^T J0)", _embedding_checks),
    Check("cartan_split", "liecore", "su(n,1) = k + p, p = {[[0,x],[x*,0]]}", _cartan_checks),
    Check("intersection_lemma", "liecore", "Sp(n,1) = GL(n+1,H) n U(2n,2) = Sp(2n+2,C) n U(2n,2)", _intersection_checks),
    Check("trace_pairing", "liecore", "Killing form proportional to Re Tr_H(A* A) on the compact part", _pairing_checks),
    Check("decompose_sp", "branching", "sp(n,1) = u(n,1) + S^2 V*", _decomp_checks(Kind.SP)),
    Check("decompose_u22", "branching", "u(2n,2) = 2 u(n,1) + L^2 V* + S^2 V*", _decomp_checks(Kind.U22)),
    Check("decompose_so", "branching", "so(4n,4) = z + 2 su(n,1) + 2 L^2 V* + 2 L^2 Vbar* + S^2 V* + S^2 Vbar*", _decomp_checks(Kind.SO)),
    Check("decompose_so_adjoint", "branching", "so(4n,4) with antilinear off-diagonal block = su(n,1) + i su(n,1) + C", _decomp_checks(Kind.SO, "adjoint")),
    Check("hom_p_decompose", "branching", "Hom(p, S^2 V*) contains S^3 p* as a direct factor", _hom_checks),
    Check("rho_action", "weitzenbock", "rho(X)(Q) = X^T Q + Q X", _rho_checks),
    Check("energy_identity", "weitzenbock", "(T eta, eta) = 2|alpha|^2 + |Trace(beta)|^2", _energy_checks),
    Check("null_space", "weitzenbock", "ker T = S^3 p* (and its conjugate for S^2 Vbar*)", _kernel_checks),
    Check("wedge_top_ratio", "cupform", "phi ^ omega^(n-1) / omega^n = c sum_k phi(E_k, iE_k)", _wedge_checks),
    Check("lemma_square_check", "cupform", "lambda o [alpha,alpha] ^ omega^(n-1) = c |alpha|^2 omega^n", _square_checks),
    Check("lambdappp_vanishing", "cupform", "lambda' on [S2Vbar*,S2Vbar*], lambda'' on [S2V*,S2V*], both on mixed pairs vanish; lambda'([Z,Z']) = 8 Tr(DC' - CD')", _lambdappp_checks),
    Check("anisotropy_check", "cupform", "(lambda'+lambda'') o [(a+a') ^ (a+a')] ^ omega^(n-1) / omega^n = (2/n)(|a|^2 + |a'|^2)", _anisotropy_checks),
    Check("lambda_invariance", "cupform", "lambda = <., iI>, lambda' = <., J'>, lambda'' = <., J''> are SU(n,1)-invariant", _lambda_invariance_checks),
    Check("grading_report", "gradedhodge", "v = diag(-1,0,...,0,1) grades sp(2n+2,C) in degrees -2..2", _grading_checks),
)


def list_checks() -> list[dict]:
    return [{"check": c.name, "suite": c.suite, "anchor": c.anchor} for c in CHECKS]


def _check_seed(seed: int, n: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, n, index]))


def _run_one(args) -> list[CheckRecord]:
    index, n, trials, seed, tol = args
    check = CHECKS[index]
    rng = _check_seed(seed, n, index)
    start = time.perf_counter()
    measurements = check.fn(n, trials, rng)
    elapsed = time.perf_counter() - start
    out = []
    for m in measurements:
        thr = m.scale if m.exact else m.scale * tol / BASE_TOL
        ok = m.value <= thr if m.comparison == "le" else m.value >= thr
        out.append(CheckRecord(check.suite, f"{check.name}/{m.name}", check.anchor, n,
                               float(m.value), float(thr), m.comparison, bool(ok),
                               elapsed / max(1, len(measurements))))
    return out


def run_checks(config: RunConfig) -> list[CheckRecord]:
    config.validate()
    tasks = [
        (i, n, config.trials, config.seed, config.tolerance)
        for n in config.n
        for i, c in enumerate(CHECKS)
        if c.suite in config.suites
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    return [r for batch in results for r in batch]


def format_report(records: list[CheckRecord], fmt: str) -> str:
    if fmt == "machine":
        return "".join(r.machine() + "\n" for r in records)
    lines = [r.human() for r in records]
    failed = sum(not r.passed for r in records)
    lines.append(f"{len(records) - failed}/{len(records)} checks passed")
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write report to {out}: {exc}") from exc


def run(config: RunConfig) -> int:
    config.validate()
    if config.out is not None:
        _write("", config.out)  # fail fast on an unwritable path
    records = run_checks(config)
    _write(format_report(records, config.format), config.out)
    return 0 if all(r.passed for r in records) else 1


# -- argument parsing --------------------------------------------------------

def _parse_n(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid n: {text}") from exc


def _parse_suites(values) -> tuple[str, ...]:
    if not values:
        return SUITES
    out = []
    for v in values:
        out.extend(s.strip() for s in v.split(",") if s.strip())
    return tuple(out)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--n", type=_parse_n, default=(2,), help="comma-separated list, each >= 2")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=BASE_TOL)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("human", "machine"), default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatrigid", description="Numerical certification of quaternionic rigidity identities")
    sub = parser.add_subparsers(dest="verb", required=True)
    p_run = sub.add_parser("run", help="run verification suites")
    _common(p_run)
    p_run.add_argument("--suite", action="append", help="suite name(s); repeat or comma-separate")
    p_run.add_argument("--jobs", type=int, default=1)
    p_list = sub.add_parser("list", help="list every check with its anchor")
    p_list.add_argument("--format", choices=("human", "machine"), default="human")
    p_dec = sub.add_parser("decompose", help="dump a module decomposition")
    _common(p_dec)
    p_dec.add_argument("--alg", choices=("sp", "u22", "so", "hom"), default="sp")
    p_dec.add_argument("--recipe", choices=("blockwise", "adjoint"), default="blockwise")
    p_ker = sub.add_parser("kernel", help="dump the null space of the T-energy form")
    _common(p_ker)
    p_ker.add_argument("--conjugate", action="store_true")
    p_gr = sub.add_parser("grade", help="dump the grading report")
    _common(p_gr)
    return parser


def _emit(obj: dict, fmt: str, out: str | None):
    if fmt == "machine":
        text = json.dumps(obj) + "\n"
    else:
        text = "\n".join(f"{k}: {v}" for k, v in obj.items()) + "\n"
    _write(text, out)


def _config_from(args) -> RunConfig:
    cfg = RunConfig(
        n=args.n,
        suites=_parse_suites(getattr(args, "suite", None)),
        trials=args.trials,
        seed=args.seed,
        tolerance=args.tol,
        out=args.out,
        format=args.format,
        jobs=getattr(args, "jobs", 1),
    )
    cfg.validate()
    return cfg


def _decompose_cmd(cfg: RunConfig, alg: str, recipe: str) -> int:
    results = {}
    for n in cfg.n:
        if alg == "hom":
            rep = branching.hom_p_decompose(n)
        else:
            kind = {"sp": Kind.SP, "u22": Kind.U22, "so": Kind.SO}[alg]
            rep = branching.decompose(kind, n, recipe)
        eq = branching.check_equivariance(rep, min(cfg.trials, 50), np.random.default_rng(cfg.seed))
        results[f"n={n}"] = {
            "dim_table": rep.dim_table,
            "total": rep.total_dim,
            "residuals": {k: float(f"{v:.3e}") for k, v in rep.residuals.items()},
            "equivariance": {k: float(f"{v:.3e}") for k, v in eq.items()},
        }
    _emit(results, cfg.format, cfg.out)
    worst = max(v for r in results.values() for v in r["equivariance"].values())
    return 0 if worst <= cfg.tolerance else 1


def _kernel_cmd(cfg: RunConfig, conjugate: bool) -> int:
    results = {}
    for n in cfg.n:
        k = weitzenbock.null_space(n, conjugate=conjugate)
        results[f"n={n}"] = {
            "ambient_dim": k.ambient_dim,
            "kernel_dim": k.kernel_dim,
            "threshold": k.threshold,
            "gap_ratio": float(f"{k.gap_ratio:.6e}"),
            "eigenvalues": [float(f"{w:.6e}") for w in k.eigenvalues],
            "basis": np.round(k.summand.basis, 12).tolist(),
        }
    _emit(results, cfg.format, cfg.out)
    return 0


def _grade_cmd(cfg: RunConfig) -> int:
    results = {}
    for n in cfg.n:
        r = gradedhodge.grading_report(n, cfg.trials, np.random.default_rng(cfg.seed))
        results[f"n={n}"] = {
            "dims": {str(k): v for k, v in r.dims.items()},
            "bracket_residual": float(f"{r.bracket_residual:.3e}"),
            "eigen_residual": float(f"{r.eigen_residual:.3e}"),
            "pattern_residuals": {k: float(f"{v:.3e}") for k, v in r.pattern_residuals.items()},
            "subalgebra_residual": float(f"{r.subalgebra_residual:.3e}"),
            "gl_image_dims": {str(k): v for k, v in r.gl_image_dims.items()},
        }
    _emit(results, cfg.format, cfg.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        if args.verb == "list":
            cat = list_checks()
            if args.format == "machine":
                sys.stdout.write("".join(json.dumps(c) + "\n" for c in cat))
            else:
                for c in cat:
                    sys.stdout.write(f"{c['suite']:<11} {c['check']:<24} {c['anchor']}\n")
            return 0
        cfg = _config_from(args)
        if args.verb == "run":
            return run(cfg)
        if args.verb == "decompose":
            return _decompose_cmd(cfg, args.alg, args.recipe)
        if args.verb == "kernel":
            return _kernel_cmd(cfg, args.conjugate)
        return _grade_cmd(cfg)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

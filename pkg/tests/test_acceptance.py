"""One test per acceptance criterion. Each prints a PASS/FAIL line with its measurements."""
import subprocess
import sys
import time
from math import comb

import numpy as np
import pytest

from quatrigid import branching as br
from quatrigid import cupform as cf
from quatrigid import gradedhodge as gh
from quatrigid import liecore as lc
from quatrigid import quatmat as qm
from quatrigid import weitzenbock as wz
from quatrigid.liecore import AlgebraTag, Kind

from conftest import ACCEPTANCE_LINES


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_quaternion_layer():
    rng = np.random.default_rng(1001)
    assoc = conj = hom = cplx = 0.0
    for _ in range(1000):
        p, q, r = (qm.random_quaternion(rng) for _ in range(3))
        s3 = 1 + p.norm2() * q.norm2() * r.norm2()
        s2 = 1 + p.norm2() * q.norm2()
        x, y = (p * q) * r, p * (q * r)
        assoc = max(assoc, (abs(x.a - y.a) + abs(x.b - y.b)) / s3)
        c = (p * q).conj() - q.conj() * p.conj()
        conj = max(conj, (abs(c.a) + abs(c.b)) / s2)
        d = qm.left_mult_matrix(p * q) - qm.left_mult_matrix(p) @ qm.left_mult_matrix(q)
        hom = max(hom, np.linalg.norm(d) / s2)
    for _ in range(1000):
        a, b = qm.random_hmatrix(3, rng), qm.random_hmatrix(3, rng)
        for conv in qm.Convention:
            d = qm.complexify(a @ b, conv) - qm.complexify(a, conv) @ qm.complexify(b, conv)
            cplx = max(cplx, np.linalg.norm(d) / (1 + a.norm() ** 2 * b.norm() ** 2))
    q = qm.Quaternion(1 + 2j, 3 - 4j)
    layout = np.array_equal(qm.left_mult_matrix(q), np.array([[1 + 2j, -(3 + 4j)], [3 - 4j, 1 - 2j]]))
    worst = max(assoc, conj, hom, cplx)
    report(1, worst <= 1e-12 and layout,
           f"assoc {assoc:.1e}, conj {conj:.1e}, left-mult hom {hom:.1e}, "
           f"complexify hom {cplx:.1e} (<= 1e-12); left_mult layout exact: {layout}")


def test_criterion_02_dimensions():
    bad = []
    for n in range(2, 6):
        for kind, formula in ((Kind.SP, (n + 1) * (2 * n + 3)), (Kind.U22, 4 * (n + 1) ** 2),
                              (Kind.SO, 2 * (n + 1) * (4 * n + 3))):
            rank_dim = lc.dimension(AlgebraTag(kind, n))
            table = br.decompose(kind, n).dim_table
            if not rank_dim == formula == sum(table.values()) == sum(br.expected_dim_table(kind, n).values()):
                bad.append((kind.value, n, rank_dim, formula, sum(table.values())))
    totals = [lc.dimension(AlgebraTag(k, 2)) for k in (Kind.SP, Kind.U22, Kind.SO)]
    report(2, not bad and totals == [21, 36, 66],
           f"n=2..5 constraint ranks, closed forms and summand tables agree; n=2 totals {totals}"
           + (f"; mismatches {bad}" if bad else ""))


def test_criterion_03_intersection():
    res = [lc.verify_intersection(n, 100, 1003 + n) for n in (2, 3, 4)]
    worst = max(max(r["u22_residual"], r["spc_residual"]) for r in res)
    dims_ok = all(r["joint_dimension"] == (r["n"] + 1) * (2 * r["n"] + 3) for r in res)
    joint = [r["joint_dimension"] for r in res]
    report(3, worst <= 1e-12 and dims_ok,
           f"membership residual {worst:.1e} (<= 1e-12); joint dims n=2,3,4: {joint}")


def test_criterion_04_equivariance():
    worst, neg = {}, {}
    for kind in (Kind.SP, Kind.U22, Kind.SO):
        rep = br.decompose(kind, 2)
        leaks = br.check_equivariance(rep, 50, 1004)
        worst[kind.value] = max(leaks.values())
        neg[kind.value] = min(
            max(br.check_equivariance(br.corrupt(rep, i, i + 1), 5, 1004).values())
            for i in range(len(rep.summands) - 1)
        )
    corrected = max(br.check_equivariance(br.decompose(Kind.SO, 2, "adjoint"), 50, 1004).values())
    ok = max(worst.values()) <= 1e-9 and min(neg.values()) >= 1e-2
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    report(4, ok,
           f"worst leak per algebra (<= 1e-9): {detail}; negative control min {min(neg.values()):.2f} "
           f"(>= 1e-2); so(4n,4) with antilinear block split as su+i su+C: {corrected:.1e}")


def test_criterion_05_energy_identity():
    rng = np.random.default_rng(1005)
    ident = inv = 0.0
    for n in (2, 3):
        for _ in range(1000):
            eta = wz.random_cochain(n, rng)
            ident = max(ident, wz.energy_identity(eta).residual / (1 + eta.norm_sq()))
        for _ in range(50):
            eta = wz.random_cochain(n, rng)
            frame, o = wz.rotated_frame(n, rng)
            moved = wz.reexpress(eta, o)
            e1 = wz.hom_inner(wz.t_apply(eta), eta)
            e2 = wz.hom_inner(wz.t_apply(moved, frame), moved)
            inv = max(inv, abs(e1 - e2) / (1 + eta.norm_sq()))
    report(5, ident <= 1e-9 and inv <= 1e-11,
           f"identity residual {ident:.1e} (<= 1e-9), basis change {inv:.1e} (<= 1e-11), n=2,3")


def test_criterion_06_null_space():
    parts, ok = [], True
    for n in (2, 3):
        k = wz.null_space(n)
        cmp = wz.kernel_vs_s3(n)
        proj = max(cmp["kernel_in_s3"], cmp["s3_in_kernel"])
        good = (k.kernel_dim == 2 * comb(n + 2, 3) and k.gap_ratio >= 1e3 and proj <= 1e-9
                and cmp["conj_kernel_dim"] == k.kernel_dim and cmp["conj_kernel_match"] <= 1e-9)
        ok &= good
        parts.append(f"n={n}: {k.kernel_dim} of {k.ambient_dim}, gap {k.gap_ratio:.1e}, "
                     f"vs S3p* {proj:.1e}, conjugate {cmp['conj_kernel_match']:.1e}")
    report(6, ok, "; ".join(parts))


def test_criterion_07_lemma_square():
    parts, ok = [], True
    for n in (2, 3):
        r = cf.lemma_square_check(n, 100, 1007 + n)
        ks = cf.KahlerStructure(n)
        rng = np.random.default_rng(1007)
        wedge = 0.0
        for _ in range(30):
            a = rng.normal(size=(2 * n, 2 * n))
            a = a - a.T
            wedge = max(wedge, abs(cf.wedge_top_ratio(a, ks) - cf.wedge_top_ratio_oracle(a, ks)))
        ok &= r["spread"] <= 1e-9 and r["same_sign"] and wedge <= 1e-12
        parts.append(f"n={n}: c={r['c_estimate']:.6f} spread {r['spread']:.1e}, "
                     f"fixed sign {r['same_sign']}, wedge vs oracle {wedge:.1e}")
    report(7, ok, "; ".join(parts))


def test_criterion_08_lambda_primes():
    parts, ok = [], True
    for n in (2, 3):
        r = cf.lambdappp_vanishing(n, 100, 1008 + n)
        van = max(r["lp_on_bar"], r["lpp_on_s2"], r["mixed_lp"], r["mixed_lpp"])
        m2 = abs(r["lp_jz"] + 2) / 2 + r["lp_jz_spread"]
        p2 = abs(r["lpp_jz"] - 2) / 2 + r["lpp_jz_spread"]
        ok &= van <= 1e-11 and r["eight_formula"] <= 1e-10 and m2 <= 1e-10 and p2 <= 1e-10
        parts.append(f"n={n}: vanishing {van:.1e}, 8Tr formula {r['eight_formula']:.1e}, "
                     f"lambda'(Z,JZ)/|Z|^2={r['lp_jz']:.6f}, lambda''(Z',JZ')/|Z'|^2={r['lpp_jz']:.6f}")
    report(8, ok, "; ".join(parts))


def test_criterion_09_anisotropy():
    parts, ok = [], True
    for n in (2, 3):
        r = cf.anisotropy_check(n, 100, 1009 + n, unit_samples=10000)
        cross = max(r["cross_lambda_prime"], r["cross_lambda_double_prime"])
        positive = r["c_estimate"] > 0
        ok &= positive and r["spread"] <= 1e-9 and cross <= 1e-11 and r["unit_min_ratio"] >= 0.9
        parts.append(f"n={n}: constant {r['c_estimate']:.6f} (positive: {positive}), spread "
                     f"{r['spread']:.1e}, cross {cross:.1e}, unit-sphere min/|c| {r['unit_min_ratio']:.3f}")
    report(9, ok, "; ".join(parts))


def test_criterion_10_grading():
    parts, ok = [], True
    for n in (2, 3):
        r = gh.grading_report(n, 100, 1010 + n)
        eig = gh.ad_spectrum(n)
        eig_ok = (np.max(np.abs(eig - np.round(eig.real))) < 1e-11
                   and set(np.round(eig.real).astype(int)) == set(gh.DEGREES))
        dims = r.dims
        dims_ok = (sum(dims.values()) == (n + 1) * (2 * n + 3)
                   and all(dims[k] == dims[-k] for k in (1, 2)))
        pat = max(r.pattern_residuals.values())
        ok &= eig_ok and dims_ok and r.bracket_residual <= 1e-11 and pat <= 1e-12
        parts.append(f"n={n}: spectrum ok {eig_ok}, dims {list(dims.values())}, "
                     f"bracket {r.bracket_residual:.1e}, patterns {pat:.1e}")
    report(10, ok, "; ".join(parts))


def test_criterion_11_end_to_end(tmp_path):
    outs, codes, times = [], [], []
    for k in range(2):
        path = tmp_path / f"run{k}.jsonl"
        start = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "quatrigid", "run", "--n", "2", "--trials", "100",
                               "--seed", "42", "--format", "machine", "--out", str(path)])
        times.append(time.perf_counter() - start)
        codes.append(proc.returncode)
        outs.append(path.read_bytes())
    failing = [line for line in outs[0].decode().splitlines() if '"pass": false' in line]
    same = outs[0] == outs[1]
    ok = codes == [0, 0] and same and max(times) < 60
    names = [line.split('"check": "')[1].split('"')[0] for line in failing]
    report(11, ok, f"exit codes {codes}, wall {max(times):.1f}s (< 60), byte-identical {same}, "
                   f"failing checks {names}")

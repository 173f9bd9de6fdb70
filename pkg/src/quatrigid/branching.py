"""Module decompositions of sp(n,1), u(2n,2), so(4n,4) under U(n,1), and of
Hom(p, S^2 V*) under the maximal compact subgroup.

Each summand is spanned by an explicit block recipe and then checked, not
assumed, to be invariant. Everything here uses the BLOCK convention.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import comb

import numpy as np

from .liecore import (
    AlgebraTag,
    Kind,
    _rng,
    basis,
    basis_coords,
    embed_group,
    from_coords,
    p_basis,
    random_compact_element,
    random_group_element,
    to_coords,
)
from .quatmat import StructuredMatrix, complexify, real_form, realify

HOM_LABEL = "Hom(p,S2V*)"


@dataclass(frozen=True, eq=False)
class Summand:
    label: str
    basis: np.ndarray  # rows: orthonormal real coordinate vectors
    copy: int = 0

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    algebra: object  # AlgebraTag, or HOM_LABEL for the Hom-space
    n: int
    summands: tuple
    ambient: np.ndarray  # orthonormal basis of the whole space being split
    recipe: str = "blockwise"
    residuals: dict = field(default_factory=dict)

    @property
    def dim_table(self) -> dict[str, int]:
        table: dict[str, int] = {}
        for s in self.summands:
            table[s.label] = table.get(s.label, 0) + s.dim
        return table

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.summands)

    def summand(self, label: str, copy: int = 0) -> Summand:
        for s in self.summands:
            if s.label == label and s.copy == copy:
                return s
        raise KeyError((label, copy))


def orthonormalize(vectors, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal rows spanning ``vectors`` (rank decided by SVD)."""
    a = np.atleast_2d(np.asarray(vectors, dtype=float))
    u, s, _ = np.linalg.svd(a.T, full_matrices=False)
    if s.size == 0:
        return np.zeros((0, a.shape[1]))
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return u[:, :rank].T.copy()


# -- small matrix families ---------------------------------------------------

@lru_cache(maxsize=None)
def _sym_real(m: int) -> tuple:
    out = []
    for j in range(m):
        for k in range(j, m):
            e = np.zeros((m, m))
            if j == k:
                e[j, j] = 1.0
            else:
                e[j, k] = e[k, j] = 1 / np.sqrt(2)
            out.append(e)
    return tuple(out)


@lru_cache(maxsize=None)
def _antisym_real(m: int) -> tuple:
    out = []
    for j in range(m):
        for k in range(j + 1, m):
            e = np.zeros((m, m))
            e[j, k], e[k, j] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            out.append(e)
    return tuple(out)


def sym_complex_basis(m: int) -> np.ndarray:
    """Orthonormal real basis of complex symmetric m x m matrices (real part first)."""
    real = list(_sym_real(m))
    return np.array(real + [1j * e for e in real], dtype=complex)


def antisym_complex_basis(m: int) -> np.ndarray:
    real = list(_antisym_real(m))
    return np.array(real + [1j * e for e in real], dtype=complex)


# -- cochains on p -----------------------------------------------------------

def cochain_dim(n: int) -> int:
    return 2 * n * (n + 1) * (n + 2)


def cochain_to_coords(values: np.ndarray) -> np.ndarray:
    """Real coordinates of a cochain given by its values on the p-basis."""
    values = np.asarray(values)
    sb = sym_complex_basis(values.shape[-1])
    return np.real(np.einsum("hij,dij->hd", values, sb.conj())).ravel()


def cochain_from_coords(v: np.ndarray, n: int) -> np.ndarray:
    sb = sym_complex_basis(n + 1)
    return np.einsum("hd,dij->hij", np.asarray(v).reshape(2 * n, -1), sb)


def _p_coefficients(y: np.ndarray, n: int) -> np.ndarray:
    """Real coordinates of the p-element with vector y in the orthonormal p-basis."""
    out = np.empty(2 * n)
    out[0::2] = np.sqrt(2) * y.real
    out[1::2] = np.sqrt(2) * y.imag
    return out


def _cochain_from_map(fn, n: int) -> np.ndarray:
    """Values on the p-basis of ``Y -> fn(y)`` with y the vector of Y."""
    vals = []
    for h in range(2 * n):
        y = np.zeros(n, dtype=complex)
        y[h // 2] = (1 if h % 2 == 0 else 1j) / np.sqrt(2)
        vals.append(fn(y))
    return np.array(vals)


def _corner(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n + 1, n + 1), dtype=complex)
    out[:n, :n] = a
    return out


def symmetric_cubic_tensor(n: int, idx: tuple) -> np.ndarray:
    t = np.zeros((n, n, n))
    for p in set(permutations(idx)):
        t[p] = 1.0
    return t


def s3_cochain(t: np.ndarray, n: int) -> np.ndarray:
    """Cochain ``Y -> [[A(y), 0], [0, 0]]`` with ``A(y)_jk = sum_l T_jkl y_l``."""
    return _cochain_from_map(lambda y: _corner(np.einsum("jkl,l->jk", t, y), n), n)


def _hom_generators(n: int) -> dict[str, list[np.ndarray]]:
    m = n + 1
    gens: dict[str, list[np.ndarray]] = {k: [] for k in ("S3", "HomC", "anti", "B", "d")}
    for idx in combinations_with_replacement(range(n), 3):
        t = symmetric_cubic_tensor(n, idx)
        for c in (1, 1j):
            gens["S3"].append(c * s3_cochain(t, n))
    for l in range(n):
        for s in _sym_real(n):
            for c in (1, 1j):
                gens["HomC"].append(_cochain_from_map(lambda y: _corner(c * s * y[l], n), n))
                gens["anti"].append(
                    _cochain_from_map(lambda y: _corner(c * s * np.conj(y[l]), n), n)
                )
    for h in range(2 * n):
        for j in range(n):
            for c in (1, 1j):
                vals = np.zeros((2 * n, m, m), dtype=complex)
                vals[h, j, n] = vals[h, n, j] = c
                gens["B"].append(vals)
        for c in (1, 1j):
            vals = np.zeros((2 * n, m, m), dtype=complex)
            vals[h, n, n] = c
            gens["d"].append(vals)
    return gens


def _complement(span: np.ndarray, sub: np.ndarray) -> np.ndarray:
    proj = span - (span @ sub.T) @ sub
    return orthonormalize(proj)


@lru_cache(maxsize=None)
def _hom_p_decompose(n: int) -> DecompositionReport:
    gens = _hom_generators(n)
    coords = {k: orthonormalize([cochain_to_coords(v) for v in vs]) for k, vs in gens.items()}
    s3 = coords["S3"]
    summands = (
        Summand("S3p*", s3),
        Summand("HomC(p,S2p*)-S3p*", _complement(coords["HomC"], s3)),
        Summand("antilinear Hom(p,S2p*)", coords["anti"]),
        Summand("End p* (B-block)", coords["B"]),
        Summand("p (d-block)", coords["d"]),
    )
    report = DecompositionReport(HOM_LABEL, n, summands, np.eye(cochain_dim(n)), "hom")
    return replace(report, residuals=direct_sum_residuals(report))


def hom_p_decompose(n: int) -> DecompositionReport:
    """Split of Hom(p, S^2 V*) with the S^3 p* summand built explicitly."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return _hom_p_decompose(n)


def expected_s3_dim(n: int) -> int:
    return 2 * comb(n + 2, 3)


def k_action_on_cochain(k: np.ndarray, values: np.ndarray) -> np.ndarray:
    """``(k eta)(Y) = k^{-T} eta(Ad(k^{-1}) Y) k^{-1}`` for k in U(n) x U(1)."""
    n = values.shape[0] // 2
    kinv = np.linalg.inv(k)
    pb = p_basis(n)
    out = []
    for x in pb:
        y = kinv @ x @ k
        coef = np.real(np.einsum("ij,hij->h", y, pb.conj()))
        out.append(kinv.T @ np.einsum("h,hij->ij", coef, values) @ kinv)
    return np.array(out)


# -- algebra decompositions --------------------------------------------------

def _offdiag(b: np.ndarray, q: np.ndarray, conj_transpose: bool) -> np.ndarray:
    z = np.zeros((2 * b.shape[0],) * 2, dtype=b.dtype)
    s = b.shape[0]
    z[:s, s:] = b @ q
    z[s:, :s] = -(b.conj().T if conj_transpose else b.T) @ q
    return z


def _diag2(a: np.ndarray, which: int) -> np.ndarray:
    s = a.shape[0]
    z = np.zeros((2 * s, 2 * s), dtype=a.dtype)
    z[which * s : (which + 1) * s, which * s : (which + 1) * s] = a
    return z


def _recipes(alg: AlgebraTag, recipe: str) -> list[tuple[str, int, list[np.ndarray]]]:
    n, m = alg.n, alg.n + 1
    q = real_form(m, "block")
    sym = sym_complex_basis(m)
    anti = antisym_complex_basis(m)
    u_basis = [x.mat for x in basis(AlgebraTag(Kind.U, n))]
    su_basis = [x.mat for x in basis(AlgebraTag(Kind.SU, n))]
    zero = np.zeros((m, m))
    if alg.kind is Kind.SP:
        return [
            ("u(n,1)", 0, [complexify(StructuredMatrix.quaternionic(a)) for a in u_basis]),
            (
                "S2V*",
                0,
                [complexify(StructuredMatrix.quaternionic(zero, q @ e)) for e in sym],
            ),
        ]
    if alg.kind is Kind.U22:
        return [
            ("u(n,1)", 0, [_diag2(a, 0) for a in u_basis]),
            ("u(n,1)", 1, [_diag2(a, 1) for a in u_basis]),
            ("L2V*", 0, [_offdiag(b, q, True) for b in anti]),
            ("S2V*", 0, [_offdiag(b, q, True) for b in sym]),
        ]
    if alg.kind is Kind.SO:
        jr = realify(1j * np.eye(m))
        qr = realify(q)
        pieces = [
            ("z", 0, [_diag2(jr, 0), _diag2(jr, 1)]),
            ("su(n,1)", 0, [_diag2(realify(a), 0) for a in su_basis]),
            ("su(n,1)", 1, [_diag2(realify(a), 1) for a in su_basis]),
            ("L2V*", 0, [_diag2(realify(q @ s, antilinear=True), 0) for s in anti]),
            ("L2Vbar*", 0, [_diag2(realify(q @ s, antilinear=True), 1) for s in anti]),
            ("S2V*", 0, [_offdiag(realify(b), qr, False) for b in sym]),
            ("L2V*", 1, [_offdiag(realify(b), qr, False) for b in anti]),
        ]
        if recipe == "blockwise":
            pieces += [
                ("S2Vbar*", 0, [_offdiag(realify(b, True), qr, False) for b in sym]),
                ("L2Vbar*", 1, [_offdiag(realify(b, True), qr, False) for b in anti]),
            ]
        elif recipe == "adjoint":
            # the antilinear off-diagonal block is X -> g X g^{-1} on X = M Q
            pieces += [
                ("su(n,1)", 2, [_offdiag(realify(a @ q, True), qr, False) for a in su_basis]),
                (
                    "su(n,1)",
                    3,
                    [_offdiag(realify(1j * a @ q, True), qr, False) for a in su_basis],
                ),
                (
                    "z",
                    1,
                    [_offdiag(realify(c * q, True), qr, False) for c in (1, 1j)],
                ),
            ]
        else:
            raise ValueError(f"unknown recipe {recipe!r}")
        return pieces
    raise ValueError(f"no decomposition for {alg.kind.value}")


def direct_sum_residuals(report: DecompositionReport) -> dict[str, float]:
    ps = [s.projector for s in report.summands]
    total = sum(ps)
    amb = report.ambient.T @ report.ambient
    cross = 0.0
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            cross = max(cross, float(np.linalg.norm(ps[i] @ ps[j])))
    outside = max(
        (float(np.linalg.norm(s.basis - s.basis @ amb)) for s in report.summands), default=0.0
    )
    return {
        "direct_sum": float(np.linalg.norm(total - amb)),
        "pairwise": cross,
        "outside_ambient": outside,
    }


@lru_cache(maxsize=None)
def _decompose(kind: Kind, n: int, recipe: str) -> DecompositionReport:
    alg = AlgebraTag(kind, n)
    summands = tuple(
        Summand(label, orthonormalize([to_coords(x, alg) for x in gens]), copy)
        for label, copy, gens in _recipes(alg, recipe)
    )
    report = DecompositionReport(alg, n, summands, basis_coords(alg), recipe)
    return replace(report, residuals=direct_sum_residuals(report))


def decompose(alg, n: int | None = None, recipe: str = "blockwise") -> DecompositionReport:
    """Split sp(n,1), u(2n,2) or so(4n,4) into U(n,1)-summands.

    ``recipe="blockwise"`` uses the block forms with symmetric and antisymmetric
    coefficient matrices everywhere. ``recipe="adjoint"`` replaces the
    antilinear off-diagonal part of so(4n,4), on which U(n,1) acts by
    conjugation, with su(n,1) + i su(n,1) + C.
    """
    if isinstance(alg, AlgebraTag):
        kind, n = alg.kind, alg.n
    else:
        kind = Kind(alg)
    if n is None or n < 2:
        raise ValueError("n must be >= 2")
    if kind not in (Kind.SP, Kind.U22, Kind.SO):
        raise ValueError(f"unsupported algebra {kind.value}")
    if recipe not in ("blockwise", "adjoint"):
        raise ValueError(f"unknown recipe {recipe!r}")
    if kind is not Kind.SO:
        recipe = "blockwise"
    return _decompose(kind, n, recipe)


def _action_matrices(report: DecompositionReport, trials: int, seed, identity: bool):
    """Real matrices of the group action on the report's coordinate space."""
    rng = _rng(seed)
    n = report.n
    for _ in range(trials):
        if report.algebra == HOM_LABEL:
            k = np.eye(n + 1) if identity else random_compact_element(n, rng)
            yield lambda v, k=k: cochain_to_coords(
                k_action_on_cochain(k, cochain_from_coords(v, n))
            )
        else:
            alg = report.algebra
            g = np.eye(n + 1) if identity else random_group_element(n, rng)
            gg = embed_group(g, n, alg.kind)
            ginv = np.linalg.inv(gg)
            yield lambda v, gg=gg, ginv=ginv, alg=alg: to_coords(
                gg @ from_coords(v, alg) @ ginv, alg
            )


def check_equivariance(
    report: DecompositionReport, trials: int = 50, seed=None, identity: bool = False
) -> dict[str, float]:
    """Worst relative leak ``|(1-P) g.P| / |g.P|`` per summand over random g."""
    worst = {f"{s.label}#{s.copy}": 0.0 for s in report.summands}
    for act in _action_matrices(report, trials, seed, identity):
        for s in report.summands:
            moved = np.array([act(v) for v in s.basis])
            leak = moved - (moved @ s.basis.T) @ s.basis
            rel = float(np.linalg.norm(leak) / max(np.linalg.norm(moved), 1e-300))
            key = f"{s.label}#{s.copy}"
            worst[key] = max(worst[key], rel)
    return worst


def corrupt(report: DecompositionReport, i: int = 0, j: int = 1) -> DecompositionReport:
    """Negative control: swap the first basis vectors of summands i and j."""
    ss = list(report.summands)
    a, b = ss[i].basis.copy(), ss[j].basis.copy()
    a[0], b[0] = ss[j].basis[0], ss[i].basis[0]
    ss[i] = replace(ss[i], basis=a)
    ss[j] = replace(ss[j], basis=b)
    return replace(report, summands=tuple(ss))


def expected_dim_table(kind, n: int, recipe: str = "blockwise") -> dict[str, int]:
    m = n + 1
    s2, l2 = m * (m + 1), m * (m - 1)
    kind = Kind(kind)
    if kind is Kind.SP:
        return {"u(n,1)": m * m, "S2V*": s2}
    if kind is Kind.U22:
        return {"u(n,1)": 2 * m * m, "L2V*": l2, "S2V*": s2}
    if recipe == "blockwise":
        return {"z": 2, "su(n,1)": 2 * (m * m - 1), "L2V*": 2 * l2, "L2Vbar*": 2 * l2,
                "S2V*": s2, "S2Vbar*": s2}
    return {"z": 4, "su(n,1)": 4 * (m * m - 1), "L2V*": 2 * l2, "L2Vbar*": l2, "S2V*": s2}

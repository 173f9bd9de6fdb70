"""Grading of sp(2n+2, C) by ``ad(v)``, ``v = diag(-1, 0, ..., 0, 1)``.

Everything is in the FBASIS convention, with block sizes (1, n, n, 1) and
symplectic form ``[[0, J0], [-J0, 0]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .liecore import (
    AlgebraTag,
    Kind,
    LieElement,
    _rng,
    basis_coords,
    from_coords,
    membership_residual,
    random_element,
)
from .quatmat import Convention, antidiag

DEGREES = (-2, -1, 0, 1, 2)


def spc_tag(n: int) -> AlgebraTag:
    return AlgebraTag(Kind.SPC, n, Convention.FBASIS)


def grading_element(n: int) -> np.ndarray:
    d = np.zeros(2 * n + 2)
    d[0], d[-1] = -1.0, 1.0
    return np.diag(d).astype(complex)


def ad(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    return v @ x - x @ v


@dataclass(frozen=True, eq=False)
class GradedElement:
    components: dict  # degree -> matrix

    def total(self) -> np.ndarray:
        return sum(self.components.values())


@dataclass(frozen=True)
class GradingReport:
    n: int
    dims: dict
    bracket_residual: float
    eigen_residual: float
    pattern_residuals: dict = field(default_factory=dict)
    subalgebra_residual: float = 0.0
    gl_image_dims: dict = field(default_factory=dict)


def degree_projector(x: np.ndarray, v: np.ndarray, k: int) -> np.ndarray:
    """Lagrange interpolation ``prod_{j != k} (ad v - j) / (k - j)`` applied to x."""
    out = np.asarray(x, dtype=complex)
    for j in DEGREES:
        if j != k:
            out = (ad(v, out) - j * out) / (k - j)
    return out


def grade_decompose(x, n: int | None = None, tol: float = 1e-9) -> GradedElement:
    mat = x.mat if isinstance(x, LieElement) else np.asarray(x, dtype=complex)
    n = mat.shape[0] // 2 - 1 if n is None else n
    res = membership_residual(mat, spc_tag(n))
    if res > tol * (1 + np.linalg.norm(mat) ** 2):
        raise ValueError(f"not an sp(2n+2,C) element (residual {res:.3e})")
    v = grading_element(n)
    comps = {k: degree_projector(mat, v, k) for k in DEGREES}
    # a leftover means ad(v) has an eigenvalue outside -2..2
    leftover = np.linalg.norm(mat - sum(comps.values()))
    if leftover > tol * (1 + np.linalg.norm(mat)):
        raise ValueError(f"ad(v) has eigenvalues outside -2..2 (leftover {leftover:.3e})")
    return GradedElement(comps)


def eigen_residual(g: GradedElement, n: int) -> float:
    v = grading_element(n)
    return max(float(np.linalg.norm(ad(v, c) - k * c)) for k, c in g.components.items())


def pure_degree(x: np.ndarray, n: int) -> int | None:
    g = grade_decompose(x, n)
    norms = {k: np.linalg.norm(c) for k, c in g.components.items()}
    big = [k for k, s in norms.items() if s > 1e-12 * (1 + np.linalg.norm(x))]
    return big[0] if len(big) == 1 else None


@lru_cache(maxsize=None)
def graded_bases(n: int) -> dict[int, np.ndarray]:
    """Complex bases (as stacked matrices) of each graded piece."""
    alg = spc_tag(n)
    v = grading_element(n)
    mats = [from_coords(c, alg) for c in basis_coords(alg)]
    out = {}
    for k in DEGREES:
        comps = np.array([degree_projector(x, v, k).ravel() for x in mats])
        out[k] = _complex_row_basis(comps).reshape(-1, 2 * n + 2, 2 * n + 2)
    return out


def _complex_row_basis(rows: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    u, s, vh = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return vh[:rank]


def graded_dims(n: int) -> dict[int, int]:
    return {k: b.shape[0] for k, b in graded_bases(n).items()}


# -- block patterns of the low degrees -----------------------------------------

def gr_minus2(z: complex, n: int) -> np.ndarray:
    x = np.zeros((2 * n + 2,) * 2, dtype=complex)
    x[0, 2 * n + 1] = z
    return x


def gr_minus1(u: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """Row 0 carries ``(u, w)``; the last column carries ``(rev w, -rev u)``."""
    x = np.zeros((2 * n + 2,) * 2, dtype=complex)
    x[0, 1 : n + 1] = u
    x[0, n + 1 : 2 * n + 1] = w
    x[1 : n + 1, 2 * n + 1] = w[::-1]
    x[n + 1 : 2 * n + 1, 2 * n + 1] = -np.asarray(u)[::-1]
    return x


def gr_zero(a: complex, xb: np.ndarray, r: np.ndarray, s: np.ndarray, n: int) -> np.ndarray:
    """``diag(a, [[X, R], [S, -J0 X^T J0]], -a)`` with ``J0 R``, ``J0 S`` symmetric."""
    j0 = antidiag(n)
    x = np.zeros((2 * n + 2,) * 2, dtype=complex)
    x[0, 0], x[-1, -1] = a, -a
    x[1 : n + 1, 1 : n + 1] = xb
    x[1 : n + 1, n + 1 : 2 * n + 1] = r
    x[n + 1 : 2 * n + 1, 1 : n + 1] = s
    x[n + 1 : 2 * n + 1, n + 1 : 2 * n + 1] = -j0 @ xb.T @ j0
    return x


def random_gr_zero(n: int, rng) -> np.ndarray:
    j0 = antidiag(n)

    def c(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    sym_r, sym_s = c(n, n), c(n, n)
    sym_r, sym_s = sym_r + sym_r.T, sym_s + sym_s.T
    # J0 R symmetric  <=>  R = J0 Sym
    return gr_zero(c(1)[0], c(n, n), j0 @ sym_r, j0 @ sym_s, n)


def gl_image(a: np.ndarray) -> np.ndarray:
    """``A -> diag(A, -J0 A^T J0)``: gl(n+1, C) inside sp(2n+2, C)."""
    m = a.shape[0]
    j0 = antidiag(m)
    x = np.zeros((2 * m, 2 * m), dtype=complex)
    x[:m, :m] = a
    x[m:, m:] = -j0 @ a.T @ j0
    return x


def gl_image_dims(n: int) -> dict[int, int]:
    m = n + 1
    v = grading_element(n)
    mats = []
    for i in range(m):
        for j in range(m):
            e = np.zeros((m, m))
            e[i, j] = 1
            mats.append(gl_image(e))
    out = {}
    for k in DEGREES:
        comps = np.array([degree_projector(x, v, k).ravel() for x in mats])
        out[k] = _complex_row_basis(comps).shape[0]
    return out


def pattern_residuals(n: int, rng) -> dict[str, float]:
    """The block patterns lie in sp(2n+2,C), have pure degree, and fill their piece."""
    tag = spc_tag(n)
    v = grading_element(n)

    def c(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    samples = {
        -2: gr_minus2(c(1)[0], n),
        -1: gr_minus1(c(n), c(n), n),
        0: random_gr_zero(n, rng),
    }
    out = {}
    for k, x in samples.items():
        memb = membership_residual(x, tag)
        deg = np.linalg.norm(ad(v, x) - k * x)
        out[f"gr{k}"] = float(max(memb, deg) / (1 + np.linalg.norm(x) ** 2))
    # dimension of the span of each pattern family equals the graded piece
    fam = {
        -2: [gr_minus2(1, n)],
        -1: [gr_minus1(e, np.zeros(n), n) for e in np.eye(n)]
        + [gr_minus1(np.zeros(n), e, n) for e in np.eye(n)],
        0: [random_gr_zero(n, rng) for _ in range(4 * n * n + 4)],
    }
    dims = graded_dims(n)
    for k, mats in fam.items():
        rank = _complex_row_basis(np.array([m.ravel() for m in mats])).shape[0]
        out[f"gr{k}_span_defect"] = float(abs(rank - dims[k]))
    return out


def grading_report(n: int, trials: int = 100, seed=None) -> GradingReport:
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    tag = spc_tag(n)
    bases = graded_bases(n)
    worst_bracket = worst_eigen = worst_sub = 0.0
    for _ in range(trials):
        x = random_element(tag, rng).mat
        g = grade_decompose(x, n)
        worst_eigen = max(worst_eigen, eigen_residual(g, n) / (1 + np.linalg.norm(x) ** 2))
        a, b = rng.choice(DEGREES, size=2)
        xa = np.einsum("i,ijk->jk", rng.normal(size=len(bases[a])) + 0j, bases[a])
        yb = np.einsum("i,ijk->jk", rng.normal(size=len(bases[b])) + 0j, bases[b])
        br = xa @ yb - yb @ xa
        comps = grade_decompose(br, n).components
        off = sum(np.linalg.norm(c) ** 2 for k, c in comps.items() if k != a + b)
        scale = 1 + np.linalg.norm(xa) * np.linalg.norm(yb)
        worst_bracket = max(worst_bracket, float(np.sqrt(off)) / scale)
        # F^0 (degrees >= 0) closes under brackets
        f0x = sum(g.components[k] for k in (0, 1, 2))
        y = grade_decompose(random_element(tag, rng).mat, n)
        f0y = sum(y.components[k] for k in (0, 1, 2))
        brf = grade_decompose(f0x @ f0y - f0y @ f0x, n).components
        neg = np.sqrt(sum(np.linalg.norm(brf[k]) ** 2 for k in (-2, -1)))
        worst_sub = max(worst_sub, float(neg) / (1 + np.linalg.norm(f0x) * np.linalg.norm(f0y)))
    return GradingReport(
        n=n,
        dims=graded_dims(n),
        bracket_residual=worst_bracket,
        eigen_residual=worst_eigen,
        pattern_residuals=pattern_residuals(n, rng),
        subalgebra_residual=worst_sub,
        gl_image_dims=gl_image_dims(n),
    )


def ad_spectrum(n: int) -> np.ndarray:
    """Eigenvalues of ad(v) on sp(2n+2, C), from its matrix on a real basis."""
    tag = spc_tag(n)
    b = basis_coords(tag)
    v = grading_element(n)
    from .liecore import to_coords

    mat = np.array([b @ to_coords(ad(v, from_coords(c, tag)), tag) for c in b]).T
    return np.linalg.eigvals(mat)

"""The Weitzenbock operator T on Hom(p, F) for F = S^2 V* (or its conjugate).

A cochain is stored through its values on an orthonormal basis of p. Values
are complex symmetric (n+1) x (n+1) matrices ``[[A, B], [B^T, d]]`` in the
BLOCK ordering, with inner product ``Re Tr(Q Q'^*)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .branching import (
    Summand,
    cochain_dim,
    cochain_from_coords,
    cochain_to_coords,
    hom_p_decompose,
    orthonormalize,
)
from .liecore import _rng, p_basis, p_vector


@dataclass(frozen=True, eq=False)
class Cochain:
    n: int
    values: np.ndarray  # shape (2n, n+1, n+1)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != (2 * self.n, self.n + 1, self.n + 1):
            raise ValueError(f"cochain values must have shape {(2 * self.n, self.n + 1, self.n + 1)}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, n: int) -> "Cochain":
        return cls(n, np.zeros((2 * n, n + 1, n + 1)))

    @classmethod
    def from_coords(cls, v: np.ndarray, n: int) -> "Cochain":
        return cls(n, cochain_from_coords(v, n))

    def coords(self) -> np.ndarray:
        return cochain_to_coords(self.values)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2))

    def symmetry_defect(self) -> float:
        return float(np.linalg.norm(self.values - np.swapaxes(self.values, 1, 2)))


@dataclass(frozen=True, eq=False)
class BetaForm:
    beta: np.ndarray  # beta[k, l] = rho(X_k)(eta(X_l))
    sigma: np.ndarray
    alpha: np.ndarray
    trace: np.ndarray

    def blocks(self):
        """(beta1, beta2, beta3): the n x n, C^n and scalar parts."""
        n = self.beta.shape[-1] - 1
        return self.beta[..., :n, :n], self.beta[..., :n, n], self.beta[..., n, n]


@dataclass(frozen=True)
class EnergyBreakdown:
    t_energy: float
    alpha_norm_sq: float
    trace_norm_sq: float
    residual: float


def random_cochain(n: int, seed=None) -> Cochain:
    rng = _rng(seed)
    return Cochain.from_coords(rng.normal(size=cochain_dim(n)), n)


def rho_action(x: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``X^T Q + Q X`` for X in p and a symmetric form Q."""
    x, q = np.asarray(x), np.asarray(q)
    if x.shape != q.shape:
        raise ValueError(f"size mismatch {x.shape} vs {q.shape}")
    return x.T @ q + q @ x


def rho_action_blocks(x: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Same as `rho_action`, through the block formula in y, A, B, d."""
    n = q.shape[0] - 1
    y = p_vector(x, n)
    a, b, d = q[:n, :n], q[:n, n], q[n, n]
    top = np.outer(b, y.conj())
    top = top + top.T
    mid = a @ y + d * y.conj()
    out = np.zeros_like(q, dtype=complex)
    out[:n, :n] = top
    out[:n, n] = mid
    out[n, :n] = mid
    out[n, n] = 2 * y @ b
    return out


def module_action(z: np.ndarray, q: np.ndarray, conjugate: bool = False) -> np.ndarray:
    """Infinitesimal action of the group on forms, ``Q -> g^{-T} Q g^{-1}``.

    On p this is ``-rho_action``. With ``conjugate`` the module is the
    complex conjugate one, ``P -> conj(g)^{-T} P conj(g)^{-1}``.
    """
    if conjugate:
        return -(z.conj().T @ q + q @ z.conj())
    return -(z.T @ q + q @ z)


def _basis_or_default(n: int, p_frame) -> np.ndarray:
    return p_basis(n) if p_frame is None else np.asarray(p_frame)


def t_apply(eta: Cochain, p_frame=None, conjugate: bool = False) -> Cochain:
    """``T eta(X_h) = sum_k rho(X_k)^2 eta(X_h) + rho([X_h, X_k]) eta(X_k)``."""
    xs = _basis_or_default(eta.n, p_frame)
    vals = eta.values
    out = []
    for h, xh in enumerate(xs):
        acc = np.zeros_like(vals[0])
        for k, xk in enumerate(xs):
            acc += module_action(xk, module_action(xk, vals[h], conjugate), conjugate)
            acc += module_action(xh @ xk - xk @ xh, vals[k], conjugate)
        out.append(acc)
    return Cochain(eta.n, np.array(out))


def hom_inner(eta: Cochain, zeta: Cochain) -> float:
    return float(np.real(np.sum(eta.values * zeta.values.conj())))


def beta_of(eta: Cochain, p_frame=None) -> BetaForm:
    xs = _basis_or_default(eta.n, p_frame)
    beta = np.array([[rho_action(xk, vl) for vl in eta.values] for xk in xs])
    bt = np.swapaxes(beta, 0, 1)
    sigma, alpha = (beta + bt) / 2, (beta - bt) / 2
    trace = np.einsum("kkij->ij", beta)
    return BetaForm(beta, sigma, alpha, trace)


def energy_identity(eta: Cochain, p_frame=None) -> EnergyBreakdown:
    te = hom_inner(t_apply(eta, p_frame), eta)
    b = beta_of(eta, p_frame)
    a2 = float(np.sum(np.abs(b.alpha) ** 2))
    tr2 = float(np.sum(np.abs(b.trace) ** 2))
    return EnergyBreakdown(te, a2, tr2, abs(te - (2 * a2 + tr2)))


@lru_cache(maxsize=None)
def _gram(n: int, conjugate: bool) -> np.ndarray:
    dim = cochain_dim(n)
    cols = []
    for v in np.eye(dim):
        cols.append(t_apply(Cochain.from_coords(v, n), conjugate=conjugate).coords())
    g = np.array(cols).T
    g = (g + g.T) / 2
    g.setflags(write=False)
    return g


def gram_matrix(n: int, conjugate: bool = False) -> np.ndarray:
    """Matrix of the quadratic form ``(T eta, eta)`` in orthonormal cochain coordinates."""
    return _gram(n, conjugate)


def gram_asymmetry(n: int, conjugate: bool = False) -> float:
    dim = cochain_dim(n)
    cols = [t_apply(Cochain.from_coords(v, n), conjugate=conjugate).coords() for v in np.eye(dim)]
    g = np.array(cols).T
    return float(np.linalg.norm(g - g.T))


@dataclass(frozen=True, eq=False)
class KernelReport:
    n: int
    summand: Summand
    eigenvalues: np.ndarray
    threshold: float
    gap_ratio: float  # smallest nonzero eigenvalue / threshold
    min_eigenvalue: float
    ambient_dim: int
    conjugate: bool

    @property
    def kernel_dim(self) -> int:
        return self.summand.dim

    @property
    def rank(self) -> int:
        return self.ambient_dim - self.kernel_dim


class SpectralGapError(RuntimeError):
    pass


def null_space(n: int, conjugate: bool = False, rel_threshold: float = 1e-9,
               min_gap: float = 1e3) -> KernelReport:
    """Kernel of the T-energy form, with an auditable rank decision."""
    if n < 2:
        raise ValueError("n must be >= 2")
    g = gram_matrix(n, conjugate)
    w, v = np.linalg.eigh(g)
    thr = rel_threshold * max(abs(w[-1]), 1e-300)
    zero = np.abs(w) < thr
    nonzero = w[~zero]
    smallest = float(np.min(np.abs(nonzero))) if nonzero.size else np.inf
    gap = smallest / thr
    if gap < min_gap:
        raise SpectralGapError(f"spectral gap {gap:.3e} below {min_gap:.1e} x threshold")
    label = "ker T (conjugate)" if conjugate else "ker T"
    return KernelReport(
        n, Summand(label, v[:, zero].T.copy()), w, thr, gap, float(w[0]), g.shape[0], conjugate
    )


def subspace_residuals(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Mutual projection residuals ``|(1 - P_b) a|`` and ``|(1 - P_a) b|``."""
    ra = np.linalg.norm(a - (a @ b.T) @ b)
    rb = np.linalg.norm(b - (b @ a.T) @ a)
    return float(ra), float(rb)


def conjugate_coords(rows: np.ndarray, n: int) -> np.ndarray:
    """Entrywise conjugation of cochains, applied row by row."""
    return np.array(
        [cochain_to_coords(np.conj(cochain_from_coords(r, n))) for r in np.atleast_2d(rows)]
    )


def s3_summand(n: int) -> Summand:
    return hom_p_decompose(n).summand("S3p*")


def kernel_vs_s3(n: int) -> dict[str, float]:
    ker = null_space(n)
    s3 = s3_summand(n).basis
    ra, rb = subspace_residuals(ker.summand.basis, s3)
    kc = null_space(n, conjugate=True)
    ca, cb = subspace_residuals(kc.summand.basis, orthonormalize(conjugate_coords(ker.summand.basis, n)))
    return {
        "kernel_dim": ker.kernel_dim,
        "s3_dim": s3.shape[0],
        "kernel_in_s3": ra,
        "s3_in_kernel": rb,
        "conj_kernel_dim": kc.kernel_dim,
        "conj_kernel_match": max(ca, cb),
    }


def d_block_min_energy(n: int) -> float:
    """Smallest energy over unit cochains supported in the d-block."""
    d = hom_p_decompose(n).summand("p (d-block)").basis
    return float(np.linalg.eigvalsh(d @ gram_matrix(n) @ d.T)[0])


def rotated_frame(n: int, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """A second orthonormal p-basis ``X'_h = sum_l O_hl X_l`` and the matrix O."""
    rng = _rng(seed)
    o, _ = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))
    return np.einsum("hl,lij->hij", o, p_basis(n)), o


def reexpress(eta: Cochain, o: np.ndarray) -> Cochain:
    """Values of the same linear map on the rotated frame."""
    return Cochain(eta.n, np.einsum("hl,lij->hij", o, eta.values))

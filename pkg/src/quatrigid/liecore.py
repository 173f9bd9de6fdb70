"""The six matrix Lie algebras and the embedding chain between them.

    su(n,1) -> u(n,1) -> sp(n,1) -> u(2n,2) -> so(4n,4)

plus the complex algebra sp(2n+2, C). Every algebra is cut out by linear
equations on its ambient matrices; bases are null spaces of those equations
in real coordinates, which makes them orthonormal for ``Re Tr(X Y*)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm, null_space

from .quatmat import (
    Convention,
    StructuredMatrix,
    complexify,
    hermitian_form,
    real_form,
    split_realify,
    symplectic_form,
)


class Kind(str, enum.Enum):
    SU = "su(n,1)"
    U = "u(n,1)"
    SP = "sp(n,1)"
    U22 = "u(2n,2)"
    SO = "so(4n,4)"
    SPC = "sp(2n+2,C)"


CHAIN = (Kind.SU, Kind.U, Kind.SP, Kind.U22, Kind.SO)


@dataclass(frozen=True)
class AlgebraTag:
    kind: Kind
    n: int
    convention: Convention = Convention.BLOCK

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "convention", Convention(self.convention))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")

    @property
    def size(self) -> int:
        m = self.n + 1
        return {Kind.SU: m, Kind.U: m, Kind.SO: 4 * m}.get(self.kind, 2 * m)

    @property
    def is_real(self) -> bool:
        return self.kind is Kind.SO

    @property
    def coord_dim(self) -> int:
        return self.size**2 * (1 if self.is_real else 2)

    def with_kind(self, kind) -> "AlgebraTag":
        return AlgebraTag(kind, self.n, self.convention)


@dataclass(frozen=True, eq=False)
class LieElement:
    algebra: AlgebraTag
    mat: np.ndarray

    def __post_init__(self):
        mat = np.array(self.mat, dtype=float if self.algebra.is_real else complex)
        if mat.shape != (self.algebra.size,) * 2:
            raise ValueError(
                f"{self.algebra.kind.value} with n={self.algebra.n} needs size "
                f"{self.algebra.size}, got {mat.shape}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    def __add__(self, other: "LieElement") -> "LieElement":
        _same_algebra(self, other)
        return LieElement(self.algebra, self.mat + other.mat)

    def __sub__(self, other: "LieElement") -> "LieElement":
        _same_algebra(self, other)
        return LieElement(self.algebra, self.mat - other.mat)

    def scale(self, c: float) -> "LieElement":
        return LieElement(self.algebra, c * self.mat)

    def norm(self) -> float:
        return float(np.linalg.norm(self.mat))


@dataclass(frozen=True)
class CartanSplit:
    k_part: LieElement
    p_part: LieElement


@dataclass(frozen=True)
class InnerProduct:
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("inner product scale must be positive")


def _same_algebra(x: LieElement, y: LieElement):
    if x.algebra != y.algebra:
        raise ValueError(f"algebra mismatch: {x.algebra} vs {y.algebra}")


def _as_array(x) -> np.ndarray:
    if isinstance(x, LieElement):
        return x.mat
    if isinstance(x, StructuredMatrix):
        return x.entries
    return np.asarray(x)


# -- real coordinates --------------------------------------------------------

def to_coords(x, alg: AlgebraTag) -> np.ndarray:
    x = _as_array(x)
    if alg.is_real:
        return np.real(x).ravel().astype(float)
    return np.concatenate([x.real.ravel(), x.imag.ravel()])


def from_coords(v: np.ndarray, alg: AlgebraTag) -> np.ndarray:
    s = alg.size
    if alg.is_real:
        return np.asarray(v, dtype=float).reshape(s, s)
    half = s * s
    return (v[:half] + 1j * v[half:]).reshape(s, s)


# -- defining equations ------------------------------------------------------

def defining_forms(alg: AlgebraTag) -> dict[str, np.ndarray]:
    m = alg.n + 1
    conv = alg.convention
    if alg.kind in (Kind.SU, Kind.U):
        return {"F": real_form(m, conv)}
    if alg.kind is Kind.SO:
        return {"G": split_realify(hermitian_form(m, conv).astype(complex))}
    forms = {}
    if alg.kind in (Kind.SP, Kind.U22):
        forms["H"] = hermitian_form(m, conv)
    if alg.kind in (Kind.SP, Kind.SPC):
        forms["Omega"] = symplectic_form(m, conv)
    return forms


def constraint_defects(x, alg: AlgebraTag) -> list[np.ndarray]:
    """List of arrays that all vanish exactly on the algebra."""
    x = _as_array(x)
    if x.shape != (alg.size,) * 2:
        raise ValueError(f"expected size {alg.size} for {alg.kind.value}, got {x.shape}")
    forms = defining_forms(alg)
    out = []
    if alg.kind in (Kind.SU, Kind.U):
        f = forms["F"]
        out.append(x.conj().T @ f + f @ x)
        if alg.kind is Kind.SU:
            out.append(np.array([np.trace(x)]))
    elif alg.kind is Kind.SO:
        g = forms["G"]
        out.append(np.imag(x))
        xr = np.real(x)
        out.append(xr.T @ g + g @ xr)
    else:
        if "H" in forms:
            h = forms["H"]
            out.append(x.conj().T @ h + h @ x)
        if "Omega" in forms:
            om = forms["Omega"]
            out.append(x.T @ om + om @ x)
    return out


def membership_residual(x, alg: AlgebraTag) -> float:
    """Frobenius norm of the defect of all defining equations."""
    return float(np.sqrt(sum(np.linalg.norm(d) ** 2 for d in constraint_defects(x, alg))))


def constraint_matrix(alg: AlgebraTag, kinds=None) -> np.ndarray:
    """Real matrix of the defining equations acting on real coordinates.

    ``kinds`` optionally replaces the algebra's own equations by the stacked
    equations of several algebras of the same ambient size.
    """
    kinds = [alg.kind] if kinds is None else [Kind(k) for k in kinds]
    tags = [alg.with_kind(k) for k in kinds]
    cols = []
    eye = np.eye(alg.coord_dim)
    for v in eye:
        x = from_coords(v, alg)
        parts = []
        for t in tags:
            for d in constraint_defects(x, t):
                d = np.asarray(d)
                parts.append(d.real.ravel())
                if np.iscomplexobj(d):
                    parts.append(d.imag.ravel())
        cols.append(np.concatenate(parts))
    return np.array(cols).T


@lru_cache(maxsize=None)
def _basis_coords(alg: AlgebraTag) -> np.ndarray:
    b = null_space(constraint_matrix(alg), rcond=1e-10).T
    b.setflags(write=False)
    return b


def basis_coords(alg: AlgebraTag) -> np.ndarray:
    """Rows are an orthonormal real basis of the algebra, in real coordinates."""
    return _basis_coords(alg)


def basis(alg: AlgebraTag) -> list[LieElement]:
    return [LieElement(alg, from_coords(v, alg)) for v in basis_coords(alg)]


def dimension(alg: AlgebraTag) -> int:
    return basis_coords(alg).shape[0]


def expected_dimension(kind, n: int) -> int:
    """Closed-form real dimensions."""
    m = n + 1
    return {
        Kind.SU: m * m - 1,
        Kind.U: m * m,
        Kind.SP: m * (2 * m + 1),
        Kind.U22: 4 * m * m,
        Kind.SO: 2 * m * (4 * m - 1),
        Kind.SPC: 2 * m * (2 * m + 1),
    }[Kind(kind)]


def projector(alg: AlgebraTag) -> np.ndarray:
    b = basis_coords(alg)
    return b.T @ b


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_element(alg: AlgebraTag, seed=None) -> LieElement:
    """Gaussian coefficients on the cached orthonormal basis."""
    b = basis_coords(alg)
    coeffs = _rng(seed).normal(size=b.shape[0])
    return LieElement(alg, from_coords(coeffs @ b, alg))


def bracket(x: LieElement, y: LieElement) -> LieElement:
    _same_algebra(x, y)
    return LieElement(x.algebra, x.mat @ y.mat - y.mat @ x.mat)


# -- embedding chain ---------------------------------------------------------

def _embed_step(x: np.ndarray, src: Kind, dst: Kind, conv: Convention) -> np.ndarray:
    if (src, dst) == (Kind.SU, Kind.U):
        return x
    if (src, dst) == (Kind.U, Kind.SP):
        return complexify(StructuredMatrix.quaternionic(x), conv)
    if (src, dst) in ((Kind.SP, Kind.U22), (Kind.SP, Kind.SPC)):
        return x
    if (src, dst) == (Kind.U22, Kind.SO):
        return split_realify(x).real
    raise ValueError(f"no embedding {src.value} -> {dst.value}")


def _path(src: Kind, dst: Kind) -> list[Kind]:
    if dst is Kind.SPC:
        return _path(src, Kind.SP) + [Kind.SPC] if src is not Kind.SPC else [src]
    if src not in CHAIN or dst not in CHAIN or CHAIN.index(src) > CHAIN.index(dst):
        raise ValueError(f"{src.value} does not embed into {dst.value}")
    return list(CHAIN[CHAIN.index(src) : CHAIN.index(dst) + 1])


def embed_matrix(x, src: AlgebraTag, target) -> np.ndarray:
    target = Kind(target.kind if isinstance(target, AlgebraTag) else target)
    mat = _as_array(x)
    path = _path(src.kind, target)
    for a, b in zip(path, path[1:]):
        mat = _embed_step(mat, a, b, src.convention)
    return mat


def embed(x: LieElement, target) -> LieElement:
    """Push ``x`` along the embedding chain (compositions allowed)."""
    if isinstance(target, AlgebraTag):
        if target.n != x.algebra.n or target.convention != x.algebra.convention:
            raise ValueError("target must share n and convention with the source")
        kind = target.kind
    else:
        kind = Kind(target)
    return LieElement(x.algebra.with_kind(kind), embed_matrix(x.mat, x.algebra, kind))


def embed_group(g: np.ndarray, n: int, target, conv: Convention = Convention.BLOCK) -> np.ndarray:
    """Image of a U(n,1) group element; the embedding formulas are multiplicative."""
    return embed_matrix(g, AlgebraTag(Kind.U, n, conv), target)


# -- Cartan decomposition ----------------------------------------------------

def cartan_involution(x: np.ndarray) -> np.ndarray:
    return -np.asarray(x).conj().T


def cartan_split(x: LieElement, tol: float = 1e-9) -> CartanSplit:
    if x.algebra.kind is not Kind.SU:
        raise ValueError("cartan_split expects an su(n,1) element")
    res = membership_residual(x.mat, x.algebra)
    if res > tol * (1 + x.norm() ** 2):
        raise ValueError(f"not an su(n,1) element (residual {res:.3e})")
    th = cartan_involution(x.mat)
    return CartanSplit(
        LieElement(x.algebra, (x.mat + th) / 2), LieElement(x.algebra, (x.mat - th) / 2)
    )


def _negative_index(n: int, conv: Convention) -> int:
    return n if Convention(conv) is Convention.BLOCK else 0


def p_from_vector(y: np.ndarray, n: int, conv: Convention = Convention.BLOCK) -> np.ndarray:
    """The element of p with vector ``y`` in C^n.

    In BLOCK this is ``[[0, y], [y*, 0]]``; in FBASIS the negative coordinate
    comes first so the pattern is ``[[0, y*], [y, 0]]``.
    """
    y = np.asarray(y, dtype=complex)
    m = n + 1
    neg = _negative_index(n, conv)
    pos = [k for k in range(m) if k != neg]
    x = np.zeros((m, m), dtype=complex)
    x[pos, neg] = y
    x[neg, pos] = y.conj()
    return x


def p_vector(x: np.ndarray, n: int, conv: Convention = Convention.BLOCK) -> np.ndarray:
    neg = _negative_index(n, conv)
    pos = [k for k in range(n + 1) if k != neg]
    return np.asarray(x)[pos, neg].copy()


@lru_cache(maxsize=None)
def _p_basis(n: int, conv: Convention) -> np.ndarray:
    out = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1 / np.sqrt(2)
        out.append(p_from_vector(e, n, conv))
        out.append(p_from_vector(1j * e, n, conv))
    arr = np.array(out)
    arr.setflags(write=False)
    return arr


def p_basis(n: int, conv: Convention = Convention.BLOCK) -> np.ndarray:
    """Orthonormal basis ``(E_1, iE_1, ..., E_n, iE_n)`` of p, shape (2n, n+1, n+1)."""
    return _p_basis(n, Convention(conv))


def p_complex_structure(n: int) -> np.ndarray:
    """Matrix of ``Y -> iY`` on p in the coordinates of `p_basis`."""
    j = np.zeros((2 * n, 2 * n))
    for k in range(n):
        j[2 * k + 1, 2 * k] = 1.0
        j[2 * k, 2 * k + 1] = -1.0
    return j


def k_basis(n: int, conv: Convention = Convention.BLOCK) -> list[np.ndarray]:
    """Orthonormal basis of k = s(u(n) + u(1)) inside su(n,1)."""
    alg = AlgebraTag(Kind.SU, n, conv)
    f = real_form(n + 1, conv)
    # k is the fixed set of X -> F X F; project the su basis and orthonormalize
    coords = np.array([to_coords((x.mat + f @ x.mat @ f) / 2, alg) for x in basis(alg)])
    u, s, _ = np.linalg.svd(coords.T, full_matrices=False)
    return [from_coords(v, alg) for v in u[:, s > 1e-10].T]


# -- pairings and groups -----------------------------------------------------

def trace_pairing(x, y, ip: InnerProduct = InnerProduct()) -> float:
    x, y = _as_array(x), _as_array(y)
    if x.shape != y.shape:
        raise ValueError(f"size mismatch {x.shape} vs {y.shape}")
    return float(ip.scale * np.real(np.trace(x @ y.conj().T)))


def random_group_element(
    n: int, seed=None, conv: Convention = Convention.BLOCK, scale: float = 0.5
) -> np.ndarray:
    """exp of a scaled random u(n,1) element: a point of U(n,1)."""
    x = random_element(AlgebraTag(Kind.U, n, conv), seed)
    return expm(scale * x.mat)


def random_compact_element(n: int, seed=None, conv: Convention = Convention.BLOCK) -> np.ndarray:
    """A random element of the maximal compact U(n) x U(1) of U(n,1)."""
    rng = _rng(seed)
    m = n + 1
    z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    a = (z - z.conj().T) / 2
    f = real_form(m, conv)
    a = (a + f @ a @ f) / 2  # block-diagonal part
    return expm(a)


def adjoint_action(g: np.ndarray, x: np.ndarray) -> np.ndarray:
    return g @ x @ np.linalg.inv(g)


def verify_intersection(n: int, trials: int = 100, seed=None) -> dict:
    """sp(n,1) sits inside u(2n,2) and sp(2n+2,C), and is their intersection."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = _rng(seed)
    alg = AlgebraTag(Kind.SP, n)
    worst_u = worst_sp = 0.0
    for _ in range(trials):
        x = random_element(alg, rng).mat
        worst_u = max(worst_u, membership_residual(x, alg.with_kind(Kind.U22)))
        worst_sp = max(worst_sp, membership_residual(x, alg.with_kind(Kind.SPC)))
    stacked = constraint_matrix(alg, kinds=[Kind.U22, Kind.SPC])
    joint = null_space(stacked, rcond=1e-10).shape[1]
    return {
        "n": n,
        "u22_residual": worst_u,
        "spc_residual": worst_sp,
        "joint_dimension": joint,
        "expected_dimension": expected_dimension(Kind.SP, n),
    }

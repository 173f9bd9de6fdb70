"""Scalar tower R < C < H and dense matrices over it.

A quaternion is stored as a pair of complex numbers ``(a, b)`` meaning
``q = a + j b``, with ``j z = conj(z) j`` for complex ``z``. Quaternionic
matrices are stored the same way, as ``M = C + j D`` with complex ``C, D``.

Two basis conventions are supported for the complex picture of
``H^(n+1) = V_C + j V_C``:

``BLOCK``
    Basis ``(e_1, ..., e_n, e_0, e_1 j, ..., e_n j, e_0 j)``; the real form
    is ``Q = diag(I_n, -1)`` and a complex matrix ``A`` maps to
    ``diag(A, conj(A))``.
``FBASIS``
    Basis ``f_0 = e_0, ..., f_n = e_n, f_(n+1) = -e_n j, ..., f_2n = -e_1 j,
    f_(2n+1) = e_0 j``; the Hermitian form is ``diag(-1, I_2n, -1)`` and the
    symplectic form is ``[[0, J0], [-J0, 0]]`` with ``J0`` the antidiagonal.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class Field(enum.Enum):
    REAL = "R"
    COMPLEX = "C"
    QUATERNION = "H"


class Convention(str, enum.Enum):
    BLOCK = "block"
    FBASIS = "fbasis"


@dataclass(frozen=True)
class Quaternion:
    a: complex = 0j
    b: complex = 0j

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return quat_mul(self, other)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.a - other.a, self.b - other.b)

    def conj(self) -> "Quaternion":
        return Quaternion(np.conj(self.a), -self.b)

    def norm2(self) -> float:
        return float(abs(self.a) ** 2 + abs(self.b) ** 2)

    def real(self) -> float:
        return float(np.real(self.a))

    @classmethod
    def from_components(cls, w: float, x: float, y: float, z: float) -> "Quaternion":
        """Build ``w + x i + y j + z k`` (with ``k = i j``)."""
        # y j + z i j = j (y - i z)
        return cls(complex(w, x), complex(y, -z))


ONE = Quaternion(1.0, 0.0)
I = Quaternion(1j, 0.0)
J = Quaternion(0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Product ``(a + jb)(c + jd) = (ac - conj(b) d) + j(conj(a) d + bc)``."""
    a, b = p.a, p.b
    c, d = q.a, q.b
    return Quaternion(a * c - np.conj(b) * d, np.conj(a) * d + b * c)


def left_mult_matrix(q: Quaternion) -> np.ndarray:
    """Complex 2x2 matrix of ``x -> q x`` in the coordinates ``x = c + jd``."""
    return np.array([[q.a, -np.conj(q.b)], [q.b, np.conj(q.a)]], dtype=complex)


@dataclass(frozen=True, eq=False)
class StructuredMatrix:
    """Dense matrix over R, C or H.

    For ``Field.QUATERNION`` the entries array has shape ``(2, rows, cols)``:
    ``entries[0]`` is ``C`` and ``entries[1]`` is ``D`` in ``M = C + j D``.
    """

    field: Field
    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float if self.field is Field.REAL else complex)
        if self.field is Field.QUATERNION:
            if arr.ndim != 3 or arr.shape[0] != 2:
                raise ValueError("quaternionic entries must have shape (2, rows, cols)")
        elif arr.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def quaternionic(cls, c, d=None) -> "StructuredMatrix":
        c = np.asarray(c, dtype=complex)
        d = np.zeros_like(c) if d is None else np.asarray(d, dtype=complex)
        return cls(Field.QUATERNION, np.stack([c, d]))

    @classmethod
    def identity(cls, size: int, field: Field = Field.QUATERNION) -> "StructuredMatrix":
        if field is Field.QUATERNION:
            return cls.quaternionic(np.eye(size))
        return cls(field, np.eye(size))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[-2:]

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def c(self) -> np.ndarray:
        return self.entries[0]

    @property
    def d(self) -> np.ndarray:
        return self.entries[1]

    def __matmul__(self, other: "StructuredMatrix") -> "StructuredMatrix":
        if self.field is not other.field:
            raise TypeError("field mismatch")
        if self.field is Field.QUATERNION:
            c1, d1 = self.entries
            c2, d2 = other.entries
            # (C1 + jD1)(C2 + jD2) = C1 C2 - conj(D1) D2 + j(conj(C1) D2 + D1 C2)
            return StructuredMatrix.quaternionic(
                c1 @ c2 - d1.conj() @ d2, c1.conj() @ d2 + d1 @ c2
            )
        return StructuredMatrix(self.field, self.entries @ other.entries)

    def __add__(self, other: "StructuredMatrix") -> "StructuredMatrix":
        if self.field is not other.field:
            raise TypeError("field mismatch")
        return StructuredMatrix(self.field, self.entries + other.entries)

    def __sub__(self, other: "StructuredMatrix") -> "StructuredMatrix":
        if self.field is not other.field:
            raise TypeError("field mismatch")
        return StructuredMatrix(self.field, self.entries - other.entries)

    def adjoint(self) -> "StructuredMatrix":
        if self.field is Field.QUATERNION:
            c, d = self.entries
            return StructuredMatrix.quaternionic(c.conj().T, -d.T)
        return StructuredMatrix(self.field, self.entries.conj().T)

    def trace(self):
        """Trace in the matrix's own field (a `Quaternion` for H)."""
        if self.field is Field.QUATERNION:
            return Quaternion(complex(np.trace(self.c)), complex(np.trace(self.d)))
        return np.trace(self.entries)

    def entry(self, i: int, k: int):
        if self.field is Field.QUATERNION:
            return Quaternion(complex(self.c[i, k]), complex(self.d[i, k]))
        return self.entries[i, k]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


def _require_square(shape):
    if len(shape) < 2 or shape[-1] != shape[-2]:
        raise ValueError(f"expected a square matrix, got shape {tuple(shape)}")


# -- convention data ---------------------------------------------------------

def antidiag(size: int) -> np.ndarray:
    """``J0``: ones on the antidiagonal."""
    return np.fliplr(np.eye(size))


def j1_matrix(m: int) -> np.ndarray:
    """``J1``: antidiagonal with -1 in the top-right corner, +1 elsewhere."""
    out = antidiag(m)
    out[0, m - 1] = -1.0
    return out


@lru_cache(maxsize=None)
def _block_index(m: int) -> np.ndarray:
    # position of e_k in BLOCK ordering (e_1..e_n, e_0)
    return np.array([m - 1] + list(range(m - 1)))


@lru_cache(maxsize=None)
def change_of_basis(m: int) -> np.ndarray:
    """Real orthogonal ``U`` with FBASIS coordinates ``u`` and BLOCK coordinates ``U u``.

    ``m = n + 1`` is the quaternionic dimension.
    """
    pos = _block_index(m)
    u = np.zeros((2 * m, 2 * m))
    for k in range(m):
        u[pos[k], k] = 1.0
    for s in range(m):
        k = m - 1 - s  # f_(m+s) = sign * e_k j
        sign = 1.0 if k == 0 else -1.0
        u[m + pos[k], m + s] = sign
    u.setflags(write=False)
    return u


def real_form(m: int, conv: Convention) -> np.ndarray:
    """Diagonal form of signature (n, 1) on ``V_C``."""
    if Convention(conv) is Convention.BLOCK:
        return np.diag([1.0] * (m - 1) + [-1.0])
    return np.diag([-1.0] + [1.0] * (m - 1))


def hermitian_form(m: int, conv: Convention) -> np.ndarray:
    """Matrix of the Hermitian part ``H`` on ``V_C + j V_C``."""
    if Convention(conv) is Convention.BLOCK:
        q = real_form(m, conv)
        return np.block([[q, np.zeros((m, m))], [np.zeros((m, m)), q]])
    return np.diag([-1.0] + [1.0] * (2 * m - 2) + [-1.0])


def symplectic_form(m: int, conv: Convention) -> np.ndarray:
    """Matrix of the complex symplectic part ``Omega``."""
    j0 = antidiag(m)
    jf = np.block([[np.zeros((m, m)), j0], [-j0, np.zeros((m, m))]])
    if Convention(conv) is Convention.FBASIS:
        return jf
    u = change_of_basis(m)
    return u @ jf @ u.T


def quaternionic_structure(m: int, conv: Convention) -> np.ndarray:
    """``K`` with right multiplication by ``j`` acting as ``v -> K conj(v)``."""
    zero = np.zeros((m, m))
    if Convention(conv) is Convention.BLOCK:
        eye = np.eye(m)
        return np.block([[zero, -eye], [eye, zero]])
    j1 = j1_matrix(m)
    return np.block([[zero, j1], [-j1.T, zero]])


def reality_residual(x: np.ndarray, conv: Convention) -> float:
    """Defect of ``X K = K conj(X)``, i.e. of ``X`` being H-linear."""
    k = quaternionic_structure(x.shape[0] // 2, conv)
    return float(np.linalg.norm(x @ k - k @ x.conj()))


# -- maps between the pictures -------------------------------------------------

def complexify(m: StructuredMatrix, conv: Convention = Convention.BLOCK) -> np.ndarray:
    """Complex ``(2m x 2m)`` matrix of an H-linear map.

    In BLOCK, ``C + jD`` maps to ``[[C, -conj(D)], [D, conj(C)]]``. In FBASIS
    the H-matrix is indexed by ``e_0..e_n`` and the result is expressed in the
    ``f`` basis.
    """
    if m.field is not Field.QUATERNION:
        m = StructuredMatrix.quaternionic(m.entries)
    _require_square(m.shape)
    size = m.rows
    c, d = m.entries
    if Convention(conv) is Convention.FBASIS:
        perm = _block_index(size)
        p = np.zeros((size, size))
        p[perm, np.arange(size)] = 1.0
        c = p @ c @ p.T
        d = p @ d @ p.T
    out = np.block([[c, -d.conj()], [d, c.conj()]])
    if Convention(conv) is Convention.FBASIS:
        u = change_of_basis(size)
        out = u.T @ out @ u
    return out


def decomplexify(x: np.ndarray, conv: Convention = Convention.BLOCK) -> StructuredMatrix:
    """Inverse of `complexify` (assumes ``x`` satisfies the reality condition)."""
    _require_square(x.shape)
    size = x.shape[0] // 2
    if Convention(conv) is Convention.FBASIS:
        u = change_of_basis(size)
        x = u @ x @ u.T
    c = x[:size, :size]
    d = x[size:, :size]
    if Convention(conv) is Convention.FBASIS:
        perm = _block_index(size)
        p = np.zeros((size, size))
        p[perm, np.arange(size)] = 1.0
        c = p.T @ c @ p
        d = p.T @ d @ p
    return StructuredMatrix.quaternionic(c, d)


def realify(m, antilinear: bool = False) -> np.ndarray:
    """Real matrix of a complex matrix ``A + iB`` acting on ``(Re z, Im z)``.

    Linear maps ``z -> Mz`` give ``[[A, -B], [B, A]]``; antilinear maps
    ``z -> M conj(z)`` give ``[[A, B], [B, -A]]``.
    """
    if isinstance(m, StructuredMatrix):
        m = m.entries
    m = np.asarray(m, dtype=complex)
    _require_square(m.shape)
    a, b = m.real, m.imag
    if antilinear:
        return np.block([[a, b], [b, -a]])
    return np.block([[a, -b], [b, a]])


def split_realify(x: np.ndarray) -> np.ndarray:
    """Realify a ``(2m x 2m)`` complex matrix copy by copy.

    Real coordinates are ``(Re z1, Im z1, Re z2, Im z2)`` for ``z = (z1, z2)``
    in ``V_C + j V_C``, so each ``m x m`` block ``X_ab`` becomes ``realify(X_ab)``.
    """
    _require_square(x.shape)
    m = x.shape[0] // 2
    return np.block(
        [[realify(x[:m, :m]), realify(x[:m, m:])], [realify(x[m:, :m]), realify(x[m:, m:])]]
    )


def _transfer(size: int, level: str) -> np.ndarray:
    if level == "vc":
        m = size
        p = np.zeros((m, m))
        p[_block_index(m), np.arange(m)] = 1.0
        return p
    if level == "vh":
        if size % 2:
            raise ValueError(f"size {size} is not even")
        return change_of_basis(size // 2)
    if level == "real":
        if size % 4:
            raise ValueError(f"size {size} is not a multiple of 4")
        return split_realify(change_of_basis(size // 4).astype(complex))
    raise ValueError(f"unknown level {level!r}")


def change_convention(
    x: np.ndarray, src: Convention, dst: Convention, level: str = "vh"
) -> np.ndarray:
    """Conjugate ``x`` into the other basis convention.

    ``level`` names the space the matrix acts on: ``"vc"`` for ``V_C``
    (size ``n+1``), ``"vh"`` for ``V_C + j V_C`` (size ``2n+2``) and ``"real"``
    for its realification (size ``4n+4``).
    """
    x = np.asarray(x)
    _require_square(x.shape)
    src, dst = Convention(src), Convention(dst)
    if src is dst:
        return x.copy()
    u = _transfer(x.shape[0], level)
    if src is Convention.BLOCK:
        return u.T @ x @ u
    return u @ x @ u.T


def random_quaternion(rng: np.random.Generator) -> Quaternion:
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    return Quaternion(complex(a), complex(b))


def random_hmatrix(size: int, rng: np.random.Generator) -> StructuredMatrix:
    shape = (2, size, size)
    return StructuredMatrix(Field.QUATERNION, rng.normal(size=shape) + 1j * rng.normal(size=shape))

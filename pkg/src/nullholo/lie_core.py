"""Matrix model of sl(n, C) / SL(n, C): Killing form, Cartan involution and
embedding, Hermitian orthonormal frames and expansions in them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
DET_TOL = 1e-9


class SpanError(ValueError):
    """A matrix is not in the complex span of a frame."""

    def __init__(self, residual: float):
        super().__init__(f"matrix lies outside the frame span (residual {residual:.3e})")
        self.residual = residual


def as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix has non-finite entries")
    return X


def elementary(n: int, i: int, j: int) -> np.ndarray:
    """E_ij with 1-based indices."""
    E = np.zeros((n, n), dtype=complex)
    E[i - 1, j - 1] = 1.0
    return E


def killing_sl(X, Y) -> complex:
    """Killing form of sl(n, C): 2n tr(XY)."""
    X, Y = as_matrix(X), as_matrix(Y)
    if X.shape != Y.shape:
        raise ValueError(f"dimension mismatch {X.shape} vs {Y.shape}")
    n = X.shape[0]
    return complex(2 * n * np.trace(X @ Y))


def cartan_involution(X) -> np.ndarray:
    return -as_matrix(X).conj().T


def cartan_embed(a) -> np.ndarray:
    """a a^*, the point of SL(n)/SU(n) realized as a positive Hermitian matrix."""
    a = as_matrix(a)
    return a @ a.conj().T


def is_hermitian(X, tol: float = HERMITIAN_TOL) -> bool:
    X = as_matrix(X)
    return float(np.max(np.abs(X - X.conj().T), initial=0.0)) <= tol


def check_traceless(X, tol: float = 1e-12) -> np.ndarray:
    X = as_matrix(X)
    if abs(np.trace(X)) > tol * max(1.0, np.linalg.norm(X)):
        raise ValueError(f"matrix is not traceless (tr = {np.trace(X):.3e})")
    return X


def check_group_element(a, tol: float = DET_TOL) -> np.ndarray:
    a = as_matrix(a)
    if abs(np.linalg.det(a) - 1.0) > tol:
        raise ValueError(f"determinant {np.linalg.det(a):.6g} is not 1")
    return a


@dataclass(frozen=True, eq=False)
class LieFrame:
    """Ordered Hermitian matrices with the inner product c * tr(X Y^*)."""

    members: tuple
    inner_product_constant: float = 1.0
    name: str = ""
    n: int | None = None

    def __post_init__(self):
        members = tuple(as_matrix(m) for m in self.members)
        if self.inner_product_constant <= 0:
            raise ValueError("inner product constant must be positive")
        sizes = {m.shape[0] for m in members}
        if len(sizes) > 1:
            raise ValueError("frame members have different sizes")
        n = sizes.pop() if sizes else self.n
        if self.n is not None and n != self.n:
            raise ValueError("declared size does not match the members")
        for k, m in enumerate(members):
            if not is_hermitian(m):
                raise ValueError(f"frame member {k + 1} is not Hermitian")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "n", n)

    def __len__(self):
        return len(self.members)

    def inner(self, X, Y) -> complex:
        return complex(self.inner_product_constant * np.trace(as_matrix(X) @ as_matrix(Y).conj().T))

    def gram(self) -> np.ndarray:
        k = len(self.members)
        G = np.empty((k, k), dtype=complex)
        for i, a in enumerate(self.members):
            for j, b in enumerate(self.members):
                G[i, j] = self.inner(a, b)
        return G

    def combine(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=complex)
        if len(coeffs) != len(self.members):
            raise ValueError("coefficient count does not match frame size")
        return np.tensordot(coeffs, np.array(self.members), axes=1)


def frame_gram_check(frame: LieFrame) -> np.ndarray:
    """Real Gram matrix minus identity (Hermitian members give a real Gram)."""
    k = len(frame)
    if k == 0:
        return np.zeros((0, 0))
    return (frame.gram() - np.eye(k)).real


def expand_in_frame(X, frame: LieFrame, tol: float = 1e-10) -> np.ndarray:
    """Complex coefficients c with X = sum c_j e_j."""
    X = as_matrix(X)
    k = len(frame)
    if k == 0:
        if np.linalg.norm(X) > tol:
            raise SpanError(float(np.linalg.norm(X)))
        return np.zeros(0, dtype=complex)
    if X.shape[0] != frame.n:
        raise ValueError("matrix size does not match the frame")
    b = np.array([frame.inner(X, e) for e in frame.members])
    # <X, e_j> = sum_i c_i G_ij, so G^T c = b
    coeffs, *_ = np.linalg.lstsq(frame.gram().T, b, rcond=None)
    residual = float(np.linalg.norm(frame.combine(coeffs) - X))
    if residual > tol * max(1.0, np.linalg.norm(X)):
        raise SpanError(residual)
    return coeffs


def _s5_frame() -> LieFrame:
    E = lambda i, j: elementary(3, i, j)
    s = 2 * np.sqrt(3)
    members = (
        (E(1, 3) + E(3, 1)) / s,
        (-1j * E(1, 3) + 1j * E(3, 1)) / s,
        np.diag([1.0, -1.0, 0.0]) / s,
        np.diag([1.0, 1.0, -2.0]) / 6,
    )
    return LieFrame(members, 6.0, "s5-frame")


def _plane_frame() -> LieFrame:
    E = lambda i, j: elementary(3, i, j)
    r2 = np.sqrt(2)
    members = (
        np.diag([1.0, -1.0, 0.0]) / r2,
        np.diag([1.0, 1.0, -2.0]) / np.sqrt(6),
        (E(1, 3) + E(3, 1)) / r2,
        1j * (E(3, 1) - E(1, 3)) / r2,
    )
    return LieFrame(members, 1.0, "plane-frame")


S5_FRAME = _s5_frame()
PLANE_FRAME = _plane_frame()
NAMED_FRAMES = {"s5-frame": S5_FRAME, "plane-frame": PLANE_FRAME}


def get_frame(name: str) -> LieFrame:
    try:
        return NAMED_FRAMES[name]
    except KeyError:
        raise ValueError(f"unknown frame {name!r}; known: {sorted(NAMED_FRAMES)}") from None

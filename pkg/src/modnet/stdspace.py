"""Finite-dimensional standard subspaces from modular pairs.

A modular pair is a selfadjoint A and an antiunitary involution J with
JAJ = -A; the associated real subspace is the fixed space of J e^{A/2}.
Antiunitaries are stored as (conjugation followed by a unitary): J v = U conj(v).
All comparisons use a single tolerance and principal angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

TOL_FD = 1e-9


class ModularPairError(ValueError):
    pass


@dataclass(frozen=True)
class ModularPair:
    """(A, J) with A = A*, J^2 = 1, JAJ = -A; J v = U conj(v)."""

    a: np.ndarray
    u: np.ndarray

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __post_init__(self):
        a, u = np.asarray(self.a), np.asarray(self.u)
        if a.shape != u.shape or a.shape[0] != a.shape[1]:
            raise ModularPairError("A and U must be square of equal size")
        if np.linalg.norm(a - a.conj().T) > TOL_FD:
            raise ModularPairError("A is not selfadjoint")
        if np.linalg.norm(u @ u.conj().T - np.eye(self.dim)) > TOL_FD:
            raise ModularPairError("U is not unitary")
        if np.linalg.norm(u @ u.conj() - np.eye(self.dim)) > TOL_FD:
            raise ModularPairError("J is not an involution")
        if np.linalg.norm(u @ a.conj() @ u.conj().T + a) > TOL_FD:
            raise ModularPairError("JAJ = -A fails")

    def j_apply(self, v: np.ndarray) -> np.ndarray:
        return self.u @ np.conj(v)

    def s_apply(self, v: np.ndarray) -> np.ndarray:
        """J e^{A/2} v."""
        return self.j_apply(expm(self.a / 2) @ v)

    def delta_it(self, t: float) -> np.ndarray:
        """Delta^{it} = e^{itA}."""
        return expm(1j * t * self.a)


def conjugation_pair(a_imag: np.ndarray) -> ModularPair:
    """Pair with J = plain conjugation; A must be i * (real antisymmetric)."""
    k = a_imag.shape[0]
    return ModularPair(a_imag, np.eye(k, dtype=complex))


def random_pair(k: int, rng: np.random.Generator, scale: float = 1.5) -> ModularPair:
    """Random valid pair: conjugate (i K, conj) by a Haar-ish unitary."""
    kmat = rng.normal(size=(k, k)) * scale / max(k - 1, 1)
    kmat = kmat - kmat.T
    a0 = 1j * kmat
    z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    w, _ = np.linalg.qr(z)
    a = w @ a0 @ w.conj().T
    u = w @ w.T  # conjugated plain conjugation
    return ModularPair(a, u)


# ---------------------------------------------------------------------------
# Real subspaces of C^k as real 2k-dimensional column spans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealSubspace:
    """Real span of complex columns, stored with an orthonormal real basis."""

    ambient_dim: int
    basis_real: np.ndarray  # shape (2k, r), orthonormal columns

    @property
    def real_dim(self) -> int:
        return self.basis_real.shape[1]

    def complex_basis(self) -> np.ndarray:
        k = self.ambient_dim
        return self.basis_real[:k, :] + 1j * self.basis_real[k:, :]


def _realify(vectors: np.ndarray) -> np.ndarray:
    """Complex (k, r) columns -> real (2k, r)."""
    return np.vstack([vectors.real, vectors.imag])


def _orthonormal(cols: np.ndarray, tol: float = TOL_FD) -> np.ndarray:
    if cols.size == 0:
        return cols.reshape(cols.shape[0], 0)
    q, s, _ = np.linalg.svd(cols, full_matrices=False)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return q[:, :r]


def real_span(vectors: np.ndarray, ambient_dim: int) -> RealSubspace:
    """Real span of complex column vectors."""
    return RealSubspace(ambient_dim, _orthonormal(_realify(vectors)))


def standard_subspace(pair: ModularPair) -> RealSubspace:
    """Fix(J e^{A/2}) as a real subspace; real dimension equals dim.

    The modular relation gives J e^{A/4} = e^{-A/4} J, so the fixed space is
    e^{-A/4} Fix(J); Fix(J) is the +1 space of an orthogonal involution,
    which keeps the computation well conditioned.
    """
    k = pair.dim
    u = pair.u
    j_real = np.block([[u.real, u.imag], [u.imag, -u.real]])
    fix_j = _orthonormal(np.eye(2 * k) + j_real)
    if fix_j.shape[1] != k:
        raise ModularPairError("Fix(J) has wrong real dimension")
    scale = expm(-pair.a / 4)
    cb = scale @ (fix_j[:k, :] + 1j * fix_j[k:, :])
    v = real_span(cb, k)
    if v.real_dim != k:
        raise ModularPairError("fixed space has wrong real dimension")
    resid = np.linalg.norm(pair.s_apply(cb) - cb) / max(1.0, np.linalg.norm(cb))
    if resid > 1e3 * TOL_FD * float(np.linalg.norm(expm(pair.a / 2))):
        raise ModularPairError(f"fixed-space residual too large: {resid:.2e}")
    return v


def standardness_residuals(v: RealSubspace) -> tuple[float, float]:
    """(dim(V cap iV), codim of V + iV) residual ranks, as floats.

    For a standard subspace both are zero: the real basis together with its
    i-rotation spans everything, and the intersection is trivial.
    """
    k = v.ambient_dim
    b = v.basis_real
    rot = _mult_i_real(k) @ b
    both = np.hstack([b, rot])
    s = np.linalg.svd(both, compute_uv=False)
    dim_sum = int(np.sum(s > TOL_FD))
    dim_cap = b.shape[1] + rot.shape[1] - dim_sum
    return float(dim_cap), float(2 * k - dim_sum)


def _mult_i_real(k: int) -> np.ndarray:
    """Realified multiplication by i on C^k."""
    z = np.zeros((k, k))
    e = np.eye(k)
    return np.block([[z, -e], [e, z]])


def symplectic_complement(v: RealSubspace) -> RealSubspace:
    """V' = {w : Im<w, x> = 0 for all x in V}.

    Im<w, x> is the standard real symplectic form of the realification, so
    the complement is a real kernel computation.
    """
    k = v.ambient_dim
    # Im<w, x> = Re(w).Im(x) - Im(w).Re(x) with <.,.> antilinear on the left
    b = v.basis_real
    pair_mat = np.hstack([b[k:, :].T, -b[:k, :].T])  # rows: x -> (Im x, -Re x)
    _, s, vt = np.linalg.svd(pair_mat, full_matrices=True)
    rank = int(np.sum(s > TOL_FD))
    kernel = vt[rank:, :].T
    return RealSubspace(k, _orthonormal(kernel))


def subspace_distance(v1: RealSubspace, v2: RealSubspace) -> float:
    """Largest principal-angle sine between two real subspaces.

    Computed as || (1 - P_1) B_2 ||, which keeps full precision for small
    angles (no 1 - cos^2 cancellation).
    """
    if v1.real_dim != v2.real_dim:
        return 1.0
    if v1.real_dim == 0:
        return 0.0
    b1, b2 = v1.basis_real, v2.basis_real
    resid = b2 - b1 @ (b1.T @ b2)
    s = np.linalg.svd(resid, compute_uv=False)
    return float(s.max(initial=0.0))


def apply_complex(v: RealSubspace, m: np.ndarray) -> RealSubspace:
    return real_span(m @ v.complex_basis(), v.ambient_dim)


# ---------------------------------------------------------------------------
# Tensor products
# ---------------------------------------------------------------------------

MAX_TENSOR_DIM = 256


def tensor_pair(p1: ModularPair, p2: ModularPair) -> ModularPair:
    """Modular pair of the tensor product: Delta = Delta_1 x Delta_2, J = J_1 x J_2."""
    k1, k2 = p1.dim, p2.dim
    if k1 * k2 > MAX_TENSOR_DIM:
        raise ModularPairError(f"tensor dimension {k1 * k2} exceeds guard {MAX_TENSOR_DIM}")
    a = np.kron(p1.a, np.eye(k2)) + np.kron(np.eye(k1), p2.a)
    u = np.kron(p1.u, p2.u)
    return ModularPair(a, u)


def tensor_product(v1: RealSubspace, v2: RealSubspace, p1: ModularPair, p2: ModularPair) -> RealSubspace:
    """The standard subspace of the tensor pair.

    Coincides with the closed real span of elementary tensors v1 x v2 at
    finite dimension; both descriptions are computed and compared by the
    caller's tests.
    """
    return standard_subspace(tensor_pair(p1, p2))


def elementary_tensor_span(v1: RealSubspace, v2: RealSubspace) -> RealSubspace:
    k1, k2 = v1.ambient_dim, v2.ambient_dim
    b1, b2 = v1.complex_basis(), v2.complex_basis()
    cols = []
    for i in range(b1.shape[1]):
        for j in range(b2.shape[1]):
            cols.append(np.kron(b1[:, i], b2[:, j]))
    return real_span(np.array(cols).T, k1 * k2)

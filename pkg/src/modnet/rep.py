"""Numerical action of the conformal Jacobi group on the discretized
positive-energy representation space.

Group words are lists of letters applied right to left:

  Heis(p, q, z)   e^{i lam^2 (z - <q,p>/2)} e^{i lam <q,x>} f(lam, x - lam p)
  Dil(r)          f(r lam, x)
  GL(A)           |det A|^{-1/2} f(lam, A^{-1} x)
  Lower(C)        e^{i <C x, x>} f(lam, x)      [sp matrix [[1,0],[2C,1]]]
  Upper(B)        conjugate of Lower(-B) by the x-Fourier transform
  Fourier         the inverse x-Fourier transform (+i kernel), projectively

The letter/matrix pairing keeps all group-law and conjugation identities
exact at the operator level; covering phases are not tracked, so checks
involving Fourier letters compare projectively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy.ndimage import map_coordinates

from .grids import (
    effective_x_max,
    DECAY_THRESHOLD,
    GridFunction,
    GridSpec,
    boundary_mass_fraction,
    effective_lam_max,
    fourier_axis,
    inner_product,
    norm,
)


class NyquistError(ValueError):
    pass


class DecayError(ValueError):
    pass


class WordError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Letters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Heis:
    p: tuple[float, ...]
    q: tuple[float, ...]
    z: float


@dataclass(frozen=True)
class Dil:
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise WordError("dilation parameter must be positive")


@dataclass(frozen=True)
class GL:
    a: tuple[tuple[float, ...], ...]

    def mat(self) -> np.ndarray:
        m = np.asarray(self.a, dtype=float)
        if abs(np.linalg.det(m)) < 1e-14:
            raise WordError("GL letter must be invertible")
        return m


@dataclass(frozen=True)
class Lower:
    c: tuple[tuple[float, ...], ...]

    def mat(self) -> np.ndarray:
        m = np.asarray(self.c, dtype=float)
        if np.linalg.norm(m - m.T) > 1e-12:
            raise WordError("Lower letter must be symmetric")
        return m


@dataclass(frozen=True)
class Upper:
    b: tuple[tuple[float, ...], ...]

    def mat(self) -> np.ndarray:
        m = np.asarray(self.b, dtype=float)
        if np.linalg.norm(m - m.T) > 1e-12:
            raise WordError("Upper letter must be symmetric")
        return m


@dataclass(frozen=True)
class Fourier:
    power: int = 1


Letter = Union[Heis, Dil, GL, Lower, Upper, Fourier]
Word = tuple


def heis(p, q, z) -> Heis:
    p = tuple(float(v) for v in np.atleast_1d(p))
    q = tuple(float(v) for v in np.atleast_1d(q))
    return Heis(p, q, float(z))


def gl(a) -> GL:
    return GL(tuple(tuple(float(v) for v in row) for row in np.atleast_2d(a)))


def lower(c) -> Lower:
    return Lower(tuple(tuple(float(v) for v in row) for row in np.atleast_2d(c)))


def upper(b) -> Upper:
    return Upper(tuple(tuple(float(v) for v in row) for row in np.atleast_2d(b)))


# ---------------------------------------------------------------------------
# Guards
# ---------------------------------------------------------------------------


def _letter_guards(letter: Letter, spec: GridSpec, lam_hi: float, x_hi: float) -> list[str]:
    """Phase-increment-per-cell guards over the data's effective support."""
    out = []
    du, dx = spec.du, spec.dx
    if isinstance(letter, Heis):
        zc = abs(letter.z - 0.5 * float(np.dot(letter.q, letter.p)))
        if 2.0 * lam_hi**2 * du * zc >= np.pi:
            out.append(f"central phase aliases along lambda: 2 lam^2 du |z| = {2*lam_hi**2*du*zc:.2f}")
        qmax = max((abs(v) for v in letter.q), default=0.0)
        if lam_hi * qmax * dx >= np.pi:
            out.append(f"q-phase aliases along x: lam |q| dx = {lam_hi*qmax*dx:.2f}")
        if lam_hi * du * qmax * x_hi >= np.pi:
            out.append(f"q-phase aliases along lambda: lam du |q| x = {lam_hi*du*qmax*x_hi:.2f}")
    elif isinstance(letter, (Lower, Upper)):
        m = np.asarray(letter.c if isinstance(letter, Lower) else letter.b, dtype=float)
        grad = 2.0 * float(np.linalg.norm(m, 2)) * x_hi * dx
        if grad >= np.pi:
            out.append(f"quadratic phase aliases along x: 2|C| x dx = {grad:.2f}")
    return out


def _shift_loss(f: GridFunction, shifts: np.ndarray, axis: int) -> float:
    """Mass fraction that a per-row x shift pushes out of the window."""
    spec = f.spec
    total = float(np.sum(np.abs(f.data) ** 2))
    if total == 0.0:
        return 0.0
    ncells = np.ceil(np.abs(shifts) / spec.dx).astype(int)
    lost = 0.0
    d = np.moveaxis(f.data, axis, 1) if spec.n == 2 else f.data
    for i in range(spec.n_lam):
        k = min(int(ncells[i]), spec.n_x)
        if k == 0:
            continue
        row = d[i]
        if shifts[i] > 0:
            lost += float(np.sum(np.abs(row[-k:] if spec.n == 1 else row[-k:, ...]) ** 2))
        else:
            lost += float(np.sum(np.abs(row[:k] if spec.n == 1 else row[:k, ...]) ** 2))
    return lost / total


# ---------------------------------------------------------------------------
# Letter application
# ---------------------------------------------------------------------------


def _interp(data: np.ndarray, coords: list[np.ndarray]) -> np.ndarray:
    re = map_coordinates(data.real, coords, order=3, mode="constant", cval=0.0)
    im = map_coordinates(data.imag, coords, order=3, mode="constant", cval=0.0)
    return re + 1j * im


def _apply_heis(letter: Heis, f: GridFunction, guard: bool) -> GridFunction:
    spec = f.spec
    lam = spec.lam()
    mesh = spec.meshgrid()
    lam_b = mesh[0]
    xs = mesh[1:]
    p = np.asarray(letter.p, dtype=float)
    q = np.asarray(letter.q, dtype=float)
    if p.size != spec.n or q.size != spec.n:
        raise WordError("Heisenberg letter dimension does not match the grid")
    phase = letter.z - 0.5 * float(np.dot(q, p))
    out_phase = np.exp(1j * lam_b**2 * phase)
    for ax in range(spec.n):
        out_phase = out_phase * np.exp(1j * lam_b * q[ax] * xs[ax])
    if np.any(p != 0.0):
        if guard:
            for ax in range(spec.n):
                loss = _shift_loss(f, lam * p[ax], axis=1 + ax)
                if loss > 1e-9:
                    raise DecayError(f"x-shift pushes mass {loss:.2e} beyond the grid")
        idx = np.indices(f.data.shape).astype(float)
        for ax in range(spec.n):
            shift_cells = lam * p[ax] / spec.dx
            shape = [1] * (spec.n + 1)
            shape[0] = spec.n_lam
            idx[1 + ax] -= shift_cells.reshape(shape)
        shifted = _interp(f.data, [idx[k] for k in range(spec.n + 1)])
    else:
        shifted = f.data
    return f.copy_with(out_phase * shifted)


def _apply_dil(letter: Dil, f: GridFunction, guard: bool) -> GridFunction:
    spec = f.spec
    s = np.log(letter.r) / spec.du
    n_lam = spec.n_lam
    data = f.data
    if abs(s - round(s)) < 1e-12:
        k = int(round(s))
        out = np.zeros_like(data)
        if k >= 0:
            if k < n_lam:
                out[: n_lam - k] = data[k:]
        else:
            if -k < n_lam:
                out[-k:] = data[:n_lam + k]
        lost = float(np.sum(np.abs(data) ** 2) - np.sum(np.abs(out) ** 2))
        if guard and lost > 1e-9 * max(1e-300, float(np.sum(np.abs(data) ** 2))):
            raise DecayError("lambda shift pushes mass beyond the grid")
        return f.copy_with(out)
    idx = np.indices(data.shape).astype(float)
    idx[0] += s
    return f.copy_with(_interp(data, [idx[k] for k in range(spec.n + 1)]))


def _apply_gl(letter: GL, f: GridFunction, guard: bool) -> GridFunction:
    spec = f.spec
    a = letter.mat()
    if a.shape != (spec.n, spec.n):
        raise WordError("GL letter dimension does not match the grid")
    ainv = np.linalg.inv(a)
    scale = abs(np.linalg.det(a)) ** (-0.5)
    c = spec.n_x / 2 - 0.5
    if spec.n == 1:
        jj = np.arange(spec.n_x)
        cols = (jj - c) * ainv[0, 0] + c
        rows = np.arange(spec.n_lam)[:, None] * np.ones_like(cols)[None, :]
        out = _interp(f.data, [rows, np.broadcast_to(cols, f.data.shape)])
    else:
        x = spec.x()
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        y1 = ainv[0, 0] * x1 + ainv[0, 1] * x2
        y2 = ainv[1, 0] * x1 + ainv[1, 1] * x2
        c1 = y1 / spec.dx + c
        c2 = y2 / spec.dx + c
        rows = np.broadcast_to(np.arange(spec.n_lam)[:, None, None], f.data.shape).astype(float)
        out = _interp(f.data, [rows, np.broadcast_to(c1, f.data.shape), np.broadcast_to(c2, f.data.shape)])
    return f.copy_with(scale * out)


def _quad_phase(spec: GridSpec, m: np.ndarray, sign: float) -> np.ndarray:
    xs = spec.meshgrid()[1:]
    acc = 0.0
    for i in range(spec.n):
        for j in range(spec.n):
            acc = acc + m[i, j] * xs[i] * xs[j]
    return np.exp(1j * sign * acc)


def _apply_lower(letter: Lower, f: GridFunction, guard: bool) -> GridFunction:
    m = letter.mat()
    return f.copy_with(_quad_phase(f.spec, m, +1.0) * f.data)


def _parity_flip(f: GridFunction) -> GridFunction:
    data = f.data
    for ax in range(1, f.spec.n + 1):
        data = np.flip(data, axis=ax)
    return f.copy_with(data)


def _apply_fourier(letter: Fourier, f: GridFunction, guard: bool) -> GridFunction:
    power = letter.power % 4
    if power == 0:
        return f
    if power == 2:  # nu(I)^2 is the parity operator, exact on this grid
        return _parity_flip(f)
    if guard and boundary_mass_fraction(f) > 1e-6:
        raise DecayError("data does not decay at the x boundary; Fourier letter unreliable")
    out = f
    sign = +1 if power == 1 else -1
    for ax in range(1, f.spec.n + 1):
        out = fourier_axis(out, ax, sign=sign)
    return out


def _apply_upper(letter: Upper, f: GridFunction, guard: bool) -> GridFunction:
    m = letter.mat()
    out = f
    for ax in range(1, f.spec.n + 1):
        out = fourier_axis(out, ax, sign=-1)
    out = out.copy_with(_quad_phase(f.spec, m, -1.0) * out.data)
    for ax in range(1, f.spec.n + 1):
        out = fourier_axis(out, ax, sign=+1)
    return out


_APPLIERS = {
    Heis: _apply_heis,
    Dil: _apply_dil,
    GL: _apply_gl,
    Lower: _apply_lower,
    Upper: _apply_upper,
    Fourier: _apply_fourier,
}


def apply(word: Sequence[Letter] | Letter, f: GridFunction, guard: bool = True) -> GridFunction:
    """Apply a group word (letters right to left) to a grid function."""
    if not isinstance(word, (list, tuple)):
        word = (word,)
    out = f
    for letter in reversed(list(word)):
        if guard:
            viol = _letter_guards(letter, f.spec, effective_lam_max(out), effective_x_max(out))
            if viol:
                raise NyquistError("; ".join(viol))
        out = _APPLIERS[type(letter)](letter, out, guard)
    return out


# ---------------------------------------------------------------------------
# Group elements and the group law
# ---------------------------------------------------------------------------


def _omega(v1: np.ndarray, v2: np.ndarray) -> float:
    """Omega((p,q),(p',q')) = <q,p'> - <q',p>."""
    n = v1.size // 2
    return float(np.dot(v1[n:], v2[:n]) - np.dot(v2[n:], v1[:n]))


@dataclass(frozen=True)
class GroupElement:
    """(v, z, M, r) in Heis x| (Sp x R_+), covering phases dropped."""

    v: np.ndarray
    z: float
    m: np.ndarray
    r: float

    @property
    def n(self) -> int:
        return self.v.size // 2

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        w = self.r * (self.m @ other.v)
        return GroupElement(
            self.v + w,
            self.z + self.r**2 * other.z + 0.5 * _omega(self.v, w),
            self.m @ other.m,
            self.r * other.r,
        )


def identity_element(n: int) -> GroupElement:
    return GroupElement(np.zeros(2 * n), 0.0, np.eye(2 * n), 1.0)


def _i_matrix(n: int) -> np.ndarray:
    z = np.zeros((n, n))
    e = np.eye(n)
    return np.block([[z, -e], [e, z]])


def letter_element(letter: Letter, n: int) -> GroupElement:
    if isinstance(letter, Heis):
        return GroupElement(np.concatenate([letter.p, letter.q]), letter.z, np.eye(2 * n), 1.0)
    if isinstance(letter, Dil):
        return GroupElement(np.zeros(2 * n), 0.0, np.eye(2 * n), letter.r)
    if isinstance(letter, GL):
        a = letter.mat()
        m = np.block([[a, np.zeros((n, n))], [np.zeros((n, n)), np.linalg.inv(a).T]])
        return GroupElement(np.zeros(2 * n), 0.0, m, 1.0)
    if isinstance(letter, Lower):
        c = letter.mat()
        m = np.block([[np.eye(n), np.zeros((n, n))], [2.0 * c, np.eye(n)]])
        return GroupElement(np.zeros(2 * n), 0.0, m, 1.0)
    if isinstance(letter, Upper):
        b = letter.mat()
        m = np.block([[np.eye(n), 2.0 * b], [np.zeros((n, n)), np.eye(n)]])
        return GroupElement(np.zeros(2 * n), 0.0, m, 1.0)
    if isinstance(letter, Fourier):
        return GroupElement(np.zeros(2 * n), 0.0, np.linalg.matrix_power(_i_matrix(n), letter.power % 4), 1.0)
    raise WordError(f"unknown letter {letter!r}")


def word_element(word: Sequence[Letter], n: int) -> GroupElement:
    out = identity_element(n)
    for letter in word:
        out = out @ letter_element(letter, n)
    return out


def sp_to_word(m: np.ndarray) -> list[Letter]:
    """Upper * GL * Lower * Fourier^k decomposition of a symplectic matrix."""
    n = m.shape[0] // 2
    imat = _i_matrix(n)
    best_k, best_det = None, 0.0
    cur = m.copy()
    for k in range(4):
        d = cur[n:, n:]
        dd = abs(np.linalg.det(d))
        if dd > best_det:
            best_det, best_k = dd, k
        cur = cur @ np.linalg.inv(imat)
    if best_det < 1e-12:
        raise WordError("no Fourier translate with invertible lower-right block")
    k = best_k
    mk = m @ np.linalg.matrix_power(np.linalg.inv(imat), k)
    a, b = mk[:n, :n], mk[:n, n:]
    c, d = mk[n:, :n], mk[n:, n:]
    dinv = np.linalg.inv(d)
    s = b @ dinv
    s = 0.5 * (s + s.T)  # symmetric in exact arithmetic
    t = dinv @ c
    t = 0.5 * (t + t.T)
    a0 = dinv.T
    word: list[Letter] = []
    if np.linalg.norm(s) > 1e-15:
        word.append(upper(0.5 * s))
    if np.linalg.norm(a0 - np.eye(n)) > 1e-15:
        word.append(gl(a0))
    if np.linalg.norm(t) > 1e-15:
        word.append(lower(0.5 * t))
    word.extend([Fourier(1)] * k)
    return word


def element_to_word(g: GroupElement) -> list[Letter]:
    word: list[Letter] = []
    n = g.n
    if np.linalg.norm(g.v) > 0 or g.z != 0.0:
        word.append(heis(g.v[:n], g.v[n:], g.z))
    if np.linalg.norm(g.m - np.eye(2 * n)) > 1e-15:
        word.extend(sp_to_word(g.m))
    if abs(g.r - 1.0) > 1e-15:
        word.append(Dil(g.r))
    return word


def _has_metaplectic_letter(word: Sequence[Letter]) -> bool:
    return any(isinstance(w, (GL, Lower, Upper, Fourier)) for w in word)


def group_law_check(w1: Sequence[Letter], w2: Sequence[Letter], f: GridFunction, align_phase: bool | None = None) -> float:
    """|| apply(w1, apply(w2, f)) - apply(w1 w2, f) || / ||f||.

    The covering phase of the two-fold metaplectic cover is not tracked, so
    words containing Sp letters are compared after aligning a global phase.
    """
    lhs = apply(w1, apply(w2, f))
    composite = element_to_word(word_element(list(w1) + list(w2), f.spec.n))
    rhs = apply(composite, f)
    if align_phase is None:
        align_phase = _has_metaplectic_letter(list(w1) + list(w2))
    diff_num = _phase_aligned_diff(lhs, rhs) if align_phase else norm(lhs.copy_with(lhs.data - rhs.data))
    return diff_num / max(norm(f), 1e-300)


def _phase_aligned_diff(u: GridFunction, v: GridFunction) -> float:
    ip = inner_product(v, u)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    return norm(u.copy_with(u.data - phase * v.data))


def tau_letter(letter: Letter) -> Letter:
    """The grading involution applied letter-wise: top/bottom pieces flip."""
    if isinstance(letter, Heis):
        return Heis(tuple(-v for v in letter.p), letter.q, -letter.z)
    if isinstance(letter, (Dil, GL)):
        return letter
    if isinstance(letter, Lower):
        return Lower(tuple(tuple(-v for v in row) for row in letter.c))
    if isinstance(letter, Upper):
        return Upper(tuple(tuple(-v for v in row) for row in letter.b))
    if isinstance(letter, Fourier):
        return Fourier(-letter.power)
    raise WordError(f"unknown letter {letter!r}")


def tau_word(word: Sequence[Letter]) -> list[Letter]:
    return [tau_letter(w) for w in word]


def j_nu(f: GridFunction) -> GridFunction:
    """(J f)(lam, x) = conj(f(lam, -x)); exact on the half-offset grid."""
    data = np.conj(f.data)
    for ax in range(1, f.spec.n + 1):
        data = np.flip(data, axis=ax)
    return f.copy_with(data)


def j_covariance_residual(word: Sequence[Letter], f: GridFunction) -> float:
    """|| nu(tau(g)) f - J nu(g) J f || / ||f||."""
    lhs = apply(tau_word(word), f)
    rhs = j_nu(apply(word, j_nu(f)))
    return norm(lhs.copy_with(lhs.data - rhs.data)) / max(norm(f), 1e-300)


def modular_flow(t: float, f: GridFunction) -> GridFunction:
    """Delta^{-it/2pi} = nu(exp(t h)): e^{-tn/4} f(e^{t/2} lam, e^{-t/2} x).

    Composition of Dil(e^{t/2}) with GL(e^{t/2} id); real parameters only
    (complex continuations are evaluated on closed-form templates).
    """
    spec = f.spec
    r = float(np.exp(t / 2.0))
    word = [Dil(r), gl(np.eye(spec.n) * r)]
    return apply(word, f)


def positive_energy_check(f: GridFunction) -> float:
    """<-i d nu(z) f, f> / <f, f> = int lam^2 |f|^2 dmu / ||f||^2 >= 0."""
    spec = f.spec
    lam2 = spec.lam() ** 2
    wl = spec.lam_weights()
    rows = (np.abs(f.data.reshape(spec.n_lam, -1)) ** 2).sum(axis=1) * spec.cell_weight()
    denom = float(np.dot(wl, rows))
    if denom == 0.0:
        raise ValueError("zero vector")
    return float(np.dot(wl, lam2 * rows) / denom)


# ---------------------------------------------------------------------------
# Mackey orbit bookkeeping (exact)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """chi_{(p,z)}(q, z') = e^{i z z'} e^{i Omega(q, p)} on V_{-1} x T."""

    p: tuple[Fraction, ...]
    z: Fraction

    def orbit(self) -> str:
        if self.z > 0:
            return "positive"
        if self.z < 0:
            return "negative"
        if any(c != 0 for c in self.p):
            return "ray"
        return "trivial"


def character(p, z) -> Character:
    return Character(tuple(Fraction(v) for v in np.atleast_1d(p)), Fraction(z))


def mackey_orbit_step(c: Character, p_prime, r) -> Character:
    """(p', r).chi_{(p,z)} = chi_{((p + (z/r) p')/r, z/r^2)}, exactly."""
    rq = Fraction(r)
    if rq <= 0:
        raise ValueError("r must be positive")
    pp = tuple(Fraction(v) for v in np.atleast_1d(p_prime))
    new_p = tuple((pi + (c.z / rq) * ppi) / rq for pi, ppi in zip(c.p, pp))
    return Character(new_p, c.z / rq**2)


def mackey_compose(g1: tuple, g2: tuple) -> tuple:
    """(p1, r1)(p2, r2) = (p1 + r1 p2, r1 r2) in V_1 x| R_+, exactly."""
    p1, r1 = g1
    p2, r2 = g2
    p1 = tuple(Fraction(v) for v in np.atleast_1d(p1))
    p2 = tuple(Fraction(v) for v in np.atleast_1d(p2))
    r1, r2 = Fraction(r1), Fraction(r2)
    return (tuple(a + r1 * b for a, b in zip(p1, p2)), r1 * r2)

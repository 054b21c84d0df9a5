"""Euler elements, exact eigenspace gradings, the induced involution, and
Lie wedges of endomorphism semigroups.

Diagonalizability is certified by a squarefree annihilating polynomial, so
"spec(ad h) is contained in {-1, 0, 1}" is decided exactly; the grading
projectors are Lagrange interpolation polynomials in ad(h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import liealg as la
from . import qlinalg as ql
from .liealg import LieAlgebra, LieElement, LinearMap
from .qlinalg import Mat, Q, Vec
from .spindler import SpindlerData, spindler_build

EULER_EIGENVALUES = (Q(-1), Q(0), Q(1))
FIVE_GRADING_EIGENVALUES = (Q(-1), Q(-1, 2), Q(0), Q(1, 2), Q(1))


class GradingError(ValueError):
    pass


def is_euler(alg: LieAlgebra, h: LieElement, strict: bool = True) -> bool:
    """ad(h)(ad(h) - 1)(ad(h) + 1) = 0 exactly; h != 0 action if strict."""
    m = alg.ad(h)
    if strict and ql.is_zero_mat(m):
        return False
    return ql.annihilates(m, EULER_EIGENVALUES)


@dataclass(frozen=True)
class Grading:
    """Exact eigenspace decomposition of an algebra under ad(h)."""

    algebra: LieAlgebra
    h: LieElement
    eigenvalues: tuple[Fraction, ...]
    projectors: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)
    subspace_bases: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)

    def dims(self) -> dict[Fraction, int]:
        return {lam: len(b) for lam, b in zip(self.eigenvalues, self.subspace_bases)}

    def projector(self, lam) -> Mat:
        lam = ql.q(lam)
        idx = self.eigenvalues.index(lam)
        return [list(r) for r in self.projectors[idx]]

    def basis(self, lam) -> list[Vec]:
        lam = ql.q(lam)
        idx = self.eigenvalues.index(lam)
        return [list(v) for v in self.subspace_bases[idx]]

    def component(self, x: LieElement, lam) -> LieElement:
        return self.algebra.element(ql.mat_vec(self.projector(lam), list(x.coeffs)))


def grading(alg: LieAlgebra, h: LieElement, eigenvalues: Sequence = EULER_EIGENVALUES) -> Grading:
    """Exact Lagrange projectors of ad(h) for a prescribed rational spectrum."""
    eigs = tuple(ql.q(e) for e in eigenvalues)
    m = alg.ad(h)
    projs = ql.eigenprojectors(m, eigs)
    if projs is None:
        raise GradingError(f"spectrum of ad(h) is not contained in {sorted(eigs)}")
    bases = []
    for p in projs:
        bases.append(tuple(tuple(v) for v in ql.column_space_basis(p)))
    total = sum(len(b) for b in bases)
    assert total == alg.dim, "projector ranks must resolve the identity"
    return Grading(alg, h, eigs, tuple(tuple(tuple(r) for r in p) for p in projs), tuple(bases))


def graded_bracket_law(g: Grading) -> bool:
    """[g_a, g_b] lies in g_{a+b} (zero when a+b is not an eigenvalue)."""
    alg = g.algebra
    for a, basis_a in zip(g.eigenvalues, g.subspace_bases):
        for b, basis_b in zip(g.eigenvalues, g.subspace_bases):
            target = a + b
            tgt_basis = (
                g.basis(target) if target in g.eigenvalues else []
            )
            for va in basis_a:
                for vb in basis_b:
                    br = la.bracket(alg.element(list(va)), alg.element(list(vb)))
                    if br.is_zero():
                        continue
                    if not ql.in_span([list(t) for t in tgt_basis], list(br.coeffs)):
                        return False
    return True


def euler_derivation(d: SpindlerData, h_l: LieElement, lam: int = 1) -> LinearMap:
    """The derivation (v, z, x) -> (lam/2 v + h_l.v, lam z, [h_l, x]).

    Requires h_l to be a nonzero Euler element of the reductive part whose
    doubled action is an involution on V.
    """
    if lam not in (1, -1):
        raise GradingError("lam must be +1 or -1")
    if not is_euler(d.l, h_l, strict=False) or ql.is_zero_mat(d.rho(h_l)):
        raise GradingError("h_l must act as a nonzero Euler element")
    rho_h = d.rho(h_l)
    doubled = ql.mat_scale(2, rho_h)
    if not ql.mat_eq(ql.mat_mul(doubled, doubled), ql.eye(d.V_dim)):
        raise GradingError("2 h_l does not act as an involution on V")
    alg = spindler_build(d)
    nv, nz = d.V_dim, d.z_dim
    dim = alg.dim
    m = ql.zeros(dim, dim)
    half = Q(lam, 2)
    for i in range(nv):
        m[i][i] = half
        for a in range(nv):
            m[a][i] += rho_h[a][i]
    for t in range(nz):
        m[nv + t][nv + t] = Q(lam)
    ad_l = d.l.ad(h_l)
    off = nv + nz
    for i in range(d.l.dim):
        for a in range(d.l.dim):
            m[off + a][off + i] = ad_l[a][i]
    der = la.endo(alg, m)
    if not la.is_derivation(alg, der):
        raise GradingError("constructed map is not a derivation")
    return der


def conformal_extension(d: SpindlerData, h_l: LieElement, lam: int = 1, label: str = "d") -> tuple[LieAlgebra, LieElement]:
    """Extend g(l,V,z,beta) by D_V = D - ad(h_l) and return the Euler element.

    The returned element h = h_l + (extension generator) satisfies
    ad(h) = D on the ideal, and is Euler in the extension.
    """
    der = euler_derivation(d, h_l, lam)
    alg = der.domain
    ad_hl = alg.ad(_embed_l(d, alg, h_l))
    d_v = la.endo(alg, ql.mat_sub(der.as_mat(), ad_hl))
    ext = la.semidirect_extend(alg, d_v, label=label)
    coeffs = list(_embed_l(d, alg, h_l).coeffs) + [Q(1)]
    h = ext.element(coeffs)
    if not is_euler(ext, h):
        raise GradingError("extension element is not Euler")
    return ext, h


def _embed_l(d: SpindlerData, alg: LieAlgebra, x: LieElement) -> LieElement:
    out = ql.zvec(alg.dim)
    off = d.V_dim + d.z_dim
    for k, c in enumerate(x.coeffs):
        out[off + k] = c
    return alg.element(out)


def tau_involution(g: Grading) -> LinearMap:
    """tau = exp(i pi ad h) acting as (-1)^k on integer graded pieces."""
    if any(e.denominator != 1 for e in g.eigenvalues):
        raise GradingError("tau requires an integer grading")
    dim = g.algebra.dim
    m = ql.zeros(dim, dim)
    for lam, proj in zip(g.eigenvalues, g.projectors):
        sign = Q(-1) if int(lam) % 2 else Q(1)
        m = ql.mat_add(m, ql.mat_scale(sign, [list(r) for r in proj]))
    tau = la.endo(g.algebra, m)
    if not ql.mat_eq(ql.mat_mul(m, m), ql.eye(dim)):
        raise GradingError("tau failed to be an involution")
    es = [g.algebra.basis_element(i) for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            lhs = tau(la.bracket(es[i], es[j]))
            rhs = la.bracket(tau(es[i]), tau(es[j]))
            if not (lhs - rhs).is_zero():
                raise GradingError("tau failed to be an automorphism")
    return tau


@dataclass(frozen=True)
class LieWedgeSpec:
    """Membership test for L(S_V) = C_- + g_0 + C_+ from a cone oracle."""

    grading: Grading
    cone_oracle: Callable[[LieElement], bool] = field(repr=False)

    def contains(self, x: LieElement) -> bool:
        g = self.grading
        x_plus = g.component(x, Q(1))
        x_minus = g.component(x, Q(-1))
        return self.cone_oracle(x_plus) and self.cone_oracle(-x_minus)

    def cone_plus_contains(self, x: LieElement) -> bool:
        g = self.grading
        if not (x - g.component(x, Q(1))).is_zero():
            return False
        return self.cone_oracle(x)

    def cone_minus_contains(self, x: LieElement) -> bool:
        g = self.grading
        if not (x - g.component(x, Q(-1))).is_zero():
            return False
        return self.cone_oracle(-x)


def lie_wedge(g: Grading, cone_oracle: Callable[[LieElement], bool]) -> LieWedgeSpec:
    if set(g.eigenvalues) != set(EULER_EIGENVALUES):
        raise GradingError("wedges are defined for 3-gradings")
    return LieWedgeSpec(g, cone_oracle)


def grading_report(alg: LieAlgebra, h: LieElement) -> dict:
    """CLI-facing summary: Euler flag, eigenspace dims, trace of tau."""
    euler = is_euler(alg, h)
    out: dict = {"euler": euler}
    if euler:
        g = grading(alg, h)
        dims = g.dims()
        out["dims"] = {str(k): dims[ql.q(k)] for k in (-1, 0, 1)}
        tau = tau_involution(g)
        out["tau_trace"] = str(sum((tau.matrix[i][i] for i in range(alg.dim)), Q(0)))
    return out

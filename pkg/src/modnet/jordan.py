"""Euclidean Jordan algebras from sl(2)-triples, Peirce decompositions,
frames, principal minors, determinants, and the Wallach set.

The product on the top graded piece is a · b = (1/2)[[a, y], b]; all axioms
are certified exactly, including the trilinear form of the Jordan identity
(sufficient in characteristic zero by polarization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import grading as gr
from . import liealg as la
from . import qlinalg as ql
from .liealg import LieAlgebra, LieElement
from .qlinalg import Mat, Q, Vec

PEIRCE_EIGENVALUES = (Q(0), Q(1, 2), Q(1))


class JordanError(ValueError):
    pass


@dataclass(frozen=True)
class JordanAlgebra:
    """Commutative product table with unit, over Q."""

    basis_labels: tuple[str, ...]
    table: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)
    unit: tuple[Fraction, ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def product(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vec:
        out = ql.zvec(self.dim)
        for i, ci in enumerate(x):
            if ci == 0:
                continue
            for j, cj in enumerate(y):
                if cj == 0:
                    continue
                for k, c in enumerate(self.table[i][j]):
                    if c != 0:
                        out[k] += ci * cj * c
        return out

    def left_mult(self, x: Sequence[Fraction]) -> Mat:
        cols = []
        for j in range(self.dim):
            ej = [Q(1) if t == j else Q(0) for t in range(self.dim)]
            cols.append(self.product(list(x), ej))
        return ql.transpose(cols)

    def power(self, x: Sequence[Fraction], k: int) -> Vec:
        if k == 0:
            return list(self.unit)
        out = list(x)
        for _ in range(k - 1):
            out = self.product(out, list(x))
        return out

    def is_idempotent(self, c: Sequence[Fraction]) -> bool:
        return ql.is_zero_vec(ql.vec_sub(self.product(list(c), list(c)), list(c)))


def _check_axioms(j: JordanAlgebra) -> None:
    dim = j.dim
    es = [[Q(1) if t == i else Q(0) for t in range(dim)] for i in range(dim)]
    for a in range(dim):
        for b in range(a, dim):
            if not ql.is_zero_vec(ql.vec_sub(j.product(es[a], es[b]), j.product(es[b], es[a]))):
                raise JordanError("product is not commutative")
        if not ql.is_zero_vec(ql.vec_sub(j.product(list(j.unit), es[a]), es[a])):
            raise JordanError("unit does not act as identity")
    # trilinear Jordan identity: [L(a), L(b.c)] + [L(b), L(c.a)] + [L(c), L(a.b)] = 0
    lmats = [j.left_mult(e) for e in es]
    prod_l: dict[tuple[int, int], Mat] = {}
    for a in range(dim):
        for b in range(a, dim):
            prod_l[(a, b)] = j.left_mult(j.product(es[a], es[b]))
    for a in range(dim):
        for b in range(a, dim):
            for c in range(b, dim):
                total = ql.mat_add(
                    ql.commutator(lmats[a], prod_l[(b, c)]),
                    ql.mat_add(
                        ql.commutator(lmats[b], prod_l[(a, c) if a <= c else (c, a)]),
                        ql.commutator(lmats[c], prod_l[(a, b)]),
                    ),
                )
                if not ql.is_zero_mat(total):
                    raise JordanError("Jordan identity fails")
    # direct quadratic form of the identity on basis pairs
    for a in range(dim):
        sq = j.product(es[a], es[a])
        lsq = j.left_mult(sq)
        if not ql.is_zero_mat(ql.commutator(lmats[a], lsq)):
            raise JordanError("Jordan identity fails on a basis element")


def kkt_jordan(alg: LieAlgebra, h: LieElement, x: LieElement, y: LieElement) -> tuple[JordanAlgebra, list[Vec]]:
    """Jordan structure on the top eigenspace of ad(h) from an sl(2)-triple.

    (2h, x, y) must satisfy the triple relations exactly; the unit is x.
    Returns the algebra and the ambient basis of the top eigenspace.
    """
    b = la.bracket
    if not (b(2 * h, x) - 2 * x).is_zero() or not (b(2 * h, y) + 2 * y).is_zero() or not (
        b(x, y) - 2 * h
    ).is_zero():
        raise JordanError("(2h, x, y) is not an sl(2)-triple")
    if not gr.is_euler(alg, h):
        raise JordanError("h is not an Euler element")
    g = gr.grading(alg, h)
    basis = g.basis(1)
    dim = len(basis)
    table = []
    for i in range(dim):
        row = []
        for j in range(dim):
            prod = Q(1, 2) * b(b(alg.element(basis[i]), y), alg.element(basis[j]))
            coords = ql.coords_in_span(basis, list(prod.coeffs))
            if coords is None:
                raise JordanError("product leaves the top eigenspace")
            row.append(tuple(coords))
        table.append(tuple(row))
    unit = ql.coords_in_span(basis, list(x.coeffs))
    if unit is None:
        raise JordanError("x does not lie in the top eigenspace")
    jalg = JordanAlgebra(
        tuple(f"e{i}" for i in range(dim)),
        tuple(table),
        tuple(unit),
    )
    _check_axioms(jalg)
    return jalg, basis


@dataclass(frozen=True)
class PeirceData:
    idempotent: tuple[Fraction, ...]
    projectors: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)
    bases: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False)

    def dims(self) -> dict[str, int]:
        return {"0": len(self.bases[0]), "1/2": len(self.bases[1]), "1": len(self.bases[2])}

    def basis(self, lam) -> list[Vec]:
        idx = PEIRCE_EIGENVALUES.index(ql.q(lam))
        return [list(v) for v in self.bases[idx]]


def peirce(j: JordanAlgebra, c: Sequence[Fraction]) -> PeirceData:
    """Exact eigenprojectors of L(c) for an idempotent c; spec in {0, 1/2, 1}."""
    cvec = ql.qvec(c)
    if not j.is_idempotent(cvec):
        raise JordanError("c is not idempotent")
    lc = j.left_mult(cvec)
    projs = ql.eigenprojectors(lc, PEIRCE_EIGENVALUES)
    if projs is None:
        raise JordanError("spec(L(c)) is not contained in {0, 1/2, 1}")
    bases = tuple(tuple(tuple(v) for v in ql.column_space_basis(p)) for p in projs)
    return PeirceData(tuple(cvec), tuple(tuple(tuple(r) for r in p) for p in projs), bases)


def trace_form(j: JordanAlgebra) -> Mat:
    """The invariant form <x, y> = tr L(x . y)."""
    dim = j.dim
    es = [[Q(1) if t == i else Q(0) for t in range(dim)] for i in range(dim)]
    g = ql.zeros(dim, dim)
    for a in range(dim):
        for b in range(a, dim):
            lm = j.left_mult(j.product(es[a], es[b]))
            tr = sum((lm[i][i] for i in range(dim)), Q(0))
            g[a][b] = tr
            g[b][a] = tr
    return g


def invariant_form(j: JordanAlgebra) -> Mat:
    """A positive definite form with <x.y, z> = <y, x.z>, exactly certified.

    The trace form is tried first; if it fails (non-euclidean data), the
    linear invariance system is solved and scanned for a definite solution.
    """
    g = trace_form(j)
    if _form_is_invariant(j, g) and ql.is_positive_definite(g)[0]:
        return g
    dim = j.dim
    rows: Mat = []
    for k in range(dim):
        lk = j.left_mult([Q(1) if t == k else Q(0) for t in range(dim)])
        # G L_k - L_k^T G = 0, unknown G (dim x dim)
        for a in range(dim):
            for b in range(dim):
                row = ql.zvec(dim * dim)
                for t in range(dim):
                    row[a * dim + t] += lk[t][b]
                    row[t * dim + b] -= lk[t][a]
                rows.append(row)
    # symmetry constraints
    for a in range(dim):
        for b in range(a + 1, dim):
            row = ql.zvec(dim * dim)
            row[a * dim + b] = Q(1)
            row[b * dim + a] = Q(-1)
            rows.append(row)
    for vec in ql.nullspace(rows):
        cand = [[vec[a * dim + b] for b in range(dim)] for a in range(dim)]
        if ql.is_positive_definite(cand)[0] and _form_is_invariant(j, cand):
            return cand
        neg = ql.mat_scale(-1, cand)
        if ql.is_positive_definite(neg)[0] and _form_is_invariant(j, neg):
            return neg
    raise JordanError("no invariant positive definite form found; algebra not euclidean?")


def _form_is_invariant(j: JordanAlgebra, g: Mat) -> bool:
    dim = j.dim
    for k in range(dim):
        lk = j.left_mult([Q(1) if t == k else Q(0) for t in range(dim)])
        if not ql.mat_eq(ql.mat_mul(g, lk), ql.mat_mul(ql.transpose(lk), g)):
            return False
    return True


@dataclass(frozen=True)
class JordanFrame:
    idempotents: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.idempotents)


def _candidate_elements(j: JordanAlgebra, sub_basis: list[Vec]) -> list[Vec]:
    cands = [list(v) for v in sub_basis]
    k = len(sub_basis)
    for i in range(k):
        for t in range(i + 1, k):
            cands.append(ql.vec_add(sub_basis[i], sub_basis[t]))
            cands.append(ql.vec_sub(sub_basis[i], sub_basis[t]))
    return cands


def _spectral_idempotents(j: JordanAlgebra, a: Vec, unit: Vec) -> list[Vec] | None:
    """Idempotents from the rational spectral decomposition of a, if it splits."""
    powers = [list(unit)]
    for _ in range(j.dim + 1):
        powers.append(j.product(powers[-1], a))
    coeffs = ql.minimal_polynomial(powers)
    roots = ql.rational_roots(coeffs)
    if roots is None or len(set(roots)) != len(roots) or len(roots) < 2:
        return None
    idems = []
    for lam in roots:
        # Lagrange polynomial at lam evaluated on a
        num = list(unit)
        den = Q(1)
        for mu in roots:
            if mu == lam:
                continue
            num = ql.vec_sub(j.product(num, a), ql.vec_scale(mu, num))
            den *= lam - mu
        idems.append(ql.vec_scale(1 / den, num))
    return idems


def _peirce_sub_basis(j: JordanAlgebra, c: Vec, lam) -> list[Vec]:
    return peirce(j, c).basis(lam)


def _primitive_idempotent(j: JordanAlgebra, sub_basis: list[Vec], unit: Vec, depth: int) -> Vec:
    """Find a primitive idempotent in the unital subalgebra spanned by sub_basis."""
    if depth > j.dim + 1:
        raise JordanError("idempotent peeling failed to terminate")
    if len(sub_basis) == 1:
        return list(unit)
    for cand in _candidate_elements(j, sub_basis):
        # skip multiples of the unit
        if ql.rank([list(unit), cand]) < 2:
            continue
        idems = _spectral_idempotents(j, cand, unit)
        if not idems:
            continue
        for c in idems:
            if ql.is_zero_vec(c) or ql.is_zero_vec(ql.vec_sub(c, unit)):
                continue
            if not j.is_idempotent(c):
                continue
            # recurse into the Peirce-1 subalgebra of c
            p1 = _peirce_sub_basis(j, c, 1)
            inner = [v for v in p1 if ql.in_span(sub_basis, v)]
            if len(inner) == len(p1) and len(p1) < len(sub_basis):
                return _primitive_idempotent(j, p1, c, depth + 1)
    raise JordanError("no rational-spectrum idempotent found in bounded search")


def jordan_frame(j: JordanAlgebra) -> JordanFrame:
    """A complete system of orthogonal primitive idempotents, by peeling.

    At each step a primitive idempotent of the current Peirce-0 complement
    is split off.  Requires a positive definite invariant form to exist
    (checked), and rational spectra along the bounded candidate search.
    """
    invariant_form(j)  # certifies the euclidean hypothesis
    frame: list[Vec] = []
    sub_basis = [[Q(1) if t == i else Q(0) for t in range(j.dim)] for i in range(j.dim)]
    unit = list(j.unit)
    steps = 0
    while True:
        steps += 1
        if steps > j.dim + 1:
            raise JordanError("peeling failed to terminate within dim steps")
        c = _primitive_idempotent(j, sub_basis, unit, 0)
        frame.append(c)
        rest = ql.vec_sub(unit, c)
        if ql.is_zero_vec(rest):
            break
        p0 = peirce(j, c)
        # restrict to vectors of the current subalgebra in the 0-eigenspace
        new_basis = [v for v in p0.basis(0) if ql.in_span(sub_basis, v)]
        sub_basis = new_basis
        unit = rest
        if not j.is_idempotent(unit):
            raise JordanError("complement of a frame prefix is not idempotent")
    for i, c in enumerate(frame):
        pc = peirce(j, c)
        if len(pc.basis(1)) != 1:
            raise JordanError(f"frame element {i} is not primitive")
        for t in range(i + 1, len(frame)):
            if not ql.is_zero_vec(j.product(c, frame[t])):
                raise JordanError("frame elements are not orthogonal")
    total = frame[0]
    for c in frame[1:]:
        total = ql.vec_add(total, c)
    if not ql.is_zero_vec(ql.vec_sub(total, list(j.unit))):
        raise JordanError("frame does not resolve the unit")
    return JordanFrame(tuple(tuple(c) for c in frame))


def minor_subalgebra(j: JordanAlgebra, frame: JordanFrame, k: int) -> tuple[JordanAlgebra, list[Vec]]:
    """The unital subalgebra on the 1-eigenspace of c_1 + ... + c_k."""
    if not 1 <= k <= frame.rank:
        raise JordanError("k out of range")
    c = list(frame.idempotents[0])
    for t in range(1, k):
        c = ql.vec_add(c, list(frame.idempotents[t]))
    p = peirce(j, c)
    basis = p.basis(1)
    dim = len(basis)
    table = []
    for a in range(dim):
        row = []
        for b in range(dim):
            prod = j.product(basis[a], basis[b])
            coords = ql.coords_in_span(basis, prod)
            if coords is None:
                raise JordanError("minor subalgebra is not closed under the product")
            row.append(tuple(coords))
        table.append(tuple(row))
    unit = ql.coords_in_span(basis, c)
    sub = JordanAlgebra(tuple(f"m{i}" for i in range(dim)), tuple(table), tuple(unit))
    _check_axioms(sub)
    return sub, basis


# ---------------------------------------------------------------------------
# Determinant and the symmetric-matrix model
# ---------------------------------------------------------------------------


def _peirce_rank(j: JordanAlgebra, c: Vec, rank_total: int) -> int:
    """Rank of an idempotent from dim E_1(c) = k(k+1)/2 + k*d*(stuff)...

    For the d = 1 (symmetric matrix) family dim E_1(c) = k(k+1)/2.
    """
    d1 = len(peirce(j, c).basis(1))
    # solve k(k+1)/2 = d1
    k = int(((8 * d1 + 1) ** 0.5 - 1) / 2)
    if k * (k + 1) // 2 != d1:
        raise JordanError("idempotent rank is not of symmetric-matrix type")
    return k


def jordan_det(j: JordanAlgebra, frame: JordanFrame, x: Sequence[Fraction]) -> Fraction:
    """Jordan determinant of x.

    Primary route: the minimal polynomial of x in Q[x] (the characteristic
    polynomial of L(x) restricted to that subalgebra) with eigenvalue
    multiplicities read off Peirce ranks.  If the polynomial does not split
    over Q, an exact symmetric-matrix model is constructed instead (d = 1
    family only).
    """
    xv = ql.qvec(x)
    r = frame.rank
    powers = [list(j.unit)]
    for _ in range(j.dim + 1):
        powers.append(j.product(powers[-1], xv))
    coeffs = ql.minimal_polynomial(powers)
    roots = ql.rational_roots(coeffs)
    if roots is not None and len(set(roots)) == len(roots):
        if len(roots) == r:
            out = Q(1)
            for lam in roots:
                out *= lam
            return out
        # repeated spectral values: weight by Peirce ranks of the projections
        idems = _spectral_idempotents(j, xv, list(j.unit)) if len(roots) >= 2 else None
        if idems is not None:
            out = Q(1)
            used = 0
            for lam, c in zip(roots, idems):
                k = _peirce_rank(j, c, r)
                used += k
                out *= lam**k
            if used == r:
                return out
        elif len(roots) == 1:
            return roots[0] ** r
    model = sym_model_iso(j, frame)
    return ql.det(_to_sym_matrix(model, xv))


def _to_sym_matrix(model: tuple[int, Mat], xv: Vec) -> Mat:
    m, phi = model
    img = ql.mat_vec(phi, xv)
    out = ql.zeros(m, m)
    t = 0
    for i in range(m):
        for jj in range(i, m):
            out[i][jj] = img[t]
            out[jj][i] = img[t]
            t += 1
    return out


def sym_model_iso(j: JordanAlgebra, frame: JordanFrame) -> tuple[int, Mat]:
    """Exact isomorphism onto symmetric matrices with the half-anticommutator.

    Only the d = 1 family is supported: off-diagonal Peirce spaces must be
    one-dimensional with perfect-square normalizations.  Returns (m, phi)
    where phi maps into coordinates (upper triangle, diagonal-major order).
    """
    r = frame.rank
    cs = [list(c) for c in frame.idempotents]
    pdata = [peirce(j, c) for c in cs]
    offdiag: dict[tuple[int, int], Vec] = {}
    for a in range(r):
        for b in range(a + 1, r):
            inter = ql.span_intersection(pdata[a].basis(Q(1, 2)), pdata[b].basis(Q(1, 2)))
            if len(inter) != 1:
                raise JordanError("unsupported Jordan type: off-diagonal space not a line")
            v = inter[0]
            sq = j.product(v, v)
            target = ql.vec_add(cs[a], cs[b])
            coeff = None
            for t in range(j.dim):
                if target[t] != 0:
                    coeff = sq[t] / target[t]
                    break
            if coeff is None or not ql.is_zero_vec(ql.vec_sub(sq, ql.vec_scale(coeff, target))):
                raise JordanError("off-diagonal square is not aligned with the idempotents")
            if coeff <= 0:
                raise JordanError("off-diagonal square has nonpositive normalization")
            root = _sqrt_fraction(coeff)
            if root is None:
                raise JordanError("unsupported normalization: not a rational square")
            offdiag[(a, b)] = ql.vec_scale(1 / root, v)
    # fix signs along the first row, then derive the rest
    for b in range(2, r):
        for a in range(1, b):
            derived = ql.vec_scale(2, j.product(offdiag[(0, a)], offdiag[(0, b)]))
            if not ql.is_zero_vec(ql.vec_sub(derived, offdiag[(a, b)])):
                if ql.is_zero_vec(ql.vec_add(derived, offdiag[(a, b)])):
                    offdiag[(a, b)] = ql.vec_scale(-1, offdiag[(a, b)])
                else:
                    raise JordanError("off-diagonal products violate the matrix model")
    # assemble basis in diagonal-major upper-triangle order and invert
    model_basis: list[Vec] = []
    for i in range(r):
        for jj in range(i, r):
            model_basis.append(cs[i] if i == jj else offdiag[(i, jj)])
    if len(model_basis) != j.dim:
        raise JordanError("model basis does not span; unsupported Jordan type")
    phi = ql.inverse(ql.transpose(model_basis))
    _verify_sym_model(j, phi, r)
    return r, phi


def _verify_sym_model(j: JordanAlgebra, phi: Mat, m: int) -> None:
    dim = j.dim
    es = [[Q(1) if t == i else Q(0) for t in range(dim)] for i in range(dim)]

    def as_mat(v: Vec) -> Mat:
        return _to_sym_matrix((m, phi), v)

    for a in range(dim):
        for b in range(a, dim):
            lhs = as_mat(j.product(es[a], es[b]))
            ma, mb = as_mat(es[a]), as_mat(es[b])
            rhs = ql.mat_scale(Q(1, 2), ql.mat_add(ql.mat_mul(ma, mb), ql.mat_mul(mb, ma)))
            if not ql.mat_eq(lhs, rhs):
                raise JordanError("symmetric-matrix model verification failed")


def _sqrt_fraction(c: Fraction) -> Fraction | None:
    from math import isqrt

    if c < 0:
        return None
    np_, dp = c.numerator, c.denominator
    rn, rd = isqrt(np_), isqrt(dp)
    if rn * rn == np_ and rd * rd == dp:
        return Q(rn, rd)
    return None


def wallach_contains(alpha, r: int, d: int) -> bool:
    """Membership in {0, d/2, ..., (d/2)(r-1)} union ((d/2)(r-1), infinity)."""
    if r < 1 or d < 1:
        raise JordanError("need r >= 1 and d >= 1")
    a = Fraction(alpha)
    edge = Fraction(d, 2) * (r - 1)
    if a > edge:
        return True
    if a < 0:
        return False
    steps = a / Fraction(d, 2)
    return steps.denominator == 1 and 0 <= steps <= r - 1


def wallach_table(r: int, d: int, alphas: Sequence) -> dict[str, bool]:
    return {str(Fraction(a)): wallach_contains(a, r, d) for a in alphas}

"""Multiplicity-one sl(2) embeddings into sp(2n+2, R), the associated maximal
parabolic, its identification with the conformal Jacobi algebra, and the
desk-scale verification that h = H/2 + h' is a common Euler element.

Everything here is exact; subspaces are compared as rational spans.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import grading as gr
from . import liealg as la
from . import qlinalg as ql
from . import spindler as sp
from .liealg import LieAlgebra, LieElement, LinearMap, MatrixLieAlgebra
from .qlinalg import Mat, Q, Vec


class ParabolicError(ValueError):
    pass


FIVE = (Q(-2), Q(-1), Q(0), Q(1), Q(2))


@dataclass(frozen=True)
class Sl2Triple:
    """An sl(2)-triple in a matrix Lie algebra, acting on one symplectic plane."""

    ambient: MatrixLieAlgebra
    H: LieElement
    X: LieElement
    Y: LieElement

    @property
    def U(self) -> LieElement:
        return self.X - self.Y

    def check(self) -> None:
        b = la.bracket
        if not (b(self.H, self.X) - 2 * self.X).is_zero():
            raise ParabolicError("[H, X] != 2X")
        if not (b(self.H, self.Y) + 2 * self.Y).is_zero():
            raise ParabolicError("[H, Y] != -2Y")
        if not (b(self.X, self.Y) - self.H).is_zero():
            raise ParabolicError("[X, Y] != H")
        g = gr.grading(self.ambient.algebra, self.H, FIVE)
        if len(g.basis(2)) != 1 or len(g.basis(-2)) != 1:
            raise ParabolicError("embedding does not have multiplicity 1")


def sl2_embed_mult1(m: int) -> Sl2Triple:
    """The multiplicity-one sl(2) inside sp(m+2, R), m even.

    The copy acts on the last symplectic coordinate plane; all other choices
    are conjugate.
    """
    if m < 0 or m % 2:
        raise ParabolicError("m must be a nonnegative even integer")
    n = m // 2
    mla = sp.sp_mla(n + 1)
    nn = n + 1
    h = ql.zeros(2 * nn, 2 * nn)
    h[n][n] = Q(1)
    h[nn + n][nn + n] = Q(-1)
    x = ql.zeros(2 * nn, 2 * nn)
    x[n][nn + n] = Q(1)
    y = ql.zeros(2 * nn, 2 * nn)
    y[nn + n][n] = Q(1)
    triple = Sl2Triple(mla, mla.element_of(h), mla.element_of(x), mla.element_of(y))
    triple.check()
    return triple


@dataclass(frozen=True)
class ParabolicDecomposition:
    triple: Sl2Triple
    grading: gr.Grading = field(repr=False)
    b_basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    g_kappa_basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    V_kappa_basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    z_kappa_basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def ambient(self) -> MatrixLieAlgebra:
        return self.triple.ambient


def _centralizer_of(alg: LieAlgebra, elements: list[LieElement]) -> list[Vec]:
    rows: Mat = []
    for e in elements:
        rows.extend(alg.ad(e))
    return ql.nullspace(rows)


def parabolic_subalg(triple: Sl2Triple) -> ParabolicDecomposition:
    """b = g_0(H) + g_1(H) + g_2(H) with exact dims and block identifications.

    Verifies: g_2 = R X, [V, V] spans g_2, g_0 = R H + centralizer, and that
    the centralizer span is the block-embedded lower-rank symplectic algebra.
    """
    alg = triple.ambient.algebra
    g = gr.grading(alg, triple.H, FIVE)
    b_basis = [list(v) for v in (g.basis(0) + g.basis(1) + g.basis(2))]
    z_basis = g.basis(2)
    if len(z_basis) != 1 or not ql.span_equal(z_basis, [list(triple.X.coeffs)]):
        raise ParabolicError("g_2(H) is not the line through X")
    # [V, V] spans g_2
    v_basis = g.basis(1)
    span_vv: list[Vec] = []
    for i in range(len(v_basis)):
        for j in range(i + 1, len(v_basis)):
            br = la.bracket(alg.element(v_basis[i]), alg.element(v_basis[j]))
            if not br.is_zero():
                span_vv.append(list(br.coeffs))
    if not span_vv or not ql.span_equal(ql._independent_subset(span_vv), z_basis):
        if v_basis:  # m = 0 has no V at all
            raise ParabolicError("[V, V] does not span g_2(H)")
    gk = _centralizer_of(alg, [triple.H, triple.X, triple.Y])
    g0 = g.basis(0)
    if not ql.span_equal(g0, gk + [list(triple.H.coeffs)]):
        raise ParabolicError("g_0(H) != R H + centralizer")
    # centralizer = block embedding of sp(2n) on the complementary planes
    nn = len(triple.ambient.basis_matrices[0]) // 2
    n = nn - 1
    _, small = sp.sp_matrix_basis(n)
    embedded = [_pad_sp_matrix(mm, n) for mm in small]
    emb_vecs = [list(triple.ambient.element_of(e).coeffs) for e in embedded]
    if not ql.span_equal(gk, emb_vecs):
        raise ParabolicError("centralizer is not the expected symplectic block")
    return ParabolicDecomposition(
        triple,
        g,
        tuple(tuple(v) for v in b_basis),
        tuple(tuple(v) for v in emb_vecs),
        tuple(tuple(v) for v in v_basis),
        tuple(tuple(v) for v in z_basis),
    )


def _pad_sp_matrix(m: Mat, n: int) -> Mat:
    """Embed sp(2n) into sp(2n+2): pad each n x n block at index n."""
    nn = n + 1
    out = ql.zeros(2 * nn, 2 * nn)
    for i in range(n):
        for j in range(n):
            out[i][j] = m[i][j]
            out[i][nn + j] = m[i][n + j]
            out[nn + i][j] = m[n + i][j]
            out[nn + i][nn + j] = m[n + i][n + j]
    return out


def block_euler_element(triple: Sl2Triple) -> LieElement:
    """h' = (1/2)diag(1,-1) of the centralizer block, as an ambient element."""
    nn = len(triple.ambient.basis_matrices[0]) // 2
    n = nn - 1
    if n == 0:
        raise ParabolicError("no centralizer block for the rank-one ambient algebra")
    m = ql.zeros(2 * nn, 2 * nn)
    for i in range(n):
        m[i][i] = Q(1, 2)
        m[nn + i][nn + i] = Q(-1, 2)
    return triple.ambient.element_of(m)


def _darboux_basis(beta: Mat) -> tuple[list[Vec], list[Vec]]:
    """Split a nondegenerate antisymmetric form into pairs with B(u_i, w_j) = -delta_ij.

    The normalization matches standard_omega, where Omega(p_i, q_j) = -delta_ij.
    """
    dim = len(beta)
    if dim % 2:
        raise ParabolicError("odd-dimensional symplectic space")
    basis = [[Q(1) if t == i else Q(0) for t in range(dim)] for i in range(dim)]

    def bform(a: Vec, b: Vec) -> Fraction:
        return sum((a[i] * beta[i][j] * b[j] for i in range(dim) for j in range(dim)), Q(0))

    us: list[Vec] = []
    ws: list[Vec] = []
    remaining = basis
    while remaining:
        u = remaining[0]
        partner = next((v for v in remaining[1:] if bform(u, v) != 0), None)
        if partner is None:
            raise ParabolicError("form is degenerate on the remaining space")
        w = ql.vec_scale(Q(-1) / bform(u, partner), partner)
        us.append(u)
        ws.append(w)
        new_remaining = []
        for v in remaining[1:]:
            if v is partner:
                continue
            # remove the (u, w)-components: B(v', u) = B(v', w) = 0
            v2 = ql.vec_add(v, ql.vec_scale(bform(v, w) / bform(u, w), ql.vec_scale(-1, u)))
            v2 = ql.vec_add(v2, ql.vec_scale(bform(v2, u) / bform(w, u), ql.vec_scale(-1, w)))
            if not ql.is_zero_vec(v2):
                new_remaining.append(v2)
        remaining = ql._independent_subset(new_remaining)
    return us, ws


def jacobi_parabolic_iso(p: ParabolicDecomposition, target: sp.ConformalJacobiModel) -> LinearMap:
    """Exact isomorphism from b = g_0 + g_1 + g_2 onto hcsp(R^{2n}).

    Constructed gradedly: the z-line goes to the center, a Darboux basis of
    g_1(H) to the Heisenberg part, the centralizer to the symplectic block
    via its action matrices, and H to the dilation generator.  Verified by
    transporting all structure constants.
    """
    alg = p.ambient.algebra
    b_basis = [list(v) for v in p.b_basis]
    sub, lift = la.subalgebra_structure(alg, b_basis)
    n = target.n
    if len(p.V_kappa_basis) != 2 * n:
        raise ParabolicError("dimension mismatch with the target model")

    v_basis = [list(v) for v in p.V_kappa_basis]
    x_coeffs = list(p.z_kappa_basis[0])
    # beta from [v_i, v_j] = beta_ij X
    beta = ql.zeros(len(v_basis), len(v_basis))
    for i in range(len(v_basis)):
        for j in range(len(v_basis)):
            br = la.bracket(alg.element(v_basis[i]), alg.element(v_basis[j]))
            coeff = ql.coords_in_span([x_coeffs], list(br.coeffs))
            if coeff is None:
                raise ParabolicError("[V, V] leaves the z line")
            beta[i][j] = coeff[0] if coeff else Q(0)
    us, ws = _darboux_basis(beta)
    darboux_ambient: list[Vec] = []
    for c in us + ws:
        vec = ql.zvec(alg.dim)
        for t, coeff in enumerate(c):
            vec = ql.vec_add(vec, ql.vec_scale(coeff, v_basis[t]))
        darboux_ambient.append(vec)

    jm = target.jacobi

    def act_matrix(x_vec: Vec) -> Mat:
        """Matrix of ad(x) on V in the Darboux basis."""
        x = alg.element(x_vec)
        cols = []
        for v in darboux_ambient:
            img = la.bracket(x, alg.element(v))
            coords = ql.coords_in_span(darboux_ambient, list(img.coeffs))
            if coords is None:
                raise ParabolicError("centralizer does not preserve V")
            cols.append(coords)
        return ql.transpose(cols)

    # image vectors in hcsp for the adapted basis of b
    adapted: list[Vec] = []
    images: list[Vec] = []
    tdim = target.algebra.dim
    for k, v in enumerate(darboux_ambient):
        adapted.append(v)
        img = ql.zvec(tdim)
        img[k] = Q(1)
        images.append(img)
    adapted.append(x_coeffs)
    img = ql.zvec(tdim)
    img[jm.z_index] = Q(1)
    images.append(img)
    for gk in p.g_kappa_basis:
        adapted.append(list(gk))
        coords = jm.sp_coords(act_matrix(list(gk)))
        img = ql.zvec(tdim)
        for u, c in enumerate(coords):
            img[jm.sp_offset + u] = c
        images.append(img)
    adapted.append(list(p.triple.H.coeffs))
    img = ql.zvec(tdim)
    img[target.d_index] = Q(1)
    images.append(img)

    # express the subalgebra basis through the adapted basis
    cols = []
    for v in b_basis:
        coords = ql.coords_in_span(adapted, v)
        if coords is None:
            raise ParabolicError("adapted vectors do not span the parabolic")
        out = ql.zvec(tdim)
        for c, imgv in zip(coords, images):
            out = ql.vec_add(out, ql.vec_scale(c, imgv))
        cols.append(out)
    phi = la.linear_map(sub, target.algebra, ql.transpose(cols))
    if ql.rank(phi.as_mat()) != sub.dim or sub.dim != tdim:
        raise ParabolicError("constructed map is not bijective")
    if not la.is_homomorphism(phi):
        raise ParabolicError("constructed map is not a homomorphism")
    return phi


def restrict_iso_to_ideal(p: ParabolicDecomposition, phi: LinearMap, target: sp.ConformalJacobiModel):
    """Check that the isomorphism maps g_1 + g_2 + centralizer onto hsp."""
    alg = p.ambient.algebra
    sub = phi.domain
    b_basis = [list(v) for v in p.b_basis]
    j_basis = [list(v) for v in (p.V_kappa_basis + p.z_kappa_basis + p.g_kappa_basis)]
    images = []
    for v in j_basis:
        coords = ql.coords_in_span(b_basis, v)
        assert coords is not None
        images.append(list(phi(sub.element(coords)).coeffs))
    hsp_dim = target.jacobi.algebra.dim
    expect = [[Q(1) if t == i else Q(0) for t in range(target.algebra.dim)] for i in range(hsp_dim)]
    return ql.span_equal(images, expect)


def verify_theorem_h1(triple: Sl2Triple, h_kappa: LieElement | None = None) -> dict:
    """Check that h = H/2 + h' is Euler with eigenspaces inside the parabolic.

    Returns a report with three exact assertions: h is Euler in the ambient
    algebra; g_1(h) computed in the ambient algebra equals g_1(h) computed
    inside the parabolic; and g_1(h) splits as the z-line, the centralizer's
    top piece, and the half-half intersection.
    """
    p = parabolic_subalg(triple)
    alg = triple.ambient.algebra
    if h_kappa is None:
        h_kappa = block_euler_element(triple)
    gk = [list(v) for v in p.g_kappa_basis]
    if not ql.in_span(gk, list(h_kappa.coeffs)):
        raise ParabolicError("h' must lie in the centralizer block")
    # h' Euler inside the centralizer: restrict ad to the block
    sub, _ = la.subalgebra_structure(alg, gk)
    coords = ql.coords_in_span(gk, list(h_kappa.coeffs))
    if not gr.is_euler(sub, sub.element(coords)):
        raise ParabolicError("h' is not an Euler element of the centralizer")
    h = Q(1, 2) * triple.H + h_kappa
    report: dict = {}
    report["euler"] = gr.is_euler(alg, h)
    g_amb = gr.grading(alg, h) if report["euler"] else None
    if g_amb is None:
        report["g1_matches_parabolic"] = False
        report["eigenspace_formula"] = False
        return report
    g1 = g_amb.basis(1)
    b_basis = [list(v) for v in p.b_basis]
    report["dim_g1"] = len(g1)
    report["g1_in_parabolic"] = all(ql.in_span(b_basis, v) for v in g1)
    # grading of ad(h) restricted to b
    sub_b, _ = la.subalgebra_structure(alg, b_basis)
    h_in_b = sub_b.element(ql.coords_in_span(b_basis, list(h.coeffs)))
    gb = gr.grading(sub_b, h_in_b)
    g1_b = []
    for v in gb.basis(1):
        out = ql.zvec(alg.dim)
        for c, bvec in zip(v, b_basis):
            out = ql.vec_add(out, ql.vec_scale(c, bvec))
        g1_b.append(out)
    report["g1_matches_parabolic"] = report["g1_in_parabolic"] and ql.span_equal(g1, g1_b)
    # eigenspace formula: R X + g_1(h') + (g_{1/2}(h') \cap g_{1/2}(H/2))
    g_hk = gr.grading(alg, h_kappa, gr.FIVE_GRADING_EIGENVALUES)
    g_H2 = gr.grading(alg, Q(1, 2) * triple.H, gr.FIVE_GRADING_EIGENVALUES)
    part1 = [list(p.z_kappa_basis[0])]
    part2 = g_hk.basis(1)
    part3 = ql.span_intersection(g_hk.basis(Q(1, 2)), g_H2.basis(Q(1, 2)))
    combined = part1 + part2 + part3
    report["eigenspace_formula"] = (
        len(ql._independent_subset(combined)) == len(combined)
        and ql.span_equal(combined, g1)
    )
    report["dims"] = {
        "z_line": len(part1),
        "centralizer_top": len(part2),
        "half_half": len(part3),
    }
    return report

"""Semidirect data for admissible Lie algebras and the invariant cone.

Builds g(l, V, z, beta) from a reductive part acting on a symplectic module
with a z-valued cocycle, the canonical homomorphism onto the Jacobi algebra
hsp(V, Omega), and decides membership in the invariant cone hsp(V, Omega)_+
exactly over Q via a (PSD, range, Schur-constant) reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import liealg as la
from . import qlinalg as ql
from .liealg import LieAlgebra, LieElement, LinearMap, MatrixLieAlgebra
from .qlinalg import Mat, Q, Vec


class SpindlerError(ValueError):
    pass


class AdmissibilityError(ValueError):
    def __init__(self, message: str, minor_index: int | None = None, gram: Mat | None = None):
        super().__init__(message)
        self.minor_index = minor_index
        self.gram = gram


@dataclass(frozen=True)
class SpindlerData:
    """Quadruple (l, V, z, beta) with the module action given as matrices.

    ``action[k]`` is the matrix of the k-th basis element of ``l`` on V;
    ``beta[i][j]`` is the z-valued pairing of the i-th and j-th V-basis
    vectors.  ``cartan_attested`` records, unchecked, that l has a compactly
    embedded Cartan subalgebra acting on V without fixed vectors.
    """

    l: LieAlgebra
    V_dim: int
    z_dim: int
    action: tuple[tuple[tuple[Fraction, ...], ...], ...]
    beta: tuple[tuple[tuple[Fraction, ...], ...], ...]
    cartan_attested: bool = False
    v_labels: tuple[str, ...] = ()
    z_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.action) != self.l.dim:
            raise SpindlerError("need one action matrix per l-basis element")
        for m in self.action:
            if len(m) != self.V_dim or any(len(r) != self.V_dim for r in m):
                raise SpindlerError("action matrix has wrong shape")
        if len(self.beta) != self.V_dim or any(len(r) != self.V_dim for r in self.beta):
            raise SpindlerError("beta table has wrong shape")
        for i in range(self.V_dim):
            for j in range(self.V_dim):
                if len(self.beta[i][j]) != self.z_dim:
                    raise SpindlerError("beta values must live in z")
                if any(a + b != 0 for a, b in zip(self.beta[i][j], self.beta[j][i])):
                    raise SpindlerError("beta is not antisymmetric")
        if not _action_is_homomorphism(self):
            raise SpindlerError("action is not a Lie algebra homomorphism")
        if not beta_invariance_check(self):
            raise SpindlerError("beta is not invariant under the action")

    def action_mat(self, k: int) -> Mat:
        return [list(r) for r in self.action[k]]

    def act(self, x: LieElement, v: Vec) -> Vec:
        """x.v for x in l."""
        out = ql.zvec(self.V_dim)
        for k, c in enumerate(x.coeffs):
            if c != 0:
                out = ql.vec_add(out, ql.vec_scale(c, ql.mat_vec(self.action_mat(k), v)))
        return out

    def rho(self, x: LieElement) -> Mat:
        out = ql.zeros(self.V_dim, self.V_dim)
        for k, c in enumerate(x.coeffs):
            if c != 0:
                out = ql.mat_add(out, ql.mat_scale(c, self.action_mat(k)))
        return out

    def beta_vec(self, v: Vec, w: Vec) -> Vec:
        out = ql.zvec(self.z_dim)
        for i, ci in enumerate(v):
            if ci == 0:
                continue
            for j, cj in enumerate(w):
                if cj == 0:
                    continue
                out = ql.vec_add(out, ql.vec_scale(ci * cj, list(self.beta[i][j])))
        return out


def _action_is_homomorphism(d: SpindlerData) -> bool:
    for i in range(d.l.dim):
        for j in range(i + 1, d.l.dim):
            mats = ql.commutator(d.action_mat(i), d.action_mat(j))
            expected = ql.zeros(d.V_dim, d.V_dim)
            for k, c in d.l.bracket_basis(i, j).items():
                expected = ql.mat_add(expected, ql.mat_scale(c, d.action_mat(k)))
            if not ql.mat_eq(mats, expected):
                return False
    return True


def beta_invariance_check(d: SpindlerData) -> bool:
    """Exact exhaustive check of beta(x.v, w) + beta(v, x.w) = 0."""
    for k in range(d.l.dim):
        m = d.action_mat(k)
        for i in range(d.V_dim):
            col_i = [m[a][i] for a in range(d.V_dim)]
            for j in range(i, d.V_dim):
                col_j = [m[a][j] for a in range(d.V_dim)]
                ei = [Q(1) if t == i else Q(0) for t in range(d.V_dim)]
                ej = [Q(1) if t == j else Q(0) for t in range(d.V_dim)]
                total = ql.vec_add(d.beta_vec(col_i, ej), d.beta_vec(ei, col_j))
                if not ql.is_zero_vec(total):
                    return False
    return True


def spindler_regularity_report(d: SpindlerData) -> dict:
    """Check z_{z(l)}(V) = 0 exactly; Cartan existence stays an attestation."""
    center_basis = la.center(d.l)
    if center_basis:
        # kernel of (center coefficients) -> rho(center element)
        cols = [la._flatten(d.rho(d.l.element(cv))) for cv in center_basis]
        kernel = ql.nullspace(ql.transpose(cols))
    else:
        kernel = []
    return {
        "central_kernel_trivial": len(kernel) == 0,
        "cartan_attested": d.cartan_attested,
    }


def spindler_build(d: SpindlerData) -> LieAlgebra:
    """The Lie algebra V x z x l with the mixed bracket.

    [(v,z,x), (w,z',y)] = (x.w - y.v, beta(v,w), [x,y]); V comes first in the
    basis, then z, then l.
    """
    nv, nz, nl = d.V_dim, d.z_dim, d.l.dim
    v_labels = d.v_labels or tuple(f"v{i}" for i in range(nv))
    z_labels = d.z_labels or tuple(f"z{i}" for i in range(nz))
    labels = v_labels + z_labels + d.l.basis_labels
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(nv):
        for j in range(i + 1, nv):
            row = {nv + t: c for t, c in enumerate(d.beta[i][j]) if c != 0}
            if row:
                table[(i, j)] = row
    off = nv + nz
    for i in range(nv):
        for k in range(nl):
            # [v_i, x_k] = -x_k.v_i
            col = {a: -d.action[k][a][i] for a in range(nv) if d.action[k][a][i] != 0}
            if col:
                table[(i, off + k)] = col
    for (i, j), row in d.l.sc.items():
        table[(off + i, off + j)] = {off + k: c for k, c in row.items()}
    return la.make_algebra(labels, table)


@dataclass(frozen=True)
class AdmissibilityWitness:
    f: tuple[Fraction, ...]
    x: LieElement
    gram: tuple[tuple[Fraction, ...], ...]


def admissibility_witness(d: SpindlerData, f: Sequence, x: LieElement) -> AdmissibilityWitness:
    """Certify positive definiteness of v -> (f o beta)(x.v, v).

    Returns the witness with the exact symmetrized Gram matrix; raises
    AdmissibilityError naming the first nonpositive leading principal minor
    otherwise.
    """
    fv = ql.qvec(f)
    if ql.is_zero_vec(fv):
        raise AdmissibilityError("f must be nonzero")
    if x.algebra is not d.l:
        raise SpindlerError("x must lie in the reductive part")
    rho_x = d.rho(x)
    m = ql.zeros(d.V_dim, d.V_dim)
    for jj in range(d.V_dim):
        colj = [rho_x[a][jj] for a in range(d.V_dim)]
        for kk in range(d.V_dim):
            ek = [Q(1) if t == kk else Q(0) for t in range(d.V_dim)]
            m[jj][kk] = ql.dot(fv, d.beta_vec(colj, ek))
    gram = ql.mat_scale(Q(1, 2), ql.mat_add(m, ql.transpose(m)))
    ok, bad = ql.is_positive_definite(gram)
    if not ok:
        raise AdmissibilityError(
            f"Hamiltonian form is not positive definite (leading minor {bad})",
            minor_index=bad,
            gram=gram,
        )
    return AdmissibilityWitness(tuple(fv), x, tuple(tuple(r) for r in gram))


def omega_matrix(d: SpindlerData, f: Sequence) -> Mat:
    fv = ql.qvec(f)
    return [[ql.dot(fv, list(d.beta[i][j])) for j in range(d.V_dim)] for i in range(d.V_dim)]


def sp_of_form(omega: Mat, label_prefix: str = "x") -> MatrixLieAlgebra:
    """Matrix algebra {X : X^T omega + omega X = 0} for a nondegenerate form."""
    m = len(omega)
    if ql.det(omega) == 0:
        raise SpindlerError("form is degenerate")
    rows: Mat = []
    for a in range(m):
        for b in range(m):
            row = ql.zvec(m * m)
            for t in range(m):
                # (X^T omega)[a][b] = sum_t X[t][a] omega[t][b]
                row[t * m + a] += omega[t][b]
                # (omega X)[a][b] = sum_t omega[a][t] X[t][b]
                row[t * m + b] += omega[a][t]
            rows.append(row)
    mats = []
    for vec in ql.nullspace(rows):
        mats.append([[vec[u * m + v] for v in range(m)] for u in range(m)])
    labels = [f"{label_prefix}{i}" for i in range(len(mats))]
    return la.from_matrix_algebra(mats, labels)


def gamma_f(d: SpindlerData, f: Sequence) -> tuple[LinearMap, "JacobiModel"]:
    """The canonical homomorphism (v, z, x) -> (v, f(z), rho(x)).

    Target is hsp(V, f o beta); the map is verified to be a homomorphism on
    all basis pairs, exactly.
    """
    fv = ql.qvec(f)
    omega = omega_matrix(d, fv)
    target = jacobi_from_form(omega)
    source = spindler_build(d)
    nv, nz, nl = d.V_dim, d.z_dim, d.l.dim
    out_dim = target.algebra.dim
    cols: list[Vec] = []
    for i in range(nv):
        col = ql.zvec(out_dim)
        col[i] = Q(1)
        cols.append(col)
    for t in range(nz):
        col = ql.zvec(out_dim)
        col[nv] = fv[t]
        cols.append(col)
    for k in range(nl):
        sp_coeffs = target.sp_coords(d.action_mat(k))
        col = ql.zvec(out_dim)
        for u, c in enumerate(sp_coeffs):
            col[nv + 1 + u] = c
        cols.append(col)
    phi = la.linear_map(source, target.algebra, ql.transpose(cols))
    if not la.is_homomorphism(phi):
        raise SpindlerError("gamma_f is not a homomorphism for this data")
    return phi, target


# ---------------------------------------------------------------------------
# Invariant cone membership
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeCertificate:
    contained: bool
    margin: Fraction | None = None
    witness: tuple[Fraction, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.contained


def _as_fraction(x) -> Fraction:
    # floats carry exact binary values, so this stays exact
    return Fraction(x)


def hsp_plus_contains(v: Sequence, z, x_mat: Sequence[Sequence], omega: Mat, strict: bool = False) -> ConeCertificate:
    """Decide q(w) = Omega(x.w, w) + Omega(v, w) + z >= 0 for all w, exactly.

    The quadratic part has the symmetric matrix A = x^T omega (symmetry of A
    is exactly the condition x in sp(V, Omega)); the linear part is
    b = -omega v.  Containment holds iff A is PSD, b lies in range(A), and
    z - (1/4) b^T A^+ b >= 0.  ``strict`` asks for the open cone instead:
    A positive definite and a positive Schur constant.
    """
    vv = [_as_fraction(c) for c in v]
    zz = _as_fraction(z)
    x = [[_as_fraction(c) for c in row] for row in x_mat]
    m = len(omega)
    a_mat = ql.mat_mul(ql.transpose(x), omega)
    if not ql.mat_eq(a_mat, ql.transpose(a_mat)):
        raise SpindlerError("x is not in sp(V, Omega): quadratic part not symmetric")
    b = ql.vec_scale(-1, ql.mat_vec(omega, vv))

    def qval(w: Vec) -> Fraction:
        return ql.dot(w, ql.mat_vec(a_mat, w)) + ql.dot(b, w) + zz

    ok, bad_w = ql.psd_certificate(a_mat)
    if not ok:
        w = list(bad_w)
        t = Q(1)
        while qval(ql.vec_scale(t, w)) >= 0:
            t *= 2
        wt = ql.vec_scale(t, w)
        return ConeCertificate(False, witness=tuple(wt), reason="quadratic part not PSD")
    if strict:
        pd, bad_minor = ql.is_positive_definite(a_mat)
        if not pd:
            return ConeCertificate(False, reason=f"quadratic part not PD (minor {bad_minor})")
    u = ql.solve(a_mat, b)
    if u is None:
        for n0 in ql.nullspace(a_mat):
            s = ql.dot(b, n0)
            if s != 0:
                t = Q(1)
                w = ql.vec_scale(-1 if s > 0 else 1, n0)
                while qval(ql.vec_scale(t, w)) >= 0:
                    t *= 2
                wt = ql.vec_scale(t, w)
                return ConeCertificate(False, witness=tuple(wt), reason="linear part leaves range(A)")
        raise AssertionError("inconsistent system without kernel witness")
    margin = zz - ql.dot(b, u) / 4
    if margin < 0 or (strict and margin <= 0):
        w0 = ql.vec_scale(Q(-1, 2), u)
        cert_w = tuple(w0) if qval(w0) < 0 else None
        return ConeCertificate(False, margin=margin, witness=cert_w, reason="negative infimum")
    return ConeCertificate(True, margin=margin)


# ---------------------------------------------------------------------------
# Standard constructions: sp(2n), heis, hsp, hcsp
# ---------------------------------------------------------------------------


def sl2_matrices() -> dict[str, Mat]:
    h = ql.qmat([[1, 0], [0, -1]])
    x = ql.qmat([[0, 1], [0, 0]])
    y = ql.qmat([[0, 0], [1, 0]])
    u = ql.mat_sub(x, y)
    return {"H": h, "X": x, "Y": y, "U": u}


def standard_omega(n: int) -> Mat:
    """Matrix of the symplectic form with Omega((0,q),(p,0)) = <q,p>."""
    omega = ql.zeros(2 * n, 2 * n)
    for i in range(n):
        omega[i][n + i] = Q(-1)
        omega[n + i][i] = Q(1)
    return omega


def sp_matrix_basis(n: int) -> tuple[list[str], list[Mat]]:
    """Labelled basis of sp(2n, R): A-block, then upper B, then lower C."""
    labels: list[str] = []
    mats: list[Mat] = []
    for i in range(n):
        for j in range(n):
            m = ql.zeros(2 * n, 2 * n)
            m[i][j] = Q(1)
            m[n + j][n + i] = Q(-1)
            labels.append(f"A{i}{j}")
            mats.append(m)
    for i in range(n):
        for j in range(i, n):
            m = ql.zeros(2 * n, 2 * n)
            m[i][n + j] = Q(1)
            m[j][n + i] = Q(1)
            labels.append(f"B{i}{j}")
            mats.append(m)
    for i in range(n):
        for j in range(i, n):
            m = ql.zeros(2 * n, 2 * n)
            m[n + i][j] = Q(1)
            m[n + j][i] = Q(1)
            labels.append(f"C{i}{j}")
            mats.append(m)
    return labels, mats


def sp_mla(n: int) -> MatrixLieAlgebra:
    labels, mats = sp_matrix_basis(n)
    return la.from_matrix_algebra(mats, labels)


def trivial_algebra() -> LieAlgebra:
    return la.make_algebra((), {})


def heisenberg_data(n: int) -> SpindlerData:
    omega = standard_omega(n)
    beta = tuple(tuple((omega[i][j],) for j in range(2 * n)) for i in range(2 * n))
    labels = tuple(f"p{i+1}" for i in range(n)) + tuple(f"q{i+1}" for i in range(n))
    return SpindlerData(
        l=trivial_algebra(),
        V_dim=2 * n,
        z_dim=1,
        action=(),
        beta=beta,
        v_labels=labels,
        z_labels=("z",),
    )


def build_heisenberg(n: int) -> LieAlgebra:
    return spindler_build(heisenberg_data(n))


@dataclass(frozen=True)
class JacobiModel:
    """hsp(V, Omega) built from Spindler data, with layout bookkeeping."""

    algebra: LieAlgebra
    data: SpindlerData = field(repr=False)
    sp: MatrixLieAlgebra = field(repr=False)
    omega: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.data.V_dim // 2

    @property
    def v_dim(self) -> int:
        return self.data.V_dim

    @property
    def z_index(self) -> int:
        return self.data.V_dim

    @property
    def sp_offset(self) -> int:
        return self.data.V_dim + 1

    def sp_coords(self, m: Mat) -> Vec:
        return list(self.sp.element_of(m).coeffs)

    def embed_sp(self, m: Mat) -> LieElement:
        coords = self.sp_coords(m)
        out = ql.zvec(self.algebra.dim)
        for u, c in enumerate(coords):
            out[self.sp_offset + u] = c
        return self.algebra.element(out)

    def embed_heis(self, v: Sequence, z) -> LieElement:
        out = ql.zvec(self.algebra.dim)
        for i, c in enumerate(v):
            out[i] = ql.q(c)
        out[self.z_index] = ql.q(z)
        return self.algebra.element(out)

    def components(self, x: LieElement) -> tuple[Vec, Fraction, Mat]:
        """Split an hsp element into (v, z, sp-matrix)."""
        v = list(x.coeffs[: self.v_dim])
        z = x.coeffs[self.z_index]
        m = ql.zeros(self.v_dim, self.v_dim)
        for u in range(self.sp.algebra.dim):
            c = x.coeffs[self.sp_offset + u]
            if c != 0:
                m = ql.mat_add(m, ql.mat_scale(c, [list(r) for r in self.sp.basis_matrices[u]]))
        return v, z, m

    def h_s(self) -> LieElement:
        """The Euler element (1/2)diag(1,-1) of the sp block, inside hsp."""
        n = self.n
        m = ql.zeros(2 * n, 2 * n)
        for i in range(n):
            m[i][i] = Q(1, 2)
            m[n + i][n + i] = Q(-1, 2)
        return self.embed_sp(m)

    def cone_contains(self, x: LieElement, strict: bool = False) -> ConeCertificate:
        v, z, m = self.components(x)
        return hsp_plus_contains(v, z, m, [list(r) for r in self.omega], strict=strict)


def jacobi_from_form(omega: Mat) -> JacobiModel:
    sp = sp_of_form(omega)
    n2 = len(omega)
    beta = tuple(tuple((omega[i][j],) for j in range(n2)) for i in range(n2))
    data = SpindlerData(
        l=sp.algebra,
        V_dim=n2,
        z_dim=1,
        action=tuple(sp.basis_matrices),
        beta=beta,
        v_labels=tuple(f"v{i}" for i in range(n2)),
        z_labels=("z",),
    )
    return JacobiModel(spindler_build(data), data, sp, tuple(tuple(r) for r in omega))


def jacobi_data(n: int) -> SpindlerData:
    sp = sp_mla(n)
    omega = standard_omega(n)
    beta = tuple(tuple((omega[i][j],) for j in range(2 * n)) for i in range(2 * n))
    labels = tuple(f"p{i+1}" for i in range(n)) + tuple(f"q{i+1}" for i in range(n))
    return SpindlerData(
        l=sp.algebra,
        V_dim=2 * n,
        z_dim=1,
        action=tuple(sp.basis_matrices),
        beta=beta,
        v_labels=labels,
        z_labels=("z",),
    )


def build_jacobi(n: int) -> JacobiModel:
    sp = sp_mla(n)
    omega = standard_omega(n)
    data = jacobi_data(n)
    return JacobiModel(spindler_build(data), data, sp, tuple(tuple(r) for r in omega))


@dataclass(frozen=True)
class ConformalJacobiModel:
    """hcsp(V, Omega) = hsp x| R id_V with the distinguished Euler element."""

    algebra: LieAlgebra
    jacobi: JacobiModel = field(repr=False)

    @property
    def n(self) -> int:
        return self.jacobi.n

    @property
    def d_index(self) -> int:
        return self.algebra.dim - 1

    def lift(self, x: LieElement) -> LieElement:
        """Embed an hsp element into hcsp."""
        return self.algebra.element(list(x.coeffs) + [Q(0)])

    def euler_element(self) -> LieElement:
        """h = h_s + (1/2) id_V-generator; ad(h) grades hcsp by {-1,0,1}."""
        coeffs = list(self.lift(self.jacobi.h_s()).coeffs)
        coeffs[self.d_index] = Q(1, 2)
        return self.algebra.element(coeffs)

    def cone_contains(self, x: LieElement, strict: bool = False) -> ConeCertificate:
        if x.coeffs[self.d_index] != 0:
            return ConeCertificate(False, reason="nonzero dilation component")
        return self.jacobi.cone_contains(self.jacobi.algebra.element(list(x.coeffs[:-1])), strict=strict)


def id_v_derivation(model: JacobiModel) -> LinearMap:
    """The outer derivation (v, z, x) -> (v, 2z, 0) of hsp(V, Omega)."""
    dim = model.algebra.dim
    m = ql.zeros(dim, dim)
    for i in range(model.v_dim):
        m[i][i] = Q(1)
    m[model.z_index][model.z_index] = Q(2)
    return la.endo(model.algebra, m)


def build_conformal_jacobi(n: int) -> ConformalJacobiModel:
    model = build_jacobi(n)
    ext = la.semidirect_extend(model.algebra, id_v_derivation(model), label="d")
    return ConformalJacobiModel(ext, model)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def spindler_data_to_json(d: SpindlerData) -> str:
    import json

    action = [
        [[str(c) for c in row] for row in mat] for mat in d.action
    ]
    beta_entries = []
    for i in range(d.V_dim):
        for j in range(i + 1, d.V_dim):
            for t, c in enumerate(d.beta[i][j]):
                if c != 0:
                    beta_entries.append([i, j, t, str(c)])
    return json.dumps(
        {
            "l": json.loads(d.l.to_json()),
            "V_dim": d.V_dim,
            "z_dim": d.z_dim,
            "action": action,
            "beta": beta_entries,
            "cartan_attested": d.cartan_attested,
        },
        sort_keys=True,
    )


def spindler_data_from_json(text: str) -> SpindlerData:
    import json

    raw = json.loads(text)
    lalg = LieAlgebra.from_json(json.dumps(raw["l"]))
    nv, nz = raw["V_dim"], raw["z_dim"]
    action = tuple(
        tuple(tuple(Fraction(c) for c in row) for row in mat) for mat in raw["action"]
    )
    beta = [[[Q(0)] * nz for _ in range(nv)] for _ in range(nv)]
    for i, j, t, val in raw["beta"]:
        c = Fraction(val)
        beta[i][j][t] = c
        beta[j][i][t] = -c
    beta_t = tuple(tuple(tuple(cell) for cell in row) for row in beta)
    return SpindlerData(
        l=lalg,
        V_dim=nv,
        z_dim=nz,
        action=action,
        beta=beta_t,
        cartan_attested=bool(raw.get("cartan_attested", False)),
    )

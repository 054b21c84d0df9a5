"""Finite-dimensional real Lie algebras as exact structure-constant tables.

A LieAlgebra is a labelled basis together with a sparse rational table
c[i][j][k] for [e_i, e_j] = Σ_k c[i][j][k] e_k, stored for i < j only
(antisymmetry is built in).  All operations are pure; instances are frozen
after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import qlinalg as ql
from .qlinalg import Mat, Q, Vec


class LieAlgebraError(ValueError):
    pass


SCTable = dict[tuple[int, int], dict[int, Fraction]]


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra over Q with a fixed ordered basis."""

    basis_labels: tuple[str, ...]
    sc: SCTable = field(repr=False)  # keys (i, j) with i < j only

    def __post_init__(self):
        for (i, j), row in self.sc.items():
            if not (0 <= i < j < self.dim):
                raise LieAlgebraError(f"bad structure-constant key {(i, j)}")
            for k, c in row.items():
                if not (0 <= k < self.dim) or not isinstance(c, Fraction):
                    raise LieAlgebraError(f"bad structure constant at {(i, j, k)}")

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        """Coefficients of [e_i, e_j]."""
        if i == j:
            return {}
        if i < j:
            return dict(self.sc.get((i, j), {}))
        return {k: -c for k, c in self.sc.get((j, i), {}).items()}

    def element(self, coeffs: Sequence) -> "LieElement":
        if len(coeffs) != self.dim:
            raise LieAlgebraError("coefficient length does not match dimension")
        return LieElement(self, tuple(ql.q(c) for c in coeffs))

    def basis_element(self, i: int) -> "LieElement":
        v = [Q(0)] * self.dim
        v[i] = Q(1)
        return self.element(v)

    def zero(self) -> "LieElement":
        return self.element([Q(0)] * self.dim)

    def ad(self, x: "LieElement") -> Mat:
        """Matrix of ad(x) in the algebra basis."""
        if x.algebra is not self:
            raise LieAlgebraError("element belongs to a different algebra")
        m = ql.zeros(self.dim, self.dim)
        for i, ci in enumerate(x.coeffs):
            if ci == 0:
                continue
            for j in range(self.dim):
                for k, c in self.bracket_basis(i, j).items():
                    m[k][j] += ci * c
        return m

    def label_index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def to_json(self) -> str:
        entries = []
        for (i, j), row in sorted(self.sc.items()):
            for k in sorted(row):
                if row[k] != 0:
                    entries.append([i, j, k, str(row[k])])
        return json.dumps(
            {"basis": list(self.basis_labels), "dim": self.dim, "sc": entries},
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "LieAlgebra":
        data = json.loads(text)
        labels = tuple(data["basis"])
        if len(labels) != data["dim"]:
            raise LieAlgebraError("dim field disagrees with basis length")
        table: SCTable = {}
        for i, j, k, val in data["sc"]:
            c = Fraction(val)
            if i == j:
                if c != 0:
                    raise LieAlgebraError("nonzero [e_i, e_i]")
                continue
            if i < j:
                table.setdefault((i, j), {})[k] = table.get((i, j), {}).get(k, Q(0)) + c
            else:
                table.setdefault((j, i), {})[k] = table.get((j, i), {}).get(k, Q(0)) - c
        return LieAlgebra(labels, _prune(table))


def _prune(table: SCTable) -> SCTable:
    return {
        key: {k: c for k, c in row.items() if c != 0}
        for key, row in table.items()
        if any(c != 0 for c in row.values())
    }


def make_algebra(labels: Sequence[str], brackets: dict[tuple[int, int], dict[int, Fraction]]) -> LieAlgebra:
    """Build an algebra from brackets given on (i, j) with i < j."""
    return LieAlgebra(tuple(labels), _prune({k: dict(v) for k, v in brackets.items()}))


@dataclass(frozen=True)
class LieElement:
    algebra: LieAlgebra
    coeffs: tuple[Fraction, ...]

    def __add__(self, other: "LieElement") -> "LieElement":
        _same(self, other)
        return LieElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LieElement") -> "LieElement":
        _same(self, other)
        return LieElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rmul__(self, c) -> "LieElement":
        c = ql.q(c)
        return LieElement(self.algebra, tuple(c * a for a in self.coeffs))

    def __neg__(self) -> "LieElement":
        return LieElement(self.algebra, tuple(-a for a in self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def _same(x: LieElement, y: LieElement):
    if x.algebra is not y.algebra:
        raise LieAlgebraError("elements belong to different algebras")


@dataclass(frozen=True)
class LinearMap:
    """Linear map between algebras; matrix shape (codomain.dim, domain.dim)."""

    domain: LieAlgebra
    codomain: LieAlgebra
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.matrix) != self.codomain.dim or any(
            len(r) != self.domain.dim for r in self.matrix
        ):
            raise LieAlgebraError("matrix shape does not match algebra dims")

    def __call__(self, x: LieElement) -> LieElement:
        if x.algebra is not self.domain:
            raise LieAlgebraError("element not in the domain algebra")
        return self.codomain.element(ql.mat_vec([list(r) for r in self.matrix], list(x.coeffs)))

    def as_mat(self) -> Mat:
        return [list(r) for r in self.matrix]


def linear_map(domain: LieAlgebra, codomain: LieAlgebra, matrix: Mat) -> LinearMap:
    return LinearMap(domain, codomain, tuple(tuple(row) for row in matrix))


def endo(algebra: LieAlgebra, matrix: Mat) -> LinearMap:
    return linear_map(algebra, algebra, matrix)


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """Lie bracket via the structure-constant table; bilinear, antisymmetric."""
    _same(x, y)
    alg = x.algebra
    out = [Q(0)] * alg.dim
    for i, ci in enumerate(x.coeffs):
        if ci == 0:
            continue
        for j, cj in enumerate(y.coeffs):
            if cj == 0 or i == j:
                continue
            for k, c in alg.bracket_basis(i, j).items():
                out[k] += ci * cj * c
    return alg.element(out)


def jacobi_check(alg: LieAlgebra) -> bool:
    """Exhaustive exact Jacobi identity over all basis triples."""
    es = [alg.basis_element(i) for i in range(alg.dim)]
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            bij = bracket(es[i], es[j])
            for k in range(j, alg.dim):
                total = (
                    bracket(bij, es[k])
                    + bracket(bracket(es[j], es[k]), es[i])
                    + bracket(bracket(es[k], es[i]), es[j])
                )
                if not total.is_zero():
                    return False
    return True


def is_derivation(alg: LieAlgebra, d: LinearMap) -> bool:
    """Exact check of D[x,y] = [Dx,y] + [x,Dy] on all basis pairs."""
    if d.domain is not alg or d.codomain is not alg:
        raise LieAlgebraError("derivation must be an endomorphism of the algebra")
    es = [alg.basis_element(i) for i in range(alg.dim)]
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            lhs = d(bracket(es[i], es[j]))
            rhs = bracket(d(es[i]), es[j]) + bracket(es[i], d(es[j]))
            if not (lhs - rhs).is_zero():
                return False
    return True


def is_homomorphism(phi: LinearMap) -> bool:
    """Exact check of φ[x,y] = [φx, φy] on all basis pairs."""
    dom = phi.domain
    es = [dom.basis_element(i) for i in range(dom.dim)]
    for i in range(dom.dim):
        for j in range(i + 1, dom.dim):
            if not (phi(bracket(es[i], es[j])) - bracket(phi(es[i]), phi(es[j]))).is_zero():
                return False
    return True


def center(alg: LieAlgebra) -> list[Vec]:
    """Basis of the exact kernel of the joint adjoint action."""
    rows: Mat = []
    for j in range(alg.dim):
        for k in range(alg.dim):
            row = [alg.bracket_basis(i, j).get(k, Q(0)) for i in range(alg.dim)]
            rows.append(row)
    return ql.nullspace(rows)


def semidirect_extend(alg: LieAlgebra, d: LinearMap, label: str = "d") -> LieAlgebra:
    """Extend by a derivation: [(x, s), (y, t)] = ([x,y] + s·Dy − t·Dx, 0)."""
    if not is_derivation(alg, d):
        raise LieAlgebraError("map is not a derivation")
    n = alg.dim
    table: SCTable = {}
    for key, row in alg.sc.items():
        table[key] = dict(row)
    dm = d.as_mat()
    for j in range(n):
        col = {k: dm[k][j] for k in range(n) if dm[k][j] != 0}
        if col:
            # [e_n, e_j] = D e_j  with the new generator last
            table[(j, n)] = {k: -c for k, c in col.items()}
    if label in alg.basis_labels:
        label = label + "'"
    return LieAlgebra(alg.basis_labels + (label,), _prune(table))


@dataclass(frozen=True)
class MatrixLieAlgebra:
    """Abstract algebra plus a concrete faithful matrix realization."""

    algebra: LieAlgebra
    basis_matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]
    generator_elements: tuple[LieElement, ...]

    def matrix_of(self, x: LieElement) -> Mat:
        n = len(self.basis_matrices[0])
        out = ql.zeros(n, n)
        for c, bm in zip(x.coeffs, self.basis_matrices):
            if c != 0:
                out = ql.mat_add(out, ql.mat_scale(c, [list(r) for r in bm]))
        return out

    def element_of(self, m: Mat) -> LieElement:
        flat_basis = [_flatten(bm) for bm in self.basis_matrices]
        coeffs = ql.coords_in_span(flat_basis, _flatten(m))
        if coeffs is None:
            raise LieAlgebraError("matrix is not in the algebra span")
        return self.algebra.element(coeffs)


def _flatten(m) -> Vec:
    return [x for row in m for x in row]


def from_matrix_algebra(
    generators: Sequence[Mat],
    labels: Sequence[str] | None = None,
    max_dim: int | None = None,
) -> MatrixLieAlgebra:
    """Close a set of square matrices under commutators, exactly.

    The span is saturated iteratively; structure constants come from matrix
    commutators expressed in the resulting basis.
    """
    if not generators:
        raise LieAlgebraError("need at least one generator")
    size = len(generators[0])
    bound = max_dim if max_dim is not None else size * size
    basis: list[Mat] = []
    flat: list[Vec] = []

    def try_add(m: Mat):
        f = _flatten(m)
        if not ql.in_span(flat, f):
            basis.append(m)
            flat.append(f)

    for g in generators:
        if len(g) != size or any(len(r) != size for r in g):
            raise LieAlgebraError("generators must be square of equal size")
        try_add(ql.qmat(g))
    frontier = list(range(len(basis)))
    while frontier:
        new_frontier = []
        for i in range(len(basis)):
            for j in frontier:
                if i == j:
                    continue
                before = len(basis)
                try_add(ql.commutator(basis[i], basis[j]))
                if len(basis) > before:
                    new_frontier.append(len(basis) - 1)
                if len(basis) > bound:
                    raise LieAlgebraError(f"span did not close within dimension bound {bound}")
        frontier = new_frontier

    dim = len(basis)
    if labels is None:
        labels = [f"m{i}" for i in range(dim)]
    elif len(labels) < dim:
        labels = list(labels) + [f"m{i}" for i in range(len(labels), dim)]
    table: SCTable = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            comm = ql.commutator(basis[i], basis[j])
            coeffs = ql.coords_in_span(flat, _flatten(comm))
            assert coeffs is not None
            row = {k: c for k, c in enumerate(coeffs) if c != 0}
            if row:
                table[(i, j)] = row
    alg = LieAlgebra(tuple(labels[:dim]), table)
    gens = []
    for g in generators:
        coeffs = ql.coords_in_span(flat, _flatten(ql.qmat(g)))
        assert coeffs is not None
        gens.append(alg.element(coeffs))
    return MatrixLieAlgebra(
        alg,
        tuple(tuple(tuple(r) for r in b) for b in basis),
        tuple(gens),
    )


def subalgebra_structure(alg: LieAlgebra, basis_vecs: Sequence[Vec], labels: Sequence[str] | None = None) -> tuple[LieAlgebra, Callable[[LieElement], LieElement]]:
    """Structure constants of a bracket-closed subspace of ``alg``.

    Returns the abstract subalgebra and a lift: subalgebra element -> ambient
    element.  Raises if the span is not closed under the bracket.
    """
    vecs = [list(v) for v in basis_vecs]
    dim = len(vecs)
    table: SCTable = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            b = bracket(alg.element(vecs[i]), alg.element(vecs[j]))
            coeffs = ql.coords_in_span(vecs, list(b.coeffs))
            if coeffs is None:
                raise LieAlgebraError("subspace is not closed under the bracket")
            row = {k: c for k, c in enumerate(coeffs) if c != 0}
            if row:
                table[(i, j)] = row
    if labels is None:
        labels = [f"s{i}" for i in range(dim)]
    sub = LieAlgebra(tuple(labels), table)

    def lift(x: LieElement) -> LieElement:
        out = [Q(0)] * alg.dim
        for c, v in zip(x.coeffs, vecs):
            for t in range(alg.dim):
                out[t] += c * v[t]
        return alg.element(out)

    return sub, lift

"""Exact linear algebra over the rationals.

Matrices are lists of lists of ``fractions.Fraction``; vectors are lists.
Everything here is decidable exactly: rank, solve, nullspace, eigenprojectors
for a prescribed rational spectrum, positive-(semi)definiteness with
certificates.  Dimensions are desk scale (< 50), so plain Gaussian
elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

Vec = list[Fraction]
Mat = list[list[Fraction]]


def q(x) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction (floats are rejected)."""
    if isinstance(x, float):
        raise TypeError("refusing to coerce float to exact rational")
    return Fraction(x)


def qvec(xs: Iterable) -> Vec:
    return [q(x) for x in xs]


def qmat(rows: Iterable[Iterable]) -> Mat:
    return [qvec(r) for r in rows]


def zeros(n: int, m: int) -> Mat:
    return [[Q(0)] * m for _ in range(n)]


def zvec(n: int) -> Vec:
    return [Q(0)] * n


def eye(n: int) -> Mat:
    return [[Q(1) if i == j else Q(0) for j in range(n)] for i in range(n)]


def mat_add(a: Mat, b: Mat) -> Mat:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Mat, b: Mat) -> Mat:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Mat) -> Mat:
    c = q(c)
    return [[c * x for x in row] for row in a]


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    bt = list(zip(*b))
    return [[sum((a[i][t] * bt[j][t] for t in range(k)), Q(0)) for j in range(m)] for i in range(n)]


def mat_vec(a: Mat, v: Sequence[Fraction]) -> Vec:
    return [sum((row[j] * v[j] for j in range(len(v))), Q(0)) for row in a]


def vec_add(u: Vec, v: Vec) -> Vec:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u: Vec, v: Vec) -> Vec:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v: Vec) -> Vec:
    c = q(c)
    return [c * x for x in v]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Q(0))


def transpose(a: Mat) -> Mat:
    return [list(r) for r in zip(*a)] if a else []


def commutator(a: Mat, b: Mat) -> Mat:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def is_zero_mat(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


def is_zero_vec(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def mat_eq(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def rref(a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = [row[:] for row in a]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


def nullspace(a: Mat) -> list[Vec]:
    """Basis of the right kernel of ``a``."""
    if not a:
        return []
    cols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = zvec(cols)
        v[fc] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a: Mat, b: Sequence[Fraction]) -> Vec | None:
    """One exact solution of ``a x = b``, or None if inconsistent."""
    if not a:
        return [] if is_zero_vec(b) else None
    aug = [row[:] + [bb] for row, bb in zip(a, b)]
    red, pivots = rref(aug)
    cols = len(a[0])
    if cols in pivots:  # pivot in the augmented column
        return None
    x = zvec(cols)
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def solve_matrix(a: Mat, b: Mat) -> Mat | None:
    """Solve ``a X = b`` column by column; None if any column inconsistent."""
    bt = transpose(b)
    cols = []
    for col in bt:
        x = solve(a, col)
        if x is None:
            return None
        cols.append(x)
    return transpose(cols)


def inverse(a: Mat) -> Mat:
    n = len(a)
    x = solve_matrix(a, eye(n))
    if x is None or rank(a) < n:
        raise ValueError("matrix is singular")
    return x


def det(a: Mat) -> Fraction:
    """Exact determinant by fraction-preserving elimination."""
    n = len(a)
    m = [row[:] for row in a]
    d = Q(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Q(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def column_space_basis(a: Mat) -> list[Vec]:
    """Basis of the column span (the pivot columns of ``a``)."""
    _, pivots = rref(a)
    at = transpose(a)
    return [at[c][:] for c in pivots]


def in_span(basis: Sequence[Vec], v: Sequence[Fraction]) -> bool:
    if not basis:
        return is_zero_vec(v)
    a = transpose([list(b) for b in basis])
    return solve(a, v) is not None


def coords_in_span(basis: Sequence[Vec], v: Sequence[Fraction]) -> Vec | None:
    """Coefficients of ``v`` in ``basis``, or None if not in the span."""
    if not basis:
        return [] if is_zero_vec(v) else None
    a = transpose([list(b) for b in basis])
    return solve(a, v)


def span_equal(b1: Sequence[Vec], b2: Sequence[Vec]) -> bool:
    return all(in_span(b1, v) for v in b2) and all(in_span(b2, v) for v in b1)


def span_intersection(b1: Sequence[Vec], b2: Sequence[Vec]) -> list[Vec]:
    """Basis of span(b1) ∩ span(b2)."""
    if not b1 or not b2:
        return []
    a = transpose([list(v) for v in b1] + [vec_scale(-1, list(v)) for v in b2])
    out = []
    for ker in nullspace(a):
        coeffs = ker[: len(b1)]
        v = zvec(len(b1[0]))
        for c, b in zip(coeffs, b1):
            v = vec_add(v, vec_scale(c, list(b)))
        if not is_zero_vec(v):
            out.append(v)
    # prune to independent set
    return _independent_subset(out)


def _independent_subset(vs: Sequence[Vec]) -> list[Vec]:
    kept: list[Vec] = []
    for v in vs:
        if not in_span(kept, v):
            kept.append(v)
    return kept


def leading_principal_minors(a: Mat) -> list[Fraction]:
    return [det([row[: k + 1] for row in a[: k + 1]]) for k in range(len(a))]


def is_positive_definite(a: Mat) -> tuple[bool, int | None]:
    """Sylvester test; returns (ok, index of first nonpositive minor)."""
    for k, m in enumerate(leading_principal_minors(a)):
        if m <= 0:
            return False, k
    return True, None


def psd_certificate(a: Mat) -> tuple[bool, Vec | None]:
    """Decide whether symmetric ``a`` is PSD.

    Returns (True, None) or (False, w) with wᵀ a w < 0, via symmetric
    pivoting: a PSD matrix with a zero diagonal entry must have a zero row.
    """
    n = len(a)
    if n == 0:
        return True, None
    idx = list(range(n))
    work = [row[:] for row in a]

    def _embed(w_small: Vec, active: list[int]) -> Vec:
        w = zvec(n)
        for val, i in zip(w_small, active):
            w[i] = val
        return w

    def _rec(m: Mat, active: list[int]) -> tuple[bool, Vec | None]:
        k = len(m)
        if k == 0:
            return True, None
        for i in range(k):
            if m[i][i] < 0:
                w = zvec(k)
                w[i] = Q(1)
                return False, _embed(w, active)
        pos = next((i for i in range(k) if m[i][i] > 0), None)
        if pos is None:
            # all diagonal entries are zero
            for i in range(k):
                for j in range(k):
                    if m[i][j] != 0:
                        w = zvec(k)
                        w[i] = Q(1)
                        w[j] = Q(-1) if m[i][j] > 0 else Q(1)
                        return False, _embed(w, active)
            return True, None
        p = pos
        rest = [i for i in range(k) if i != p]
        piv = m[p][p]
        col = [m[i][p] for i in rest]
        schur = [[m[i][j] - m[i][p] * m[p][j] / piv for j in rest] for i in rest]
        ok, w_small = _rec(schur, [active[i] for i in rest])
        if ok:
            return True, None
        # lift the witness: w_p = -(colᵀ w')/piv keeps the value wᵀ a w = w'ᵀ S w'
        wp = -sum((col[t] * w_small[active[i]] for t, i in enumerate(rest)), Q(0)) / piv
        w = w_small[:]
        w[active[p]] = wp
        return False, w

    ok, w = _rec(work, idx)
    if not ok:
        assert dot(w, mat_vec(a, w)) < 0
    return ok, w


def eigenprojectors(m: Mat, eigenvalues: Sequence[Fraction]) -> list[Mat] | None:
    """Exact spectral projectors of ``m`` for the candidate spectrum.

    Returns Lagrange interpolation projectors P_λ when ∏(m − λ) = 0 holds
    exactly (which certifies diagonalizability with spec ⊂ eigenvalues);
    None otherwise.  Projectors for absent eigenvalues come out zero.
    """
    n = len(m)
    prod = eye(n)
    for lam in eigenvalues:
        prod = mat_mul(prod, mat_sub(m, mat_scale(lam, eye(n))))
    if not is_zero_mat(prod):
        return None
    projs = []
    for lam in eigenvalues:
        p = eye(n)
        denom = Q(1)
        for mu in eigenvalues:
            if mu == lam:
                continue
            p = mat_mul(p, mat_sub(m, mat_scale(mu, eye(n))))
            denom *= lam - mu
        projs.append(mat_scale(1 / denom, p))
    return projs


def annihilates(m: Mat, roots: Sequence[Fraction]) -> bool:
    prod = eye(len(m))
    for lam in roots:
        prod = mat_mul(prod, mat_sub(m, mat_scale(lam, eye(len(m)))))
    return is_zero_mat(prod)


def minimal_polynomial(vectors: Sequence[Vec]) -> Vec:
    """Monic dependence coefficients for a Krylov-style vector sequence.

    Given v_0, v_1, ..., find the least k with v_k ∈ span(v_0..v_{k-1}) and
    return monic coefficients c with v_k = Σ c_i v_i (c has length k).
    """
    basis: list[Vec] = []
    for k, v in enumerate(vectors):
        coeffs = coords_in_span(basis, v)
        if coeffs is not None:
            return coeffs
        basis.append(list(v))
    raise ValueError("sequence never became dependent")


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction] | None:
    """All roots of a monic rational polynomial if it splits over Q.

    ``coeffs`` are [c_0, ..., c_{k-1}] for p(t) = t^k - Σ c_i t^i.  Returns
    the roots with multiplicity, or None if p does not split over Q.
    """
    # work with p(t) = t^k - sum c_i t^i  as dense coefficient list low->high
    k = len(coeffs)
    poly = [-c for c in coeffs] + [Q(1)]
    roots: list[Fraction] = []
    while len(poly) > 1:
        if all(c == 0 for c in poly[:-1]):
            roots.extend([Q(0)] * (len(poly) - 1))
            break
        root = _one_rational_root(poly)
        if root is None:
            return None
        roots.append(root)
        poly = _deflate(poly, root)
    return roots


def _one_rational_root(poly: list[Fraction]) -> Fraction | None:
    # clear denominators -> integer polynomial, then rational root theorem
    from math import gcd

    den = 1
    for c in poly:
        den = den * c.denominator // gcd(den, c.denominator)
    ipoly = [int(c * den) for c in poly]
    while ipoly and ipoly[-1] == 0:
        ipoly.pop()
    if ipoly[0] == 0:
        return Q(0)
    a0, an = abs(ipoly[0]), abs(ipoly[-1])

    def divisors(x: int) -> list[int]:
        ds = []
        d = 1
        while d * d <= x:
            if x % d == 0:
                ds.append(d)
                ds.append(x // d)
            d += 1
        return sorted(set(ds))

    for p in divisors(a0):
        for qd in divisors(an):
            for sign in (1, -1):
                cand = Q(sign * p, qd)
                if _poly_eval(poly, cand) == 0:
                    return cand
    return None


def _poly_eval(poly: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Q(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def _deflate(poly: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic (Horner) division by (t - root); poly is low->high
    out = [Q(0)] * (len(poly) - 1)
    out[-1] = poly[-1]
    for i in range(len(poly) - 2, 0, -1):
        out[i - 1] = poly[i] + out[i] * root
    return out

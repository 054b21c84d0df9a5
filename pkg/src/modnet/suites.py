"""Check suites shared by the command line and the acceptance tests.

Each suite returns a list of Check records; a report is a JSON-ready dict
with deterministic ordering.  Timing lives in a separate field so byte
comparisons can exclude it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import distvec as dv
from . import grading as gr
from . import grids as gd
from . import jordan as jd
from . import liealg as la
from . import parabolic as pb
from . import qlinalg as ql
from . import rep
from . import spindler as sp
from . import stdspace as ss

Q = Fraction


@dataclass
class Check:
    name: str
    passed: bool
    kind: str  # "exact" or "residual"
    value: str
    tolerance: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "kind": self.kind,
            "value": self.value,
            "tolerance": self.tolerance,
            "seconds": round(self.seconds, 3),
        }


def _check(name: str, passed: bool, kind: str, value, tol="", t0: float | None = None) -> Check:
    return Check(
        name=name,
        passed=bool(passed),
        kind=kind,
        value=str(value),
        tolerance=str(tol),
        seconds=0.0 if t0 is None else time.perf_counter() - t0,
    )


def report(checks: list[Check], config: dict) -> dict:
    return {
        "checks": [c.as_dict() for c in checks],
        "pass": all(c.passed for c in checks),
        "config": config,
    }


# ---------------------------------------------------------------------------
# Exact algebra suites
# ---------------------------------------------------------------------------


def suite_exact_algebra() -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    cases = {
        "hsp(R^2)": sp.build_jacobi(1).algebra,
        "hcsp(R^2)": sp.build_conformal_jacobi(1).algebra,
        "sp(4,R)": sp.sp_mla(2).algebra,
        "sp(6,R)": sp.sp_mla(3).algebra,
        "heis(R^4)": sp.build_heisenberg(2),
    }
    for name, alg in cases.items():
        t1 = time.perf_counter()
        ok = la.jacobi_check(alg)
        checks.append(_check(f"algebra.jacobi.{name}", ok, "exact", ok, t0=t1))
    checks.append(
        _check("algebra.jacobi.total_time", time.perf_counter() - t0 < 5.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 5 s", t0=t0)
    )
    return checks


def suite_euler() -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    sp4 = sp.sp_mla(2)
    h4 = sp4.element_of(
        ql.qmat([[Q(1, 2), 0, 0, 0], [0, Q(1, 2), 0, 0], [0, 0, Q(-1, 2), 0], [0, 0, 0, Q(-1, 2)]])
    )
    g4 = gr.grading(sp4.algebra, h4)
    dims4 = g4.dims()
    checks.append(
        _check(
            "euler.sp4.dims",
            gr.is_euler(sp4.algebra, h4) and (dims4[Q(-1)], dims4[Q(0)], dims4[Q(1)]) == (3, 4, 3),
            "exact",
            {str(k): v for k, v in sorted(dims4.items())},
            tol="(3,4,3)",
            t0=t0,
        )
    )
    t1 = time.perf_counter()
    cm = sp.build_conformal_jacobi(1)
    h = cm.euler_element()
    gc = gr.grading(cm.algebra, h)
    checks.append(
        _check(
            "euler.hcsp2.g1_dim",
            gr.is_euler(cm.algebra, h) and len(gc.basis(1)) == 3,
            "exact",
            len(gc.basis(1)),
            tol="3",
            t0=t1,
        )
    )
    t2 = time.perf_counter()
    ok = gr.graded_bracket_law(g4) and gr.graded_bracket_law(gc)
    checks.append(_check("euler.graded_bracket_law", ok, "exact", ok, t0=t2))
    checks.append(
        _check("euler.total_time", time.perf_counter() - t0 < 5.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 5 s")
    )
    return checks


def suite_parabolic(ns=(1, 2)) -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    for n in ns:
        t1 = time.perf_counter()
        tri = pb.sl2_embed_mult1(2 * n)
        rep_dict = pb.verify_theorem_h1(tri)
        ok = rep_dict["euler"] and rep_dict["g1_matches_parabolic"] and rep_dict["eigenspace_formula"]
        checks.append(
            _check(f"parabolic.theorem.n{n}", ok, "exact",
                   {k: rep_dict[k] for k in ("euler", "g1_matches_parabolic", "eigenspace_formula", "dim_g1")},
                   t0=t1)
        )
        t2 = time.perf_counter()
        p = pb.parabolic_subalg(tri)
        cm = sp.build_conformal_jacobi(n)
        phi = pb.jacobi_parabolic_iso(p, cm)
        ok_iso = pb.restrict_iso_to_ideal(p, phi, cm)
        checks.append(_check(f"parabolic.iso.n{n}", ok_iso, "exact", ok_iso, t0=t2))
    checks.append(
        _check("parabolic.total_time", time.perf_counter() - t0 < 30.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 30 s")
    )
    return checks


def _sp_block(n: int, a=None, b=None, c=None):
    m = ql.zeros(2 * n, 2 * n)
    for i in range(n):
        for j in range(n):
            if a is not None:
                m[i][j] = ql.q(a[i][j])
                m[n + i][n + j] = -ql.q(a[j][i])
            if b is not None:
                m[i][n + j] = ql.q(b[i][j])
            if c is not None:
                m[n + i][j] = ql.q(c[i][j])
    return m


def kkt_model(n: int):
    """Jordan algebra on the top piece of sp(2n, R) with its frame."""
    mla = sp.sp_mla(n)
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    half = [[Q(1, 2) if i == j else Q(0) for j in range(n)] for i in range(n)]
    h = mla.element_of(_sp_block(n, a=half))
    x = mla.element_of(_sp_block(n, b=eye))
    y = mla.element_of(_sp_block(n, c=eye))
    jalg, basis = jd.kkt_jordan(mla.algebra, h, x, y)
    return mla, jalg, basis


def suite_jordan() -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    mla, jalg, basis = kkt_model(2)
    # oracle: product table must match the symmetrized matrix product
    n = 2
    ok = True
    for a in range(jalg.dim):
        for b in range(jalg.dim):
            ea = [Q(1) if t == a else Q(0) for t in range(jalg.dim)]
            eb = [Q(1) if t == b else Q(0) for t in range(jalg.dim)]
            prod = jalg.product(ea, eb)
            amb = ql.zvec(mla.algebra.dim)
            for cc, v in zip(prod, basis):
                amb = ql.vec_add(amb, ql.vec_scale(cc, v))
            bmat = lambda vec: [
                [mla.matrix_of(mla.algebra.element(vec))[i][n + j] for j in range(n)] for i in range(n)
            ]
            ba, bb = bmat(basis[a]), bmat(basis[b])
            oracle = ql.mat_scale(Q(1, 2), ql.mat_add(ql.mat_mul(ba, bb), ql.mat_mul(bb, ba)))
            if not ql.mat_eq(oracle, bmat(amb)):
                ok = False
    checks.append(_check("jordan.kkt_sp4.symmetrized_product", ok, "exact", ok, t0=t0))
    t1 = time.perf_counter()
    frame = jd.jordan_frame(jalg)
    pdata = jd.peirce(jalg, list(frame.idempotents[0]))
    checks.append(
        _check("jordan.peirce.dims", pdata.dims() == {"0": 1, "1/2": 1, "1": 1}, "exact",
               pdata.dims(), tol="{'0':1,'1/2':1,'1':1}", t0=t1)
    )
    checks.append(_check("jordan.rank.sp4", frame.rank == 2, "exact", frame.rank, tol="2"))
    t2 = time.perf_counter()
    alphas = [0, Q(1, 4), Q(1, 2), Q(3, 4), 1, -1]
    table = jd.wallach_table(2, 1, alphas)
    expected = {"0": True, "1/4": False, "1/2": True, "3/4": True, "1": True, "-1": False}
    checks.append(_check("jordan.wallach.r2d1", table == expected, "exact", table, tol=str(expected), t0=t2))
    checks.append(
        _check("jordan.wallach.alpha_half", jd.wallach_contains(Q(1, 2), 2, 1), "exact", True, t0=t2)
    )
    return checks


def suite_stdspace(count: int = 50, kmax: int = 6, seed: int = 3) -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        k = int(rng.integers(1, kmax + 1))
        pair = ss.random_pair(k, rng)
        v = ss.standard_subspace(pair)
        cap, cod = ss.standardness_residuals(v)
        dd = ss.subspace_distance(ss.symplectic_complement(ss.symplectic_complement(v)), v)
        worst = max(worst, cap, cod, dd)
        for t in (0.3, 1.7):
            worst = max(worst, ss.subspace_distance(ss.apply_complex(v, pair.delta_it(t)), v))
    checks.append(
        _check("stdspace.battery", worst < 1e-9, "residual", f"{worst:.3e}", tol="< 1e-9", t0=t0)
    )
    t1 = time.perf_counter()
    worst_t = 0.0
    for _ in range(max(4, count // 5)):
        pa = ss.random_pair(int(rng.integers(1, 4)), rng)
        pbb = ss.random_pair(int(rng.integers(1, 4)), rng)
        va, vb = ss.standard_subspace(pa), ss.standard_subspace(pbb)
        vt = ss.tensor_product(va, vb, pa, pbb)
        worst_t = max(worst_t, ss.subspace_distance(vt, ss.elementary_tensor_span(va, vb)))
    checks.append(
        _check("stdspace.tensor_span", worst_t < 1e-9, "residual", f"{worst_t:.3e}", tol="< 1e-9", t0=t1)
    )
    checks.append(
        _check("stdspace.total_time", time.perf_counter() - t0 < 10.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 10 s")
    )
    return checks


# ---------------------------------------------------------------------------
# Representation suites
# ---------------------------------------------------------------------------


def _random_letter(rng: np.random.Generator, n: int) -> rep.Letter:
    kind = rng.integers(0, 6)
    if kind == 0:
        return rep.heis(rng.uniform(-0.5, 0.5, n), rng.uniform(-1.0, 1.0, n), float(rng.uniform(-0.5, 0.5)))
    if kind == 1:
        return rep.Dil(float(rng.uniform(0.75, 1.35)))
    if kind == 2:
        a = rng.uniform(-0.3, 0.3, (n, n))
        from scipy.linalg import expm

        return rep.gl(expm(a))
    if kind == 3:
        c = rng.uniform(-0.3, 0.3, (n, n))
        return rep.lower(0.5 * (c + c.T))
    if kind == 4:
        b = rng.uniform(-0.3, 0.3, (n, n))
        return rep.upper(0.5 * (b + b.T))
    return rep.Fourier(1 if rng.uniform() < 0.5 else -1)


def _random_word(rng: np.random.Generator, n: int, max_len: int = 3) -> list[rep.Letter]:
    return [_random_letter(rng, n) for _ in range(int(rng.integers(1, max_len + 1)))]


def suite_rep(spec: gd.GridSpec | None = None, n_words: int = 50, seed: int = 5) -> list[Check]:
    spec = spec or gd.GridSpec()
    checks = []
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    f = gd.GaussianTemplate(lam0=1.5, sigma_u=0.45, x0=(0.3,) * spec.n, sigma_x=(1.0,) * spec.n, k0=(0.5,) * spec.n).to_grid(spec)
    nf = gd.norm(f)
    worst_u = 0.0
    for _ in range(n_words):
        w = _random_word(rng, spec.n)
        g = rep.apply(w, f)
        worst_u = max(worst_u, abs(gd.norm(g) - nf) / nf)
    checks.append(_check("rep.unitarity", worst_u < 1e-5, "residual", f"{worst_u:.3e}", tol="< 1e-5", t0=t0))

    t1 = time.perf_counter()
    worst_g = 0.0
    for _ in range(n_words):
        w1 = _random_word(rng, spec.n, 2)
        w2 = _random_word(rng, spec.n, 2)
        worst_g = max(worst_g, rep.group_law_check(w1, w2, f))
    checks.append(_check("rep.group_law", worst_g < 1e-5, "residual", f"{worst_g:.3e}", tol="< 1e-5", t0=t1))

    t2 = time.perf_counter()
    worst_j = 0.0
    for _ in range(max(8, n_words // 4)):
        w = _random_word(rng, spec.n, 2)
        worst_j = max(worst_j, rep.j_covariance_residual(w, f))
    checks.append(_check("rep.j_covariance", worst_j < 1e-5, "residual", f"{worst_j:.3e}", tol="< 1e-5", t0=t2))

    t3 = time.perf_counter()
    # |f|^2 has log-lambda variance sig^2/2, so E[lam^2] = 4 exactly needs
    # the center at 2 e^{-sig^2/2}
    sig = 0.25
    conc = gd.GaussianTemplate(
        lam0=float(2.0 * np.exp(-(sig**2) / 2.0)), sigma_u=sig, x0=(0.0,) * spec.n,
        sigma_x=(1.0,) * spec.n, k0=(0.0,) * spec.n,
    ).to_grid(spec)
    val = rep.positive_energy_check(conc)
    ok_pos = all(rep.positive_energy_check(rep.apply(_random_word(rng, spec.n, 2), f)) >= 0 for _ in range(6))
    checks.append(
        _check("rep.energy.concentrated", abs(val - 4.0) < 1e-3 and ok_pos, "residual",
               f"{val:.6f}", tol="4 +- 1e-3", t0=t3)
    )
    checks.append(
        _check("rep.total_time", time.perf_counter() - t0 < 120.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 2 min")
    )
    return checks


def dist_templates(n: int = 1) -> list[gd.GaussianTemplate]:
    params = [(1.0, 0.45, 0.0, 1.0, 0.0), (1.5, 0.5, 0.4, 0.9, 0.7), (0.8, 0.4, -0.3, 1.2, -0.5)]
    return [
        gd.GaussianTemplate(lam0=l0, sigma_u=su, x0=(x0,) * n, sigma_x=(sx,) * n, k0=(k0,) * n)
        for (l0, su, x0, sx, k0) in params
    ]


def suite_dist(spec: gd.GridSpec | None = None, s_values=(0.75, 1.0, 1.5, 2.0)) -> list[Check]:
    spec = spec or gd.DEFAULT_DIST_GRID
    checks = []
    t0 = time.perf_counter()
    lam, x = spec.meshgrid()
    f = gd.grid_function(spec, np.exp(-(lam**2)) * np.exp(-(x**2) / 2.0))
    worst_cf = 0.0
    for s in s_values:
        got = dv.eta_pair(s, f)
        want = dv.eta_pair_closed_form(s)
        worst_cf = max(worst_cf, abs(got - want) / abs(want))
    checks.append(
        _check("dist.pair.closed_form", worst_cf < 1e-6, "residual", f"{worst_cf:.3e}", tol="< 1e-6", t0=t0)
    )
    t1 = time.perf_counter()
    tmpl = dist_templates()[1]
    worst_law = 0.0
    for s in s_values:
        worst_law = max(worst_law, dv.verify_covariance(s, "gl", tmpl, spec, param=[[1.3]]))
        worst_law = max(worst_law, dv.verify_covariance(s, "dilation", tmpl, spec, param=0.4))
        worst_law = max(worst_law, dv.verify_covariance(s, "v1_sp1", tmpl, spec, param=("v1", [0.7])))
        worst_law = max(worst_law, dv.verify_covariance(s, "v1_sp1", tmpl, spec, param=("sp1", [[0.2]])))
        worst_law = max(worst_law, dv.verify_covariance(s, "tau", tmpl, spec))
    checks.append(
        _check("dist.covariance.laws", worst_law < 1e-5, "residual", f"{worst_law:.3e}", tol="< 1e-5", t0=t1)
    )
    return checks


def suite_extj(spec: gd.GridSpec | None = None, s_values=(1.0, 1.5)) -> list[Check]:
    spec = spec or gd.DEFAULT_DIST_GRID
    checks = []
    t0 = time.perf_counter()
    tmpls = dist_templates()
    worst = max(dv.ext_j_membership_check(s, tmpls, spec, phased=True) for s in s_values)
    checks.append(_check("extj.identity", worst < 1e-6, "residual", f"{worst:.3e}", tol="< 1e-6", t0=t0))
    t1 = time.perf_counter()
    control = min(dv.ext_j_membership_check(s, tmpls, spec, phased=False) for s in s_values)
    checks.append(
        _check("extj.negative_control", control >= 0.1, "residual", f"{control:.3f}", tol=">= 0.1", t0=t1)
    )
    return checks


def suite_net(spec: gd.GridSpec | None = None, n_pairs: int = 20, seed: int = 7) -> list[Check]:
    spec = spec or gd.DEFAULT_NET_GRID
    checks = []
    t0 = time.perf_counter()
    s0 = 1.5
    du = spec.du
    words = [
        [rep.heis([0.0], [0.0], 0.3)],
        [rep.Dil(float(np.exp(8 * du)))],
        [rep.lower([[-0.15]])],
        [rep.heis([0.0], [0.4], 0.0)],
        [rep.heis([0.3], [0.0], 0.0)],
        [rep.gl([[1.2]])],
    ]
    worst_cov = max(dv.net_covariance_residual(w, dv.default_chart(+1), s0, spec) for w in words)
    checks.append(
        _check("net.covariance", worst_cov < 1e-5, "residual", f"{worst_cov:.3e}", tol="< 1e-5", t0=t0)
    )
    t1 = time.perf_counter()
    iso = dv.isotony_residual(s0, spec)
    checks.append(_check("net.isotony", iso < 1e-4, "residual", f"{iso:.3e}", tol="< 1e-4", t0=t1))
    t2 = time.perf_counter()
    bat = dv.locality_battery((1.0, 1.5, 2.0), spec, n_pairs=n_pairs, seed=seed)
    checks.append(
        _check("net.locality", bat["max_residual"] < 1e-3, "residual",
               f"{bat['max_residual']:.3e}", tol="< 1e-3", t0=t2)
    )
    checks.append(
        _check("net.locality.negative_control", bat["min_control"] > 0.05, "residual",
               f"{bat['min_control']:.3f}", tol="O(1)", t0=t2)
    )
    t3 = time.perf_counter()
    kms_plus = max(dv.kms_residual(dv.default_chart(+1), s, spec) for s in (1.0, 1.5))
    kms_minus = dv.kms_residual(dv.default_chart(-1), 1.5, spec)
    checks.append(_check("net.kms", kms_plus < 1e-3, "residual", f"{kms_plus:.3e}", tol="< 1e-3", t0=t3))
    checks.append(
        _check("net.kms.negative_control", kms_minus > 0.5, "residual", f"{kms_minus:.3f}", tol="O(1)", t0=t3)
    )
    checks.append(
        _check("net.total_time", time.perf_counter() - t0 < 600.0, "exact",
               f"{time.perf_counter() - t0:.2f}s", tol="< 10 min")
    )
    return checks


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------


def verify_all(profile: str = "full", seed: int = 0, n: int = 1) -> dict:
    if profile not in ("full", "quick"):
        raise ValueError("profile must be 'full' or 'quick'")
    quick = profile == "quick"
    checks: list[Check] = []
    checks += suite_exact_algebra()
    checks += suite_euler()
    checks += suite_parabolic(ns=(1,) if quick else (1, 2))
    checks += suite_jordan()
    checks += suite_stdspace(count=10 if quick else 50, seed=seed + 3)
    rep_spec = gd.GridSpec() if not quick else gd.GridSpec(n_lam=128, n_x=256)
    checks += suite_rep(rep_spec, n_words=8 if quick else 50, seed=seed + 5)
    dist_spec = gd.DEFAULT_DIST_GRID if not quick else gd.GridSpec(
        n=1, lam_min=1e-9, lam_max=40.0, n_lam=512, x_extent=12.0, n_x=512
    )
    checks += suite_dist(dist_spec)
    checks += suite_extj(dist_spec)
    checks += suite_net(gd.DEFAULT_NET_GRID, n_pairs=4 if quick else 20, seed=seed + 7)
    return report(checks, {"profile": profile, "seed": seed, "n": n})

"""Property-based acceptance criteria, runnable as a suite.

Each criterion returns (passed, detail); run_all wraps them with
timing.  The CLI `selftest` subcommand and tests/test_acceptance.py
both drive this module, so the shipped package can re-verify itself.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .accessory import (
    accessory_poly,
    accessory_poly_expanded,
    apparent_singularity_check,
    poly_roots,
    polynomial_solution,
)
from .family_one import (
    family1_bilateral,
    family1_residual_band,
    family1_setup,
    family1_seed,
    family1_source_params,
    family1_unilateral,
)
from .family_two import (
    family2_bilateral,
    family2_homogeneous,
    family2_inhomogeneous_triple,
    family2_pole_spirals,
    family2_seed,
    family2_setup,
    family2_source_params,
    g1_inhomogeneity,
    polys_match,
)
from .qcore import SeriesControl, phi_series, q_pochhammer, q_pochhammer_ratio, theta
from .qheun_op import (
    QHeunParams,
    default_grid,
    grid_points,
    residual_report,
    singular_spirals,
    spiral_distance,
)
from .qtransform import TransformSpec, boundary_limits, source_chi, transform
from .sampling import (
    random_admissible_params,
    random_family1_params,
    random_family2_params,
    random_generic_params,
)


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.index}: {self.name} ({self.seconds:.2f}s) {self.detail}"


def _max_rel_coeff_diff(a, b) -> float:
    n = max(len(a.coeffs), len(b.coeffs))
    ca = list(a.coeffs) + [0j] * (n - len(a.coeffs))
    cb = list(b.coeffs) + [0j] * (n - len(b.coeffs))
    scale = max(max(abs(v) for v in ca), max(abs(v) for v in cb))
    return max(abs(x - y) for x, y in zip(ca, cb)) / scale


def accessory_equivalence() -> tuple[bool, str]:
    """Recursive and expanded accessory polynomials agree; both monic."""
    rng = np.random.default_rng(101)
    worst = 0.0
    worst_monic = 0.0
    for _ in range(50):
        p = random_generic_params(rng)
        while any(abs(p.beta - m) < 0.05 for m in range(1, 7)):
            p = random_generic_params(rng)
        for N in range(7):
            c = accessory_poly(p, N)
            e = accessory_poly_expanded(p, N)
            worst = max(worst, _max_rel_coeff_diff(c, e))
            worst_monic = max(worst_monic, abs(c.lead - 1.0))
    ok = worst < 1e-10 and worst_monic < 1e-10
    return ok, f"max coeff diff {worst:.2e}, max monic defect {worst_monic:.2e}"


def polynomial_solutions() -> tuple[bool, str]:
    """Every accessory root yields a polynomial-type solution."""
    rng = np.random.default_rng(202)
    worst = 0.0
    for i in range(20):
        N = int(rng.integers(0, 5))
        p = random_admissible_params(rng, N)
        roots = poly_roots(accessory_poly(p, N))
        grid = default_grid(p, count=20, seed=i)
        for E0 in roots:
            sol = polynomial_solution(p, E0, N)
            rep = residual_report(p, E0, sol, grid)
            worst = max(worst, rep.max_residual)
    return worst < 1e-9, f"worst residual {worst:.2e}"


def family2_apparent() -> tuple[bool, str]:
    """Both accessory routes agree for the beta = N + 1 family and every
    root passes the direct closing-relation check."""
    rng = np.random.default_rng(303)
    worst = 0.0
    checks = True
    for i in range(50):
        N = int(rng.integers(0, 6))
        p = random_family2_params(rng, N)
        st = family2_setup(p, N)
        worst = max(worst, _max_rel_coeff_diff(st.accessory, st.d_poly))
        if not polys_match(st.accessory, st.d_poly):
            checks = False
        for r in st.roots:
            if not apparent_singularity_check(p, r, N):
                checks = False
    return checks and worst < 1e-10, f"max coeff diff {worst:.2e}"


def _family1_form_grid(setup, form, seed) -> list[complex]:
    rmin, rmax = family1_residual_band(setup, form)
    return grid_points(
        setup.params.q, singular_spirals(setup.params), 10, rmin, rmax, seed=seed
    )


def family1_finite_sums() -> tuple[bool, str]:
    """All four finite-sum forms solve the equation at every root."""
    rng = np.random.default_rng(404)
    worst = 0.0
    for N in (0, 1, 2):
        p = random_family1_params(rng, N)
        st = family1_setup(p, N)
        for form in ("g3", "g4", "g5", "g6"):
            pts = _family1_form_grid(st, form, seed=N + 17)
            for E0 in st.roots:
                rep = residual_report(
                    p, E0, lambda x: family1_unilateral(st, form, E0, x), pts
                )
                worst = max(worst, rep.max_residual)
    return worst < 1e-8, f"worst residual {worst:.2e}"


def family2_solutions() -> tuple[bool, str]:
    """Homogeneous forms, pairwise differences of the triple, and the
    explicit inhomogeneous identities for g1 and g6."""
    rng = np.random.default_rng(505)
    worst_h = 0.0
    worst_n = 0.0
    for N in (0, 1, 2):
        p = random_family2_params(rng, N)
        st = family2_setup(p, N)
        m = min(abs(p.t1), abs(p.t2))
        xi = 0.77 * abs(p.t1)
        pts = grid_points(
            p.q,
            family2_pole_spirals(st) + [xi + 0j],
            10,
            0.4 * m,
            3.0 * m,
            seed=N + 29,
            min_rel_dist=1e-3,
        )
        inhom = lambda x: g1_inhomogeneity(st, x)
        for E0 in st.roots:
            for form in ("g3", "g4", "g5"):
                rep = residual_report(
                    p, E0, lambda x: family2_homogeneous(st, form, E0, x), pts
                )
                worst_h = max(worst_h, rep.max_residual)
            for a, b in (("g6", "g7"), ("g7", "g8")):
                diff = lambda x: family2_inhomogeneous_triple(
                    st, a, E0, x
                ) - family2_inhomogeneous_triple(st, b, E0, x)
                rep = residual_report(p, E0, diff, pts)
                worst_h = max(worst_h, rep.max_residual)
            rep = residual_report(
                p,
                E0,
                lambda x: family2_bilateral(st, "g1", E0, xi, x),
                pts,
                inhomogeneity=inhom,
            )
            worst_n = max(worst_n, rep.max_residual)
            rep = residual_report(
                p,
                E0,
                lambda x: family2_inhomogeneous_triple(st, "g6", E0, x),
                pts,
                inhomogeneity=inhom,
            )
            worst_n = max(worst_n, rep.max_residual)
    ok = worst_h < 1e-8 and worst_n < 1e-8
    return ok, f"worst homogeneous {worst_h:.2e}, worst inhomogeneous {worst_n:.2e}"


def _variant_solutions(p: QHeunParams, which: str, x: complex) -> complex:
    """Independent transcription of the three degree-two variant solutions."""
    q = p.q
    lam = (p.h1 + p.h2 - p.l1 - p.l2 - p.alpha1 - p.alpha2 - p.beta + 2.0) / 2.0
    z = q ** (lam + p.alpha2)
    x = complex(x)
    if which in ("h1", "h2"):
        h, t = (p.h1, p.t1) if which == "h1" else (p.h2, p.t2)
        ho, to = (p.h2, p.t2) if which == "h1" else (p.h1, p.t1)
        pref = x ** lam * q_pochhammer_ratio(
            [q ** (lam - h + p.alpha1 + 0.5) * x / t], [q ** (-h + 0.5) * x / t], q
        )
        return pref * phi_series(
            [
                q ** (lam - h + p.l1 + p.alpha1) * (p.t1 / t),
                q ** (lam - h + p.l2 + p.alpha1) * (p.t2 / t),
                q ** (-h + 0.5) * x / t,
            ],
            [q ** (-h + ho + 1.0) * to / t, q ** (lam - h + p.alpha1 + 0.5) * x / t],
            q,
            z,
        )
    pref = x ** (-p.alpha2) * q_pochhammer_ratio(
        [
            q ** (-lam + p.h1 - p.alpha1 + 1.5) * p.t1 / x,
            q ** (-lam + p.h2 - p.alpha1 + 1.5) * p.t2 / x,
        ],
        [q ** (p.l1 + 0.5) * p.t1 / x, q ** (p.l2 + 0.5) * p.t2 / x],
        q,
    )
    return pref * phi_series(
        [
            q ** (p.l1 + 0.5) * p.t1 / x,
            q ** (p.l2 + 0.5) * p.t2 / x,
            q ** (-lam - p.alpha1 + 1.0),
        ],
        [
            q ** (-lam + p.h1 - p.alpha1 + 1.5) * p.t1 / x,
            q ** (-lam + p.h2 - p.alpha1 + 1.5) * p.t2 / x,
        ],
        q,
        z,
    )


def variant_regression() -> tuple[bool, str]:
    """beta = 1 reduction: the three finite forms match the degree-two
    variant solutions pointwise and the root matches its eigenvalue."""
    rng = np.random.default_rng(606)
    worst_val = 0.0
    worst_e = 0.0
    for i in range(10):
        p = random_family2_params(rng, 0)
        st = family2_setup(p, 0)
        E0 = st.roots[0]
        scale = p.q ** ((p.h1 + p.h2 + p.l1 + p.l2 + p.alpha1 + p.alpha2) / 2.0)
        e_variant = -scale * (
            (p.q ** -p.h2 + p.q ** -p.l2) * p.t1 + (p.q ** -p.h1 + p.q ** -p.l1) * p.t2
        )
        worst_e = max(worst_e, abs(E0 - e_variant) / abs(e_variant))
        m = min(abs(p.t1), abs(p.t2))
        pts = grid_points(
            p.q, family2_pole_spirals(st), 4, 0.5 * m, 2.0 * m, seed=i, min_rel_dist=1e-3
        )
        for form, variant in (("g3", "h1"), ("g4", "h2"), ("g5", "h3")):
            for x in pts:
                got = family2_homogeneous(st, form, E0, x)
                want = _variant_solutions(p, variant, x)
                worst_val = max(worst_val, abs(got - want) / max(abs(want), 1e-300))
    ok = worst_val < 1e-10 and worst_e < 1e-12
    return ok, f"worst value diff {worst_val:.2e}, worst eigenvalue diff {worst_e:.2e}"


def _off_spiral_reals(xi: float, q: float, bases, count: int = 5) -> list[float]:
    pts = []
    k = 0
    while len(pts) < count:
        x = xi * q ** (-(0.53 + 0.61 * k))
        k += 1
        if spiral_distance(x, bases, q) > 1e-3:
            pts.append(x)
    return pts


def transform_consistency() -> tuple[bool, str]:
    """Numeric Jackson transforms match the explicit bilateral formulas;
    the boundary detector reproduces the known limits."""
    rng = np.random.default_rng(707)
    ctl = SeriesControl()
    lctl = SeriesControl(rel_tol=1e-12)
    worst = 0.0
    worst_c = 0.0

    p1 = random_family1_params(rng, 1)
    st1 = family1_setup(p1, 1)
    E1 = st1.roots[0]
    src1 = family1_source_params(st1)
    xi1 = 0.9 * abs(p1.t1)
    bases1 = singular_spirals(p1) + [xi1 + 0j]
    xs1 = _off_spiral_reals(xi1, p1.q, bases1)
    seed_h1 = family1_seed(st1, "h1", E1)
    seed_h2 = family1_seed(st1, "h2", E1)
    spec_a = TransformSpec(source=src1, mu0=0.0, xi=xi1, kernel="P1", alpha1=p1.alpha1)
    spec_b = TransformSpec(source=src1, mu0=0.0, xi=xi1, kernel="P2", alpha1=p1.alpha1)
    for x in xs1:
        want = family1_bilateral(st1, "g1", E1, xi1, x, ctl)
        got = transform(spec_a, seed_h1, E1, x, ctl)
        worst = max(worst, abs(got - want) / abs(want))
        want = family1_bilateral(st1, "g2", E1, xi1, x, ctl)
        got = transform(spec_b, seed_h2, E1, x, ctl)
        worst = max(worst, abs(got - want) / abs(want))
    # beta' < 0 and alpha1' < alpha2' hold for this family's source system,
    # so both limits must vanish.
    c1, c2 = boundary_limits(spec_a, seed_h1, lctl)
    worst_c = max(worst_c, abs(c1), abs(c2))

    p2 = random_family2_params(rng, 1)
    st2 = family2_setup(p2, 1)
    E2 = st2.roots[0]
    src2 = family2_source_params(st2)
    xi2 = 0.9 * abs(p2.t1)
    bases2 = family2_pole_spirals(st2) + [xi2 + 0j]
    xs2 = _off_spiral_reals(xi2, p2.q, bases2)
    seed2_h1 = family2_seed(st2, "h1", E2)
    seed2_h2 = family2_seed(st2, "h2", E2)
    spec_c = TransformSpec(source=src2, mu0=0.0, xi=xi2, kernel="P1", alpha1=p2.alpha1)
    spec_d = TransformSpec(source=src2, mu0=0.0, xi=xi2, kernel="P2", alpha1=p2.alpha1)
    for x in xs2:
        want = family2_bilateral(st2, "g1", E2, xi2, x, ctl)
        got = transform(spec_c, seed2_h1, E2, x, ctl)
        worst = max(worst, abs(got - want) / abs(want))
        want = family2_bilateral(st2, "g2", E2, xi2, x, ctl)
        got = transform(spec_d, seed2_h2, E2, x, ctl)
        worst = max(worst, abs(got - want) / abs(want))
    # The P2 seed has the explicit theta-quotient inward limit.
    c1, c2 = boundary_limits(spec_d, seed2_h2, lctl)
    q = p2.q
    chi = source_chi(src2)
    expected = xi2 ** (-p2.h1 - p2.h2 + p2.l1 + p2.l2 + 2.0 * chi) * (
        theta(q ** (p2.h1 - chi + 0.5) * p2.t1 / xi2, q)
        * theta(q ** (p2.h2 - chi + 0.5) * p2.t2 / xi2, q)
        / (
            theta(q ** (p2.l1 + 0.5) * p2.t1 / xi2, q)
            * theta(q ** (p2.l2 + 0.5) * p2.t2 / xi2, q)
        )
    )
    worst_c = max(worst_c, abs(c1 - expected) / abs(expected), abs(c2))
    ok = worst < 1e-8 and worst_c < 1e-8
    return ok, f"worst transform diff {worst:.2e}, worst limit diff {worst_c:.2e}"


def identity_suites() -> tuple[bool, str]:
    """Heine transform, theta quasi-periodicity, shifted-factorial laws."""
    rng = np.random.default_rng(808)
    worst = 0.0

    def cplx(lo: float, hi: float) -> complex:
        return rng.uniform(lo, hi) * cmath.exp(1j * rng.uniform(-3.0, 3.0))

    for _ in range(100):
        q = rng.uniform(0.3, 0.7)
        a, c = cplx(0.2, 1.5), cplx(0.3, 1.8)
        b, z = cplx(0.05, 0.78), cplx(0.05, 0.78)
        lhs = phi_series([a, b], [c], q, z)
        rhs = q_pochhammer_ratio([b, a * z], [c, z], q) * phi_series([c / b, z], [a * z], q, b)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    for _ in range(100):
        q = rng.uniform(0.3, 0.7)
        t, s = cplx(0.3, 2.0), cplx(0.3, 2.0)
        K = int(rng.integers(-3, 4))
        lhs = theta(q ** K * t, q) / theta(q ** K * s, q)
        rhs = (s / t) ** K * theta(t, q) / theta(s, q)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    for _ in range(100):
        q = rng.uniform(0.3, 0.7)
        a = cplx(0.3, 1.7)
        m = int(rng.integers(-3, 4))
        n = int(rng.integers(-3, 4))
        lhs = q_pochhammer(a, q, m + n)
        rhs = q_pochhammer(a, q, m) * q_pochhammer(a * q ** m, q, n)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        lhs = q_pochhammer(a, q, n)
        rhs = q_pochhammer(a, q, math.inf) / q_pochhammer(a * q ** n, q, math.inf)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    return worst < 1e-12, f"worst identity defect {worst:.2e}"


CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]], float | None]] = [
    ("accessory recursion vs expansion", accessory_equivalence, 5.0),
    ("polynomial-type solutions at every root", polynomial_solutions, 10.0),
    ("apparent-singularity equivalence (beta = N+1)", family2_apparent, None),
    ("finite-sum forms, family h2 = l2-1-N", family1_finite_sums, None),
    ("finite-sum forms, family beta = N+1", family2_solutions, None),
    ("degree-two variant regression at N = 0", variant_regression, None),
    ("transform vs explicit bilateral formulas", transform_consistency, None),
    ("core identity suites", identity_suites, None),
]


def run_all() -> list[CriterionResult]:
    """Run criteria 1..8, timing each; time budgets count toward pass/fail."""
    out: list[CriterionResult] = []
    for i, (name, fn, budget) in enumerate(CRITERIA, start=1):
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # surfaced, not raised: selftest reports all
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if budget is not None and dt > budget:
            passed = False
            detail += f" [exceeded {budget:.0f}s budget]"
        out.append(CriterionResult(index=i, name=name, passed=passed, detail=detail, seconds=dt))
    return out

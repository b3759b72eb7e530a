"""Solution family attached to the integer relation h2 = l2 - 1 - N.

When the relation holds and the eigenvalue annihilates the family's
accessory polynomial, the equation admits solutions given by bilateral
series depending on a free anchor xi (g1, g2) and, at four special
anchors, by finite sums of N + 1 Gauss-type q-hypergeometric terms
(g3..g6).  The forms come in two convergence regimes: g3/g4 for small
|x|, g5/g6 for large |x|.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Literal

from ._bilateral import weighted_bilateral
from .accessory import Poly, RecurrenceCoeffs, poly_roots, run_poly_recursion
from .errors import (
    ConvergenceError,
    ConvergenceHypothesisWarning,
    DomainError,
    NotARoot,
    PreconditionError,
)
from .qcore import DEFAULT_CONTROL, SeriesControl, phi_series, q_pochhammer_ratio
from .qheun_op import QHeunParams
from .qtransform import source_system

INTEGER_TOL = 1e-9

UnilateralName = Literal["g3", "g4", "g5", "g6"]
BilateralName = Literal["g1", "g2"]


@dataclass(frozen=True)
class Family1Setup:
    params: QHeunParams
    N: int
    lambda1: float
    lambda2: float
    recurrence: tuple[RecurrenceCoeffs, ...]  # indices 1..N+1
    coeff_polys: tuple[Poly, ...]  # c_0(E)..c_N(E)
    accessory: Poly
    roots: tuple[complex, ...]

    def coeff_values(self, E0: complex) -> list[complex]:
        """c_0(E0)..c_N(E0) from the stored coefficient polynomials."""
        return [poly(E0) for poly in self.coeff_polys]


def family1_recurrence(p: QHeunParams, N: int, n: int) -> RecurrenceCoeffs:
    """Family-specific recurrence triple; equals the generic one on the
    double-swapped source system."""
    if n < 1:
        raise DomainError("recurrence index must be >= 1")
    q = p.q
    lam = family1_lambda1(p)
    x = (
        p.t1
        * p.t2
        * q ** (-n + p.l1 + p.l2 + p.alpha2)
        * (1.0 - q ** n)
        * (1.0 - q ** (n - 1.0 + p.alpha1 + lam + p.beta))
    )
    y = (q ** (1.0 - n - p.beta) + q ** (n - 1.0 - N)) * q ** (-lam + p.h1 + 0.5) * p.t1 + (
        q ** (1.0 - n + p.alpha2) + q ** (n - 1.0 - N + p.alpha1)
    ) * q ** (p.l2 - 0.5) * p.t2
    z = (
        q ** (n - N - 2.0 + p.alpha1)
        * (1.0 - q ** (N - n + 1.0 + p.alpha2 + lam))
        * (1.0 - q ** (N - n + 2.0))
    )
    return RecurrenceCoeffs(n=n, x=x, y=y, z=z)


def family1_lambda1(p: QHeunParams) -> float:
    return (p.h1 + p.h2 - p.l1 - p.l2 - p.alpha1 - p.alpha2 - p.beta + 2.0) / 2.0


def family1_setup(p: QHeunParams, N: int) -> Family1Setup:
    """Validate the integer relation and assemble recurrence, polynomial, roots."""
    if N < 0:
        raise DomainError("N must be non-negative")
    if abs(p.h2 - (p.l2 - 1.0 - N)) > INTEGER_TOL:
        raise PreconditionError("h2 != l2 - 1 - N")
    lam1 = family1_lambda1(p)
    polys, cpoly = run_poly_recursion(
        lambda n: family1_recurrence(p, N, n), N, abs(p.t1 * p.t2)
    )
    return Family1Setup(
        params=p,
        N=N,
        lambda1=lam1,
        lambda2=lam1 + p.beta,
        recurrence=tuple(family1_recurrence(p, N, n) for n in range(1, N + 2)),
        coeff_polys=tuple(polys),
        accessory=cpoly,
        roots=tuple(poly_roots(cpoly)),
    )


def _require_root(setup: Family1Setup, E0: complex) -> None:
    c = setup.accessory
    scale = max(abs(v) for v in c.coeffs) * max(1.0, abs(E0)) ** c.degree
    if abs(c(E0)) > 1e-8 * scale:
        raise NotARoot(f"|c(E0)| = {abs(c(E0)):.3e} exceeds tolerance")


def family1_source_params(setup: Family1Setup) -> QHeunParams:
    """Parameters of the system the transform seeds solve (mu0 = 0)."""
    return source_system(setup.params, mu0=0.0)


def family1_seed(setup: Family1Setup, which: Literal["h1", "h2"], E0: complex) -> Callable[[complex], complex]:
    """Seed solutions of the source system feeding the q-integral transform.

    h1 pairs with kernel P1 to produce g1; h2 pairs with P2 to produce
    g2.  Both carry the polynomial-type factor with coefficients
    evaluated at the accessory root E0.
    """
    _require_root(setup, E0)
    src = family1_source_params(setup)
    q = src.q
    coeffs = setup.coeff_values(E0)
    t1 = src.t1

    def poly_part(s: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(coeffs):
            acc = acc * s + c
        return acc

    if which == "h1":
        expo = (src.h1 + src.h2 - src.l1 - src.l2 - src.alpha1 - src.alpha2 - src.beta + 2.0) / 2.0
        a = q ** (src.l1 - 0.5) * t1
        b = q ** (src.h1 - 0.5) * t1

        def h(s: complex) -> complex:
            s = complex(s)
            return s ** expo * q_pochhammer_ratio([s / a], [s / b], q) * poly_part(s)

        return h
    if which == "h2":
        expo = -src.alpha2 - setup.N

        def h(s: complex) -> complex:
            s = complex(s)
            ratio = q_pochhammer_ratio(
                [q ** (src.h1 + 0.5) * t1 / s], [q ** (src.l1 + 0.5) * t1 / s], q
            )
            return s ** expo * ratio * poly_part(s)

        return h
    raise DomainError("which must be 'h1' or 'h2'")


def _check_bilateral_hypotheses(setup: Family1Setup) -> None:
    p = setup.params
    if not (setup.lambda2 + p.alpha1 > 1.0 and setup.lambda1 + p.alpha2 > 1.0):
        raise PreconditionError(
            "bilateral forms need lambda2 + alpha1 > 1 and lambda1 + alpha2 > 1"
        )


def family1_bilateral(
    setup: Family1Setup,
    which: BilateralName,
    E0: complex,
    xi: complex,
    x: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Bilateral solution g1 or g2 at anchor xi and point x."""
    _require_root(setup, E0)
    _check_bilateral_hypotheses(setup)
    if xi == 0 or x == 0:
        raise DomainError("xi and x must be nonzero")
    p = setup.params
    q = p.q
    lam1 = setup.lambda1
    N = setup.N
    coeffs = setup.coeff_values(E0)
    xi = complex(xi)
    x = complex(x)
    if which == "g1":
        num = [q ** (lam1 - p.h1 + p.alpha1 - 0.5) * xi / p.t1, xi / x]
        den = [q ** (-p.l1 + 0.5) * xi / p.t1, q ** (lam1 + p.alpha1) * xi / x]
        weights = [xi ** (lam1 + p.alpha1 + p.beta + k) * coeffs[k] for k in range(N + 1)]
        rates = [q ** (lam1 + p.alpha1 + p.beta + k) for k in range(N + 1)]
        pref = (1.0 - q) * x ** (-p.alpha1) * q_pochhammer_ratio(den, num, q)
        return pref * weighted_bilateral(num, den, weights, rates, q, ctl)
    if which == "g2":
        num = [q ** (p.l1 + 0.5) * p.t1 / xi, q ** (-lam1 - p.alpha1 + 1.0) * x / xi]
        den = [q ** (-lam1 + p.h1 - p.alpha1 + 1.5) * p.t1 / xi, q * x / xi]
        weights = [xi ** (-lam1 - p.alpha2 - N + k) * coeffs[k] for k in range(N + 1)]
        rates = [q ** (lam1 + p.alpha2 + N - k) for k in range(N + 1)]
        pref = (1.0 - q) * x ** lam1 * q_pochhammer_ratio(den, num, q)
        return pref * weighted_bilateral(num, den, weights, rates, q, ctl)
    raise DomainError("which must be 'g1' or 'g2'")


def family1_domain(setup: Family1Setup, which: UnilateralName) -> tuple[float, float]:
    """|x| interval (lo, hi) on which the chosen unilateral form converges."""
    p = setup.params
    if which in ("g3", "g4"):
        return 0.0, p.q ** (p.h1 - 0.5) * abs(p.t1)
    if which in ("g5", "g6"):
        return p.q ** (p.l1 + 0.5) * abs(p.t1), float("inf")
    raise DomainError("which must be one of g3..g6")


def family1_residual_band(setup: Family1Setup, which: UnilateralName, shrink: float = 0.75) -> tuple[float, float]:
    """|x| band on which x/q, x and qx all stay inside the form's domain."""
    lo, hi = family1_domain(setup, which)
    q = setup.params.q
    if hi == float("inf"):
        lo_safe = lo / q
        return lo_safe / shrink, lo_safe / shrink ** 3
    hi_safe = hi * q
    return hi_safe * shrink ** 3, hi_safe * shrink


def family1_unilateral(
    setup: Family1Setup,
    which: UnilateralName,
    E0: complex,
    x: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Finite-sum solution g3..g6 at the point x, inside its domain."""
    _require_root(setup, E0)
    p = setup.params
    q = p.q
    lam1 = setup.lambda1
    lam2 = setup.lambda2
    N = setup.N
    x = complex(x)
    if x == 0:
        raise DomainError("x must be nonzero")
    lo, hi = family1_domain(setup, which)
    if not (lo < abs(x) < hi):
        raise ConvergenceError(f"|x| = {abs(x)} outside the ({lo:.4g}, {hi:.4g}) domain of {which}")
    if not (lam2 + p.alpha1 > 1.0 and lam1 + p.alpha2 > 1.0):
        warnings.warn(
            "evaluating a unilateral form outside the bilateral hypotheses",
            ConvergenceHypothesisWarning,
            stacklevel=2,
        )
    coeffs = setup.coeff_values(E0)
    if which in ("g3", "g4"):
        z = q ** (-p.h1 + 0.5) * x / p.t1
    else:
        z = q ** (p.l1 + 0.5) * p.t1 / x

    total = 0.0 + 0.0j
    for k in range(N + 1):
        if which == "g3":
            scalar = (q ** (-lam1 + p.h1 - p.alpha1 + 0.5) * p.t1) ** k
            ratio = q_pochhammer_ratio([q ** (-p.beta + 1.0 - k)], [q ** (lam1 + p.alpha2 + N - k)], q)
            series = phi_series(
                [q ** (lam1 + p.alpha1), q ** (lam1 + p.alpha2 + N - k)],
                [q ** (-p.beta + 1.0 - k)],
                q,
                z,
                ctl,
            )
        elif which == "g4":
            scalar = (q ** (-lam1 - p.alpha1 + 1.0) * x) ** k
            ratio = q_pochhammer_ratio([q ** (p.beta + k + 1.0)], [q ** (lam2 + p.alpha1 + k)], q)
            series = phi_series(
                [q ** (lam2 + p.alpha2 + N), q ** (lam2 + p.alpha1 + k)],
                [q ** (p.beta + k + 1.0)],
                q,
                z,
                ctl,
            )
        elif which == "g5":
            scalar = (q ** (p.l1 + 0.5) * p.t1) ** k
            ratio = q_pochhammer_ratio(
                [q ** (p.alpha1 - p.alpha2 - N + k + 1.0)], [q ** (lam2 + p.alpha1 + k)], q
            )
            series = phi_series(
                [q ** (lam1 + p.alpha1), q ** (lam2 + p.alpha1 + k)],
                [q ** (p.alpha1 - p.alpha2 - N + k + 1.0)],
                q,
                z,
                ctl,
            )
        else:
            scalar = x ** (k - N)
            ratio = q_pochhammer_ratio(
                [q ** (-p.alpha1 + p.alpha2 + 1.0 + N - k)], [q ** (lam1 + p.alpha2 + N - k)], q
            )
            series = phi_series(
                [q ** (lam2 + p.alpha2 + N), q ** (lam1 + p.alpha2 + N - k)],
                [q ** (-p.alpha1 + p.alpha2 + 1.0 + N - k)],
                q,
                z,
                ctl,
            )
        total += scalar * coeffs[k] * ratio * series

    if which == "g3":
        return x ** lam1 * total
    if which == "g4":
        return x ** lam2 * total
    if which == "g5":
        return x ** (-p.alpha1) * total
    return x ** (-p.alpha2) * total


def family1_special_anchor(setup: Family1Setup, which: UnilateralName, x: complex) -> complex:
    """Anchor value at which the matching bilateral form collapses to `which`.

    g5 and g3 arise at fixed anchors; g4 and g6 arise at anchors
    proportional to x.
    """
    p = setup.params
    q = p.q
    lam1 = setup.lambda1
    if which == "g5":
        return q ** (p.l1 + 0.5) * p.t1
    if which == "g4":
        return q ** (-lam1 - p.alpha1 + 1.0) * complex(x)
    if which == "g3":
        return q ** (-lam1 + p.h1 - p.alpha1 + 0.5) * p.t1
    if which == "g6":
        return complex(x)
    raise DomainError("which must be one of g3..g6")

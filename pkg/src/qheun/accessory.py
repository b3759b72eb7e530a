"""Accessory polynomials and local series solutions at the origin.

A formal solution x^lambda * sum c_n x^n of the eigen-equation forces
the coefficients through a three-term recurrence.  Truncating at degree
N and demanding consistency yields a monic polynomial of degree N + 1
in the eigenvalue; its roots are exactly the eigenvalues admitting
polynomial-type solutions (under the integer exponent condition) or an
apparent singularity at the origin (when beta = N + 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    DegenerateRecurrence,
    DomainError,
    NoConvergence,
    NotARoot,
    PreconditionError,
)
from .qheun_op import QHeunParams

INTEGER_TOL = 1e-9
DEGENERATE_REL = 1e-14


@dataclass(frozen=True)
class Poly:
    """Dense complex polynomial; coeffs[k] multiplies the k-th power."""

    coeffs: tuple[complex, ...]

    @staticmethod
    def of(values: Sequence[complex]) -> "Poly":
        cs = [complex(v) for v in values]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, value: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return Poly.of([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scaled(-1.0)

    def scaled(self, s: complex) -> "Poly":
        return Poly.of([s * c for c in self.coeffs])

    def times_linear(self, y: complex) -> "Poly":
        """Multiply by (X + y) where X is the polynomial variable."""
        shifted = [0j] + list(self.coeffs)
        for i, c in enumerate(self.coeffs):
            shifted[i] += y * c
        return Poly.of(shifted)


POLY_ONE = Poly((1.0 + 0.0j,))
POLY_ZERO = Poly((0.0 + 0.0j,))


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Triple (x_n, y_n, z_n) driving a three-term coefficient recurrence."""

    n: int
    x: complex
    y: complex
    z: complex


@dataclass(frozen=True)
class SeriesSolution:
    """A local solution x^exponent * sum coeffs[n] x^n, callable at x != 0."""

    exponent: float
    coeffs: tuple[complex, ...]

    def __call__(self, x: complex) -> complex:
        x = complex(x)
        acc = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return x ** self.exponent * acc


def exponent_at_origin(p: QHeunParams) -> float:
    """The smaller local exponent at x = 0; the other one is this plus beta."""
    return (p.h1 + p.h2 - p.l1 - p.l2 - p.alpha1 - p.alpha2 - p.beta + 2.0) / 2.0


def recurrence_coeffs(p: QHeunParams, n: int) -> RecurrenceCoeffs:
    """Recurrence data of the local series at the origin, index n >= 1."""
    if n < 1:
        raise DomainError("recurrence index must be >= 1")
    q = p.q
    lam = exponent_at_origin(p)
    x = (
        p.t1
        * p.t2
        * q ** (1.0 - n + p.h1 + p.h2 - lam)
        * (1.0 - q ** n)
        * (1.0 - q ** (n - p.beta))
    )
    y = q ** (1.5 - n - lam) * (q ** p.h1 * p.t1 + q ** p.h2 * p.t2) + q ** (
        n - 1.5 + lam + p.alpha1 + p.alpha2
    ) * (q ** p.l1 * p.t1 + q ** p.l2 * p.t2)
    z = (
        q ** (2.0 - n - lam)
        * (1.0 - q ** (n - 2.0 + lam + p.alpha1))
        * (1.0 - q ** (n - 2.0 + lam + p.alpha2))
    )
    return RecurrenceCoeffs(n=n, x=x, y=y, z=z)


def run_poly_recursion(
    triple: Callable[[int], RecurrenceCoeffs],
    N: int,
    scale: float,
) -> tuple[list[Poly], Poly]:
    """Coefficient polynomials c_0..c_N and the consistency polynomial.

    c_0 = 1 and x_n c_n = c_{n-1}(E + y_n) - c_{n-2} z_n; the returned
    consistency polynomial is x_1..x_N [c_N (E + y_{N+1}) - c_{N-1} z_{N+1}],
    monic of degree N + 1.  Raises DegenerateRecurrence when some x_n
    with n <= N is numerically zero relative to the supplied scale.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    polys = [POLY_ONE]
    prev = POLY_ZERO
    xs_product = 1.0 + 0.0j
    for n in range(1, N + 1):
        rc = triple(n)
        if abs(rc.x) < DEGENERATE_REL * scale:
            raise DegenerateRecurrence(f"leading coefficient x_{n} vanishes")
        nxt = (polys[-1].times_linear(rc.y) - prev.scaled(rc.z)).scaled(1.0 / rc.x)
        prev = polys[-1]
        polys.append(nxt)
        xs_product *= rc.x
    tail = triple(N + 1)
    closing = polys[-1].times_linear(tail.y) - prev.scaled(tail.z)
    return polys, closing.scaled(xs_product)


def coefficient_polys(p: QHeunParams, N: int) -> list[Poly]:
    """Eigenvalue polynomials c_0(E)..c_N(E) of the local series coefficients."""
    polys, _ = run_poly_recursion(lambda n: recurrence_coeffs(p, n), N, abs(p.t1 * p.t2))
    return polys


def accessory_poly(p: QHeunParams, N: int) -> Poly:
    """Monic degree-(N+1) accessory polynomial, built from the recurrence."""
    _, c = run_poly_recursion(lambda n: recurrence_coeffs(p, n), N, abs(p.t1 * p.t2))
    return c


def gap_subsets(N: int) -> list[list[int]]:
    """Subsets of {1..N} whose consecutive elements differ by at least 2."""
    out: list[list[int]] = [[]]
    for i in range(1, N + 1):
        out.extend(s + [i] for s in out if not s or i - s[-1] >= 2)
    return out


def expand_accessory_poly(triple: Callable[[int], RecurrenceCoeffs], N: int) -> Poly:
    """Closed-form expansion of the consistency polynomial.

    Sums (-1)^k x_{i_1} z_{i_1+1} ... x_{i_k} z_{i_k+1} times the
    product of (E + y_j) over the untouched indices j in {1..N+1},
    over all index sets with gaps >= 2 (the empty set included).  No
    division by x_n occurs, so degenerate recurrences are fine here.
    """
    data = {n: triple(n) for n in range(1, N + 2)}
    total = POLY_ZERO
    for subset in gap_subsets(N):
        covered = set()
        weight = 1.0 + 0.0j
        for i in subset:
            weight *= data[i].x * data[i + 1].z
            covered.update((i, i + 1))
        if len(subset) % 2:
            weight = -weight
        term = Poly((weight,))
        for j in range(1, N + 2):
            if j not in covered:
                term = term.times_linear(data[j].y)
        total = total + term
    return total


def accessory_poly_expanded(p: QHeunParams, N: int) -> Poly:
    """Accessory polynomial via the direct expansion (division-free oracle)."""
    if N < 0:
        raise DomainError("N must be non-negative")
    return expand_accessory_poly(lambda n: recurrence_coeffs(p, n), N)


def _horner2(coeffs: Sequence[complex], x: complex) -> tuple[complex, complex, float]:
    """Value, derivative and a roundoff bound on the value at x."""
    p = coeffs[-1]
    dp = 0.0 + 0.0j
    err = abs(p)
    ax = abs(x)
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
        err = err * ax + abs(p)
    return p, dp, err * 1e-15


def poly_roots(poly: Poly, tol: float = 1e-13, max_iter: int = 200) -> list[complex]:
    """All complex roots via simultaneous (Aberth-style) iteration.

    Initial guesses sit on a circle of radius 1 + max monic-coefficient
    magnitude; a root freezes once its update is below tol or its value
    drops under the evaluation roundoff bound; each root is
    Newton-polished afterwards.  Raises NoConvergence when the
    iteration budget runs out or a residual certificate fails.
    """
    cs = list(Poly.of(poly.coeffs).coeffs)
    deg = len(cs) - 1
    if deg < 1:
        raise DomainError("root finding needs degree >= 1")
    lead = cs[-1]
    monic = [c / lead for c in cs]
    radius = 1.0 + max(abs(c) for c in monic[:-1])
    z = [
        radius * cmath.exp(2j * math.pi * (k + 0.35) / deg + 0.45j)
        for k in range(deg)
    ]
    for _ in range(max_iter):
        done = True
        new = list(z)
        for k in range(deg):
            pv, dv, noise = _horner2(monic, z[k])
            if abs(pv) <= noise:
                continue
            newton = pv / dv if dv != 0 else pv
            rep = sum(1.0 / (z[k] - z[j]) for j in range(deg) if j != k)
            denom = 1.0 - newton * rep
            step = newton / denom if denom != 0 else newton
            new[k] = z[k] - step
            if abs(step) > tol * (1.0 + abs(new[k])):
                done = False
        z = new
        if done:
            break
    else:
        raise NoConvergence("root iteration exhausted its budget")
    for k in range(deg):
        for _ in range(3):
            pv, dv, noise = _horner2(monic, z[k])
            if dv == 0 or abs(pv) <= noise:
                break
            z[k] = z[k] - pv / dv
    scale = max(abs(c) for c in cs)
    for r in z:
        if abs(poly(r)) / (scale * max(1.0, abs(r)) ** deg) > 1e-10:
            raise NoConvergence(f"root certificate failed at {r!r}")
    return z


def series_coefficients(
    p: QHeunParams,
    E: complex,
    M: int,
    free_coeff: complex | None = None,
) -> list[complex]:
    """Numeric local-series coefficients c_0..c_M at a fixed eigenvalue.

    When beta equals an integer n0 in {1..M} (within tolerance) the
    leading recurrence factor vanishes at n0; the relation must then be
    consistent and the undetermined coefficient is set to free_coeff.
    With free_coeff None such a degenerate index raises instead.
    """
    if M < 1:
        raise DomainError("M must be at least 1")
    scale = abs(p.t1 * p.t2)
    coeffs: list[complex] = [1.0 + 0.0j, 0.0 + 0.0j]  # c_0, c_{-1} sentinel
    out = [1.0 + 0.0j]
    c_prev2 = 0.0 + 0.0j
    c_prev1 = 1.0 + 0.0j
    for n in range(1, M + 1):
        rc = recurrence_coeffs(p, n)
        rhs = c_prev1 * (complex(E) + rc.y) - c_prev2 * rc.z
        if abs(rc.x) < DEGENERATE_REL * scale:
            consistency_scale = max(abs(c_prev1 * (complex(E) + rc.y)), abs(c_prev2 * rc.z), 1e-300)
            if abs(rhs) / consistency_scale > 1e-9:
                raise DegenerateRecurrence(
                    f"recurrence inconsistent at n = {n}: no series with c_0 = 1 exists"
                )
            if free_coeff is None:
                raise DegenerateRecurrence(
                    f"coefficient c_{n} is undetermined; pass free_coeff to choose it"
                )
            c_n = complex(free_coeff)
        else:
            c_n = rhs / rc.x
        out.append(c_n)
        c_prev2, c_prev1 = c_prev1, c_n
    return out


def power_series_solution(
    p: QHeunParams,
    E: complex,
    M: int,
    free_coeff: complex | None = None,
) -> SeriesSolution:
    """Truncated local series solution with c_0 = 1 and M + 1 coefficients."""
    coeffs = series_coefficients(p, E, M, free_coeff=free_coeff)
    return SeriesSolution(exponent=exponent_at_origin(p), coeffs=tuple(coeffs))


def polynomial_degree(p: QHeunParams) -> tuple[int, int] | None:
    """(N, which_alpha) if -lambda - alpha_i is a non-negative integer, else None."""
    lam = exponent_at_origin(p)
    for which, alpha in ((1, p.alpha1), (2, p.alpha2)):
        val = -lam - alpha
        n = round(val)
        if n >= 0 and abs(val - n) < INTEGER_TOL:
            return n, which
    return None


def polynomial_solution(p: QHeunParams, E0: complex, N: int) -> SeriesSolution:
    """Degree-N polynomial-type solution at an accessory root E0.

    Requires -lambda - alpha_i = N for one of the alphas (within 1e-9),
    beta away from {1..N}, and E0 to annihilate the accessory
    polynomial; raises PreconditionError / NotARoot accordingly.
    """
    hit = polynomial_degree(p)
    if hit is None or hit[0] != N:
        raise PreconditionError(f"-lambda - alpha is not the integer {N}")
    for n in range(1, N + 1):
        if abs(p.beta - n) < INTEGER_TOL:
            raise PreconditionError(f"beta = {n} degenerates the recurrence")
    c = accessory_poly(p, N)
    scale = max(abs(v) for v in c.coeffs) * max(1.0, abs(E0)) ** c.degree
    if abs(c(E0)) > 1e-8 * scale:
        raise NotARoot(f"|c(E0)| = {abs(c(E0)):.3e} exceeds tolerance")
    if N == 0:
        coeffs: list[complex] = [1.0 + 0.0j]
    else:
        coeffs = series_coefficients(p, E0, N)
    return SeriesSolution(exponent=exponent_at_origin(p), coeffs=tuple(coeffs))


def apparent_singularity_check(p: QHeunParams, E: complex, N: int) -> bool:
    """Whether the origin is an apparent singularity at eigenvalue E.

    Requires beta = N + 1 (within 1e-9).  Runs the recurrence up to
    c_N and tests the closing relation at index N + 1, whose leading
    factor vanishes identically; the relation holds exactly when E is
    a root of the accessory polynomial.
    """
    if abs(p.beta - (N + 1)) > INTEGER_TOL:
        raise PreconditionError("beta != N+1")
    if N == 0:
        c_prev1: complex = 1.0 + 0.0j
        c_prev2: complex = 0.0 + 0.0j
    else:
        coeffs = series_coefficients(p, E, N)
        c_prev1 = coeffs[N]
        c_prev2 = coeffs[N - 1]
    tail = recurrence_coeffs(p, N + 1)
    left = -c_prev1 * (complex(E) + tail.y) + c_prev2 * tail.z
    # Scale measured before the cancellation, so exact roots score ~eps.
    scale = max(
        abs(c_prev1) * max(abs(E), abs(tail.y)), abs(c_prev2 * tail.z), 1e-300
    )
    return abs(left) / scale < 1e-9

"""q-series primitives with explicit convergence control.

Conventions fixed for the whole package:

* the base q is a real number strictly between 0 and 1;
* general powers use the principal branch, and because q > 0 the
  identity (q**n * v)**c == q**(n*c) * v**c holds exactly, which keeps
  every series rewrite used elsewhere branch-consistent;
* infinite products are truncated once the remaining factors differ
  from 1 by less than ~1e-17, i.e. below double-precision resolution,
  with no tail correction.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConvergenceError, DomainError, PoleError

# Factors (1 - a q^k) with |a q^k| below this are numerically 1.
PRODUCT_CUTOFF = 1e-17
# Denominator factors closer to zero than this (relative) count as poles.
POLE_CUTOFF = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for infinite sums.

    A one-sided sum stops once ``divergence_window`` consecutive terms
    fall below ``rel_tol`` times the running partial sum, and is
    declared divergent if terms fail to decrease for that many
    consecutive indices or ``max_terms`` is exhausted.
    """

    rel_tol: float = 1e-15
    max_terms: int = 10000
    divergence_window: int = 50

    def __post_init__(self) -> None:
        if self.rel_tol <= 0.0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.divergence_window < 1:
            raise DomainError("divergence_window must be at least 1")


DEFAULT_CONTROL = SeriesControl()


def check_q(q: float) -> float:
    """Validate the series base; q must lie strictly inside (0, 1)."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"base q must satisfy 0 < q < 1, got {q!r}")
    return q


def q_pochhammer(a: complex, q: float, n) -> complex:
    """Shifted factorial (a; q)_n for integer or infinite n.

    n = 0 is the empty product 1; positive n gives the finite product
    of (1 - a q^k) over k < n; negative n uses the reciprocal
    convention 1 / (a q^n; q)_{-n}; n = math.inf gives the truncated
    infinite product.

    Raises PoleError when a negative-n value requires division by zero.
    """
    check_q(q)
    a = complex(a)
    if n is math.inf or (isinstance(n, float) and math.isinf(n) and n > 0):
        prod = 1.0 + 0.0j
        ak = a
        for _ in range(DEFAULT_CONTROL.max_terms):
            if abs(ak) < PRODUCT_CUTOFF or prod == 0.0:
                break
            prod *= 1.0 - ak
            ak *= q
        return prod
    if not isinstance(n, (int,)):
        raise DomainError(f"n must be an integer or math.inf, got {n!r}")
    if n == 0:
        return 1.0 + 0.0j
    if n > 0:
        prod = 1.0 + 0.0j
        ak = a
        for _ in range(n):
            prod *= 1.0 - ak
            ak *= q
        return prod
    # (a; q)_n = 1 / (a q^n; q)_{-n}
    denom = 1.0 + 0.0j
    ak = a * q ** n
    for _ in range(-n):
        denom *= 1.0 - ak
        ak *= q
    if denom == 0.0:
        raise PoleError(f"(a; q)_n has a pole at a={a!r}, n={n}")
    return 1.0 / denom


def inv_q_pochhammer(q: float, k: int) -> complex:
    """1 / (q; q)_k, extended by the convention that the value is 0 for k < 0."""
    check_q(q)
    if k < 0:
        return 0.0 + 0.0j
    return 1.0 / q_pochhammer(q, q, k)


def q_pochhammer_ratio(num: Sequence[complex], den: Sequence[complex], q: float) -> complex:
    """prod_i (num_i; q)_inf / prod_j (den_j; q)_inf, formed level by level.

    Multiplications and divisions are interleaved within each level so
    that balanced numerator/denominator lists with large arguments
    cancel before they can overflow.  Raises PoleError when a
    denominator factor vanishes.
    """
    check_q(q)
    a = [complex(v) for v in num]
    b = [complex(v) for v in den]
    value = 1.0 + 0.0j
    for _ in range(DEFAULT_CONTROL.max_terms):
        live = False
        for i in range(max(len(a), len(b))):
            if i < len(a):
                x = a[i]
                if abs(x) >= PRODUCT_CUTOFF:
                    live = True
                value *= 1.0 - x
            if i < len(b):
                y = b[i]
                if abs(y) >= PRODUCT_CUTOFF:
                    live = True
                f = 1.0 - y
                if abs(f) < POLE_CUTOFF * (1.0 + abs(y)):
                    raise PoleError(f"denominator factor (1 - {y!r}) vanishes")
                value /= f
        if not live:
            return value
        a = [x * q for x in a]
        b = [y * q for y in b]
    raise ConvergenceError("infinite product did not settle within max_terms levels")


def theta(t: complex, q: float) -> complex:
    """Triple-product theta value (t; q)_inf (q/t; q)_inf (q; q)_inf."""
    check_q(q)
    t = complex(t)
    if t == 0:
        raise DomainError("theta is undefined at t = 0")
    return (
        q_pochhammer(t, q, math.inf)
        * q_pochhammer(q / t, q, math.inf)
        * q_pochhammer(q, q, math.inf)
    )


def _termination_index(params: Sequence[complex], q: float) -> int | None:
    """Smallest m >= 0 with some parameter equal to q**(-m), else None."""
    best: int | None = None
    for a in params:
        if a == 0:
            continue
        if abs(a.imag) > 1e-12 * abs(a):
            continue
        ar = a.real
        if ar <= 0.0:
            continue
        mu = math.log(ar) / math.log(q)
        m = round(mu)
        if m <= 0 and abs(mu - m) < 1e-9:
            mm = -m
            best = mm if best is None else min(best, mm)
    return best


def phi_series(
    upper: Sequence[complex],
    lower: Sequence[complex],
    q: float,
    z: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Unilateral basic hypergeometric sum with r upper and r-1 lower parameters.

    Terms are (a_1;q)_n ... (a_r;q)_n / ((q;q)_n (b_1;q)_n ...) * z^n.
    A series terminates when some upper parameter equals q**(-m) for a
    non-negative integer m (the partial sum through n = m is then
    returned exactly); otherwise |z| < 1 is required.

    Raises ConvergenceError for a non-terminating series with |z| >= 1
    and PoleError when a lower-parameter factor vanishes before
    termination.
    """
    check_q(q)
    ups = [complex(a) for a in upper]
    los = [complex(b) for b in lower]
    if len(ups) != len(los) + 1:
        raise DomainError("need exactly one more upper than lower parameter")
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j
    stop = _termination_index(ups, q)
    if stop is None and abs(z) >= 1.0:
        raise ConvergenceError(f"non-terminating series with |z| = {abs(z)} >= 1")

    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    qn = 1.0  # q**n
    small_run = 0
    for n in range(ctl.max_terms):
        total += term
        if stop is not None and n == stop:
            return total
        ratio = z
        for a in ups:
            ratio *= 1.0 - a * qn
        den = 1.0 - q * qn
        for b in los:
            f = 1.0 - b * qn
            if abs(f) < POLE_CUTOFF * (1.0 + abs(b * qn)):
                raise PoleError(f"lower parameter {b!r} hits a pole at index {n}")
            den *= f
        term = term * ratio / den
        qn *= q
        if stop is None:
            if abs(term) <= ctl.rel_tol * max(abs(total), _TINY):
                small_run += 1
                if small_run >= ctl.divergence_window:
                    return total
            else:
                small_run = 0
    raise ConvergenceError("series did not reach the stopping rule within max_terms")


def _one_sided_sum(term: Callable[[int], complex], start: int, step: int, ctl: SeriesControl) -> complex:
    total = 0.0 + 0.0j
    small_run = 0
    growth_run = 0
    prev = math.inf
    n = start
    for _ in range(ctl.max_terms):
        t = complex(term(n))
        total += t
        mag = abs(t)
        if mag <= ctl.rel_tol * max(abs(total), _TINY):
            small_run += 1
            growth_run = 0
            if small_run >= ctl.divergence_window:
                return total
        else:
            small_run = 0
            if mag >= prev:
                growth_run += 1
                if growth_run >= ctl.divergence_window:
                    raise ConvergenceError(f"terms fail to decay near n = {n}")
            else:
                growth_run = 0
        prev = mag
        n += step
    raise ConvergenceError("one-sided tail did not converge within max_terms")


def bilateral_sum(term: Callable[[int], complex], ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Two-sided sum of term(n) over all integers n.

    Evaluated as two independent one-sided sums (n >= 0 and n <= -1),
    each truncated by the rel_tol / divergence_window rule.  Raises
    ConvergenceError if either tail fails to decay.
    """
    plus = _one_sided_sum(term, 0, +1, ctl)
    minus = _one_sided_sum(term, -1, -1, ctl)
    return plus + minus


def q_spiral(xi: complex, q: float) -> Callable[[int], complex]:
    """Cached map n -> q**n * xi, filled incrementally to avoid pow overflow."""
    cache = {0: complex(xi)}
    lo = [0]
    hi = [0]

    def point(n: int) -> complex:
        while hi[0] < n:
            cache[hi[0] + 1] = cache[hi[0]] * q
            hi[0] += 1
        while lo[0] > n:
            cache[lo[0] - 1] = cache[lo[0]] / q
            lo[0] -= 1
        return cache[n]

    return point


def jackson_integral(
    f: Callable[[complex], complex],
    xi: complex,
    q: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """q-integral of f along the spiral {q^n xi}: (1-q) sum_n q^n xi f(q^n xi)."""
    check_q(q)
    if xi == 0:
        raise DomainError("the anchor point xi must be nonzero")
    spiral = q_spiral(xi, q)

    def term(n: int) -> complex:
        s = spiral(n)
        return s * f(s)

    return (1.0 - q) * bilateral_sum(term, ctl)

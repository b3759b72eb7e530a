"""q-integral transforms between q-Heun systems, and gauge transforms.

A solution h of a source system maps to a solution g of a target
system through a Jackson integral against one of two kernels.  The
target parameters follow a rigid affine map of the source exponents;
the transformed function satisfies the target eigen-equation up to two
boundary terms proportional to the spiral limits C1 and C2 of h.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Literal

from .errors import DomainError, NoLimit, PreconditionError
from .qcore import (
    DEFAULT_CONTROL,
    SeriesControl,
    jackson_integral,
    q_pochhammer_ratio,
    q_spiral,
    theta,
)
from .qheun_op import QHeunParams

KernelName = Literal["P1", "P2"]


@dataclass(frozen=True)
class TransformSpec:
    """Data of one q-integral transform.

    source holds the parameters of the system the seed solves; mu0 and
    the kernel choice select the transform; alpha1 is the free exponent
    of the target system.  xi anchors the integration spiral; with
    xi_proportional the anchor is xi * x per evaluation point.
    """

    source: QHeunParams
    mu0: float
    xi: complex
    kernel: KernelName = "P1"
    alpha1: float = 0.0
    xi_proportional: bool = False

    def __post_init__(self) -> None:
        if self.xi == 0:
            raise DomainError("xi (or its proportionality factor) must be nonzero")
        if self.kernel not in ("P1", "P2"):
            raise DomainError("kernel must be 'P1' or 'P2'")


@dataclass(frozen=True)
class TransformResult:
    """Target system, mapped eigenvalue and (optionally) boundary data."""

    target: QHeunParams
    E_target: complex
    C1: complex | None = None
    C2: complex | None = None
    k1: Callable[[complex], complex] | None = None
    k2: Callable[[complex], complex] | None = None


def source_chi(src: QHeunParams) -> float:
    """Shift exponent computed from the source system."""
    return (src.l1 + src.l2 - src.h1 - src.h2 - src.alpha1 + src.alpha2 - src.beta) / 2.0


def target_chi(tgt: QHeunParams) -> float:
    """The same shift exponent computed from the target system."""
    return (tgt.h1 + tgt.h2 - tgt.l1 - tgt.l2 + tgt.alpha1 - tgt.alpha2 - tgt.beta) / 2.0


def seed_weight_exponent(src: QHeunParams) -> float:
    """Power of s dividing the seed inside the transform integrand."""
    return (src.h1 + src.h2 - src.l1 - src.l2 - src.alpha1 - src.alpha2 + src.beta + 2.0) / 2.0


def param_map(spec: TransformSpec, E_source: complex) -> TransformResult:
    """Target parameters and eigenvalue induced by the transform."""
    src = spec.source
    chi = source_chi(src)
    mu0 = spec.mu0
    a1 = spec.alpha1
    target = QHeunParams(
        h1=src.h1 + mu0 + chi,
        h2=src.h2 + mu0 + chi,
        l1=src.l1 + mu0,
        l2=src.l2 + mu0,
        alpha1=a1,
        alpha2=a1 - src.alpha1 + src.alpha2 - chi,
        beta=-src.beta - chi,
        t1=src.t1,
        t2=src.t2,
        q=src.q,
    )
    E_target = src.q ** (mu0 + a1 - src.alpha1) * complex(E_source)
    return TransformResult(target=target, E_target=E_target)


def source_system(target: QHeunParams, mu0: float = 0.0, alpha1_source: float | None = None) -> QHeunParams:
    """Invert the parameter map: source system producing the given target.

    alpha1_source is the free exponent of the source; it defaults to
    the target's alpha1 (the choice under which the eigenvalue is
    unchanged when mu0 = 0).
    """
    chi = target_chi(target)
    a1p = target.alpha1 if alpha1_source is None else alpha1_source
    return replace(
        target,
        h1=target.h1 - mu0 - chi,
        h2=target.h2 - mu0 - chi,
        l1=target.l1 - mu0,
        l2=target.l2 - mu0,
        alpha1=a1p,
        alpha2=a1p - target.alpha1 + target.alpha2 + chi,
        beta=-target.beta - chi,
    )


def source_eigenvalue(target: QHeunParams, E_target: complex, mu0: float = 0.0, alpha1_source: float | None = None) -> complex:
    """Eigenvalue of the inverted system matching source_system."""
    a1p = target.alpha1 if alpha1_source is None else alpha1_source
    return target.q ** (-mu0 + a1p - target.alpha1) * complex(E_target)


def kernel_value(spec: TransformSpec, x: complex, s: complex) -> complex:
    """Transform kernel at (x, s); both arguments must be nonzero."""
    if x == 0 or s == 0:
        raise DomainError("kernel arguments must be nonzero")
    q = spec.source.q
    mu0 = spec.mu0
    mu = mu0 + 1.0 + source_chi(spec.source)
    if spec.kernel == "P1":
        v = s / x
        return q_pochhammer_ratio([q ** mu * v], [q ** mu0 * v], q)
    w = x / s
    return w ** (mu - mu0) * q_pochhammer_ratio(
        [q ** (-mu0 + 1.0) * w], [q ** (-mu + 1.0) * w], q
    )


def transform(
    spec: TransformSpec,
    h: Callable[[complex], complex],
    E_source: complex,
    x: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Jackson-integral image of the seed h, evaluated at x.

    Returns x^(-alpha1) times the q-integral over s of
    s^(-weight) h(s) K(x, s) along the spiral anchored at xi
    (or xi * x in proportional mode).  E_source is accepted for
    interface symmetry with param_map; the integral itself does not
    depend on it.
    """
    del E_source
    src = spec.source
    sigma = seed_weight_exponent(src)
    anchor = spec.xi * x if spec.xi_proportional else spec.xi

    def integrand(s: complex) -> complex:
        return s ** (-sigma) * h(s) * kernel_value(spec, x, s)

    return complex(x) ** (-spec.alpha1) * jackson_integral(integrand, anchor, src.q, ctl)


def _spiral_limit(
    values: Callable[[int], complex],
    ctl: SeriesControl,
    zero_abs: float = 1e-12,
) -> complex:
    """Limit of a sequence along the spiral index.

    Declares convergence when three successive values agree to rel_tol,
    zero when magnitudes decay monotonically below zero_abs; raises
    NoLimit otherwise.
    """
    window: list[complex] = []
    decay_run = 0
    prev_mag = None
    for k in range(ctl.max_terms):
        v = complex(values(k))
        mag = abs(v)
        if prev_mag is not None and mag < zero_abs and mag <= prev_mag:
            decay_run += 1
            if decay_run >= 3:
                return 0.0 + 0.0j
        else:
            decay_run = 0
        prev_mag = mag
        window.append(v)
        if len(window) > 3:
            window.pop(0)
        if len(window) == 3:
            scale = max(abs(w) for w in window)
            if scale > 0 and all(
                abs(window[i + 1] - window[i]) <= ctl.rel_tol * scale for i in range(2)
            ):
                return window[-1]
    raise NoLimit("spiral sequence neither settled nor decayed to zero")


def boundary_limits(
    spec: TransformSpec,
    h: Callable[[complex], complex],
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> tuple[complex, complex]:
    """Numerical estimates of the two spiral limits (C1, C2) of the seed.

    C1 follows h(s) / s^weight as s runs down the spiral to 0, C2
    follows h(s) * s^alpha1' as s runs outward.  Requires a fixed xi.
    """
    if spec.xi_proportional:
        raise PreconditionError("boundary limits need a fixed xi, not a proportional one")
    src = spec.source
    sigma = seed_weight_exponent(src)
    spiral = q_spiral(spec.xi, src.q)

    def inward(k: int) -> complex:
        s = spiral(k)
        return h(s) * s ** (-sigma)

    def outward(k: int) -> complex:
        s = spiral(-k)
        return h(s) * s ** (src.alpha1)

    return _spiral_limit(inward, ctl), _spiral_limit(outward, ctl)


def boundary_terms(spec: TransformSpec, C1: complex, C2: complex, x: complex) -> tuple[complex, complex]:
    """Boundary contributions (k1(x), k2(x)) for the chosen kernel.

    The transformed function g satisfies
    Op g = E g + (1 - q)(k2 - k1) on the target system.
    """
    if x == 0:
        raise DomainError("boundary terms are singular at x = 0")
    src = spec.source
    q = src.q
    chi = source_chi(src)
    mu0 = spec.mu0
    a1 = spec.alpha1
    xi = spec.xi * x if spec.xi_proportional else spec.xi
    x = complex(x)
    shared1 = q ** (mu0 + a1 + src.h1 + src.h2 + chi) * (q ** src.beta - 1.0) * src.t1 * src.t2
    shared2 = q ** (mu0 + a1) * (q ** (src.alpha2 - src.alpha1) - 1.0)
    if spec.kernel == "P1":
        k1 = C1 * x ** (-a1) * shared1
        k2 = (
            C2
            * x ** (-a1)
            * theta(q ** (-mu0 - chi) * x / xi, q)
            / theta(q ** (-mu0 + 1.0) * x / xi, q)
            * xi ** (chi + 1.0)
            * shared2
        )
        return k1, k2
    k1 = (
        C1
        * x ** (-a1 + chi + 1.0)
        * xi ** (-chi - 1.0)
        * theta(q ** (-mu0 + 1.0) * x / xi, q)
        / theta(q ** (-mu0 - chi) * x / xi, q)
        * shared1
    )
    k2 = C2 * x ** (-a1 + chi + 1.0) * shared2
    return k1, k2


def transform_result(
    spec: TransformSpec,
    h: Callable[[complex], complex],
    E_source: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> TransformResult:
    """param_map plus numerically estimated boundary data for the seed."""
    base = param_map(spec, E_source)
    C1, C2 = boundary_limits(spec, h, ctl)

    def k1(x: complex) -> complex:
        return boundary_terms(spec, C1, C2, x)[0]

    def k2(x: complex) -> complex:
        return boundary_terms(spec, C1, C2, x)[1]

    return TransformResult(target=base.target, E_target=base.E_target, C1=C1, C2=C2, k1=k1, k2=k2)


def gauge_transform(
    p: QHeunParams,
    f: Callable[[complex], complex],
    which: Literal["g1", "g2"] = "g1",
    index: int = 1,
) -> Callable[[complex], complex]:
    """Prefactor map sending solutions of the index-swapped system to p.

    f must solve the system with (h_i, l_i) interchanged for the chosen
    index i; the returned function solves the system p with the same
    eigenvalue.  The two variants differ by a quasi-constant factor.
    """
    if index not in (1, 2):
        raise DomainError("index must be 1 or 2")
    if which not in ("g1", "g2"):
        raise DomainError("which must be 'g1' or 'g2'")
    q = p.q
    t = p.t1 if index == 1 else p.t2
    h = p.h1 if index == 1 else p.h2
    l = p.l1 if index == 1 else p.l2

    if which == "g1":

        def g(x: complex) -> complex:
            x = complex(x)
            pref = q_pochhammer_ratio([q ** (h + 0.5) * t / x], [q ** (l + 0.5) * t / x], q)
            return pref * f(x)

        return g

    def g(x: complex) -> complex:
        x = complex(x)
        pref = q_pochhammer_ratio([x / (q ** (l - 0.5) * t)], [x / (q ** (h - 0.5) * t)], q)
        return x ** (h - l) * pref * f(x)

    return g


def swapped_params(p: QHeunParams, index: int = 1) -> QHeunParams:
    """The system solved by gauge-transform seeds: h_i and l_i interchanged."""
    if index == 1:
        return replace(p, h1=p.l1, l1=p.h1)
    if index == 2:
        return replace(p, h2=p.l2, l2=p.h2)
    raise DomainError("index must be 1 or 2")

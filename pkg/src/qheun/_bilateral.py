"""Two-sided series with shifted-factorial coefficient ratios.

Both solution families evaluate sums of the form

    sum_n  [ prod_i (u_i; q)_n / prod_j (v_j; q)_n ] * sum_k w_k r_k^n

with a finite list of weights w_k and geometric rates r_k.  The
coefficient ratio is tracked incrementally in both directions, which
needs O(1) work per term and never forms an individual shifted
factorial with a huge argument.
"""

from __future__ import annotations

from typing import Sequence

from .errors import PoleError
from .qcore import DEFAULT_CONTROL, POLE_CUTOFF, SeriesControl, bilateral_sum


class _RatioTerms:
    """term(n) callable for bilateral_sum, filled from n = 0 outwards."""

    def __init__(
        self,
        num: Sequence[complex],
        den: Sequence[complex],
        weights: Sequence[complex],
        rates: Sequence[complex],
        q: float,
    ) -> None:
        self.num = [complex(u) for u in num]
        self.den = [complex(v) for v in den]
        self.weights = [complex(w) for w in weights]
        self.rates = [complex(r) for r in rates]
        self.q = q
        one = 1.0 + 0.0j
        self.coeff = {0: one}
        self.powers = {0: [one] * len(self.rates)}
        self.qpow = {0: 1.0}
        self.lo = 0
        self.hi = 0

    def _step_up(self) -> None:
        n = self.hi
        qn = self.qpow[n]
        a = self.coeff[n]
        if a != 0:
            for u in self.num:
                a *= 1.0 - u * qn
            for v in self.den:
                f = 1.0 - v * qn
                if abs(f) < POLE_CUTOFF * (1.0 + abs(v * qn)):
                    raise PoleError(f"coefficient ratio has a pole at index {n + 1}")
                a /= f
        self.coeff[n + 1] = a
        self.powers[n + 1] = [p * r for p, r in zip(self.powers[n], self.rates)]
        self.qpow[n + 1] = qn * self.q
        self.hi = n + 1

    def _step_down(self) -> None:
        n = self.lo
        qn1 = self.qpow[n] / self.q  # q**(n-1)
        a = self.coeff[n]
        if a != 0:
            for v in self.den:
                a *= 1.0 - v * qn1
            for u in self.num:
                f = 1.0 - u * qn1
                if abs(f) < POLE_CUTOFF * (1.0 + abs(u * qn1)):
                    raise PoleError(f"coefficient ratio has a pole at index {n - 1}")
                a /= f
        self.coeff[n - 1] = a
        self.powers[n - 1] = [p / r for p, r in zip(self.powers[n], self.rates)]
        self.qpow[n - 1] = qn1
        self.lo = n - 1

    def __call__(self, n: int) -> complex:
        while self.hi < n:
            self._step_up()
        while self.lo > n:
            self._step_down()
        pw = self.powers[n]
        return self.coeff[n] * sum(w * pk for w, pk in zip(self.weights, pw))


def weighted_bilateral(
    num: Sequence[complex],
    den: Sequence[complex],
    weights: Sequence[complex],
    rates: Sequence[complex],
    q: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> complex:
    """Evaluate the two-sided sum described in the module docstring."""
    return bilateral_sum(_RatioTerms(num, den, weights, rates, q), ctl)

"""Multivariate gamma and beta normalizing constants, in log scale.

Gamma_m[a] uses the product-of-scalar-gammas identity
    log Gamma_m[a] = m(m-1)/4 * log(pi) + sum_{i=1..m} log Gamma(a - (i-1)/2),
valid for a > (m-1)/2; the defining integral over the PD cone is kept as a
Monte Carlo oracle in the verification module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

_LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class DomainBound:
    """Lower bound (m-1)/2 that every constant-evaluation parameter must exceed."""

    m: int

    @property
    def threshold(self) -> float:
        return 0.5 * (self.m - 1)

    def check(self, value: float, name: str = "parameter") -> None:
        if not value > self.threshold:
            raise DomainError(f"{name}={value} requires {name} > (m-1)/2 = {self.threshold}")


def mv_gamma_log(m: int, a: float) -> float:
    """log Gamma_m[a]."""
    if m < 1:
        raise DomainError("dimension must be positive")
    DomainBound(m).check(a, "a")
    s = 0.25 * m * (m - 1) * _LOG_PI
    for i in range(1, m + 1):
        s += math.lgamma(a - 0.5 * (i - 1))
    return s


def mv_beta_log(m: int, a: float, b: float) -> float:
    """log beta_m[a, b]; symmetric in (a, b) to the bit."""
    lo, hi = (a, b) if a <= b else (b, a)
    return mv_gamma_log(m, lo) + mv_gamma_log(m, hi) - mv_gamma_log(m, a + b)


def mv_beta3_log(m: int, a: float, b: float, c: float) -> float:
    """log beta*_m[a, b, c] = log of Gamma_m[a]Gamma_m[b]Gamma_m[c]/Gamma_m[a+b+c].

    Assembled from sorted operands so all six argument orders give the same
    float.
    """
    s = sorted((a, b, c))
    terms = sorted((mv_gamma_log(m, a), mv_gamma_log(m, b), mv_gamma_log(m, c)))
    return terms[0] + terms[1] + terms[2] - mv_gamma_log(m, (s[0] + s[1]) + s[2])

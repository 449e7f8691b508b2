"""Truncated hypergeometric functions of a matrix argument.

The series is accumulated degree by degree (partitions in reverse-lex order
inside a degree); Pochhammer products are carried in log-magnitude + sign
form.  Truncation stops once two consecutive degrees each contribute below
rel_tol times the partial sum.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import linalg, zonal
from .errors import DivergentSeries, DomainError, SpectralRadiusTooLarge
from .partitions import gen_pochhammer_log, partition_tuples

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_DEGREE = 40
_POLE_TOL = 1e-12


@dataclass(frozen=True)
class HypergeometricSpec:
    """Upper and lower parameters of pFq."""

    upper: tuple
    lower: tuple

    def __init__(self, upper=(), lower=()):
        object.__setattr__(self, "upper", tuple(float(v) for v in upper))
        object.__setattr__(self, "lower", tuple(float(v) for v in lower))

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)


@dataclass(frozen=True)
class SeriesResult:
    """Truncated series value with convergence diagnostics."""

    value: float
    sign: float
    log_abs: float
    degree_used: int
    last_degree_contribution: float
    converged: bool

    def to_dict(self):
        return {
            "value": self.value,
            "log_abs": self.log_abs,
            "sign": self.sign,
            "degree_used": self.degree_used,
            "converged": self.converged,
        }


def validate_lower_params(lower, m: int) -> None:
    """Reject lower parameters on the Pochhammer pole lattice b - (k-1)/2 in {0,-1,...}."""
    for b in lower:
        for k in range(1, m + 1):
            v = b - 0.5 * (k - 1)
            vr = round(v)
            if vr <= 0 and abs(v - vr) <= _POLE_TOL:
                raise DomainError(
                    f"lower parameter {b} hits the Pochhammer pole lattice for m={m}"
                )


class _SeriesCoeffs:
    """Per-(spec, m) cache of degree-wise term coefficients."""

    __slots__ = ("spec", "m", "signexp", "id_blocks", "lock")

    def __init__(self, spec, m):
        self.spec = spec
        self.m = m
        self.signexp = []  # per degree: ndarray of sign * exp(log poch ratio - log t!)
        self.id_blocks = []  # per degree: float block value at the identity argument
        self.lock = threading.RLock()

    def _degree_arrays(self, t):
        parts = partition_tuples(t, self.m)
        se = np.empty(len(parts))
        idb = 0.0
        lg = math.lgamma(t + 1)
        for i, tau in enumerate(parts):
            sign = 1.0
            logmag = -lg
            for a in self.spec.upper:
                s, l = gen_pochhammer_log(a, tau)
                sign *= s
                logmag += l
            for b in self.spec.lower:
                s, l = gen_pochhammer_log(b, tau)
                if s == 0.0:
                    raise DomainError(f"lower parameter {b} zeroes a Pochhammer factor")
                sign *= s
                logmag -= l
            se[i] = 0.0 if sign == 0.0 else sign * _exp_clamped(logmag)
            if sign != 0.0:
                idb += sign * _exp_clamped(logmag + zonal.zonal_at_identity_log(tau, self.m))
        return se, idb

    def ensure(self, T):
        if len(self.signexp) > T:
            return
        with self.lock:
            while len(self.signexp) <= T:
                se, idb = self._degree_arrays(len(self.signexp))
                self.signexp.append(se)
                self.id_blocks.append(idb)


def _exp_clamped(logmag):
    if logmag > 709.0:
        return math.inf
    return math.exp(logmag)


_COEFFS: dict = {}
_COEFFS_LOCK = threading.Lock()


def _coeffs_for(spec: HypergeometricSpec, m: int) -> _SeriesCoeffs:
    key = (spec.upper, spec.lower, m)
    with _COEFFS_LOCK:
        entry = _COEFFS.get(key)
        if entry is None:
            entry = _SeriesCoeffs(spec, m)
            _COEFFS[key] = entry
    return entry


def _finish(blocks, total, rel_tol, converged_early, spec, any_x):
    last = blocks[-1]
    used = len(blocks) - 1
    if used >= 1:
        converged = abs(last) <= rel_tol * abs(total)
    else:
        converged = False
    if not converged_early and not converged and spec.p > spec.q + 1 and any_x:
        if len(blocks) >= 2 and abs(blocks[-1]) > abs(blocks[-2]):
            raise DivergentSeries(
                f"{spec.p}F{spec.q} with p > q+1 shows growing degree contributions"
            )
    sign = 0.0 if total == 0.0 else math.copysign(1.0, total)
    log_abs = -math.inf if total == 0.0 else math.log(abs(total))
    return SeriesResult(total, sign, log_abs, used, last, converged)


def mhg(
    spec: HypergeometricSpec,
    x,
    rel_tol: float = DEFAULT_REL_TOL,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> SeriesResult:
    """Partial sum of pFq at the eigenvalue vector x.

    Terms are grouped by total degree; the zonal values come from the shared
    coefficient table (built on demand).
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    m = x.size
    if m < 1:
        raise DomainError("eigenvalue vector must be non-empty")
    if not np.all(np.isfinite(x)):
        raise DomainError("eigenvalues must be finite")
    if not (0.0 < rel_tol <= 1e-2):
        raise DomainError("rel_tol must lie in (0, 1e-2]")
    validate_lower_params(spec.lower, m)
    table = zonal.get_table(m, max_degree)
    coeffs = _coeffs_for(spec, m)
    coeffs.ensure(max_degree)
    total = 0.0
    blocks = []
    prev_small = False
    converged_early = False
    for t in range(max_degree + 1):
        cvals = zonal.zonal_values_at_degree(table, t, x)
        block = float(np.dot(coeffs.signexp[t], cvals))
        if not math.isfinite(block):
            raise DivergentSeries(f"degree-{t} contribution is not finite")
        total += block
        blocks.append(block)
        if t >= 1:
            small = abs(block) <= rel_tol * abs(total)
            if small and prev_small:
                converged_early = True
                break
            prev_small = small
    return _finish(blocks, total, rel_tol, converged_early, spec, bool(np.any(x != 0.0)))


def mhg_at_identity(
    spec: HypergeometricSpec,
    m: int,
    rel_tol: float = DEFAULT_REL_TOL,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> SeriesResult:
    """Same contract as mhg at x = ones(m), via the closed form for C_tau(I_m)."""
    if m < 1:
        raise DomainError("m must be positive")
    if not (0.0 < rel_tol <= 1e-2):
        raise DomainError("rel_tol must lie in (0, 1e-2]")
    validate_lower_params(spec.lower, m)
    coeffs = _coeffs_for(spec, m)
    coeffs.ensure(max_degree)
    total = 0.0
    blocks = []
    prev_small = False
    converged_early = False
    for t in range(max_degree + 1):
        block = coeffs.id_blocks[t]
        if not math.isfinite(block):
            raise DivergentSeries(f"degree-{t} contribution is not finite")
        total += block
        blocks.append(block)
        if t >= 1:
            small = abs(block) <= rel_tol * abs(total)
            if small and prev_small:
                converged_early = True
                break
            prev_small = small
    return _finish(blocks, total, rel_tol, converged_early, spec, True)


def one_f_zero_closed(a: float, X) -> float:
    """1F0(a; X) = |I - X|^{-a}, requiring spectral radius strictly below 1."""
    M = linalg.sym(X)
    eigs = linalg.sym_eigen(M).eigenvalues
    if float(np.max(np.abs(eigs))) >= 1.0:
        raise SpectralRadiusTooLarge("spectral radius must be strictly below 1")
    return math.exp(-a * float(np.sum(np.log1p(-eigs))))

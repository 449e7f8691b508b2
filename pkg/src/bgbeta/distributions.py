"""Matrix gamma, matrix beta I/II, and the correlated (bimatrix) generalized
beta families: densities, samplers, determinant moments, and the derived
product / inverse-pair distributions.

All densities are assembled in log scale and exponentiate only at the API
boundary.  Out-of-support arguments yield a -inf sentinel rather than an
error so quadrature sweeps can cross the support boundary harmlessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants, hypergeom, linalg
from .backend import K
from .errors import DimensionMismatch, DomainError, NotConverged
from ._rngshared import DOM_BETA1, DOM_BGB1, DOM_BGB2, DOM_GAMMA
from .linalg import PDMatrix, SymMatrix, factor_pd, inverse_pd, logdet, sqrt_pd

BETA1_PAIR = "betaI-pair"
BETA2_PAIR = "betaII-pair"
INVERSE_PAIR = "inverse-pair"

NEG_INF = -math.inf


@dataclass(frozen=True)
class LogDensity:
    log_value: float
    in_support: bool

    def to_dict(self):
        return {"log_value": self.log_value, "in_support": self.in_support}


OUT_OF_SUPPORT = LogDensity(NEG_INF, False)


@dataclass(frozen=True)
class GammaParams:
    """Shape a and PD scale for an m x m matrix gamma distribution."""

    m: int
    a: float
    theta: PDMatrix

    def __post_init__(self):
        constants.DomainBound(self.m).check(self.a, "a")
        if self.theta.dim != self.m:
            raise DimensionMismatch("scale matrix dimension disagrees with m")


@dataclass(frozen=True)
class BimatrixParams:
    """Shapes (a, b, c) of the correlated pair constructions."""

    m: int
    a: float
    b: float
    c: float

    def __post_init__(self):
        bound = constants.DomainBound(self.m)
        bound.check(self.a, "a")
        bound.check(self.b, "b")
        bound.check(self.c, "c")

    def swapped(self) -> "BimatrixParams":
        return BimatrixParams(self.m, self.b, self.a, self.c)


@dataclass(frozen=True)
class MatrixPair:
    first: PDMatrix
    second: PDMatrix
    kind: str

    def __post_init__(self):
        if self.kind not in (BETA1_PAIR, BETA2_PAIR, INVERSE_PAIR):
            raise ValueError(f"unknown pair kind {self.kind!r}")
        if self.first.dim != self.second.dim:
            raise DimensionMismatch("pair members must share a dimension")


@dataclass
class RandomStream:
    """Cursor over a counter-based stream; sample i is a pure function of
    (seed, domain, i // 4096, i % 4096)."""

    seed: int
    domain: int
    pos: int = 0

    def take(self, n: int) -> int:
        start = self.pos
        self.pos += n
        return start


def gamma_stream(seed: int) -> RandomStream:
    return RandomStream(seed, DOM_GAMMA)


def bgb1_stream(seed: int) -> RandomStream:
    return RandomStream(seed, DOM_BGB1)


def bgb2_stream(seed: int) -> RandomStream:
    return RandomStream(seed, DOM_BGB2)


def _h(m: int) -> float:
    return 0.5 * (m + 1)


def _eye(m: int) -> np.ndarray:
    return np.eye(m)


# ---------------------------------------------------------------------------
# matrix gamma


def matrix_gamma_logpdf(A: PDMatrix, p: GammaParams) -> LogDensity:
    """log of the matrix gamma density at A."""
    if A.dim != p.m:
        raise DimensionMismatch("argument dimension disagrees with parameters")
    v = (
        -constants.mv_gamma_log(p.m, p.a)
        - p.a * logdet(p.theta)
        + (p.a - _h(p.m)) * logdet(A)
        - linalg.trace_product_inv(p.theta, A)
    )
    return LogDensity(v, True)


def _theta_is_identity(p: GammaParams) -> bool:
    return bool(np.array_equal(p.theta.data, _eye(p.m)))


def matrix_gamma_sample(p: GammaParams, stream: RandomStream) -> PDMatrix:
    """One matrix gamma draw (lower-triangular construction), reproducible by seed."""
    start = stream.take(1)
    L = K.bartlett_batch(stream.seed, stream.domain, start, 1, p.m, p.a)[0]
    A0 = linalg.pd_from_lower(L)
    if _theta_is_identity(p):
        return A0
    S = sqrt_pd(p.theta)
    return factor_pd(linalg.congruence(A0, S.data))


def matrix_gamma_sample_batch(p: GammaParams, seed: int, n: int, start: int = 0):
    """n draws with their log-determinants, as (A[n,m,m], logdet[n])."""
    A, ld = K.gamma_matrix_batch(seed, DOM_GAMMA, start, n, p.m, p.a)
    if not _theta_is_identity(p):
        S = sqrt_pd(p.theta).data
        A = S @ A @ S
        A = 0.5 * (A + np.transpose(A, (0, 2, 1)))
        ld = ld + logdet(p.theta)
    return A, ld


# ---------------------------------------------------------------------------
# matrix beta I / II


def beta1_logpdf(U: PDMatrix, a: float, b: float) -> LogDensity:
    """log matrix beta-I density; support 0 < U < I."""
    m = U.dim
    bound = constants.DomainBound(m)
    bound.check(a, "a")
    bound.check(b, "b")
    ldi = linalg.logdet_sym_if_pd(SymMatrix(_eye(m) - U.data, tol=np.inf))
    if ldi is None:
        return OUT_OF_SUPPORT
    v = -constants.mv_beta_log(m, a, b) + (a - _h(m)) * logdet(U) + (b - _h(m)) * ldi
    return LogDensity(v, True)


def beta2_logpdf(F: PDMatrix, a: float, b: float) -> LogDensity:
    """log matrix beta-II density; support F > 0."""
    m = F.dim
    bound = constants.DomainBound(m)
    bound.check(a, "a")
    bound.check(b, "b")
    ldi = linalg.logdet_sym_if_pd(SymMatrix(_eye(m) + F.data, tol=np.inf))
    if ldi is None:
        return OUT_OF_SUPPORT
    v = -constants.mv_beta_log(m, a, b) + (a - _h(m)) * logdet(F) - (a + b) * ldi
    return LogDensity(v, True)


def beta1_sample_batch(m: int, a: float, b: float, seed: int, n: int, start: int = 0):
    """Matrix beta-I(a, b) draws built from two matrix gammas, with logdets."""
    constants.DomainBound(m).check(a, "a")
    constants.DomainBound(m).check(b, "b")
    return K.beta1_batch(seed, DOM_BETA1, start, n, m, a, b)


# ---------------------------------------------------------------------------
# correlated pair constructions


def bgb1_construct(A: PDMatrix, B: PDMatrix, C: PDMatrix) -> MatrixPair:
    """(U1, U2) with U_i = (X_i+C)^-1/2 X_i (X_i+C)^-1/2, symmetric square root."""
    if not (A.dim == B.dim == C.dim):
        raise DimensionMismatch("A, B, C must share a dimension")
    T1 = inverse_pd(sqrt_pd(factor_pd(SymMatrix(A.data + C.data, tol=np.inf))))
    U1 = factor_pd(linalg.congruence(A, T1.data))
    T2 = inverse_pd(sqrt_pd(factor_pd(SymMatrix(B.data + C.data, tol=np.inf))))
    U2 = factor_pd(linalg.congruence(B, T2.data))
    return MatrixPair(U1, U2, BETA1_PAIR)


def bgb2_construct(A: PDMatrix, B: PDMatrix, C: PDMatrix) -> MatrixPair:
    """(F1, F2) = (C^-1/2 A C^-1/2, C^-1/2 B C^-1/2)."""
    if not (A.dim == B.dim == C.dim):
        raise DimensionMismatch("A, B, C must share a dimension")
    T = inverse_pd(sqrt_pd(C))
    F1 = factor_pd(linalg.congruence(A, T.data))
    F2 = factor_pd(linalg.congruence(B, T.data))
    return MatrixPair(F1, F2, BETA2_PAIR)


def _interior_logdets(pair: MatrixPair):
    """(ld U1, ld(I-U1), ld U2, ld(I-U2)) or None when outside 0 < U < I."""
    m = pair.first.dim
    ldi1 = linalg.logdet_sym_if_pd(SymMatrix(_eye(m) - pair.first.data, tol=np.inf))
    if ldi1 is None:
        return None
    ldi2 = linalg.logdet_sym_if_pd(SymMatrix(_eye(m) - pair.second.data, tol=np.inf))
    if ldi2 is None:
        return None
    return logdet(pair.first), ldi1, logdet(pair.second), ldi2


def _cross_matrix(pair: MatrixPair) -> SymMatrix:
    """Symmetric congruent form of U1 U2 with a swap-invariant orientation."""
    U1, U2 = pair.first, pair.second
    ld1 = logdet(U1)
    ld2 = logdet(U2)
    if ld2 < ld1:
        root, other = U2, U1
    elif ld1 < ld2:
        root, other = U1, U2
    elif U2.data.tobytes() <= U1.data.tobytes():
        root, other = U2, U1
    else:
        root, other = U1, U2
    return linalg.congruence(other, sqrt_pd(root).data)


def bgb1_logpdf(pair: MatrixPair, p: BimatrixParams) -> LogDensity:
    """log density of the correlated beta-I pair.

    Exactly symmetric under (U1, U2, a, b) -> (U2, U1, b, a); the cross term
    log|I - U1 U2| is computed from the PD congruent form.
    """
    if pair.kind != BETA1_PAIR:
        raise ValueError(f"expected a {BETA1_PAIR}, got {pair.kind}")
    if pair.first.dim != p.m:
        raise DimensionMismatch("pair dimension disagrees with parameters")
    lds = _interior_logdets(pair)
    if lds is None:
        return OUT_OF_SUPPORT
    ld1, ldi1, ld2, ldi2 = lds
    M = _cross_matrix(pair)
    cross = linalg.logdet_sym_if_pd(SymMatrix(_eye(p.m) - M.data, tol=np.inf))
    if cross is None:
        return OUT_OF_SUPPORT
    h = _h(p.m)
    s1 = (p.a - h) * ld1 + ((p.b + p.c) - h) * ldi1
    s2 = (p.b - h) * ld2 + ((p.a + p.c) - h) * ldi2
    v = (s1 + s2) - ((p.a + p.b) + p.c) * cross
    v = v - constants.mv_beta3_log(p.m, p.a, p.b, p.c)
    return LogDensity(v, True)


def bgb1_logpdf_series(
    pair: MatrixPair,
    p: BimatrixParams,
    rel_tol: float = 1e-10,
    max_degree: int = hypergeom.DEFAULT_MAX_DEGREE,
) -> LogDensity:
    """Same density with |I - U1 U2|^-(a+b+c) replaced by its 1F0 zonal series.

    Exists to validate the zonal machinery against the closed form; raises
    NotConverged when the series does not reach rel_tol by max_degree.
    """
    if pair.kind != BETA1_PAIR:
        raise ValueError(f"expected a {BETA1_PAIR}, got {pair.kind}")
    if pair.first.dim != p.m:
        raise DimensionMismatch("pair dimension disagrees with parameters")
    lds = _interior_logdets(pair)
    if lds is None:
        return OUT_OF_SUPPORT
    ld1, ldi1, ld2, ldi2 = lds
    M = _cross_matrix(pair)
    eigs = linalg.sym_eigen(M).eigenvalues
    sr = hypergeom.mhg(
        hypergeom.HypergeometricSpec(((p.a + p.b) + p.c,), ()), eigs, rel_tol, max_degree
    )
    if not sr.converged:
        raise NotConverged(
            f"1F0 series not converged by degree {sr.degree_used} "
            f"(last contribution {sr.last_degree_contribution:.3e})"
        )
    h = _h(p.m)
    s1 = (p.a - h) * ld1 + ((p.b + p.c) - h) * ldi1
    s2 = (p.b - h) * ld2 + ((p.a + p.c) - h) * ldi2
    v = (s1 + s2) + sr.log_abs - constants.mv_beta3_log(p.m, p.a, p.b, p.c)
    return LogDensity(v, True)


def bgb1_sample(p: BimatrixParams, stream: RandomStream) -> MatrixPair:
    """One correlated beta-I pair from three matrix-gamma draws sharing C."""
    start = stream.take(1)
    U1, U2, _, _ = K.bgb1_batch(stream.seed, stream.domain, start, 1, p.m, p.a, p.b, p.c)
    return MatrixPair(
        factor_pd(SymMatrix(U1[0], tol=np.inf)),
        factor_pd(SymMatrix(U2[0], tol=np.inf)),
        BETA1_PAIR,
    )


def bgb1_sample_batch(p: BimatrixParams, seed: int, n: int, start: int = 0):
    """(U1[n,m,m], U2[n,m,m], logdet U1[n], logdet U2[n])."""
    return K.bgb1_batch(seed, DOM_BGB1, start, n, p.m, p.a, p.b, p.c)


def bgb2_logpdf(pair: MatrixPair, p: BimatrixParams) -> LogDensity:
    """log density of the correlated beta-II pair."""
    if pair.kind != BETA2_PAIR:
        raise ValueError(f"expected a {BETA2_PAIR}, got {pair.kind}")
    if pair.first.dim != p.m:
        raise DimensionMismatch("pair dimension disagrees with parameters")
    m = p.m
    S = SymMatrix(_eye(m) + pair.first.data + pair.second.data, tol=np.inf)
    ldsum = linalg.logdet_sym_if_pd(S)
    if ldsum is None:
        return OUT_OF_SUPPORT
    h = _h(m)
    s1 = (p.a - h) * logdet(pair.first)
    s2 = (p.b - h) * logdet(pair.second)
    v = (s1 + s2) - ((p.a + p.b) + p.c) * ldsum
    v = v - constants.mv_beta3_log(m, p.a, p.b, p.c)
    return LogDensity(v, True)


def bgb2_sample(p: BimatrixParams, stream: RandomStream) -> MatrixPair:
    start = stream.take(1)
    F1, F2, _, _ = K.bgb2_batch(stream.seed, stream.domain, start, 1, p.m, p.a, p.b, p.c)
    return MatrixPair(
        factor_pd(SymMatrix(F1[0], tol=np.inf)),
        factor_pd(SymMatrix(F2[0], tol=np.inf)),
        BETA2_PAIR,
    )


def bgb2_sample_batch(p: BimatrixParams, seed: int, n: int, start: int = 0):
    return K.bgb2_batch(seed, DOM_BGB2, start, n, p.m, p.a, p.b, p.c)


# ---------------------------------------------------------------------------
# determinant moments


@dataclass(frozen=True)
class MomentResult:
    value: float
    series: hypergeom.SeriesResult

    def to_dict(self):
        d = self.series.to_dict()
        d["value"] = self.value
        d["series_value"] = self.series.value
        return d


def det_moment_u(
    p: BimatrixParams,
    r: float,
    s: float,
    rel_tol: float = 1e-8,
    max_degree: int = 2000,
) -> MomentResult:
    """E(|U1|^r |U2|^s) for the correlated beta-I pair.

    Prefactor beta_m[a+r, b+c] beta_m[b+s, a+c] / beta*_m[a,b,c] times
    3F2(a+r, b+s, a+b+c; a+b+c+r, a+b+c+s; I_m).  The identity-argument
    series converges polynomially; raises NotConverged when the degree
    budget is insufficient.
    """
    m, a, b, c = p.m, p.a, p.b, p.c
    bound = constants.DomainBound(m)
    bound.check(a + r, "a+r")
    bound.check(b + s, "b+s")
    abc = (a + b) + c
    pref = (
        constants.mv_beta_log(m, a + r, b + c)
        + constants.mv_beta_log(m, b + s, a + c)
        - constants.mv_beta3_log(m, a, b, c)
    )
    spec = hypergeom.HypergeometricSpec((a + r, b + s, abc), (abc + r, abc + s))
    sr = hypergeom.mhg_at_identity(spec, m, rel_tol, max_degree)
    if not sr.converged:
        raise NotConverged(
            f"3F2 series at identity not converged by degree {sr.degree_used}"
        )
    return MomentResult(math.exp(pref + sr.log_abs) * sr.sign, sr)


def det_moment_z(
    p: BimatrixParams,
    r: float,
    rel_tol: float = 1e-8,
    max_degree: int = 2000,
) -> MomentResult:
    """E(|Z|^r) for the product Z = U2^1/2 U1 U2^1/2."""
    m, a, b, c = p.m, p.a, p.b, p.c
    constants.DomainBound(m).check(a + r, "a+r")
    pref = (
        constants.mv_beta_log(m, a + c, b + c)
        + constants.mv_beta_log(m, a + r, c)
        - constants.mv_beta3_log(m, a, b, c)
    )
    spec = hypergeom.HypergeometricSpec(
        (c, a + c, a + c), (a + c + r, (a + b) + 2.0 * c)
    )
    sr = hypergeom.mhg_at_identity(spec, m, rel_tol, max_degree)
    if not sr.converged:
        raise NotConverged(
            f"3F2 series at identity not converged by degree {sr.degree_used}"
        )
    return MomentResult(math.exp(pref + sr.log_abs) * sr.sign, sr)


# ---------------------------------------------------------------------------
# derived distributions


def product_z_construct(pair: MatrixPair) -> PDMatrix:
    """Z = U2^1/2 U1 U2^1/2 from a beta-I pair."""
    if pair.kind != BETA1_PAIR:
        raise ValueError(f"expected a {BETA1_PAIR}, got {pair.kind}")
    R = sqrt_pd(pair.second)
    return factor_pd(linalg.congruence(pair.first, R.data))


def product_z_logpdf(
    Z: PDMatrix,
    p: BimatrixParams,
    rel_tol: float = 1e-8,
    max_degree: int = 600,
) -> LogDensity:
    """log density of the product Z; support 0 < Z < I.

    Combines the beta-function prefactor, determinant powers and a
    2F1(a+c, a+c; a+b+2c; I-Z) evaluation at the eigenvalues of I - Z.
    """
    if Z.dim != p.m:
        raise DimensionMismatch("argument dimension disagrees with parameters")
    m, a, b, c = p.m, p.a, p.b, p.c
    eigs = linalg.sym_eigen(Z.base).eigenvalues
    if eigs[-1] <= 0.0 or eigs[0] >= 1.0:
        return OUT_OF_SUPPORT
    ldz = logdet(Z)
    ldi = float(np.sum(np.log1p(-eigs)))
    spec = hypergeom.HypergeometricSpec((a + c, a + c), ((a + b) + 2.0 * c,))
    sr = hypergeom.mhg(spec, 1.0 - eigs, rel_tol, max_degree)
    if not sr.converged:
        raise NotConverged(
            f"2F1 series not converged by degree {sr.degree_used} at eigenvalues {1.0 - eigs}"
        )
    pref = (
        constants.mv_beta_log(m, a + c, b + c)
        - constants.mv_beta3_log(m, a, b, c)
    )
    h = _h(m)
    v = pref + (a - h) * ldz + (c - h) * ldi + sr.log_abs
    return LogDensity(v, True)


def inverse_pair_construct(pair: MatrixPair) -> MatrixPair:
    """(V1, V2) = (U1^-1, U2^-1) from a beta-I pair."""
    if pair.kind != BETA1_PAIR:
        raise ValueError(f"expected a {BETA1_PAIR}, got {pair.kind}")
    return MatrixPair(inverse_pd(pair.first), inverse_pd(pair.second), INVERSE_PAIR)


def inverse_pair_logpdf(pair: MatrixPair, p: BimatrixParams) -> LogDensity:
    """log density of the inverse pair; support V1 > I, V2 > I.

    Density of the underlying beta-I pair at (V1^-1, V2^-1) plus the
    symmetric-matrix inverse Jacobian -(m+1) (log|V1| + log|V2|).
    """
    if pair.kind != INVERSE_PAIR:
        raise ValueError(f"expected an {INVERSE_PAIR}, got {pair.kind}")
    if pair.first.dim != p.m:
        raise DimensionMismatch("pair dimension disagrees with parameters")
    m = p.m
    for V in (pair.first, pair.second):
        if not linalg.is_pd(SymMatrix(V.data - _eye(m), tol=np.inf)):
            return OUT_OF_SUPPORT
    U1 = inverse_pd(pair.first)
    U2 = inverse_pd(pair.second)
    base = bgb1_logpdf(MatrixPair(U1, U2, BETA1_PAIR), p)
    if not base.in_support:
        return OUT_OF_SUPPORT
    v = base.log_value - (m + 1.0) * (logdet(pair.first) + logdet(pair.second))
    return LogDensity(v, True)


# ---------------------------------------------------------------------------
# scalar (m=1) reference formulas


def bgb1_scalar_pdf(u1, u2, a: float, b: float, c: float):
    """Joint density of the correlated scalar beta-I pair (m=1 oracle).

    Vectorized; returns 0 outside the open support (0,1)^2.
    """
    u1 = np.asarray(u1, dtype=np.float64)
    u2 = np.asarray(u2, dtype=np.float64)
    lb3 = constants.mv_beta3_log(1, a, b, c)
    valid = (u1 > 0.0) & (u1 < 1.0) & (u2 > 0.0) & (u2 < 1.0)
    u1s = np.where(valid, u1, 0.5)
    u2s = np.where(valid, u2, 0.5)
    lg = (
        (a - 1.0) * np.log(u1s)
        + (b - 1.0) * np.log(u2s)
        + (b + c - 1.0) * np.log1p(-u1s)
        + (a + c - 1.0) * np.log1p(-u2s)
        - (a + b + c) * np.log1p(-u1s * u2s)
        - lb3
    )
    out = np.where(valid, np.exp(lg), 0.0)
    return float(out) if out.ndim == 0 else out


def bgb2_scalar_pdf(f1, f2, a: float, b: float, c: float):
    """Joint density of the correlated scalar beta-II pair (m=1 oracle)."""
    f1 = np.asarray(f1, dtype=np.float64)
    f2 = np.asarray(f2, dtype=np.float64)
    lb3 = constants.mv_beta3_log(1, a, b, c)
    valid = (f1 > 0.0) & (f2 > 0.0)
    f1s = np.where(valid, f1, 1.0)
    f2s = np.where(valid, f2, 1.0)
    lg = (
        (a - 1.0) * np.log(f1s)
        + (b - 1.0) * np.log(f2s)
        - (a + b + c) * np.log1p(f1s + f2s)
        - lb3
    )
    out = np.where(valid, np.exp(lg), 0.0)
    return float(out) if out.ndim == 0 else out

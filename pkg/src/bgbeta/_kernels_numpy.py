"""Vectorized numpy implementations of the hot kernels.

This is the fallback backend (and the reference for the numba backend): same
stream layout, same arithmetic, batched over the leading axis.  Rejection
sampling advances a per-lane counter so each lane consumes its stream exactly
like the scalar loop in the numba backend.
"""

from __future__ import annotations

import math

import numpy as np

from ._rngshared import (
    C_CHUNK,
    C_INDEX,
    CHUNK_SHIFT,
    GOLD,
    INV53,
    MIX_A,
    MIX_B,
    SQRT_HALF,
    TWO_PI,
    seed_domain_mix,
)

BACKEND_NAME = "numpy"

_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U11 = np.uint64(11)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_GOLD = np.uint64(GOLD)
_MIX_A = np.uint64(MIX_A)
_MIX_B = np.uint64(MIX_B)
_C_CHUNK = np.uint64(C_CHUNK)
_C_INDEX = np.uint64(C_INDEX)
_CHUNK_SHIFT = np.uint64(CHUNK_SHIFT)
_CHUNK_MASK = np.uint64((1 << CHUNK_SHIFT) - 1)


def _mix64(z):
    z = (z ^ (z >> _U30)) * _MIX_A
    z = (z ^ (z >> _U27)) * _MIX_B
    return z ^ (z >> _U31)


def stream_bases(seed, domain, start, count):
    """Stream bases for global sample indices [start, start+count)."""
    g = np.arange(start, start + count, dtype=np.uint64)
    k = g >> _CHUNK_SHIFT
    i = g & _CHUNK_MASK
    s = np.uint64(seed_domain_mix(seed, domain))
    zk = _mix64(s ^ ((k + _U1) * _C_CHUNK))
    return _mix64(zk ^ ((i + _U1) * _C_INDEX))


def _unif(base, ctr):
    raw = _mix64(base + ctr * _GOLD)
    return ((raw >> _U11) + _U1) * INV53


def _normal(base, ctr):
    """One standard normal per lane; consumes two raw draws (caller advances ctr)."""
    u1 = _unif(base, ctr)
    u2 = _unif(base, ctr + _U1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


def _gamma(base, ctr, alpha):
    """Gamma(alpha, 1) draw per lane; advances `ctr` in place.

    Marsaglia-Tsang acceptance-rejection without the squeeze step, with the
    u**(1/alpha) boost for alpha < 1.  All lanes draw.
    """
    n = base.shape[0]
    out = np.zeros(n)
    a = alpha
    boost = None
    if alpha < 1.0:
        u = _unif(base, ctr)
        ctr += _U1
        boost = u ** (1.0 / alpha)
        a = alpha + 1.0
    d = a - 1.0 / 3.0
    cc = 1.0 / math.sqrt(9.0 * d)
    pend = np.ones(n, dtype=bool)
    while True:
        x = _normal(base, ctr)
        ctr[pend] += _U2
        v = 1.0 + cc * x
        ok_v = pend & (v > 0.0)
        v3 = np.where(v > 0.0, v * v * v, 1.0)
        u = _unif(base, ctr)
        ctr[ok_v] += _U1
        acc = ok_v & (np.log(u) < 0.5 * x * x + d - d * v3 + d * np.log(v3))
        out[acc] = d * v3[acc]
        pend &= ~acc
        if not pend.any():
            break
    if boost is not None:
        out *= boost
    return out


def uniform_batch(seed, domain, start, count):
    base = stream_bases(seed, domain, start, count)
    return _unif(base, np.ones(count, dtype=np.uint64))


def normal_batch(seed, domain, start, count):
    base = stream_bases(seed, domain, start, count)
    return _normal(base, np.ones(count, dtype=np.uint64))


def gamma_scalar_batch(seed, domain, start, count, alpha):
    base = stream_bases(seed, domain, start, count)
    ctr = np.ones(count, dtype=np.uint64)
    return _gamma(base, ctr, alpha)


def _bartlett(base, ctr, m, a):
    """Lower factors L of matrix-gamma(a, I) draws: A = L L^T."""
    n = base.shape[0]
    L = np.zeros((n, m, m))
    for i in range(m):
        for j in range(i):
            L[:, i, j] = SQRT_HALF * _normal(base, ctr)
            ctr += _U2
        L[:, i, i] = np.sqrt(_gamma(base, ctr, a - 0.5 * i))
    return L


def bartlett_batch(seed, domain, start, count, m, a):
    base = stream_bases(seed, domain, start, count)
    ctr = np.ones(count, dtype=np.uint64)
    return _bartlett(base, ctr, m, a)


def _ld_from_lower(L):
    return 2.0 * np.sum(np.log(np.diagonal(L, axis1=1, axis2=2)), axis=1)


def gamma_matrix_batch(seed, domain, start, count, m, a):
    """Matrix-gamma(a, I) draws plus their log-determinants."""
    L = bartlett_batch(seed, domain, start, count, m, a)
    A = L @ np.transpose(L, (0, 2, 1))
    return A, _ld_from_lower(L)


def chol_batch(A, tol_factor=1e-13):
    """Lower Cholesky factor per matrix; ok=False where a pivot is at/below tolerance."""
    A = np.asarray(A, dtype=np.float64)
    n, m, _ = A.shape
    L = np.zeros_like(A)
    diag = np.diagonal(A, axis1=1, axis2=2)
    tol = tol_factor * diag.max(axis=1)
    ok = np.ones(n, dtype=bool)
    for j in range(m):
        d = A[:, j, j] - np.sum(L[:, j, :j] * L[:, j, :j], axis=1)
        ok &= d > tol
        L[:, j, j] = np.sqrt(np.where(d > 0.0, d, 1.0))
        if j + 1 < m:
            s = A[:, j + 1 :, j] - np.einsum("nik,nk->ni", L[:, j + 1 :, :j], L[:, j, :j])
            L[:, j + 1 :, j] = s / L[:, j, j][:, None]
    return L, ok


def _off2(a):
    m = a.shape[1]
    iu = np.triu_indices(m, k=1)
    v = a[:, iu[0], iu[1]]
    return np.sum(v * v, axis=1)


def jacobi_batch(A, tol=1e-14, max_sweep_factor=100):
    """Cyclic Jacobi eigendecomposition of symmetric matrices.

    Returns (w, Q, ok): eigenvalues sorted descending, orthogonal Q with a
    deterministic column-sign convention, ok=False where the sweep budget was
    exhausted before the off-diagonal Frobenius norm dropped below
    tol * ||A||_F.
    """
    A = np.asarray(A, dtype=np.float64)
    n, m, _ = A.shape
    a = A.copy()
    V = np.broadcast_to(np.eye(m), (n, m, m)).copy()
    if m == 1:
        return a[:, :, 0].copy(), V, np.ones(n, dtype=bool)
    norm2 = np.sum(A * A, axis=(1, 2))
    thresh2 = (tol * tol) * norm2  # compare 2*off2 against this
    active = 2.0 * _off2(a) > thresh2
    max_sweeps = max_sweep_factor * m
    sweeps = 0
    while active.any() and sweeps < max_sweeps:
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[:, p, q]
                do = active & (apq != 0.0)
                if not do.any():
                    continue
                app = a[:, p, p].copy()
                aqq = a[:, q, q].copy()
                with np.errstate(over="ignore"):
                    theta = (aqq - app) / np.where(do, 2.0 * apq, 1.0)
                    sgn = np.where(theta >= 0.0, 1.0, -1.0)
                    t = np.where(do, sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                kmask = np.ones(m, dtype=bool)
                kmask[p] = False
                kmask[q] = False
                akp = a[:, kmask, p].copy()
                akq = a[:, kmask, q].copy()
                nkp = c[:, None] * akp - s[:, None] * akq
                nkq = s[:, None] * akp + c[:, None] * akq
                a[:, kmask, p] = nkp
                a[:, p, kmask] = nkp
                a[:, kmask, q] = nkq
                a[:, q, kmask] = nkq
                a[:, p, p] = app - t * apq
                a[:, q, q] = aqq + t * apq
                a[:, p, q] = np.where(do, 0.0, apq)
                a[:, q, p] = a[:, p, q]
                vkp = V[:, :, p].copy()
                vkq = V[:, :, q].copy()
                V[:, :, p] = c[:, None] * vkp - s[:, None] * vkq
                V[:, :, q] = s[:, None] * vkp + c[:, None] * vkq
        sweeps += 1
        active &= 2.0 * _off2(a) > thresh2
    ok = ~active
    w = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    Q = np.take_along_axis(V, order[:, None, :], axis=2)
    # sign convention: the largest-|entry| component of each column is >= 0
    imax = np.argmax(np.abs(Q), axis=1)
    pick = np.take_along_axis(Q, imax[:, None, :], axis=1)[:, 0, :]
    Q = Q * np.where(pick < 0.0, -1.0, 1.0)[:, None, :]
    return w, Q, ok


def inv_pd_batch(A, tol_factor=1e-13):
    """Inverse of positive-definite matrices via their Cholesky factors."""
    L, ok = chol_batch(A, tol_factor)
    n, m, _ = L.shape
    Linv = np.zeros_like(L)
    for i in range(m):
        Linv[:, i, i] = 1.0 / L[:, i, i]
        for j in range(i):
            s = np.einsum("nk,nk->n", L[:, i, j:i], Linv[:, j:i, j])
            Linv[:, i, j] = -s / L[:, i, i]
    inv = np.transpose(Linv, (0, 2, 1)) @ Linv
    return 0.5 * (inv + np.transpose(inv, (0, 2, 1))), ok


def _sym_pow_from_eig(w, Q, power):
    B = Q * (w**power)[:, None, :]
    R = B @ np.transpose(Q, (0, 2, 1))
    return 0.5 * (R + np.transpose(R, (0, 2, 1)))


def _sandwich(T, M):
    R = T @ M @ T
    return 0.5 * (R + np.transpose(R, (0, 2, 1)))


def bgb1_batch(seed, domain, start, count, m, a, b, c):
    """Correlated beta-I pairs (U1, U2) from three matrix-gamma draws sharing C.

    Returns (U1, U2, ld1, ld2) where ld are the log-determinants of U1, U2.
    """
    base = stream_bases(seed, domain, start, count)
    ctr = np.ones(count, dtype=np.uint64)
    LA = _bartlett(base, ctr, m, a)
    LB = _bartlett(base, ctr, m, b)
    LC = _bartlett(base, ctr, m, c)
    A = LA @ np.transpose(LA, (0, 2, 1))
    B = LB @ np.transpose(LB, (0, 2, 1))
    C = LC @ np.transpose(LC, (0, 2, 1))
    w1, Q1, _ = jacobi_batch(A + C)
    T1 = _sym_pow_from_eig(w1, Q1, -0.5)
    U1 = _sandwich(T1, A)
    w2, Q2, _ = jacobi_batch(B + C)
    T2 = _sym_pow_from_eig(w2, Q2, -0.5)
    U2 = _sandwich(T2, B)
    ld1 = _ld_from_lower(LA) - np.sum(np.log(w1), axis=1)
    ld2 = _ld_from_lower(LB) - np.sum(np.log(w2), axis=1)
    return U1, U2, ld1, ld2


def bgb2_batch(seed, domain, start, count, m, a, b, c):
    """Correlated beta-II pairs (F1, F2) = (C^-1/2 A C^-1/2, C^-1/2 B C^-1/2)."""
    base = stream_bases(seed, domain, start, count)
    ctr = np.ones(count, dtype=np.uint64)
    LA = _bartlett(base, ctr, m, a)
    LB = _bartlett(base, ctr, m, b)
    LC = _bartlett(base, ctr, m, c)
    A = LA @ np.transpose(LA, (0, 2, 1))
    B = LB @ np.transpose(LB, (0, 2, 1))
    C = LC @ np.transpose(LC, (0, 2, 1))
    wc, Qc, _ = jacobi_batch(C)
    Tc = _sym_pow_from_eig(wc, Qc, -0.5)
    F1 = _sandwich(Tc, A)
    F2 = _sandwich(Tc, B)
    ldc = np.sum(np.log(wc), axis=1)
    ld1 = _ld_from_lower(LA) - ldc
    ld2 = _ld_from_lower(LB) - ldc
    return F1, F2, ld1, ld2


def beta1_batch(seed, domain, start, count, m, a, b):
    """Matrix beta-I(a, b) draws U = (A+B)^-1/2 A (A+B)^-1/2 with logdets."""
    base = stream_bases(seed, domain, start, count)
    ctr = np.ones(count, dtype=np.uint64)
    LA = _bartlett(base, ctr, m, a)
    LB = _bartlett(base, ctr, m, b)
    A = LA @ np.transpose(LA, (0, 2, 1))
    B = LB @ np.transpose(LB, (0, 2, 1))
    w, Q, _ = jacobi_batch(A + B)
    T = _sym_pow_from_eig(w, Q, -0.5)
    U = _sandwich(T, A)
    ld = _ld_from_lower(LA) - np.sum(np.log(w), axis=1)
    return U, ld


def monomial_batch(x, E, seg, nseg):
    """Values of the monomial symmetric functions indexed by `seg`.

    E holds one row per distinct permutation of each exponent vector; row r
    contributes prod(x**E[r]) to slot seg[r].
    """
    if E.shape[0] == 0:
        return np.zeros(nseg)
    p = np.prod(np.asarray(x, dtype=np.float64)[None, :] ** E, axis=1)
    return np.bincount(seg, weights=p, minlength=nseg)


def zonal_values(coef, mvals):
    """Zonal polynomial values from a coefficient matrix and monomial values."""
    return coef @ mvals

"""numba @njit implementations of the hot kernels.

Scalar per-sample loops compiled in nopython mode; the stream layout and the
arithmetic mirror `_kernels_numpy` operation for operation, so both backends
draw the same variates (up to ulp differences in libm calls).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

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

BACKEND_NAME = "numba"

_U_GOLD = np.uint64(GOLD)
_U_MIX_A = np.uint64(MIX_A)
_U_MIX_B = np.uint64(MIX_B)
_U_C_CHUNK = np.uint64(C_CHUNK)
_U_C_INDEX = np.uint64(C_INDEX)
_U_SHIFT = np.uint64(CHUNK_SHIFT)
_U_MASK = np.uint64((1 << CHUNK_SHIFT) - 1)
_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _U_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U_MIX_B
    return z ^ (z >> np.uint64(31))


@njit(**_JIT)
def _base_for(smix, g):
    k = g >> _U_SHIFT
    i = g & _U_MASK
    z = _mix64(smix ^ ((k + np.uint64(1)) * _U_C_CHUNK))
    return _mix64(z ^ ((i + np.uint64(1)) * _U_C_INDEX))


@njit(**_JIT)
def _unif(base, ctr):
    raw = _mix64(base + ctr * _U_GOLD)
    return float((raw >> np.uint64(11)) + np.uint64(1)) * INV53


@njit(**_JIT)
def _normal(base, ctr):
    u1 = _unif(base, ctr)
    u2 = _unif(base, ctr + np.uint64(1))
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)


@njit(**_JIT)
def _gamma(base, ctr, alpha):
    boost = 1.0
    a = alpha
    if a < 1.0:
        u = _unif(base, ctr)
        ctr += np.uint64(1)
        boost = u ** (1.0 / alpha)
        a = alpha + 1.0
    d = a - 1.0 / 3.0
    cc = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = _normal(base, ctr)
        ctr += np.uint64(2)
        v = 1.0 + cc * x
        if v <= 0.0:
            continue
        v3 = v * v * v
        u = _unif(base, ctr)
        ctr += np.uint64(1)
        if math.log(u) < 0.5 * x * x + d - d * v3 + d * math.log(v3):
            return boost * d * v3, ctr


@njit(**_JIT)
def _uniform_batch(smix, start, count):
    out = np.empty(count)
    for j in range(count):
        base = _base_for(smix, np.uint64(start + j))
        out[j] = _unif(base, np.uint64(1))
    return out


def uniform_batch(seed, domain, start, count):
    return _uniform_batch(np.uint64(seed_domain_mix(seed, domain)), start, count)


@njit(**_JIT)
def _normal_batch(smix, start, count):
    out = np.empty(count)
    for j in range(count):
        base = _base_for(smix, np.uint64(start + j))
        out[j] = _normal(base, np.uint64(1))
    return out


def normal_batch(seed, domain, start, count):
    return _normal_batch(np.uint64(seed_domain_mix(seed, domain)), start, count)


@njit(**_JIT)
def _gamma_scalar_batch(smix, start, count, alpha):
    out = np.empty(count)
    for j in range(count):
        base = _base_for(smix, np.uint64(start + j))
        out[j], _ = _gamma(base, np.uint64(1), alpha)
    return out


def gamma_scalar_batch(seed, domain, start, count, alpha):
    return _gamma_scalar_batch(np.uint64(seed_domain_mix(seed, domain)), start, count, alpha)


@njit(**_JIT)
def _bartlett_one(base, ctr, m, a, L):
    for i in range(m):
        for j in range(i):
            L[i, j] = SQRT_HALF * _normal(base, ctr)
            ctr += np.uint64(2)
        g, ctr = _gamma(base, ctr, a - 0.5 * i)
        L[i, i] = math.sqrt(g)
    return ctr


@njit(**_JIT)
def _bartlett_batch(smix, start, count, m, a):
    L = np.zeros((count, m, m))
    for j in range(count):
        base = _base_for(smix, np.uint64(start + j))
        _bartlett_one(base, np.uint64(1), m, a, L[j])
    return L


def bartlett_batch(seed, domain, start, count, m, a):
    return _bartlett_batch(np.uint64(seed_domain_mix(seed, domain)), start, count, m, a)


@njit(**_JIT)
def _mm_lltr(L, out):
    # out = L @ L.T for one lower-triangular L
    m = L.shape[0]
    for i in range(m):
        for j in range(i + 1):
            s = 0.0
            for k in range(j + 1):
                s += L[i, k] * L[j, k]
            out[i, j] = s
            out[j, i] = s


@njit(**_JIT)
def _ld_lower(L):
    s = 0.0
    for i in range(L.shape[0]):
        s += math.log(L[i, i])
    return 2.0 * s


@njit(**_JIT)
def _gamma_matrix_batch(smix, start, count, m, a):
    A = np.empty((count, m, m))
    ld = np.empty(count)
    L = np.zeros((m, m))
    for j in range(count):
        base = _base_for(smix, np.uint64(start + j))
        for r in range(m):
            for cidx in range(m):
                L[r, cidx] = 0.0
        _bartlett_one(base, np.uint64(1), m, a, L)
        _mm_lltr(L, A[j])
        ld[j] = _ld_lower(L)
    return A, ld


def gamma_matrix_batch(seed, domain, start, count, m, a):
    return _gamma_matrix_batch(np.uint64(seed_domain_mix(seed, domain)), start, count, m, a)


@njit(**_JIT)
def _chol_one(A, L, tol):
    m = A.shape[0]
    for j in range(m):
        d = A[j, j]
        for k in range(j):
            d -= L[j, k] * L[j, k]
        if d <= tol:
            return False
        L[j, j] = math.sqrt(d)
        for i in range(j + 1, m):
            s = A[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            L[i, j] = s / L[j, j]
    return True


@njit(**_JIT)
def _chol_batch(A, tol_factor):
    n, m, _ = A.shape
    L = np.zeros((n, m, m))
    ok = np.ones(n, dtype=np.bool_)
    for j in range(n):
        mx = A[j, 0, 0]
        for i in range(1, m):
            if A[j, i, i] > mx:
                mx = A[j, i, i]
        ok[j] = _chol_one(A[j], L[j], tol_factor * mx)
    return L, ok


def chol_batch(A, tol_factor=1e-13):
    return _chol_batch(np.ascontiguousarray(A, dtype=np.float64), tol_factor)


@njit(**_JIT)
def _jacobi_one(A, a, V, tol, max_sweeps):
    m = A.shape[0]
    for i in range(m):
        for j in range(m):
            a[i, j] = A[i, j]
            V[i, j] = 1.0 if i == j else 0.0
    norm2 = 0.0
    for i in range(m):
        for j in range(m):
            norm2 += A[i, j] * A[i, j]
    thresh2 = (tol * tol) * norm2
    for _ in range(max_sweeps):
        off2 = 0.0
        for i in range(m - 1):
            for j in range(i + 1, m):
                off2 += a[i, j] * a[i, j]
        if 2.0 * off2 <= thresh2:
            return True
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(m):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(m):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    off2 = 0.0
    for i in range(m - 1):
        for j in range(i + 1, m):
            off2 += a[i, j] * a[i, j]
    return 2.0 * off2 <= thresh2


@njit(**_JIT)
def _eig_finish(a, V, w, Q):
    # sort eigenvalues descending (stable) and fix column signs
    m = a.shape[0]
    order = np.empty(m, dtype=np.int64)
    for i in range(m):
        order[i] = i
    for i in range(1, m):
        oi = order[i]
        key = a[oi, oi]
        j = i - 1
        while j >= 0 and a[order[j], order[j]] < key:
            order[j + 1] = order[j]
            j -= 1
        order[j + 1] = oi
    for j in range(m):
        oj = order[j]
        w[j] = a[oj, oj]
        for i in range(m):
            Q[i, j] = V[i, oj]
    for j in range(m):
        imax = 0
        amax = abs(Q[0, j])
        for i in range(1, m):
            v = abs(Q[i, j])
            if v > amax:
                amax = v
                imax = i
        if Q[imax, j] < 0.0:
            for i in range(m):
                Q[i, j] = -Q[i, j]


@njit(**_JIT)
def _jacobi_batch(A, tol, max_sweep_factor):
    n, m, _ = A.shape
    w = np.empty((n, m))
    Q = np.empty((n, m, m))
    ok = np.ones(n, dtype=np.bool_)
    a = np.empty((m, m))
    V = np.empty((m, m))
    for j in range(n):
        ok[j] = _jacobi_one(A[j], a, V, tol, max_sweep_factor * m)
        _eig_finish(a, V, w[j], Q[j])
    return w, Q, ok


def jacobi_batch(A, tol=1e-14, max_sweep_factor=100):
    return _jacobi_batch(np.ascontiguousarray(A, dtype=np.float64), tol, max_sweep_factor)


@njit(**_JIT)
def _inv_pd_batch(A, tol_factor):
    n, m, _ = A.shape
    L, ok = _chol_batch(A, tol_factor)
    inv = np.zeros((n, m, m))
    Linv = np.zeros((m, m))
    for idx in range(n):
        if not ok[idx]:
            continue
        for i in range(m):
            for j in range(m):
                Linv[i, j] = 0.0
        for i in range(m):
            Linv[i, i] = 1.0 / L[idx, i, i]
            for j in range(i):
                s = 0.0
                for k in range(j, i):
                    s += L[idx, i, k] * Linv[k, j]
                Linv[i, j] = -s / L[idx, i, i]
        for i in range(m):
            for j in range(i + 1):
                s = 0.0
                for k in range(max(i, j), m):
                    s += Linv[k, i] * Linv[k, j]
                inv[idx, i, j] = s
                inv[idx, j, i] = s
    return inv, ok


def inv_pd_batch(A, tol_factor=1e-13):
    return _inv_pd_batch(np.ascontiguousarray(A, dtype=np.float64), tol_factor)


@njit(**_JIT)
def _sym_pow(w, Q, power, out):
    m = w.shape[0]
    for i in range(m):
        for j in range(i + 1):
            s = 0.0
            for k in range(m):
                s += Q[i, k] * (w[k] ** power) * Q[j, k]
            out[i, j] = s
            out[j, i] = s


@njit(**_JIT)
def _sandwich(T, M, tmp, out):
    # out = T @ M @ T, symmetrized
    m = T.shape[0]
    for i in range(m):
        for j in range(m):
            s = 0.0
            for k in range(m):
                s += T[i, k] * M[k, j]
            tmp[i, j] = s
    for i in range(m):
        for j in range(i + 1):
            s1 = 0.0
            s2 = 0.0
            for k in range(m):
                s1 += tmp[i, k] * T[k, j]
                s2 += tmp[j, k] * T[k, i]
            v = 0.5 * (s1 + s2)
            out[i, j] = v
            out[j, i] = v


@njit(**_JIT)
def _bgb1_batch(smix, start, count, m, a, b, c, tol, max_sweep_factor):
    U1 = np.empty((count, m, m))
    U2 = np.empty((count, m, m))
    ld1 = np.empty(count)
    ld2 = np.empty(count)
    LA = np.zeros((m, m))
    LB = np.zeros((m, m))
    LC = np.zeros((m, m))
    A = np.empty((m, m))
    B = np.empty((m, m))
    C = np.empty((m, m))
    S = np.empty((m, m))
    av = np.empty((m, m))
    V = np.empty((m, m))
    w = np.empty(m)
    Q = np.empty((m, m))
    T = np.empty((m, m))
    tmp = np.empty((m, m))
    for idx in range(count):
        base = _base_for(smix, np.uint64(start + idx))
        ctr = np.uint64(1)
        for i in range(m):
            for j in range(m):
                LA[i, j] = 0.0
                LB[i, j] = 0.0
                LC[i, j] = 0.0
        ctr = _bartlett_one(base, ctr, m, a, LA)
        ctr = _bartlett_one(base, ctr, m, b, LB)
        ctr = _bartlett_one(base, ctr, m, c, LC)
        _mm_lltr(LA, A)
        _mm_lltr(LB, B)
        _mm_lltr(LC, C)
        for i in range(m):
            for j in range(m):
                S[i, j] = A[i, j] + C[i, j]
        _jacobi_one(S, av, V, tol, max_sweep_factor * m)
        _eig_finish(av, V, w, Q)
        _sym_pow(w, Q, -0.5, T)
        _sandwich(T, A, tmp, U1[idx])
        lds = 0.0
        for i in range(m):
            lds += math.log(w[i])
        ld1[idx] = _ld_lower(LA) - lds
        for i in range(m):
            for j in range(m):
                S[i, j] = B[i, j] + C[i, j]
        _jacobi_one(S, av, V, tol, max_sweep_factor * m)
        _eig_finish(av, V, w, Q)
        _sym_pow(w, Q, -0.5, T)
        _sandwich(T, B, tmp, U2[idx])
        lds = 0.0
        for i in range(m):
            lds += math.log(w[i])
        ld2[idx] = _ld_lower(LB) - lds
    return U1, U2, ld1, ld2


def bgb1_batch(seed, domain, start, count, m, a, b, c):
    return _bgb1_batch(
        np.uint64(seed_domain_mix(seed, domain)), start, count, m, a, b, c, 1e-14, 100
    )


@njit(**_JIT)
def _bgb2_batch(smix, start, count, m, a, b, c, tol, max_sweep_factor):
    F1 = np.empty((count, m, m))
    F2 = np.empty((count, m, m))
    ld1 = np.empty(count)
    ld2 = np.empty(count)
    LA = np.zeros((m, m))
    LB = np.zeros((m, m))
    LC = np.zeros((m, m))
    A = np.empty((m, m))
    B = np.empty((m, m))
    C = np.empty((m, m))
    av = np.empty((m, m))
    V = np.empty((m, m))
    w = np.empty(m)
    Q = np.empty((m, m))
    T = np.empty((m, m))
    tmp = np.empty((m, m))
    for idx in range(count):
        base = _base_for(smix, np.uint64(start + idx))
        ctr = np.uint64(1)
        for i in range(m):
            for j in range(m):
                LA[i, j] = 0.0
                LB[i, j] = 0.0
                LC[i, j] = 0.0
        ctr = _bartlett_one(base, ctr, m, a, LA)
        ctr = _bartlett_one(base, ctr, m, b, LB)
        ctr = _bartlett_one(base, ctr, m, c, LC)
        _mm_lltr(LA, A)
        _mm_lltr(LB, B)
        _mm_lltr(LC, C)
        _jacobi_one(C, av, V, tol, max_sweep_factor * m)
        _eig_finish(av, V, w, Q)
        _sym_pow(w, Q, -0.5, T)
        _sandwich(T, A, tmp, F1[idx])
        _sandwich(T, B, tmp, F2[idx])
        ldc = 0.0
        for i in range(m):
            ldc += math.log(w[i])
        ld1[idx] = _ld_lower(LA) - ldc
        ld2[idx] = _ld_lower(LB) - ldc
    return F1, F2, ld1, ld2


def bgb2_batch(seed, domain, start, count, m, a, b, c):
    return _bgb2_batch(
        np.uint64(seed_domain_mix(seed, domain)), start, count, m, a, b, c, 1e-14, 100
    )


@njit(**_JIT)
def _beta1_batch(smix, start, count, m, a, b, tol, max_sweep_factor):
    U = np.empty((count, m, m))
    ld = np.empty(count)
    LA = np.zeros((m, m))
    LB = np.zeros((m, m))
    A = np.empty((m, m))
    B = np.empty((m, m))
    S = np.empty((m, m))
    av = np.empty((m, m))
    V = np.empty((m, m))
    w = np.empty(m)
    Q = np.empty((m, m))
    T = np.empty((m, m))
    tmp = np.empty((m, m))
    for idx in range(count):
        base = _base_for(smix, np.uint64(start + idx))
        ctr = np.uint64(1)
        for i in range(m):
            for j in range(m):
                LA[i, j] = 0.0
                LB[i, j] = 0.0
        ctr = _bartlett_one(base, ctr, m, a, LA)
        ctr = _bartlett_one(base, ctr, m, b, LB)
        _mm_lltr(LA, A)
        _mm_lltr(LB, B)
        for i in range(m):
            for j in range(m):
                S[i, j] = A[i, j] + B[i, j]
        _jacobi_one(S, av, V, tol, max_sweep_factor * m)
        _eig_finish(av, V, w, Q)
        _sym_pow(w, Q, -0.5, T)
        _sandwich(T, A, tmp, U[idx])
        lds = 0.0
        for i in range(m):
            lds += math.log(w[i])
        ld[idx] = _ld_lower(LA) - lds
    return U, ld


def beta1_batch(seed, domain, start, count, m, a, b):
    return _beta1_batch(np.uint64(seed_domain_mix(seed, domain)), start, count, m, a, b, 1e-14, 100)


@njit(**_JIT)
def _monomial_batch(x, E, seg, nseg):
    out = np.zeros(nseg)
    m = x.shape[0]
    for r in range(E.shape[0]):
        p = 1.0
        for i in range(m):
            e = E[r, i]
            if e != 0:
                p *= x[i] ** e
        out[seg[r]] += p
    return out


def monomial_batch(x, E, seg, nseg):
    if E.shape[0] == 0:
        return np.zeros(nseg)
    return _monomial_batch(np.ascontiguousarray(x, dtype=np.float64), E, seg, nseg)


@njit(**_JIT)
def _zonal_values(coef, mvals):
    K, L = coef.shape
    out = np.zeros(K)
    for i in range(K):
        s = 0.0
        for j in range(L):
            s += coef[i, j] * mvals[j]
        out[i] = s
    return out


def zonal_values(coef, mvals):
    return _zonal_values(coef, mvals)

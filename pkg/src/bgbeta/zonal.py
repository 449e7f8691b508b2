"""Zonal polynomials in the monomial symmetric basis.

Coefficients come from the Laplace-Beltrami eigenfunction recurrence, which
is triangular in dominance order, and are normalized degree by degree through
the sum rule sum_{tau |- t} C_tau(x) = (sum x_i)^t.  Construction is exact
rational arithmetic (gmpy2.mpq when available, fractions.Fraction otherwise);
coefficients are converted to float64 once, at evaluation time.
"""

from __future__ import annotations

import json
import math
import threading
from fractions import Fraction

import numpy as np

from .backend import K
from .errors import DegreeTooLarge, DimensionMismatch, PartitionOutOfRange
from .partitions import as_parts, gen_pochhammer_log, partition_tuples

try:
    from gmpy2 import mpq as _QQ
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _QQ = Fraction

DEFAULT_DEGREE_CAP = 40

_LN2 = math.log(2.0)


def _multiset_perms(lam, m):
    """Distinct permutations of lam padded with zeros to length m, descending-lex."""
    vals = sorted(list(lam) + [0] * (m - len(lam)), reverse=True)
    out = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        prev = None
        for idx in range(len(remaining)):
            v = remaining[idx]
            if v == prev:
                continue
            prev = v
            rec(prefix + [v], remaining[:idx] + remaining[idx + 1 :])

    rec([], vals)
    return out


def _move_table(parts, index):
    """For each partition lam: [(index of mu, lam_i - lam_j + 2t), ...] over all
    single moves of t units from slot j up to slot i < j."""
    moves = []
    for lam in parts:
        row = []
        n = len(lam)
        for j in range(1, n):
            for i in range(j):
                for tm in range(1, lam[j] + 1):
                    mu = list(lam)
                    mu[i] += tm
                    mu[j] -= tm
                    mu.sort(reverse=True)
                    while mu and mu[-1] == 0:
                        mu.pop()
                    row.append((index[tuple(mu)], lam[i] - lam[j] + 2 * tm))
        moves.append(row)
    return moves


class _DegreeBlock:
    __slots__ = ("t", "parts", "index", "coef", "E", "seg", "exact")

    def __init__(self, t, parts, index, coef, E, seg, exact):
        self.t = t
        self.parts = parts
        self.index = index
        self.coef = coef
        self.E = E
        self.seg = seg
        self.exact = exact  # list of dense rows of exact rationals, or None


def _build_block(m, t, keep_exact):
    parts = partition_tuples(t, m)
    Kn = len(parts)
    index = {p: i for i, p in enumerate(parts)}
    rho = [sum(p[i] * (p[i] - (i + 1)) for i in range(len(p))) for p in parts]
    moves = _move_table(parts, index)

    # recurrence rows, leading coefficient 1
    ctilde = []
    for r in range(Kn):
        row = [0] * Kn
        row[r] = _QQ(1)
        rho_k = rho[r]
        for l in range(r + 1, Kn):
            acc = 0
            for mu, coef in moves[l]:
                v = row[mu]
                if v:
                    acc = acc + coef * v
            if acc:
                row[l] = acc / (rho_k - rho[l])
        ctilde.append(row)

    # sum-rule normalization: sum_kappa c_{kappa,lam} = t! / prod(lam_i!)
    d = [None] * Kn
    for l in range(Kn):
        target = math.factorial(t)
        for v in parts[l]:
            target //= math.factorial(v)
        acc = _QQ(target)
        for r in range(l):
            v = ctilde[r][l]
            if v:
                acc = acc - d[r] * v
        d[l] = acc

    coef = np.zeros((Kn, Kn))
    exact = [] if keep_exact else None
    for r in range(Kn):
        row = ctilde[r]
        dr = d[r]
        erow = [0] * Kn if keep_exact else None
        for l in range(r, Kn):
            v = row[l]
            if v:
                ev = dr * v
                coef[r, l] = float(ev)
                if keep_exact:
                    erow[l] = ev
        if keep_exact:
            exact.append(erow)

    rows = []
    seg = []
    for l, lam in enumerate(parts):
        for perm in _multiset_perms(lam, m):
            rows.append(perm)
            seg.append(l)
    E = np.array(rows, dtype=np.int64).reshape(len(rows), m)
    return _DegreeBlock(t, parts, index, coef, E, np.array(seg, dtype=np.int64), exact)


class ZonalTable:
    """Expansion coefficients of all zonal polynomials up to a degree bound.

    Immutable once built for a degree; extension to higher degrees is guarded
    by a lock (at-most-once construction per degree).
    """

    def __init__(self, m: int, keep_exact: bool = True):
        if m < 1:
            raise ValueError("variable count must be positive")
        self.m = m
        self.keep_exact = keep_exact
        self._blocks = []
        self._lock = threading.RLock()

    @property
    def max_degree(self) -> int:
        return len(self._blocks) - 1

    def extend_to(self, T: int) -> "ZonalTable":
        if T < len(self._blocks):
            return self
        with self._lock:
            while len(self._blocks) <= T:
                self._blocks.append(_build_block(self.m, len(self._blocks), self.keep_exact))
        return self

    def block(self, t: int) -> _DegreeBlock:
        if t >= len(self._blocks):
            raise PartitionOutOfRange(f"degree {t} above table bound {self.max_degree}")
        return self._blocks[t]

    def partitions(self, t: int):
        return self.block(t).parts

    def coeff_exact(self, tau, lam):
        """Exact rational coefficient of m_lam in C_tau."""
        if not self.keep_exact:
            raise ValueError("table was built without exact coefficients")
        tp = as_parts(tau)
        lp = as_parts(lam)
        blk = self.block(sum(tp))
        v = blk.exact[blk.index[tp]][blk.index[lp]]
        return _QQ(v) if v == 0 else v


def build_zonal_table(m: int, T: int, cap: int = DEFAULT_DEGREE_CAP, keep_exact: bool = True) -> ZonalTable:
    """Build the coefficient table for m variables up to degree T.

    Raises DegreeTooLarge when T exceeds `cap` (default 40); pass a larger cap
    explicitly to go higher.
    """
    if T < 0:
        raise ValueError("degree bound must be non-negative")
    if T > cap:
        raise DegreeTooLarge(f"degree bound {T} above cap {cap}")
    return ZonalTable(m, keep_exact=keep_exact).extend_to(T)


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def get_table(m: int, T: int) -> ZonalTable:
    """Shared evaluation table for m variables, extended to degree T on demand."""
    with _CACHE_LOCK:
        tab = _CACHE.get(m)
        if tab is None:
            tab = ZonalTable(m, keep_exact=False)
            _CACHE[m] = tab
    return tab.extend_to(T)


def monomial_values(table: ZonalTable, t: int, x) -> np.ndarray:
    blk = table.block(t)
    return K.monomial_batch(np.asarray(x, dtype=np.float64), blk.E, blk.seg, len(blk.parts))


def zonal_values_at_degree(table: ZonalTable, t: int, x) -> np.ndarray:
    """Values of every C_tau with tau |- t at the eigenvalue vector x."""
    blk = table.block(t)
    mvals = K.monomial_batch(np.asarray(x, dtype=np.float64), blk.E, blk.seg, len(blk.parts))
    return K.zonal_values(blk.coef, mvals)


def zonal_eval(table: ZonalTable, tau, x) -> float:
    """C_tau evaluated at diag(x)."""
    tp = as_parts(tau)
    t = sum(tp)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != table.m:
        raise DimensionMismatch(f"expected a length-{table.m} vector")
    if len(tp) > table.m or t > table.max_degree:
        raise PartitionOutOfRange(f"partition {tp} outside table range")
    blk = table.block(t)
    mvals = K.monomial_batch(x, blk.E, blk.seg, len(blk.parts))
    return float(np.dot(blk.coef[blk.index[tp]], mvals))


def zonal_at_identity_log(tau, m: int) -> float:
    """log C_tau(I_m) by the closed-form product (all factors positive)."""
    p = as_parts(tau)
    nparts = len(p)
    if nparts > m:
        raise PartitionOutOfRange(f"partition {p} has more than {m} parts")
    k = sum(p)
    if k == 0:
        return 0.0
    _, logpoch = gen_pochhammer_log(0.5 * m, p)
    logv = 2.0 * k * _LN2 + math.lgamma(k + 1) + logpoch
    for i in range(nparts):
        for j in range(i + 1, nparts):
            logv += math.log(2.0 * p[i] - 2.0 * p[j] + (j - i))
        logv -= math.lgamma(2 * p[i] + nparts - i)
    return logv


def zonal_at_identity(tau, m: int) -> float:
    """C_tau(I_m); may overflow to inf at very high degree (use the log form)."""
    return math.exp(zonal_at_identity_log(tau, m))


TABLE_FORMAT = "bgbeta-zonal-table"
TABLE_VERSION = 1


def save_table(table: ZonalTable, path) -> None:
    """Versioned JSON dump; rational coefficients round-trip bit-exactly."""
    if not table.keep_exact:
        raise ValueError("only tables with exact coefficients can be serialized")
    degrees = []
    for t in range(table.max_degree + 1):
        blk = table.block(t)
        coeffs = []
        for r in range(len(blk.parts)):
            row = [[l, str(blk.exact[r][l])] for l in range(len(blk.parts)) if blk.exact[r][l]]
            coeffs.append(row)
        degrees.append({"t": t, "partitions": [list(p) for p in blk.parts], "coeffs": coeffs})
    doc = {
        "format": TABLE_FORMAT,
        "version": TABLE_VERSION,
        "m": table.m,
        "max_degree": table.max_degree,
        "degrees": degrees,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_table(path) -> ZonalTable:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != TABLE_FORMAT or doc.get("version") != TABLE_VERSION:
        raise ValueError("unrecognized table file")
    m = doc["m"]
    table = ZonalTable(m, keep_exact=True)
    for entry in doc["degrees"]:
        t = entry["t"]
        parts = partition_tuples(t, m)
        if [list(p) for p in parts] != entry["partitions"]:
            raise ValueError("partition order mismatch in table file")
        Kn = len(parts)
        index = {p: i for i, p in enumerate(parts)}
        coef = np.zeros((Kn, Kn))
        exact = []
        for r, row in enumerate(entry["coeffs"]):
            erow = [0] * Kn
            for l, sval in row:
                v = _QQ(sval)
                erow[l] = v
                coef[r, l] = float(v)
            exact.append(erow)
        rows = []
        seg = []
        for l, lam in enumerate(parts):
            for perm in _multiset_perms(lam, m):
                rows.append(perm)
                seg.append(l)
        E = np.array(rows, dtype=np.int64).reshape(len(rows), m)
        blk = _DegreeBlock(t, parts, index, coef, E, np.array(seg, dtype=np.int64), exact)
        table._blocks.append(blk)
    return table

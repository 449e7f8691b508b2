"""Integer partitions and generalised Pochhammer symbols."""

from __future__ import annotations

import math
from functools import lru_cache


class Partition:
    """Non-increasing tuple of non-negative integers; trailing zeros stripped."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        p = tuple(int(v) for v in parts)
        while p and p[-1] == 0:
            p = p[:-1]
        for i in range(1, len(p)):
            if p[i] > p[i - 1]:
                raise ValueError(f"parts must be non-increasing, got {parts}")
        if p and p[-1] < 0:
            raise ValueError("parts must be non-negative")
        self.parts = p

    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        return self.parts == as_parts(other)

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"


def as_parts(tau) -> tuple:
    """Coerce a Partition or iterable of parts to a canonical tuple."""
    if isinstance(tau, Partition):
        return tau.parts
    p = tuple(int(v) for v in tau)
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _gen(remaining, max_part, slots):
    if remaining == 0:
        yield ()
        return
    if slots == 0:
        return
    lo = -(-remaining // slots)  # ceil: smallest feasible first part
    for first in range(min(remaining, max_part), lo - 1, -1):
        for rest in _gen(remaining - first, first, slots - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _partitions_cached(t: int, max_parts: int) -> tuple:
    return tuple(_gen(t, t, max_parts)) if t > 0 else ((),)


def partitions_of(t: int, max_parts: int) -> list:
    """All partitions of weight t with at most max_parts parts, reverse-lexicographic."""
    if t < 0:
        raise ValueError("weight must be non-negative")
    if max_parts < 1:
        raise ValueError("max_parts must be positive")
    return [Partition(p) for p in _partitions_cached(t, max_parts)]


def partition_tuples(t: int, max_parts: int) -> tuple:
    """Raw tuples, same order as partitions_of; internal fast path."""
    return _partitions_cached(t, max_parts)


def dominates(kappa, lam) -> bool:
    """True if kappa >= lam in dominance order (equal weights assumed)."""
    k = as_parts(kappa)
    l = as_parts(lam)
    sk = 0
    sl = 0
    for i in range(max(len(k), len(l))):
        sk += k[i] if i < len(k) else 0
        sl += l[i] if i < len(l) else 0
        if sk < sl:
            return False
    return True


def gen_pochhammer(a: float, tau) -> float:
    """(a)_tau = prod_i (a - (i-1)/2)_{t_i} as a direct float product."""
    out = 1.0
    for i, t in enumerate(as_parts(tau)):
        base = a - 0.5 * i
        for k in range(t):
            out *= base + k
    return out


def gen_pochhammer_log(a: float, tau):
    """(sign, log|value|) form of the generalised Pochhammer symbol.

    Positive bases go through lgamma; bases at or below zero fall back to the
    explicit product to track the sign (or an exact zero).
    """
    sign = 1.0
    logabs = 0.0
    for i, t in enumerate(as_parts(tau)):
        if t == 0:
            continue
        base = a - 0.5 * i
        if base > 0.0:
            logabs += math.lgamma(base + t) - math.lgamma(base)
            continue
        for k in range(t):
            f = base + k
            if f == 0.0:
                return 0.0, -math.inf
            if f < 0.0:
                sign = -sign
            logabs += math.log(abs(f))
    return sign, logabs


def rising_factorial(a: float, t: int) -> float:
    """Scalar (a)_t."""
    out = 1.0
    for k in range(t):
        out *= a + k
    return out

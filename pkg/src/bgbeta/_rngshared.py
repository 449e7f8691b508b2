"""Constants and scalar helpers for the counter-based random streams.

Every variate is a pure function of ``(seed, domain, chunk, index)``:
``domain`` separates independent consumers (gamma sampler, bgb1 sampler, ...),
``chunk`` is ``global_index // CHUNK`` and ``index`` the offset inside the
chunk.  Chunks are the unit of parallel work; reducing them in index order
makes every Monte Carlo result independent of the thread count.

The per-sample generator is splitmix64: raw draw ``j`` of a stream with base
``z`` is ``mix64(z + j * GOLD)``.
"""

MASK64 = (1 << 64) - 1

CHUNK = 4096
CHUNK_SHIFT = 12  # CHUNK == 1 << CHUNK_SHIFT

GOLD = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB

# absorb constants for domain / chunk / index words
C_DOMAIN = 0xD1342543DE82EF95
C_CHUNK = 0xAF251AF3B0F025B5
C_INDEX = 0xB564EF22EC7AECE5

# stream domains
DOM_GAMMA = 1
DOM_BGB1 = 2
DOM_BGB2 = 3
DOM_BETA1 = 4
DOM_SCALAR = 5

TWO_PI = 6.283185307179586
SQRT_HALF = 0.7071067811865476
INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer on python ints (explicit 64-bit wrap)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & MASK64
    return z ^ (z >> 31)


def seed_domain_mix(seed: int, domain: int) -> int:
    """Pre-mix the (seed, domain) pair shared by all streams of one consumer."""
    z = mix64((seed + GOLD) & MASK64)
    return mix64(z ^ (((domain + 1) * C_DOMAIN) & MASK64))


def stream_base(seed: int, domain: int, chunk: int, index: int) -> int:
    """Base of the stream for sample `index` of `chunk` (python ints)."""
    z = seed_domain_mix(seed, domain)
    z = mix64(z ^ (((chunk + 1) * C_CHUNK) & MASK64))
    return mix64(z ^ (((index + 1) * C_INDEX) & MASK64))

"""Counter-based Gaussian generator.

Every draw is a pure function of ``(seed, counter)``: the 64-bit state
``seed + (2k + m) * GOLDEN`` is passed through the SplitMix64 finalizer, the
top 53 bits become a uniform in (0, 1), and pairs of uniforms become a pair
of standard normals by Box-Muller. Nothing is stored between calls, so any
row of any stream can be regenerated from its index alone.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB

# Domain-separation tags mixed into seeds so streams never overlap.
THETA_TAG = 0x5448455441
NOISE_TAG = 0x4E4F495345
CODEBOOK_TAG = 0x434F4445424B
TESTDIST_TAGS = (0x5444303031, 0x5444303032, 0x5444303033)
RETRY_TAG = 0x5245545259

_GOLDEN = np.uint64(GOLDEN)
_C1 = np.uint64(MIX_C1)
_C2 = np.uint64(MIX_C2)
_TWO = np.uint64(2)
_UNIT = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z ^= z >> 30
    z = (z * MIX_C1) & MASK64
    z ^= z >> 27
    z = (z * MIX_C2) & MASK64
    z ^= z >> 31
    return z


def mix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = z ^ (z >> np.uint64(30))
    z = z * _C1
    z ^= z >> np.uint64(27)
    z *= _C2
    z ^= z >> np.uint64(31)
    return z


def derive_seed(seed: int, *tags: int) -> int:
    """Fold tags into a seed; distinct tag paths give unrelated streams."""
    s = seed & MASK64
    for tag in tags:
        s = mix64(((s ^ mix64((tag * GOLDEN + GOLDEN) & MASK64)) + GOLDEN) & MASK64)
    return s


def uniforms(seed: int, counters: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    base = np.uint64(seed & MASK64)
    k2 = counters * _TWO
    w0 = mix64_array(base + k2 * _GOLDEN)
    w1 = mix64_array(base + (k2 + np.uint64(1)) * _GOLDEN)
    u0 = ((w0 >> np.uint64(11)).astype(np.float64) + 0.5) * _UNIT
    u1 = ((w1 >> np.uint64(11)).astype(np.float64) + 0.5) * _UNIT
    return u0, u1


def gaussian_pairs(seed: int, counters: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u0, u1 = uniforms(seed, counters)
    radius = np.sqrt(-2.0 * np.log(u0))
    angle = 2.0 * np.pi * u1
    return radius * np.cos(angle), radius * np.sin(angle)


def gaussian_rows(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Rows ``start..stop-1`` of the stream, each holding n standard normals.

    Row i, coordinate pair (2j, 2j+1) uses counter ``i * ceil(n/2) + j``; an
    odd n drops the last sine draw.
    """
    half = (n + 1) // 2
    rows = np.arange(start, stop, dtype=np.uint64)
    counters = rows[:, None] * np.uint64(half) + np.arange(half, dtype=np.uint64)[None, :]
    z0, z1 = gaussian_pairs(seed, counters)
    out = np.empty((stop - start, 2 * half), dtype=np.float64)
    out[:, 0::2] = z0
    out[:, 1::2] = z1
    return out[:, :n]


def gaussian_vector(seed: int, n: int) -> np.ndarray:
    return gaussian_rows(seed, 0, 1, n)[0]

"""Seed-derived codebooks and the exhaustive max-inner-product search.

The magnitude grid is arithmetic; the direction codebook is never stored.
Codeword i is regenerated from (seed, i, n) through the counter-based
generator, so the decoder needs only the index.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from pydantic import ValidationError

from config.settings import get_settings
from utils.errors import CapacityError, DomainError, UsageError, validation_detail
from utils.prng import MASK64, RETRY_TAG, derive_seed, gaussian_rows
from validation.codebook_models import DirectionCodebook, MagnitudeGrid
from validation.model_params import MAX_INDEX_BITS, as_vector, coerce_rate

logger = logging.getLogger(__name__)


def codeword_count(n: int, rate_b) -> int:
    """max(1, floor(2^(nB))), computed exactly from the rational nB."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    try:
        rate = coerce_rate(rate_b)
    except ValueError as e:
        raise DomainError(str(e))
    bits = int(n) * rate
    if bits > MAX_INDEX_BITS:
        raise CapacityError(f"n*B = {bits} bits exceeds the {MAX_INDEX_BITS}-bit codebook limit")
    p, q = bits.numerator, bits.denominator
    if q == 1:
        return 1 << p
    # largest m with m^q <= 2^p
    target = 1 << p
    m = int(2.0 ** (p / q))
    while m > 1 and m ** q > target:
        m -= 1
    while (m + 1) ** q <= target:
        m += 1
    return max(1, m)


def _check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed <= MASK64:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return int(seed)


def codeword_block(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Unit codewords start..stop-1 as rows of a (stop - start, n) array."""
    z = gaussian_rows(seed, start, stop, n)
    norms = np.sqrt(np.sum(z * z, axis=1))
    for row in np.flatnonzero(norms == 0):
        # all-zero draw: redraw the row from a retry stream until it has length
        attempt = 1
        while norms[row] == 0:
            retry_seed = derive_seed(seed, RETRY_TAG, attempt)
            z[row] = gaussian_rows(retry_seed, start + row, start + row + 1, n)[0]
            norms[row] = math.sqrt(float(np.sum(z[row] * z[row])))
            attempt += 1
    return z / norms[:, None]


def codeword(seed: int, i: int, n: int) -> np.ndarray:
    seed = _check_seed(seed)
    if int(i) != i or i < 0 or i >= 1 << MAX_INDEX_BITS:
        raise UsageError(f"codeword index must be in [0, 2^{MAX_INDEX_BITS}), got {i}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return codeword_block(seed, int(i), int(i) + 1, int(n))[0]


def direction_codebook(n: int, rate_b, seed: int) -> DirectionCodebook:
    return DirectionCodebook(seed=_check_seed(seed), n=n, count=codeword_count(n, rate_b))


def codebook_entry(book: DirectionCodebook, i: int) -> np.ndarray:
    if not 0 <= i < book.count:
        raise UsageError(f"direction index {i} out of range for a codebook of {book.count}")
    return codeword(book.seed, i, book.n)


def magnitude_grid(n: int, c2: float) -> MagnitudeGrid:
    try:
        return MagnitudeGrid(n=n, c2=c2)
    except ValidationError as e:
        raise DomainError(validation_detail(e))


def encode_magnitude(bhat2: float, grid: MagnitudeGrid) -> int:
    """Index of the grid value nearest bhat2; ties go to the lower index.

    Values below the grid map to 0, above it to the last index.
    """
    b = float(bhat2)
    if not math.isfinite(b):
        raise DomainError(f"bhat2 must be finite, got {bhat2}")
    last = grid.size - 1
    position = b * math.sqrt(grid.n) - 1.0
    centre = min(max(math.floor(position), 0), last)
    best = None
    for index in (centre - 1, centre, centre + 1):
        if 0 <= index <= last:
            gap = abs(grid.value(index) - b)
            if best is None or gap < best[1]:
                best = (index, gap)
    return best[0]


def decode_magnitude(index: int, grid: MagnitudeGrid) -> float:
    if int(index) != index or not 0 <= index < grid.size:
        raise UsageError(f"magnitude index {index} out of range for a grid of {grid.size}")
    return grid.value(int(index))


def scan_range(x: np.ndarray, seed: int, start: int, stop: int, block_size: int | None = None) -> tuple[int, float]:
    """Serial exhaustive scan of codewords start..stop-1 against x."""
    block = block_size or get_settings().search_block_size
    n = x.shape[0]
    best_index, best_inner = -1, -math.inf
    for lo in range(start, stop, block):
        hi = min(lo + block, stop)
        inner = np.sum(codeword_block(seed, lo, hi, n) * x, axis=1)
        j = int(np.argmax(inner))
        if inner[j] > best_inner:
            best_index, best_inner = lo + j, float(inner[j])
    return best_index, best_inner


def merge_candidates(candidates) -> tuple[int, float]:
    """Largest inner product, lowest index among exact ties."""
    return max(candidates, key=lambda c: (c[1], -c[0]))


def partition(count: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, count))
    step, extra = divmod(count, parts)
    bounds, lo = [], 0
    for k in range(parts):
        hi = lo + step + (1 if k < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def search_direction(x, seed: int, count: int, workers: int | None = None) -> tuple[int, float]:
    """argmax_i <x, codeword(seed, i, n)> over i < count, with the achieved inner product.

    Contiguous index ranges fan out over a process pool; the merge rule makes
    the result independent of the worker count.
    """
    x = as_vector(x, name="x")
    if not np.any(x):
        raise DomainError("cannot search the direction of the zero vector")
    seed = _check_seed(seed)
    if int(count) != count or count < 1:
        raise UsageError(f"count must be a positive integer, got {count}")
    if count > 1 << MAX_INDEX_BITS:
        raise CapacityError(f"count {count} exceeds the 2^{MAX_INDEX_BITS} codebook limit")

    settings = get_settings()
    workers = settings.workers if workers is None else workers
    if workers <= 1 or count < settings.parallel_min_count:
        return scan_range(x, seed, 0, count, settings.search_block_size)

    ranges = partition(count, workers)
    logger.info(f"Searching {count} codewords in dimension {x.shape[0]} across {len(ranges)} workers")
    with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
        futures = [pool.submit(scan_range, x, seed, lo, hi, settings.search_block_size) for lo, hi in ranges]
        candidates = [f.result() for f in futures]
    return merge_candidates(candidates)

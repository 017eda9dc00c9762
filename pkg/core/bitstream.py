"""Bit-exact `.qgsm` stream: 41-byte big-endian header, then the two indices.

Layout::

    magic "QGSM" | version u8 | n u32 | rate_num u32 | rate_den u32
    | sigma2 f64 | c2 f64 | seed u64 | payload

The payload holds mag_index in ceil(log2 grid_size) bits followed by
dir_index in ceil(log2 count) bits, most significant bit first, zero padded
to a byte boundary.
"""

import logging
import struct
from pathlib import Path

from pydantic import ValidationError

from core.codebook import codeword_count, magnitude_grid
from utils.errors import (
    BadMagicError,
    CapacityError,
    IndexBoundsError,
    MalformedHeaderError,
    StreamParseError,
    TruncatedStreamError,
    UnsupportedVersionError,
    UsageError,
    validation_detail,
)
from validation.model_params import ModelParams, QuantizedIndex
from validation.stream_models import U32_LIMIT, StreamHeader

logger = logging.getLogger(__name__)

MAGIC = b"QGSM"
VERSION = 1
HEADER_FORMAT = ">4sBIIIddQ"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
FILE_SUFFIX = ".qgsm"


def payload_bit_widths(n: int, rate_b, c2: float) -> tuple[int, int]:
    """(magnitude bits, direction bits); a one-element codebook takes 0 bits."""
    mag_bits = (magnitude_grid(n, c2).size - 1).bit_length()
    dir_bits = (codeword_count(n, rate_b) - 1).bit_length()
    return mag_bits, dir_bits


def header_for(params: ModelParams, seed: int) -> StreamHeader:
    rate = params.rate_b
    if rate.numerator >= U32_LIMIT or rate.denominator >= U32_LIMIT:
        raise UsageError(f"rate {rate} does not fit the 32-bit header fields")
    return StreamHeader(
        n=params.n, rate_num=rate.numerator, rate_den=rate.denominator,
        sigma2=params.sigma2, c2=params.c2, seed=seed,
    )


def _index_bounds(header: StreamHeader) -> tuple[int, int]:
    return magnitude_grid(header.n, header.c2).size, codeword_count(header.n, header.rate_b)


def pack(header: StreamHeader, idx: QuantizedIndex) -> bytes:
    if idx.seed != header.seed:
        raise UsageError(f"index seed {idx.seed} differs from header seed {header.seed}")
    grid_size, count = _index_bounds(header)
    if idx.mag_index >= grid_size:
        raise UsageError(f"magnitude index {idx.mag_index} out of range for a grid of {grid_size}")
    if idx.dir_index >= count:
        raise UsageError(f"direction index {idx.dir_index} out of range for a codebook of {count}")

    mag_bits, dir_bits = payload_bit_widths(header.n, header.rate_b, header.c2)
    total = mag_bits + dir_bits
    n_bytes = (total + 7) // 8
    value = (idx.mag_index << dir_bits) | idx.dir_index
    payload = (value << (8 * n_bytes - total)).to_bytes(n_bytes, "big")

    head = struct.pack(
        HEADER_FORMAT, header.magic, header.version, header.n,
        header.rate_num, header.rate_den, header.sigma2, header.c2, header.seed,
    )
    return head + payload


def unpack(data: bytes) -> tuple[StreamHeader, QuantizedIndex]:
    data = bytes(data)
    if len(data) >= 4 and data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) >= 5 and data[4] != VERSION:
        raise UnsupportedVersionError(f"unsupported version {data[4]}, expected {VERSION}")
    if len(data) < HEADER_SIZE:
        raise TruncatedStreamError(f"truncated stream: {len(data)} bytes, header needs {HEADER_SIZE}")

    magic, version, n, rate_num, rate_den, sigma2, c2, seed = struct.unpack_from(HEADER_FORMAT, data)
    try:
        header = StreamHeader(
            magic=magic, version=version, n=n, rate_num=rate_num,
            rate_den=rate_den, sigma2=sigma2, c2=c2, seed=seed,
        )
        grid_size, count = _index_bounds(header)
    except ValidationError as e:
        raise MalformedHeaderError(f"malformed header: {validation_detail(e)}")
    except CapacityError as e:
        raise MalformedHeaderError(f"malformed header: {e.detail}")

    mag_bits, dir_bits = payload_bit_widths(n, header.rate_b, c2)
    total = mag_bits + dir_bits
    n_bytes = (total + 7) // 8
    expected = HEADER_SIZE + n_bytes
    if len(data) < expected:
        raise TruncatedStreamError(f"truncated stream: {len(data)} bytes, expected {expected}")
    if len(data) > expected:
        raise StreamParseError(f"trailing bytes: {len(data)} bytes, expected {expected}")

    value = int.from_bytes(data[HEADER_SIZE:], "big")
    pad = 8 * n_bytes - total
    if value & ((1 << pad) - 1):
        raise StreamParseError("nonzero padding bits after the payload")
    value >>= pad
    dir_index = value & ((1 << dir_bits) - 1)
    mag_index = value >> dir_bits
    if mag_index >= grid_size or dir_index >= count:
        raise IndexBoundsError(
            f"index exceeds codebook bounds: mag {mag_index}/{grid_size}, dir {dir_index}/{count}"
        )
    return header, QuantizedIndex(mag_index=mag_index, dir_index=dir_index, seed=seed)


def write_stream(path: Path, header: StreamHeader, idx: QuantizedIndex) -> int:
    """Write a packed stream; returns the payload size in bits."""
    Path(path).write_bytes(pack(header, idx))
    mag_bits, dir_bits = payload_bit_widths(header.n, header.rate_b, header.c2)
    logger.info(f"Wrote {path} ({mag_bits}+{dir_bits} payload bits)")
    return mag_bits + dir_bits


def read_stream(path: Path) -> tuple[StreamHeader, QuantizedIndex]:
    return unpack(Path(path).read_bytes())

import math
from fractions import Fraction
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from utils.errors import DomainError, UsageError

U64_LIMIT = 2**64
MAX_INDEX_BITS = 62

# Length-n real sequence: theta, X, the decoded estimate.
Vector = NDArray[np.float64]


def coerce_rate(value: Any) -> Fraction:
    """Parse a rate given as Fraction, int, decimal float/str, "p/q" or [p, q]."""
    if isinstance(value, bool):
        raise ValueError("rate must be a number, not a boolean")
    try:
        if isinstance(value, Fraction):
            rate = value
        elif isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError("rate pair must be [numerator, denominator]")
            rate = Fraction(int(value[0]), int(value[1]))
        elif isinstance(value, int):
            rate = Fraction(value)
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError("rate must be finite")
            # decimal text keeps 0.1 as 1/10 instead of its binary expansion
            rate = Fraction(repr(value))
        elif isinstance(value, str):
            rate = Fraction(value.strip())
        else:
            raise ValueError(f"cannot interpret {value!r} as a rate")
    except ZeroDivisionError:
        raise ValueError("rate denominator must be nonzero")
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    return rate


def as_vector(values: Any, n: int | None = None, name: str = "x") -> Vector:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise UsageError(f"{name} must be a nonempty one-dimensional vector")
    if n is not None and arr.size != n:
        raise UsageError(f"{name} has length {arr.size}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


class ModelParams(BaseModel):
    """Problem instance: dimension, rate in bits per coordinate, noise, radius."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, description="Dimension")
    rate_b: Fraction = Field(..., description="Bits per coordinate, exact rational")
    sigma2: float = Field(..., gt=0, allow_inf_nan=False, description="Noise variance")
    c2: float = Field(..., gt=0, allow_inf_nan=False, description="Squared ball radius")

    @field_validator("rate_b", mode="before")
    @classmethod
    def _parse_rate(cls, value):
        return coerce_rate(value)

    @field_serializer("rate_b")
    def _dump_rate(self, rate: Fraction):
        return [rate.numerator, rate.denominator]

    @property
    def total_bits(self) -> Fraction:
        return self.n * self.rate_b


class QuantizedIndex(BaseModel):
    """The transmitted pair plus the seed of the shared direction codebook."""
    model_config = ConfigDict(frozen=True)

    mag_index: int = Field(..., ge=0, description="Index into the magnitude grid")
    dir_index: int = Field(..., ge=0, description="Index into the direction codebook")
    seed: int = Field(..., ge=0, lt=U64_LIMIT, description="Codebook seed")


class LossDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    a1: float = Field(..., ge=0, description="Quantization term")
    a2: float = Field(..., ge=0, description="Linear-shrinkage term")
    a3: float = Field(..., description="Cross term")
    total: float = Field(..., ge=0)

    @property
    def residual(self) -> float:
        return self.a1 + self.a2 + self.a3 - self.total

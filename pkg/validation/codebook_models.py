import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from utils.errors import CapacityError
from validation.model_params import MAX_INDEX_BITS, U64_LIMIT


def grid_size(n: int, c2: float) -> int:
    """ceil(c2 * sqrt(n)), snapping products that land within rounding of an integer."""
    x = c2 * math.sqrt(n)
    if not math.isfinite(x) or x > 2**MAX_INDEX_BITS:
        raise CapacityError(f"magnitude grid for n={n}, c2={c2!r} exceeds 2^{MAX_INDEX_BITS} points")
    nearest = round(x)
    if abs(x - nearest) <= 1e-12 * max(1.0, x):
        return max(1, int(nearest))
    return max(1, math.ceil(x))


class MagnitudeGrid(BaseModel):
    """Squared-magnitude codebook {k/sqrt(n) : k = 1..ceil(c2 sqrt(n))}, never materialized."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    c2: float = Field(..., gt=0, allow_inf_nan=False)

    @property
    def size(self) -> int:
        return grid_size(self.n, self.c2)

    @property
    def spacing(self) -> float:
        return 1.0 / math.sqrt(self.n)

    def value(self, index: int) -> float:
        return (index + 1) / math.sqrt(self.n)

    def values(self) -> np.ndarray:
        return np.arange(1, self.size + 1, dtype=np.float64) / math.sqrt(self.n)


class DirectionCodebook(BaseModel):
    """Random spherical codebook, reproducible from (seed, index, n)."""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, lt=U64_LIMIT)
    n: int = Field(..., ge=1)
    count: int = Field(..., ge=1)

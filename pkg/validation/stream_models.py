from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from validation.model_params import U64_LIMIT, ModelParams

U32_LIMIT = 2**32


class StreamHeader(BaseModel):
    """Public parameters shared by encoder and decoder, carried in front of every stream."""
    model_config = ConfigDict(frozen=True)

    magic: Literal[b"QGSM"] = b"QGSM"
    version: Literal[1] = 1
    n: int = Field(..., ge=1, lt=U32_LIMIT)
    rate_num: int = Field(..., ge=0, lt=U32_LIMIT)
    rate_den: int = Field(..., ge=1, lt=U32_LIMIT)
    sigma2: float = Field(..., gt=0, allow_inf_nan=False)
    c2: float = Field(..., gt=0, allow_inf_nan=False)
    seed: int = Field(..., ge=0, lt=U64_LIMIT)

    @property
    def rate_b(self) -> Fraction:
        return Fraction(self.rate_num, self.rate_den)

    def params(self) -> ModelParams:
        return ModelParams(n=self.n, rate_b=self.rate_b, sigma2=self.sigma2, c2=self.c2)

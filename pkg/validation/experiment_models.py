from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from validation.model_params import MAX_INDEX_BITS, U64_LIMIT, coerce_rate


class EstimatorName(str, Enum):
    """Estimators the harness can run; values sort in report order."""
    JAMES_STEIN = "james_stein"
    LINEAR_SHRINKAGE = "linear_shrinkage"
    QUANTIZED = "quantized"
    ZERO = "zero"


class ExperimentSpec(BaseModel):
    """Monte Carlo configuration: one cell per (n, estimator)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    n_values: List[int] = Field(..., min_length=1, description="Dimensions to run")
    rate_b: Fraction = Field(..., description="Bits per coordinate, as [num, den] in JSON")
    sigma2: float = Field(..., gt=0, allow_inf_nan=False)
    c2: float = Field(..., gt=0, allow_inf_nan=False)
    b2: Optional[float] = Field(None, ge=0, allow_inf_nan=False, description="True signal energy; defaults to c2")
    replicates: int = Field(..., ge=1)
    master_seed: int = Field(..., ge=0, lt=U64_LIMIT)
    estimators: List[EstimatorName] = Field(default_factory=lambda: [EstimatorName.QUANTIZED], min_length=1)
    allow_large: bool = Field(False, description="Lift the desk-scale nB guard")

    @field_validator("rate_b", mode="before")
    @classmethod
    def _parse_rate(cls, value):
        return coerce_rate(value)

    @field_validator("n_values")
    @classmethod
    def _positive_dimensions(cls, values):
        if any(n < 1 for n in values):
            raise ValueError("every n must be a positive integer")
        return sorted(set(values))

    @field_validator("estimators")
    @classmethod
    def _unique_estimators(cls, values):
        return sorted(set(values), key=lambda e: e.value)

    @model_validator(mode="after")
    def _check_consistency(self):
        if self.b2 is None:
            self.b2 = self.c2
        if self.b2 > self.c2:
            raise ValueError(f"b2={self.b2} exceeds c2={self.c2}")
        if EstimatorName.QUANTIZED in self.estimators:
            for n in self.n_values:
                if n * self.rate_b > MAX_INDEX_BITS:
                    raise ValueError(f"n={n} gives n*rate_b above {MAX_INDEX_BITS} bits")
        return self

    @field_serializer("rate_b")
    def _dump_rate(self, rate: Fraction):
        return [rate.numerator, rate.denominator]


class CellResult(BaseModel):
    n: int
    estimator: EstimatorName
    mean_mse: float
    sd_mse: float = Field(..., ge=0)
    replicates: int = Field(..., ge=1)
    lower_bound: float = Field(..., ge=0, description="Risk bound at the cell's b2, from theory")


class ShrinkageResult(BaseModel):
    """Per-coordinate averages of the shrinkage comparison."""
    theta: List[float]
    rates: List[float]
    quantized_means: List[List[float]] = Field(..., description="One row of coordinate means per rate")
    james_stein_mean: List[float]
    mean_norms: List[float] = Field(..., description="Mean |estimate| per rate")
    replicates: int


class SuiteCase(BaseModel):
    label: str
    observed: float
    bound: float
    slack: float = 0.0
    passed: bool


class SuiteReport(BaseModel):
    name: str
    cases: List[SuiteCase]

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

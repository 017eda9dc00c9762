import os
from functools import lru_cache
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="QGSM_", env_file=".env", extra="ignore")

    workers: int = Field(default=os.cpu_count() or 1, ge=1)
    search_block_size: int = Field(default=16384, ge=1)
    parallel_min_count: int = Field(default=65536, ge=1)
    desk_scale_max_bits: int = Field(default=26, ge=0, le=62)
    log_level: str = "INFO"
    verify_seed: int = Field(default=20140101, ge=0, lt=2**64)
    verify_replicates: int = Field(default=100000, ge=100)
    orthogonality_k: float = Field(default=1.0, gt=0)


@lru_cache()
def get_settings():
    return Settings()

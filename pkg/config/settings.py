from typing import Optional, List
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Logging Configuration
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None
    LOG_JSON: bool = False

    # Experiment defaults
    DEFAULT_SEED: int = 42
    DEFAULT_TRIALS: int = 100_000
    MIN_TRIALS: int = 1_000
    VERIFY_Z: float = 3.0
    MIN_EFFECTIVE_SAMPLES: float = 100.0
    OUTPUT_FORMAT: str = "csv"

    # Simulation workers (default thread count for trial-parallel runs)
    SIM_WORKERS: int = 1
    SIM_BLOCK_SIZE: int = 4096

    # Quadrature and summation
    QUAD_EPSABS: float = 1e-12
    QUAD_EPSREL: float = 1e-10
    TAIL_MASS: float = 1e-15

    # Heaviness classifier
    HEAVINESS_TOLERANCE: float = 1e-9
    HEAVINESS_GRID_POINTS: int = 200

    # One-dimensional searches
    GOLDEN_TOLERANCE: float = 1e-10
    P_MAX: float = 1e6

    @field_validator("OUTPUT_FORMAT", mode="before")
    @classmethod
    def normalize_output_format(cls, v):
        """Accept CSV/JSON in any case"""
        if isinstance(v, str):
            return v.strip().lower()
        return v

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Log levels are matched upper-case"""
        if isinstance(v, str):
            return v.strip().upper()
        return v

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        # Allow extra fields from environment that aren't defined in the model
        extra="ignore",
    )


# Create settings instance
settings = Settings()


# Validation
def validate_settings(current: Optional[Settings] = None) -> bool:
    """Validate numeric ranges of the active settings"""
    current = current or settings
    problems: List[str] = []

    if not 0 <= current.DEFAULT_SEED < 2**64:
        problems.append("DEFAULT_SEED must be a 64-bit unsigned integer")
    if current.DEFAULT_TRIALS < 1:
        problems.append("DEFAULT_TRIALS must be >= 1")
    if current.MIN_TRIALS < 1:
        problems.append("MIN_TRIALS must be >= 1")
    if current.MIN_EFFECTIVE_SAMPLES < 1:
        problems.append("MIN_EFFECTIVE_SAMPLES must be >= 1")
    if current.VERIFY_Z <= 0:
        problems.append("VERIFY_Z must be > 0")
    if current.SIM_WORKERS < 1:
        problems.append("SIM_WORKERS must be >= 1")
    if current.SIM_BLOCK_SIZE < 1:
        problems.append("SIM_BLOCK_SIZE must be >= 1")
    if current.OUTPUT_FORMAT not in ("csv", "json"):
        problems.append("OUTPUT_FORMAT must be csv or json")
    if current.P_MAX <= 2:
        problems.append("P_MAX must be > 2")
    for name in ("QUAD_EPSABS", "QUAD_EPSREL", "TAIL_MASS", "HEAVINESS_TOLERANCE", "GOLDEN_TOLERANCE"):
        if getattr(current, name) <= 0:
            problems.append(f"{name} must be > 0")

    if problems:
        raise ValueError(f"Invalid settings: {'; '.join(problems)}")

    return True


# Export settings
__all__ = ["Settings", "settings", "validate_settings"]

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from config.settings import settings

Command = Literal["heaviness", "bound", "transform", "simulate", "verify"]


class ExperimentConfig(BaseModel):
    """
    One CLI run. Every field mirrors a command-line flag; config files use
    the same keys (with underscores).
    """

    command: Command

    # Distribution for heaviness / transform
    dist: Optional[str] = None
    dist_params: Dict[str, float] = Field(default_factory=dict)

    # Process model
    model: Optional[Literal["regression", "ar1", "galton-watson"]] = None
    theta: float = 0.5
    sigma2: float = Field(default=1.0, gt=0)
    tau2: Optional[float] = Field(default=None, gt=0)
    zero_start: bool = False
    regressor: str = "normal:m=0,sigma2=1"
    noise: str = "normal:m=0,sigma2=1"
    paired: bool = False
    offspring: str = "geometric:p=0.5"
    extinction_policy: Literal["flag", "error"] = "flag"
    n: int = Field(default=100, ge=1)

    # Bound and event parameters
    bound: Optional[str] = None
    event: Optional[str] = None
    check: Literal["tail", "V", "W", "subgaussian", "identity"] = "tail"
    y: Optional[float] = Field(default=None, gt=0)
    a: float = Field(default=0.0, ge=0)
    b: float = Field(default=1.0, gt=0)
    c: Optional[float] = Field(default=None, gt=0)
    alpha: float = Field(default=1.0, gt=0)
    sided: Literal["one", "two"] = "two"
    one_sided: bool = False
    exchange: bool = False
    increment_range: Optional[str] = None  # "lo:hi" for azuma-hoeffding
    p: Optional[float] = None  # parameter of the closed-form application bounds

    # Transform mode
    transform: Optional[Literal["solve-yx", "cramer-h", "fenchel", "maximize-ell", "ldp-ls", "ldp-yw"]] = None
    t_lo: Optional[float] = None
    t_hi: Optional[float] = None

    # Grids
    x_grid: Optional[List[float]] = None
    t_grid: Optional[List[float]] = None
    a_grid: Optional[List[float]] = None
    tolerance: Optional[float] = Field(default=None, gt=0)

    # Run control
    trials: int = Field(default_factory=lambda: settings.DEFAULT_TRIALS, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0, lt=2**64)
    workers: Optional[int] = Field(default=None, ge=1)
    out: Optional[str] = None
    format: Literal["csv", "json"] = Field(default_factory=lambda: settings.OUTPUT_FORMAT)

    @field_validator("x_grid", "t_grid", "a_grid")
    @classmethod
    def check_nonempty(cls, v):
        if v is not None and len(v) == 0:
            raise ValueError("grid must not be empty")
        return v

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


__all__ = ["Command", "ExperimentConfig"]

import math
from typing import Any, Dict

from pydantic import BaseModel


class TransformResult(BaseModel):
    """
    Outcome of a one-dimensional transform or root solve.

    value may be math.inf, in which case `infinite` is set and `arg` is the
    last point reached by the bracket expansion.
    """

    value: float
    arg: float
    residual: float
    boundary_flag: bool = False
    infinite: bool = False

    @classmethod
    def unbounded(cls, arg: float) -> "TransformResult":
        return cls(value=math.inf, arg=arg, residual=0.0, boundary_flag=True, infinite=True)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "arg": self.arg,
            "residual": self.residual,
            "boundary_flag": self.boundary_flag,
        }

# functions.py
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from sobolev_anderson.errors import InvalidDimensionError, InvalidParameterError


class GridFunction(BaseModel):
    """Samples of a real or complex function on an equispaced grid"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    h: float = Field(gt=0)

    @field_validator("values", mode="before")
    @classmethod
    def _as_finite_vector(cls, value):
        arr = np.asarray(value)
        if not np.iscomplexobj(arr):
            arr = arr.astype(float)
        arr = arr.reshape(-1)
        if arr.size < 2:
            raise InvalidDimensionError(f"a grid function needs n >= 2 samples, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("grid function values must be finite")
        return arr

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)


ArrayOrGrid = Union[np.ndarray, GridFunction]


def as_array(x) -> np.ndarray:
    """Raw sample array of a GridFunction, or the input itself as an array"""
    if isinstance(x, GridFunction):
        return x.values
    return np.asarray(x)


def like(template, values: np.ndarray):
    """Wrap `values` the same way `template` was passed in"""
    if isinstance(template, GridFunction):
        return GridFunction(values=values, h=template.h)
    return values

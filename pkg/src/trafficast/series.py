"""Uniformly sampled time series container."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class TimeSeries:
    """Real-valued samples on a uniform time grid.

    ``dt`` is the sample spacing in seconds and ``origin`` the time of the
    first sample relative to capture start.  Values are stored as a
    read-only float64 array so instances can be shared across threads.
    """

    values: np.ndarray
    dt: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValidationError(
                f"series values must be one-dimensional, got shape {arr.shape}"
            )
        if arr.size < 1:
            raise ValidationError("series must contain at least one sample")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("series values must be finite")
        if not (isinstance(self.dt, (int, float)) and self.dt > 0):
            raise ValidationError(f"dt must be positive, got {self.dt!r}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "origin", float(self.origin))

    def __len__(self) -> int:
        return int(self.values.size)

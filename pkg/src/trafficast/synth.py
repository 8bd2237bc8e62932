"""Seeded synthetic datasets: seasonal traffic and state-space traces.

Used both as demo inputs and as test oracles, so everything here is
deterministic per seed (see :mod:`trafficast.rng`).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .kalman import StateSpaceModel
from .rng import normal_stream
from .series import TimeSeries


@dataclass(frozen=True)
class SeasonalSpec:
    """Sinusoidal daily-pattern stand-in: base rate plus one harmonic plus
    Gaussian noise, clipped at zero (rates cannot go negative)."""

    n: int = 5000
    period: int = 60
    amplitude: float = 20.0
    base_rate: float = 50.0
    noise_std: float = 5.0
    seed: int = 42

    def __post_init__(self):
        if self.period < 2:
            raise ValidationError(f"period must be >= 2, got {self.period}")
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.base_rate < 0:
            raise ValidationError("base_rate must be nonnegative")
        if self.noise_std < 0:
            raise ValidationError("noise_std must be nonnegative")


def gen_seasonal_traffic(spec: SeasonalSpec) -> TimeSeries:
    """values[i] = max(0, base + amplitude * sin(2*pi*i/period) + noise_i)."""
    if spec.n < spec.period:
        raise ValidationError("need at least one full cycle (n >= period)")
    i = np.arange(spec.n)
    noise = spec.noise_std * normal_stream(spec.seed, spec.n)
    values = spec.base_rate + spec.amplitude * np.sin(2.0 * np.pi * i / spec.period) + noise
    return TimeSeries(values=np.maximum(values, 0.0), dt=1.0)


def gen_linear_gaussian(
    model: StateSpaceModel, init, n: int, seed: int
) -> tuple[TimeSeries, TimeSeries]:
    """Simulate x_k = A x_{k-1} + w_k, z_k = H x_k + v_k for a scalar model.

    ``init`` is the state value before the first step.  The first n draws
    of the seeded stream drive the process noise, the next n the
    measurement noise.  Returns (states, measurements).
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if model.state_dim != 1 or model.obs_dim != 1:
        raise ValidationError(
            "series simulation supports scalar models; filter general models "
            "step by step instead"
        )
    a = float(model.A[0, 0])
    h = float(model.H[0, 0])
    w_std = float(np.sqrt(model.Q[0, 0]))
    v_std = float(np.sqrt(model.R[0, 0]))
    draws = normal_stream(seed, 2 * n)
    w = w_std * draws[:n]
    v = v_std * draws[n:]
    states = np.empty(n)
    x = float(np.atleast_1d(np.asarray(init, dtype=float))[0])
    for k in range(n):
        x = a * x + w[k]
        states[k] = x
    measurements = h * states + v
    return TimeSeries(values=states), TimeSeries(values=measurements)

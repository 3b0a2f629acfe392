"""Random interaction times.

A single atom velocity fixes both the cavity transit time ``tau`` and the
duration of the detection pulse, so the two are drawn as one correlated pair:
``t_final_pulse = length_ratio * tau``.

``spread`` is the half-width of the uniform distribution, or the standard
deviation of the (positive-truncated) gaussian.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidModel


class Distribution(str, enum.Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class TimingModel:
    tau_mean: float
    spread: float = 0.0
    length_ratio: float = 1.0
    distribution: Distribution = Distribution.UNIFORM

    def __post_init__(self):
        try:
            object.__setattr__(self, "distribution", Distribution(self.distribution))
        except ValueError:
            raise InvalidModel(f"unknown distribution {self.distribution!r}") from None
        if not self.tau_mean > 0:
            raise InvalidModel("tau_mean must be positive")
        if not self.spread >= 0:
            raise InvalidModel("spread must be non-negative")
        if not self.length_ratio > 0:
            raise InvalidModel("length_ratio must be positive")
        if self.distribution is Distribution.UNIFORM and not self.spread < self.tau_mean:
            raise InvalidModel("uniform spread must be smaller than tau_mean (no negative times)")


@dataclass(frozen=True)
class InteractionSample:
    tau: float
    t_final_pulse: float


def trajectory_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for trajectory ``index`` of an ensemble with base seed ``seed``."""
    return np.random.default_rng(int(seed) ^ int(index))


def _draw_tau(model: TimingModel, rng: np.random.Generator) -> float:
    if model.spread == 0.0:
        return model.tau_mean
    if model.distribution is Distribution.UNIFORM:
        return float(rng.uniform(model.tau_mean - model.spread, model.tau_mean + model.spread))
    while True:
        tau = float(rng.normal(model.tau_mean, model.spread))
        if tau > 0.0:
            return tau


def sample_times(model: TimingModel, rng: np.random.Generator) -> InteractionSample:
    """Draw one atom's cavity transit time and the matching detection-pulse duration."""
    tau = _draw_tau(model, rng)
    return InteractionSample(tau, model.length_ratio * tau)


def uncorrelated_sample_times(model: TimingModel, rng: np.random.Generator) -> InteractionSample:
    """Like `sample_times`, but the pulse duration comes from an independent draw."""
    tau = _draw_tau(model, rng)
    other = _draw_tau(model, rng)
    return InteractionSample(tau, model.length_ratio * other)


def sample_many(
    model: TimingModel, rng: np.random.Generator, count: int, correlated: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """``count`` successive draws as arrays ``(tau, t_final_pulse)``."""
    draw = sample_times if correlated else uncorrelated_sample_times
    taus = np.empty(count)
    pulses = np.empty(count)
    for k in range(count):
        s = draw(model, rng)
        taus[k] = s.tau
        pulses[k] = s.t_final_pulse
    return taus, pulses

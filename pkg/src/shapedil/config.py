"""Descriptor/metric configuration.

Defaults: four directions {-pi/4, 0, pi/4, pi/2} (uniform step pi/4 over one
period pi with endpoints identified), expansion coefficients {1, 3, 5} where
beta = 1 is the undeformed baseline, kappa = 1/5, target area 4096 pixels,
neighborhood radius 8 pixels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

DEFAULT_THETAS = (-math.pi / 4, 0.0, math.pi / 4, math.pi / 2)
DEFAULT_BETAS = (1.0, 3.0, 5.0)


class ConfigError(ValueError):
    """Invalid metric configuration."""


@dataclass(frozen=True)
class MetricConfig:
    epsilon: float = 8.0
    area: int = 4096
    thetas: tuple[float, ...] = DEFAULT_THETAS
    betas: tuple[float, ...] = DEFAULT_BETAS
    kappa: float = 0.2

    def __post_init__(self) -> None:
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if self.area <= 0:
            raise ConfigError("area must be > 0")
        if self.kappa <= 0:
            raise ConfigError("kappa must be > 0")
        if not self.thetas or not self.betas:
            raise ConfigError("theta/beta grids must be non-empty")
        if any(b < 1.0 for b in self.betas):
            raise ConfigError("all betas must be >= 1")
        if list(self.betas) != sorted(self.betas):
            raise ConfigError("betas must be sorted ascending")
        _check_uniform_cyclic(self.thetas)

    @property
    def theta_step(self) -> float:
        return math.pi / len(self.thetas)

    def config_line(self) -> str:
        """One-line canonical rendering, echoed into output artifact headers."""
        thetas = ",".join(f"{t:.9g}" for t in self.thetas)
        betas = ",".join(f"{b:.9g}" for b in self.betas)
        return (
            f"epsilon={self.epsilon:.9g} area={self.area} "
            f"thetas={thetas} betas={betas} kappa={self.kappa:.9g}"
        )

    def with_betas(self, betas: tuple[float, ...]) -> "MetricConfig":
        return replace(self, betas=tuple(betas))


def _check_uniform_cyclic(thetas: tuple[float, ...]) -> None:
    """The theta grid must tile one period pi uniformly so that orbit shifts
    act as grid automorphisms."""
    n = len(thetas)
    step = math.pi / n
    reduced = sorted(t % math.pi for t in thetas)
    for i in range(1, n):
        if abs((reduced[i] - reduced[i - 1]) - step) > 1e-9:
            raise ConfigError(
                f"theta grid {thetas} is not uniform with step pi/{n} over one period"
            )

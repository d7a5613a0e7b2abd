"""Fluid material parameters and spreading coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameter, TotalSpreading


def spreading_coefficients(gamma12, gamma13, gamma23):
    """Return the spreading coefficients ``(sigma1, sigma2, sigma3)``.

    Raises :class:`TotalSpreading` if any of them is non-positive; the
    ternary energy divides by each sigma, so only partial spreading is
    supported.
    """
    for name, g in (("gamma12", gamma12), ("gamma13", gamma13), ("gamma23", gamma23)):
        if not (g > 0 and math.isfinite(g)):
            raise InvalidParameter(name, f"{name} must be positive and finite, got {g!r}")
    s1 = gamma12 + gamma13 - gamma23
    s2 = gamma12 + gamma23 - gamma13
    s3 = gamma13 + gamma23 - gamma12
    if min(s1, s2, s3) <= 0:
        raise TotalSpreading((s1, s2, s3))
    return s1, s2, s3


@dataclass(frozen=True)
class MaterialParams:
    gamma12: float = 1.0
    gamma13: float = 1.0
    gamma23: float = 1.0
    epsilon: float = 0.05
    mobility: float = 1e-3
    rho: float = 1.0
    eta: float = 0.1
    sigma: tuple = field(default=(), compare=False)

    @property
    def sigmas(self) -> np.ndarray:
        """Spreading coefficients as a length-3 array."""
        return np.asarray(self.sigma if self.sigma else spreading_coefficients(
            self.gamma12, self.gamma13, self.gamma23), dtype=float)

    @property
    def kappa(self) -> np.ndarray:
        """Gradient-energy coefficients ``(3/4) * epsilon * sigma_i``."""
        return 0.75 * self.epsilon * self.sigmas

    @property
    def sigma1(self):
        return self.sigmas[0]

    @property
    def sigma2(self):
        return self.sigmas[1]

    @property
    def sigma3(self):
        return self.sigmas[2]


def validate(params: MaterialParams) -> MaterialParams:
    """Check positivity of every physical parameter and fill in the sigmas."""
    for name in ("epsilon", "mobility", "rho", "eta"):
        value = getattr(params, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise InvalidParameter(name, f"{name} must be positive and finite, got {value!r}")
    sig = spreading_coefficients(params.gamma12, params.gamma13, params.gamma23)
    return replace(params, sigma=tuple(float(s) for s in sig))

"""Material laws and domain/boundary descriptors for the grain-boundary model.

The concrete laws are

    alpha(s) = alpha0(s) = s^2/2 + delta0,   g(s) = s - 1,   G(s) = (s-1)^2/2,

so the orientation-order mobility vanishes with the order parameter when
``delta0 = 0`` and stays uniformly elliptic when ``delta0 > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MaterialLaws:
    """Mobilities and potential of the coupled order/orientation system."""

    delta0: float = 1e-3

    def __post_init__(self):
        if self.delta0 < 0.0:
            raise ValueError("delta0 must be >= 0")

    def alpha(self, s):
        return 0.5 * np.asarray(s, dtype=float) ** 2 + self.delta0

    # alpha0 coincides with alpha in the concrete setting
    alpha0 = alpha

    def alpha_prime(self, s):
        return np.asarray(s, dtype=float)

    def g(self, s):
        return np.asarray(s, dtype=float) - 1.0

    def G(self, s):
        return 0.5 * (np.asarray(s, dtype=float) - 1.0) ** 2

    def alpha_inverse(self, a):
        """Inverse of alpha restricted to s >= 0."""
        a = np.asarray(a, dtype=float)
        if np.any(a < self.delta0):
            raise ValueError("value below the range of alpha on [0, inf)")
        return np.sqrt(2.0 * (a - self.delta0))


@dataclass(frozen=True)
class Domain1D:
    """Unit interval with Dirichlet orientation data at both ends."""

    gamma_left: float = 0.0
    gamma_right: float = 1.0
    length: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.gamma_left) and np.isfinite(self.gamma_right)):
            raise ValueError("boundary data must be finite")

    @property
    def gamma_sup(self):
        return max(abs(self.gamma_left), abs(self.gamma_right))


@dataclass(frozen=True)
class DomainRadial:
    """Annulus r0 < |x| < R with radially symmetric boundary data."""

    r0: float
    R: float
    gamma_inner: float = 0.0
    gamma_outer: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.r0 < self.R:
            raise ValueError("need 0 < r0 < R")

    @property
    def gamma_sup(self):
        return max(abs(self.gamma_inner), abs(self.gamma_outer))


def admissible_initial_data(eta0, theta0, gamma_sup):
    """True iff 0 <= eta0 <= 1 and |theta0| <= gamma_sup nodewise."""
    if eta0.grid is not theta0.grid and eta0.grid != theta0.grid:
        raise ValueError("eta0 and theta0 live on different grids")
    e = eta0.values
    t = theta0.values
    return bool(np.all(e >= 0.0) and np.all(e <= 1.0) and np.all(np.abs(t) <= gamma_sup))

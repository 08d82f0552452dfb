"""Smooth convex approximations of the Euclidean norm.

Four one-parameter families (parameter ``nu`` in (0, 1)) that converge to
``|xi|`` as ``nu -> 0``:

* ``hyperbola``:  sqrt(|xi|^2 + nu^2) - nu
* ``yosida``:     Moreau envelope, (nu/2)|xi|^2 for |xi| <= 1/nu,
                  else |xi| - 1/(2 nu)
* ``tanh``:       integral of tanh(tau/nu) from 0 to |xi|,
                  i.e. nu * log(cosh(|xi|/nu))
* ``arctan``:     (2/pi) * integral of arctan(tau/nu) from 0 to |xi|

Each family provides the value, the gradient, the scalar second derivative
along the radial direction (used by the Newton solver), and envelope
constants (a, b, c) such that

    value(xi) >= a*|xi| - b   and   |gradient(xi)| <= c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("hyperbola", "yosida", "tanh", "arctan")


def _logcosh(t):
    # log(cosh(t)) without overflow for large |t|
    t = np.abs(t)
    return t + np.log1p(np.exp(-2.0 * t)) - math.log(2.0)


@dataclass(frozen=True)
class RegularizedNorm:
    """One member of the regularized-norm family."""

    kind: str
    nu: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if not 0.0 < self.nu < 1.0:
            raise ValueError(f"nu must lie in (0, 1), got {self.nu}")

    # -- scalar profiles in s = |xi| >= 0 ---------------------------------

    def _value_s(self, s):
        nu = self.nu
        if self.kind == "hyperbola":
            return np.sqrt(s * s + nu * nu) - nu
        if self.kind == "yosida":
            return np.where(s <= 1.0 / nu, 0.5 * nu * s * s, s - 0.5 / nu)
        if self.kind == "tanh":
            return nu * _logcosh(s / nu)
        # arctan: (2/pi) * (s*atan(s/nu) - (nu/2)*log(1 + (s/nu)^2))
        return (2.0 / math.pi) * (
            s * np.arctan(s / nu) - 0.5 * nu * np.log1p((s / nu) ** 2)
        )

    def _slope_s(self, s):
        """Derivative of the scalar profile, in [0, c)."""
        nu = self.nu
        if self.kind == "hyperbola":
            return s / np.sqrt(s * s + nu * nu)
        if self.kind == "yosida":
            return np.minimum(nu * s, 1.0)
        if self.kind == "tanh":
            return np.tanh(s / nu)
        return (2.0 / math.pi) * np.arctan(s / nu)

    def _curvature_s(self, s):
        """Second derivative of the scalar profile."""
        nu = self.nu
        if self.kind == "hyperbola":
            return nu * nu / np.power(s * s + nu * nu, 1.5)
        if self.kind == "yosida":
            return np.where(s < 1.0 / nu, nu, 0.0)
        if self.kind == "tanh":
            return (1.0 / nu) / np.cosh(np.minimum(s / nu, 350.0)) ** 2
        return (2.0 / math.pi) * nu / (nu * nu + s * s)

    # -- public API -------------------------------------------------------

    def value(self, xi):
        """Regularized norm of ``xi`` (scalar or vector of dim <= 2)."""
        s = np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float)), axis=-1) \
            if np.ndim(xi) > 0 else abs(float(xi))
        return self._value_s(s)

    def value_of_modulus(self, s):
        """Vectorized value as a function of the modulus ``s = |xi| >= 0``."""
        return self._value_s(np.asarray(s, dtype=float))

    def slope_of_modulus(self, s):
        """Vectorized scalar derivative d/ds of the profile (odd extension)."""
        s = np.asarray(s, dtype=float)
        return np.sign(s) * self._slope_s(np.abs(s))

    def curvature_of_modulus(self, s):
        """Vectorized scalar second derivative of the profile."""
        return self._curvature_s(np.abs(np.asarray(s, dtype=float)))

    def gradient(self, xi):
        """Gradient of ``value``; the zero vector at ``xi = 0``."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        s = np.linalg.norm(xi)
        if s == 0.0:
            return np.zeros_like(xi)
        return (self._slope_s(s) / s) * xi

    def envelope(self):
        """Constants (a, b, c) with value >= a|xi| - b and |gradient| <= c.

        The constants are exact: b is chosen as the (global) maximum of
        a*s - value(s), attained where the slope equals a, so the linear
        lower bound holds for every xi, not just on a sampled range.
        """
        nu = self.nu
        if self.kind == "hyperbola":
            return 1.0, nu, 1.0
        if self.kind == "yosida":
            # value = s - 1/(2 nu) for large s; b does NOT vanish as nu -> 0
            # (the printed Moreau parameter), flagged in the module notes.
            return 1.0, 0.5 / nu, 1.0
        if self.kind == "tanh":
            # value(s) = nu*log(cosh(s/nu)) >= s - nu*log 2
            return 1.0, nu * math.log(2.0), 1.0
        # arctan: slope < 1 everywhere, so a must be < 1.  Take a = 1 - nu/2;
        # a*s - value(s) is maximized at s* with slope(s*) = a.
        a = 1.0 - 0.5 * nu
        s_star = nu * math.tan(0.5 * math.pi * a)
        b = a * s_star - float(self._value_s(np.asarray(s_star)))
        return a, b, 1.0

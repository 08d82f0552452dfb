"""Discrete free energy of the order/orientation pair, sharp and relaxed.

The sharp energy is

    1/2 int |grad eta|^2 + int G(eta) + int alpha(eta) |D theta|
    + sum_boundary alpha(eta) |theta - gamma|,

the relaxed one replaces |D theta| by the regularized norm of the gradient
and trades the boundary penalty for a pinned trace plus the quadratic
nu^2-term against the harmonic extension of the boundary data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid, ScalarField, gradient_at_midpoints, harmonic_extension
from .model import Domain1D, DomainRadial
from .regnorm import RegularizedNorm


@dataclass(frozen=True)
class EnergyReport:
    dirichlet: float
    potential: float
    weighted_tv: float
    boundary_penalty: float
    nu_term: float
    sharp_total: float
    relaxed_total: float

    CSV_COLUMNS = (
        "dirichlet",
        "potential",
        "weightedTV",
        "boundaryPenalty",
        "nuTerm",
        "sharpTotal",
        "relaxedTotal",
    )

    def csv_values(self):
        return (
            self.dirichlet,
            self.potential,
            self.weighted_tv,
            self.boundary_penalty,
            self.nu_term,
            self.sharp_total,
            self.relaxed_total,
        )


def gamma_endpoints(domain):
    if isinstance(domain, Domain1D):
        return domain.gamma_left, domain.gamma_right
    if isinstance(domain, DomainRadial):
        return domain.gamma_inner, domain.gamma_outer
    raise TypeError(f"unsupported domain {type(domain).__name__}")


def _check_same_grid(eta: ScalarField, theta: ScalarField):
    if eta.grid != theta.grid:
        raise ValueError("eta and theta live on different grids")
    return eta.grid


def _bulk_parts(eta, theta, laws, grid: Grid):
    h = grid.h_x
    wm = grid.midpoint_weights
    ge = gradient_at_midpoints(eta)
    dirichlet = 0.5 * h * float(np.dot(wm, ge * ge))
    potential = float(np.dot(grid.quad_weights, laws.G(eta.values)))
    alpha_mid = laws.alpha(0.5 * (eta.values[:-1] + eta.values[1:]))
    dtheta = np.diff(theta.values)
    tv = float(np.dot(wm, alpha_mid * np.abs(dtheta)))
    return dirichlet, potential, tv, alpha_mid, dtheta


def sharp_energy(eta: ScalarField, theta: ScalarField, laws, domain) -> EnergyReport:
    """Sharp energy with itemized parts; boundary mismatch enters the
    penalty term."""
    grid = _check_same_grid(eta, theta)
    dirichlet, potential, tv, _, _ = _bulk_parts(eta, theta, laws, grid)
    gl, gr = gamma_endpoints(domain)
    wl, wr = grid.boundary_weights
    penalty = wl * float(laws.alpha(eta.values[0])) * abs(theta.values[0] - gl)
    penalty += wr * float(laws.alpha(eta.values[-1])) * abs(theta.values[-1] - gr)
    total = dirichlet + potential + tv + penalty
    return EnergyReport(dirichlet, potential, tv, penalty, 0.0, total, math.nan)


def relaxed_energy(
    eta: ScalarField,
    theta: ScalarField,
    laws,
    domain,
    norm: RegularizedNorm,
) -> EnergyReport:
    """Relaxed energy; requires theta's trace to equal the boundary data."""
    grid = _check_same_grid(eta, theta)
    gl, gr = gamma_endpoints(domain)
    for name, val, gval in (("left", theta.values[0], gl), ("right", theta.values[-1], gr)):
        if abs(val - gval) > 1e-12 * (1.0 + abs(gval)):
            raise ValueError(
                f"theta violates the boundary constraint at the {name} endpoint: "
                f"{val} != {gval}"
            )
    dirichlet, potential, tv, alpha_mid, dtheta = _bulk_parts(eta, theta, laws, grid)
    h = grid.h_x
    wm = grid.midpoint_weights
    tv_nu = h * float(np.dot(wm, alpha_mid * norm.value_of_modulus(dtheta / h)))
    ghm = harmonic_extension(domain, grid)
    dmis = np.diff(theta.values - ghm.values) / h
    nu_term = 0.5 * norm.nu**2 * h * float(np.dot(wm, dmis * dmis))
    sharp_total = dirichlet + potential + tv  # boundary penalty is zero here
    relaxed_total = dirichlet + potential + tv_nu + nu_term
    return EnergyReport(
        dirichlet, potential, tv, 0.0, nu_term, sharp_total, relaxed_total
    )

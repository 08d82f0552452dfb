"""Closed-form steady states on the unit interval.

The order parameter equals its minimum d outside a finite family of disjoint
open intervals (a_k, b_k) and follows a cosh arc inside each of them; the
orientation is increasing with absolutely continuous density (1-d)/d outside
the intervals, an atom of height ((1-d)/d) tanh((b_k-a_k)/2) at each
interval endpoint, and is constant inside the intervals.  The minimum value
d is fixed by matching the total orientation budget to the boundary data.

The cosh arc is 1 + (d-1) cosh(x - (a+b)/2) / cosh((b-a)/2): the half-width
denominator is the one that makes the profile continuous (equal to d) at the
interval endpoints.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .model import MaterialLaws


@dataclass(frozen=True)
class JumpSet1D:
    """Ordered disjoint open intervals inside [0, 1]."""

    intervals: tuple

    def __init__(self, intervals=()):
        ivs = tuple((float(a), float(b)) for a, b in intervals)
        prev_end = -1.0
        for a, b in ivs:
            if not (0.0 <= a < b <= 1.0):
                raise ValueError(f"invalid interval ({a}, {b})")
            if a <= prev_end:
                raise ValueError("intervals must be disjoint and ordered")
            prev_end = b
        object.__setattr__(self, "intervals", ivs)

    @property
    def free_length(self):
        return 1.0 - sum(b - a for a, b in self.intervals)

    @property
    def atom_points(self):
        pts = []
        for a, b in self.intervals:
            pts.extend((a, b))
        return pts


def _budget_factor(jumps: JumpSet1D):
    """Total orientation variation per unit of (1-d)/d."""
    return jumps.free_length + sum(
        2.0 * math.tanh(0.5 * (b - a)) for a, b in jumps.intervals
    )


def solve_d(jumps: JumpSet1D, gamma_right: float) -> float:
    """Minimum order value d in (0, 1) matching the orientation budget.

    Solves ((1-d)/d) * budget_factor = gamma_right; the left side decreases
    strictly from +inf to 0 as d runs over (0, 1), so bisection converges to
    the unique root.
    """
    if gamma_right <= 0.0:
        raise ValueError("gamma_right must be positive")
    c = _budget_factor(jumps)
    # closed form of the monotone scalar equation
    d = c / (c + gamma_right)
    lo, hi = 0.0, 1.0
    for _ in range(60):  # polish by bisection to 1e-13 regardless of rounding
        mid = 0.5 * (lo + hi)
        if (1.0 - mid) / mid * c > gamma_right:
            lo = mid
        else:
            hi = mid
    d_bis = 0.5 * (lo + hi)
    assert abs(d - d_bis) < 1e-12
    return d


@dataclass(frozen=True)
class SteadyState1D:
    d: float
    jumps: JumpSet1D
    gamma_right: float

    @property
    def theta_atoms(self):
        """(location, jump height) for every atom of the orientation."""
        h = (1.0 - self.d) / self.d
        return [
            (x, h * math.tanh(0.5 * (b - a)))
            for a, b in self.jumps.intervals
            for x in (a, b)
        ]

    def eta(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.d)
        for a, b in self.jumps.intervals:
            inside = (x > a) & (x < b)
            mid = 0.5 * (a + b)
            out = np.where(
                inside,
                1.0 + (self.d - 1.0) * np.cosh(x - mid) / math.cosh(0.5 * (b - a)),
                out,
            )
        return out

    def eta_prime(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b in self.jumps.intervals:
            inside = (x > a) & (x < b)
            mid = 0.5 * (a + b)
            out = np.where(
                inside,
                (self.d - 1.0) * np.sinh(x - mid) / math.cosh(0.5 * (b - a)),
                out,
            )
        return out

    def theta_density(self, x):
        """Absolutely continuous part of the orientation derivative."""
        x = np.asarray(x, dtype=float)
        dens = np.full_like(x, (1.0 - self.d) / self.d)
        for a, b in self.jumps.intervals:
            dens = np.where((x > a) & (x < b), 0.0, dens)
        return dens

    def theta(self, x):
        """Orientation profile, normalized to gamma(0) = 0, increasing."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        h = (1.0 - self.d) / self.d
        out = np.empty_like(x)
        for i, xv in enumerate(x):
            free = xv
            val = 0.0
            for a, b in self.jumps.intervals:
                if xv <= a:
                    break
                free -= min(xv, b) - a  # no ac density inside the interval
                atom = h * math.tanh(0.5 * (b - a))
                val += atom  # atom at a has been passed
                if xv >= b:
                    val += atom
            out[i] = val + h * free
        return out if out.size > 1 else float(out[0])

    def w(self, x):
        """Dual field: alpha(d)/alpha(eta), = 1 on the orientation support."""
        laws = MaterialLaws(delta0=0.0)
        e = self.eta(x)
        return laws.alpha(self.d) / laws.alpha(e)

    def budget_residual(self):
        h = (1.0 - self.d) / self.d
        return h * _budget_factor(self.jumps) - self.gamma_right

    def to_csv_rows(self, x):
        e = self.eta(x)
        dens = self.theta_density(x)
        return np.column_stack([x, e, dens])

    def atoms_json(self):
        return json.dumps([[loc, height] for loc, height in self.theta_atoms])


def build_steady_state(jumps: JumpSet1D, gamma_right: float) -> SteadyState1D:
    d = solve_d(jumps, gamma_right)
    state = SteadyState1D(d, jumps, gamma_right)
    # continuity of the order profile at every interval endpoint
    for a, b in jumps.intervals:
        for pt in (a, b):
            mid = 0.5 * (a + b)
            val = 1.0 + (d - 1.0) * math.cosh(pt - mid) / math.cosh(0.5 * (b - a))
            assert abs(val - d) <= 1e-12
    assert abs(state.budget_residual()) <= 1e-12 * (1.0 + gamma_right)
    return state


def verify_euler_lagrange(state: SteadyState1D, grid: Grid) -> dict:
    """Finite-difference residual report of the steady-state system.

    Checks eta'' = eta - 1 + eta * |theta'| (ac part) in the interior of
    every smooth piece, the order-derivative jump (1-d) tanh((b-a)/2) at
    each interval endpoint, and the dual-field bound.
    """
    x = grid.nodes
    h = grid.h_x
    e = state.eta(x)
    dens = state.theta_density(x)
    lap = (e[2:] - 2.0 * e[1:-1] + e[:-2]) / h**2
    rhs = e[1:-1] - 1.0 + e[1:-1] * dens[1:-1]

    # skip nodes within one cell of an interval endpoint (kink of eta')
    interior = np.ones(x.size - 2, dtype=bool)
    for pt in state.jumps.atom_points:
        interior &= np.abs(x[1:-1] - pt) > 1.5 * h
    res_interior = float(np.max(np.abs(lap - rhs) * interior)) if interior.any() else 0.0

    jump_res = 0.0
    for a, b in state.jumps.intervals:
        expected = (1.0 - state.d) * math.tanh(0.5 * (b - a))
        got_a = float(state.eta_prime(a + 1e-9) - state.eta_prime(a - 1e-9))
        # eta has a corner minimum at both endpoints, so eta' jumps upward
        # by the same amount at a and at b
        got_b = float(state.eta_prime(b + 1e-9) - state.eta_prime(b - 1e-9))
        jump_res = max(jump_res, abs(got_a - expected), abs(got_b - expected))

    wvals = state.w(x)
    return {
        "interior": res_interior,
        "eta_prime_jump": jump_res,
        "w_max": float(np.max(wvals)),
        "w_bound_ok": bool(np.max(wvals) <= 1.0 + 1e-12),
        "budget": abs(state.budget_residual()),
    }

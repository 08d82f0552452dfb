"""Uniform 1D and radial grids with the discrete calculus used everywhere else.

The radial measure is r dr (the angular factor 2*pi is dropped consistently,
which rescales energies but moves no minimizer).  Quadrature is trapezoidal
in the weighted measure; gradients live at cell midpoints and the weighted
divergence is the exact negative adjoint of the midpoint gradient under that
quadrature, for test fields vanishing at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Domain1D, DomainRadial

INTERVAL = "interval"
RADIAL = "radial"


@dataclass(frozen=True)
class Grid:
    kind: str
    nodes: np.ndarray

    def __post_init__(self):
        if self.kind not in (INTERVAL, RADIAL):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 3:
            raise ValueError("need at least 3 nodes")
        d = np.diff(nodes)
        if np.any(d <= 0.0):
            raise ValueError("nodes must be strictly increasing")
        if np.max(np.abs(d - d[0])) > 1e-12 * max(1.0, abs(nodes[-1])):
            raise ValueError("grid must be uniform")
        object.__setattr__(self, "nodes", nodes)
        if self.kind == RADIAL and nodes[0] <= 0.0:
            raise ValueError("radial grid needs r > 0")

    @property
    def n(self):
        return self.nodes.size

    @property
    def h_x(self):
        return float(self.nodes[1] - self.nodes[0])

    @property
    def radial_weights(self):
        """Measure weight at the nodes: r for radial, 1 for interval."""
        if self.kind == RADIAL:
            return self.nodes
        return np.ones_like(self.nodes)

    @property
    def midpoints(self):
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    @property
    def midpoint_weights(self):
        """Measure weight at cell midpoints."""
        if self.kind == RADIAL:
            return self.midpoints
        return np.ones(self.n - 1)

    @property
    def quad_weights(self):
        """Trapezoidal nodal quadrature weights in the weighted measure."""
        w = self.radial_weights * self.h_x
        w = w.copy()
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    @property
    def boundary_weights(self):
        """Weights of the two endpoint terms of the boundary 'integral'."""
        if self.kind == RADIAL:
            return float(self.nodes[0]), float(self.nodes[-1])
        return 1.0, 1.0

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.kind == other.kind
            and self.nodes.shape == other.nodes.shape
            and bool(np.array_equal(self.nodes, other.nodes))
        )

    def __hash__(self):
        return hash((self.kind, self.n, float(self.nodes[0]), float(self.nodes[-1])))


def make_grid(domain, n=129):
    """Uniform grid over the domain; n defaults to 2**k + 1 for quick runs."""
    if isinstance(domain, Domain1D):
        return Grid(INTERVAL, np.linspace(0.0, domain.length, n))
    if isinstance(domain, DomainRadial):
        return Grid(RADIAL, np.linspace(domain.r0, domain.R, n))
    raise TypeError(f"unsupported domain {type(domain).__name__}")


@dataclass
class ScalarField:
    grid: Grid
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(
                f"values shape {v.shape} does not match grid size {self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        self.values = v

    def copy(self):
        return ScalarField(self.grid, self.values.copy())


def constant_field(grid, c):
    return ScalarField(grid, np.full(grid.n, float(c)))


def gradient_at_midpoints(f: ScalarField):
    """Forward-difference gradient, one value per cell."""
    return np.diff(f.values) / f.grid.h_x


def weighted_divergence(flux, grid: Grid):
    """Nodal divergence of a midpoint flux, radial-weighted.

    Interior nodes carry (w_mid q)_{i+1/2} - (w_mid q)_{i-1/2} over (w_i h);
    the boundary rows use the half-cell measure, so they carry the natural
    boundary-condition residual.  Exact summation-by-parts partner of
    gradient_at_midpoints under the nodal quadrature.
    """
    flux = np.asarray(flux, dtype=float)
    if flux.shape != (grid.n - 1,):
        raise ValueError("flux must have one value per cell")
    wq = grid.midpoint_weights * flux
    out = np.empty(grid.n)
    w = grid.radial_weights
    h = grid.h_x
    out[1:-1] = (wq[1:] - wq[:-1]) / (w[1:-1] * h)
    out[0] = wq[0] / (w[0] * 0.5 * h)
    out[-1] = -wq[-1] / (w[-1] * 0.5 * h)
    return ScalarField(grid, out)


def integrate(f: ScalarField):
    """Trapezoidal integral in the weighted measure."""
    return float(np.dot(f.grid.quad_weights, f.values))


def integrate_cells(cell_values, grid: Grid):
    """Midpoint-rule integral of per-cell values in the weighted measure."""
    cell_values = np.asarray(cell_values, dtype=float)
    return float(grid.h_x * np.dot(grid.midpoint_weights, cell_values))


def harmonic_extension(domain, grid: Grid):
    """Harmonic interpolant of the boundary data: affine in 1D, a + b ln r
    on the annulus."""
    x = grid.nodes
    if isinstance(domain, Domain1D):
        if grid.kind != INTERVAL:
            raise ValueError("interval domain needs an interval grid")
        gl, gr = domain.gamma_left, domain.gamma_right
        return ScalarField(grid, gl + (gr - gl) * x / domain.length)
    if isinstance(domain, DomainRadial):
        if grid.kind != RADIAL:
            raise ValueError("radial domain needs a radial grid")
        gi, go = domain.gamma_inner, domain.gamma_outer
        b = (go - gi) / np.log(domain.R / domain.r0)
        a = gi - b * np.log(domain.r0)
        return ScalarField(grid, a + b * np.log(x))
    raise TypeError(f"unsupported domain {type(domain).__name__}")

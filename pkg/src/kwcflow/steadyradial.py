"""Radially symmetric steady states on the annulus r0 < r < R.

The orientation is piecewise constant on annular bands; on each band the
order parameter is 1 + A I0(r) + B K0(r).  Jump points (interior jump radii
and boundary trace mismatches) impose continuity, derivative-jump, and
dual-field compatibility conditions.  The module also evaluates the
closed-form existence conditions for the one- and two-jump configurations
and produces the parameter scans behind the threshold/contour studies.

All closed-form conditions below are evaluated in the delta0 = 0 reduction
of the material laws (alpha(s) = s^2/2); the band solver itself accepts any
delta0 >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bessel
from .model import DomainRadial, MaterialLaws

_JOIN_TOL = 1e-9


# ---------------------------------------------------------------------------
# closed-form condition layer
# ---------------------------------------------------------------------------


def f_outer_jump(r0: float, R: float, gamma_R: float) -> float:
    """Existence function for a single jump at the outer boundary.

    f(r0, R) = gamma(R) (r0 b(r0,R) - 1) - sqrt(r0)(sqrt(R)-sqrt(r0)) db/dR;
    nonnegative iff the dual field is admissible (w(r0) <= 1).
    """
    return gamma_R * (r0 * bessel.b_combo(r0, R) - 1.0) - math.sqrt(r0) * (
        math.sqrt(R) - math.sqrt(r0)
    ) * bessel.b_combo_dy(r0, R)


def condition_outer_jump(r0: float, R: float, gamma_R: float):
    fval = f_outer_jump(r0, R, gamma_R)
    return fval, fval >= 0.0


def find_r_star(r0: float, gamma_R: float, r_max: float = None):
    """Largest R with f(r0, R) >= 0, or None when no positive region exists.

    For r0 * gamma_R >= 1 this is the unique admissibility threshold; for
    smaller data the positive region may be empty or an interval detached
    from r0.
    """
    if r_max is None:
        r_max = min(bessel.X_MAX, r0 + 40.0)
    rr = np.linspace(r0, r_max, 2000)[1:]
    fv = np.array([f_outer_jump(r0, float(r), gamma_R) for r in rr])
    pos = fv > 0.0
    if not pos.any():
        return None
    i_last = int(np.flatnonzero(pos)[-1])
    if i_last == len(rr) - 1:
        return float(rr[-1])  # positive up to the scan limit
    lo, hi = float(rr[i_last]), float(rr[i_last + 1])
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if f_outer_jump(r0, mid, gamma_R) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def F_interior(r0: float, r1: float, R: float) -> float:
    """w(r0) <= 1 for an interior jump at r1 iff F(r0, r1, R) <= gamma(R)."""
    num = math.sqrt(r0) * (math.sqrt(r1) - math.sqrt(r0)) * bessel.b_combo_dy(r0, R)
    den = r1 * bessel.b_combo(R, r1) * (r0 * bessel.b_combo(r0, r1) - 1.0)
    return num / den


def G_interior(r0: float, r1: float, R: float, gamma_R: float) -> float:
    """Margin form of the same condition: G >= 0 iff F <= gamma(R)."""
    return gamma_R * r1 * bessel.b_combo(R, r1) * (
        r0 * bessel.b_combo(r0, r1) - 1.0
    ) - math.sqrt(r0) * (math.sqrt(r1) - math.sqrt(r0)) * bessel.b_combo_dy(r0, R)


def dF_dR(r0: float, r1: float, R: float) -> float:
    """Analytic derivative of F in R; proportional to F, so >= 0 where F >= 0."""
    t1_R = bessel.ratio_t(1, R)
    t1_r0 = bessel.ratio_t(1, r0)
    t0_r1 = bessel.ratio_t(0, r1)
    t1p = 1.0 / (R * bessel.k1(R) ** 2)  # T1'(R), by the Wronskian
    return (
        t1p * (t0_r1 + t1_r0) * F_interior(r0, r1, R) / ((t1_R - t1_r0) * (t0_r1 + t1_R))
    )


def sufficient_interior_jump(r0: float, r1: float, gamma_R: float) -> float:
    """R-independent sufficient margin for the interior-jump condition."""
    return gamma_R * r1 * bessel.k0(r1) * (
        r0 * bessel.b_combo(r0, r1) - 1.0
    ) - math.sqrt(r0) * (math.sqrt(r1) - math.sqrt(r0)) * bessel.k1(r0)


def d_bound_interior(r0: float, r1: float) -> float:
    """Upper bound on the jump value for w(r0) <= 1."""
    b = bessel.b_combo(r0, r1)
    return (r0 * b - 1.0) / (math.sqrt(r1 * r0) * b - 1.0)


def condition_interior_jump(r0, r1, R, gamma_R, state=None):
    """Full report for one interior jump at r1 with theta = gamma(R) outside."""
    report = {
        "F": F_interior(r0, r1, R),
        "G": G_interior(r0, r1, R, gamma_R),
        "f_necessary": f_outer_jump(r0, r1, gamma_R),
        "sufficient": sufficient_interior_jump(r0, r1, gamma_R),
        "d_bound": d_bound_interior(r0, r1),
    }
    report["necessary_ok"] = report["f_necessary"] >= 0.0
    report["sufficient_ok"] = report["sufficient"] >= 0.0
    if state is None:
        domain = DomainRadial(r0, R, 0.0, gamma_R)
        cfg = RadialConfig(domain, [r1], [0.0, gamma_R], MaterialLaws(delta0=0.0))
        state = solve_bands(cfg)
    if state.found:
        d = state.jump_values[0]
        eta_r0 = float(state.eta(r0))
        report["d"] = d
        report["w_at_r0"] = r1 * d * d / (r0 * eta_r0 * eta_r0)
        report["admissible"] = report["w_at_r0"] <= 1.0 + 1e-10 and 0.0 < d < 1.0
    else:
        report["d"] = math.nan
        report["w_at_r0"] = math.nan
        report["admissible"] = False
    return report


def two_jump_coefficients(r0, r1, r2, R):
    t1_r0 = bessel.ratio_t(1, r0)
    t1_R = bessel.ratio_t(1, R)
    t0_r1 = bessel.ratio_t(0, r1)
    t0_r2 = bessel.ratio_t(0, r2)
    k0_r1 = bessel.k0(r1)
    k0_r2 = bessel.k0(r2)
    dt = t0_r2 - t0_r1
    c1 = -(t1_r0 + t0_r2) / (r1 * k0_r1**2 * (t1_r0 + t0_r1) * dt)
    c2 = 1.0 / (r1 * k0_r1 * k0_r2 * dt)
    c3 = 1.0 / (r2 * k0_r1 * k0_r2 * dt)
    c4 = -(t1_R + t0_r1) / (r2 * k0_r2**2 * (t1_R + t0_r2) * dt)
    return c1, c2, c3, c4


def two_jump_system(r0, r1, r2, R, gamma_R, check_condition3=True):
    """Compatibility system for jumps at r1 and r2 (r1 = r0 allowed).

    Returns the coefficients, the candidate jump value d1 (None when it
    falls outside (0, d1_bar]), the intermediate orientation level, and the
    structural inequalities that hold for every radius tuple.  The extra
    inner-boundary dual-field check needs a band solve; pass
    ``check_condition3=False`` to skip it when only the algebraic layer is
    needed.
    """
    if not (r0 <= r1 < r2 <= R):
        raise ValueError("need r0 <= r1 < r2 <= R")
    c1, c2, c3, c4 = two_jump_coefficients(r0, r1, r2, R)
    s12 = math.sqrt(r1 / r2)
    s21 = math.sqrt(r2 / r1)
    d1_bar = (c1 + c2) / (c1 + s12 * c2)
    denom = gamma_R - (c1 + s12 * c2 + s21 * c3 + c4)
    d1 = -(c1 + c2 + s21 * (c3 + c4)) / denom

    inequalities = {
        "not_always": (c1 + c2 + s21 * (c3 + c4)) / (c1 + s12 * c2 + s21 * c3 + c4)
        - d1_bar,
        "c2c3_le_c1c4": c1 * c4 - c2 * c3,
        "d1_bar_le_1": 1.0 - d1_bar,
        "chain_lower": (c1 + c2 + c3 + c4) - (c1 + s12 * c2 + s21 * c3 + c4),
        "chain_upper": -(c1 + c2 + c3 + c4),
    }

    admissible = 0.0 < d1 <= d1_bar
    report = {
        "C1": c1,
        "C2": c2,
        "C3": c3,
        "C4": c4,
        "d1_bar": d1_bar,
        "d1": d1 if admissible else None,
        "d1_raw": d1,
        "inequalities": inequalities,
        "condition2_ok": admissible,
    }
    if admissible:
        d2 = d1 * s12
        theta0 = (c1 * (d1 - 1.0) + c2 * (d2 - 1.0)) / d1
        report["d2"] = d2
        report["theta0"] = theta0
        if not check_condition3:
            report["condition3_ok"] = None
        elif r1 > r0 + _JOIN_TOL:
            # extra dual-field compatibility at the inner boundary
            domain = DomainRadial(r0, R, 0.0, gamma_R)
            cfg = RadialConfig(
                domain, [r1, r2], [0.0, theta0, gamma_R], MaterialLaws(delta0=0.0)
            )
            state = solve_bands(cfg)
            if state.found:
                eta_r0 = float(state.eta(r0))
                w_r0 = r1 * d1 * d1 / (r0 * eta_r0 * eta_r0)
                report["w_at_r0"] = w_r0
                report["condition3_ok"] = 1.0 - w_r0 >= 0.0
            else:
                report["w_at_r0"] = math.nan
                report["condition3_ok"] = False
        else:
            report["condition3_ok"] = True  # no inner gap, no extra condition
    else:
        report["condition3_ok"] = False
    return report


# ---------------------------------------------------------------------------
# general band solver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialConfig:
    domain: DomainRadial
    jump_radii: tuple
    theta_levels: tuple  # one per band; entries may be None (unknown)
    laws: MaterialLaws = field(default_factory=lambda: MaterialLaws(delta0=0.0))

    def __init__(self, domain, jump_radii, theta_levels, laws=None):
        object.__setattr__(self, "domain", domain)
        radii = tuple(float(r) for r in jump_radii)
        interior = tuple(
            r for r in radii if domain.r0 + _JOIN_TOL < r < domain.R - _JOIN_TOL
        )
        if any(b <= a for a, b in zip(interior, interior[1:])):
            raise ValueError("jump radii must be strictly increasing")
        if len(theta_levels) != len(interior) + 1:
            raise ValueError("need one theta level per band")
        object.__setattr__(self, "jump_radii", interior)
        object.__setattr__(
            self,
            "theta_levels",
            tuple(None if v is None else float(v) for v in theta_levels),
        )
        object.__setattr__(self, "laws", laws or MaterialLaws(delta0=0.0))


@dataclass
class RadialSteadyState:
    config: RadialConfig
    band_coefficients: list  # (A, B) per band
    theta_levels: list
    jump_values: list  # eta at interior jump radii
    found: bool
    residuals: dict
    admissible: bool = False
    w_constant: float = None
    condition_report: dict = field(default_factory=dict)

    @property
    def band_edges(self):
        d = self.config.domain
        return [d.r0, *self.config.jump_radii, d.R]

    def _band_index(self, r):
        edges = self.band_edges
        idx = np.searchsorted(np.asarray(edges[1:-1]), np.asarray(r), side="right")
        return idx

    def eta(self, r):
        r = np.asarray(r, dtype=float)
        idx = self._band_index(r)
        out = np.empty(np.shape(r))
        flat_r = np.atleast_1d(r)
        flat_i = np.atleast_1d(idx)
        flat_o = np.atleast_1d(out)
        for k, (rv, bi) in enumerate(zip(flat_r, flat_i)):
            a, b = self.band_coefficients[int(bi)]
            e = bessel.eval_all(float(rv))
            flat_o[k] = 1.0 + a * e.i0 + b * e.k0
        return out if out.ndim else float(flat_o[0])

    def eta_prime(self, r):
        r = np.asarray(r, dtype=float)
        idx = self._band_index(r)
        flat_r = np.atleast_1d(r)
        flat_i = np.atleast_1d(idx)
        out = np.empty(flat_r.shape)
        for k, (rv, bi) in enumerate(zip(flat_r, flat_i)):
            a, b = self.band_coefficients[int(bi)]
            e = bessel.eval_all(float(rv))
            out[k] = a * e.i1 - b * e.k1
        return out.reshape(np.shape(r)) if np.ndim(r) else float(out[0])

    def theta(self, r):
        r = np.asarray(r, dtype=float)
        idx = self._band_index(r)
        levels = np.asarray(self.theta_levels, dtype=float)
        out = levels[idx]
        return out if np.ndim(r) else float(out)

    def jump_points(self):
        """Radii where the orientation (trace included) jumps."""
        d = self.config.domain
        pts = []
        if abs(self.theta_levels[0] - d.gamma_inner) > _JOIN_TOL:
            pts.append(d.r0)
        pts.extend(self.config.jump_radii)
        if abs(self.theta_levels[-1] - d.gamma_outer) > _JOIN_TOL:
            pts.append(d.R)
        return sorted(set(pts))

    def w(self, r):
        if self.w_constant is None:
            return np.zeros(np.shape(r)) if np.ndim(r) else 0.0
        alpha = self.config.laws.alpha(self.eta(r))
        return self.w_constant / (np.asarray(r, dtype=float) * alpha)

    def ode_residual(self, n_sample=200):
        """Max residual of -eta'' - eta'/r + eta - 1 = 0 inside the bands,
        using the analytic band derivatives."""
        d = self.config.domain
        edges = self.band_edges
        worst = 0.0
        for bi, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            rr = np.linspace(lo + 1e-9, hi - 1e-9, max(8, n_sample // len(edges)))
            a, b = self.band_coefficients[bi]
            for rv in rr:
                e = bessel.eval_all(float(rv))
                eta = 1.0 + a * e.i0 + b * e.k0
                etap = a * e.i1 - b * e.k1
                etapp = a * (e.i0 - e.i1 / rv) + b * (e.k0 + e.k1 / rv)
                worst = max(worst, abs(-etapp - etap / rv + eta - 1.0))
        return worst


def _linear_band_solve(cfg: RadialConfig, levels):
    """Solve the linear system for the band coefficients at given levels."""
    d = cfg.domain
    radii = cfg.jump_radii
    nb = len(radii) + 1
    n = 2 * nb
    M = np.zeros((n, n))
    rhs = np.zeros(n)

    e_in = bessel.eval_all(d.r0)
    e_out = bessel.eval_all(d.R)
    c_in = abs(levels[0] - d.gamma_inner)
    c_out = abs(levels[-1] - d.gamma_outer)

    # inner: eta'(r0) - c_in * eta(r0) = 0
    M[0, 0] = e_in.i1 - c_in * e_in.i0
    M[0, 1] = -e_in.k1 - c_in * e_in.k0
    rhs[0] = c_in
    # outer: eta'(R) + c_out * eta(R) = 0
    M[1, 2 * nb - 2] = e_out.i1 + c_out * e_out.i0
    M[1, 2 * nb - 1] = -e_out.k1 + c_out * e_out.k0
    rhs[1] = -c_out

    row = 2
    for j, rj in enumerate(radii):
        e = bessel.eval_all(rj)
        a, b = 2 * j, 2 * j + 1
        a2, b2 = 2 * j + 2, 2 * j + 3
        # continuity of eta
        M[row, a] = e.i0
        M[row, b] = e.k0
        M[row, a2] = -e.i0
        M[row, b2] = -e.k0
        row += 1
        # derivative jump: (eta')+ - (eta')- = eta(rj) |theta jump|
        jump = abs(levels[j + 1] - levels[j])
        M[row, a2] = e.i1 - jump * e.i0
        M[row, b2] = -e.k1 - jump * e.k0
        M[row, a] = -e.i1
        M[row, b] = e.k1
        rhs[row] = jump
        row += 1

    coef = np.linalg.solve(M, rhs)
    return [(coef[2 * b], coef[2 * b + 1]) for b in range(nb)]


def solve_bands(cfg: RadialConfig, newton_tol=1e-12, newton_max_iter=60):
    """Construct the steady state for a band configuration.

    Known levels give a single linear solve; unknown (None) levels are
    determined by Newton on the dual-field compatibility conditions
    (equal r * alpha(eta(r)) across all jump points).
    """
    unknown_idx = [i for i, v in enumerate(cfg.theta_levels) if v is None]
    laws = cfg.laws

    def assemble(levels):
        return _linear_band_solve(cfg, levels)

    def state_from(levels, coefs, found, residuals):
        st = RadialSteadyState(
            config=cfg,
            band_coefficients=coefs,
            theta_levels=list(levels),
            jump_values=[],
            found=found,
            residuals=residuals,
        )
        st.jump_values = [float(st.eta(r)) for r in cfg.jump_radii]
        pts = st.jump_points()
        if pts:
            st.w_constant = pts[0] * float(laws.alpha(st.eta(pts[0])))
        if found:
            rr = np.linspace(cfg.domain.r0, cfg.domain.R, 400)
            wmax = float(np.max(np.abs(st.w(rr)))) if pts else 0.0
            eta_rr = st.eta(rr)
            st.admissible = (
                wmax <= 1.0 + 1e-10
                and np.all(eta_rr > 0.0)
                and np.all(eta_rr <= 1.0 + 1e-10)
            )
            st.residuals["ode"] = st.ode_residual()
            st.residuals["w_max"] = wmax
        return st

    def compat_residuals(levels):
        coefs = assemble(levels)
        st = RadialSteadyState(cfg, coefs, list(levels), [], True, {})
        pts = st.jump_points()
        vals = [p * float(laws.alpha(st.eta(p))) for p in pts]
        return np.array([v - vals[0] for v in vals[1:]]), coefs

    if not unknown_idx:
        coefs = assemble(cfg.theta_levels)
        res, _ = compat_residuals(cfg.theta_levels)
        residuals = {"compatibility": float(np.max(np.abs(res))) if res.size else 0.0}
        return state_from(cfg.theta_levels, coefs, True, residuals)

    # Newton over the unknown levels, numerical Jacobian
    levels = list(cfg.theta_levels)
    lo = min(cfg.domain.gamma_inner, cfg.domain.gamma_outer)
    hi = max(cfg.domain.gamma_inner, cfg.domain.gamma_outer)
    for i in unknown_idx:
        levels[i] = lo + (hi - lo) * (i + 1) / (len(levels) + 1)
    x = np.array([levels[i] for i in unknown_idx])
    res = coefs = None
    for _ in range(newton_max_iter):
        for k, i in enumerate(unknown_idx):
            levels[i] = x[k]
        res, coefs = compat_residuals(levels)
        if res.size and np.max(np.abs(res)) <= newton_tol * (1.0 + abs(hi)):
            return state_from(levels, coefs, True, {"compatibility": float(np.max(np.abs(res)))})
        if not res.size:
            return state_from(levels, coefs, True, {"compatibility": 0.0})
        jac = np.zeros((res.size, x.size))
        eps = 1e-7 * (1.0 + abs(hi))
        for k in range(x.size):
            xp = x.copy()
            xp[k] += eps
            lv = list(levels)
            for kk, i in enumerate(unknown_idx):
                lv[i] = xp[kk]
            rp, _ = compat_residuals(lv)
            jac[:, k] = (rp - res) / eps
        try:
            dx = np.linalg.lstsq(jac, -res, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(dx)):
            break
        x = x + dx
        if np.max(np.abs(dx)) < 1e-14 * (1.0 + abs(hi)):
            break
    last = float(np.max(np.abs(res))) if res is not None and res.size else math.inf
    return state_from(levels, coefs or assemble(levels), False, {"compatibility": last})


# ---------------------------------------------------------------------------
# parameter scans
# ---------------------------------------------------------------------------


def scan_contour_interior_jump(r0, gamma_R, r1_range, R_range, n=50):
    """Long-form (r1, R, G, admissible, masked) table for the contour maps."""
    r1s = np.linspace(*r1_range, n)
    Rs = np.linspace(*R_range, n)
    rows = []
    for r1 in r1s:
        for R in Rs:
            if R <= r1 + 1e-9 or r1 <= r0 + 1e-9:
                rows.append((r1, R, math.nan, False, True))
                continue
            g = G_interior(r0, float(r1), float(R), gamma_R)
            rows.append((float(r1), float(R), g, g >= 0.0, False))
    return rows


def scan_two_jump_thresholds(r0, r1, r2, R, gamma_values):
    """Per-gamma two-jump report rows: (gamma, d1_raw, d1_bar, cond2, cond3)."""
    rows = []
    for g in gamma_values:
        rep = two_jump_system(r0, r1, r2, R, float(g))
        rows.append(
            (
                float(g),
                rep["d1_raw"],
                rep["d1_bar"],
                rep["condition2_ok"],
                rep["condition3_ok"],
            )
        )
    return rows


def _bisect_threshold(pred, lo, hi, tol=1e-6):
    """Smallest value in [lo, hi] where pred flips to True (pred(hi) True)."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def find_gamma_threshold(r0, r1, r2, R, which="condition2", gamma_max=20.0):
    """Smallest boundary datum for which the two-jump condition holds."""
    key = "condition2_ok" if which == "condition2" else "condition3_ok"

    def ok(g):
        return two_jump_system(r0, r1, r2, R, g)[key]

    gs = np.linspace(1e-3, gamma_max, 400)
    flags = [ok(float(g)) for g in gs]
    if not any(flags):
        return None
    i = flags.index(True)
    if i == 0:
        return float(gs[0])
    return _bisect_threshold(ok, float(gs[i - 1]), float(gs[i]))


def cross_validate_dynamics(config, step_cfg, n=257, perturbation=0.01, seed=0):
    """Run the dynamic solver from a perturbed analytic state and compare."""
    from .grid import ScalarField, make_grid
    from .stepper import l2_norm, run_to_omega_limit

    state = solve_bands(config)
    out = {"found": state.found, "admissible": state.admissible}
    if not state.found:
        return out
    domain = config.domain
    grid = make_grid(domain, n)
    rng = np.random.default_rng(seed)
    eta0 = np.clip(
        state.eta(grid.nodes) * (1.0 + perturbation * rng.standard_normal(grid.n)),
        0.0,
        1.0,
    )
    theta0 = state.theta(grid.nodes)
    rec = run_to_omega_limit(
        ScalarField(grid, eta0), ScalarField(grid, theta0), step_cfg, config.laws, domain
    )
    eta_inf = rec.eta_snapshots[-1]
    theta_inf = rec.theta_snapshots[-1]
    out["converged"] = rec.converged
    out["eta_l2_error"] = l2_norm(eta_inf.values - state.eta(grid.nodes), grid)
    out["theta_l2_error"] = l2_norm(theta_inf.values - state.theta(grid.nodes), grid)
    grad = np.abs(np.diff(theta_inf.values))
    if grad.max() > 0 and config.jump_radii:
        drift = abs(float(grid.midpoints[int(np.argmax(grad))]) - config.jump_radii[0])
        out["jump_drift"] = drift
    return out

"""Batch front end: dynamic runs, steady-state constructions, and parameter
scans driven by a JSON config.

Outputs are CSV/JSON files (plus optional SVG line plots) in the configured
output directory.  Every CSV and JSON artifact carries a header with the
config hash and package version; identical config and seed give
byte-identical files.  Exit codes: 0 success, 1 validation error, 2 solver
non-convergence, 3 violated runtime invariant.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__, steadyradial
from .energy import EnergyReport
from .grid import ScalarField, harmonic_extension, make_grid
from .model import Domain1D, DomainRadial, MaterialLaws
from .plotting import emit_svg_line_plot
from .regnorm import KINDS, RegularizedNorm
from .steady1d import JumpSet1D, build_steady_state, verify_euler_lagrange
from .stepper import SchemeError, SolverError, StepConfig, run_to_omega_limit

MODES = (
    "simulate1d",
    "simulateRadial",
    "steady1d",
    "steadyRadial",
    "scanFigure1",
    "scanFigure2",
    "scanFigure3",
    "scanFigure4",
)


class ValidationError(ValueError):
    """The run configuration violates the schema or a module precondition."""


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------


def _parse_override(text):
    if "=" not in text:
        raise ValidationError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(config, overrides):
    """Apply dotted-path scalar overrides like stepper.h=0.2 in place."""
    for text in overrides:
        key, value = _parse_override(text)
        node = config
        parts = key.split(".")
        for p in parts[:-1]:
            if not isinstance(node.get(p), dict):
                node[p] = {}
            node = node[p]
        node[parts[-1]] = value
    return config


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def _number(config, key, default=None, lo=None, hi=None):
    value = config.get(key, default)
    _require(value is not None, f"missing required field {key!r}")
    _require(isinstance(value, (int, float)) and math.isfinite(value),
             f"field {key!r} must be a finite number")
    if lo is not None:
        _require(value >= lo, f"field {key!r} must be >= {lo}")
    if hi is not None:
        _require(value <= hi, f"field {key!r} must be <= {hi}")
    return float(value)


def validate_config(config):
    """Check the schema and numeric ranges before any computation."""
    _require(isinstance(config, dict), "config must be a JSON object")
    mode = config.get("mode")
    _require(mode in MODES, f"mode must be one of {MODES}, got {mode!r}")
    _require(isinstance(config.get("outputDir"), str) and config["outputDir"],
             "outputDir must be a non-empty string")
    seed = config.get("seed", 0)
    _require(isinstance(seed, int), "seed must be an integer")

    if mode in ("simulate1d", "simulateRadial"):
        st = config.get("stepper", {})
        _require(isinstance(st, dict), "stepper must be an object")
        _number(st, "h", 0.1, lo=1e-12)
        _number(st, "nu", 0.05, lo=1e-12)
        kind = st.get("normKind", "hyperbola")
        _require(kind in KINDS, f"normKind must be one of {KINDS}")
        n = st.get("n", 129)
        _require(isinstance(n, int) and n >= 3, "stepper.n must be an integer >= 3")
        _number(config.get("laws", {}), "delta0", 1e-3, lo=0.0)
        dom = config.get("domain", {})
        if mode == "simulate1d":
            _number(dom, "gammaLeft", 0.0)
            _number(dom, "gammaRight", 1.0)
        else:
            r0 = _number(dom, "r0", None, lo=1e-6)
            R = _number(dom, "R", None)
            _require(R > r0, "domain.R must exceed domain.r0")
            _number(dom, "gammaInner", 0.0)
            _number(dom, "gammaOuter", 1.0)
    elif mode == "steady1d":
        _number(config, "gammaRight", None, lo=1e-12)
        jumps = config.get("jumps", [])
        _require(isinstance(jumps, list), "jumps must be a list of [a, b] pairs")
    elif mode == "steadyRadial":
        dom = config.get("domain", {})
        r0 = _number(dom, "r0", None, lo=1e-6)
        R = _number(dom, "R", None)
        _require(R > r0, "domain.R must exceed domain.r0")
    elif mode == "scanFigure1":
        _number(config, "r0", 1.0, lo=1e-3)
        _require(isinstance(config.get("gammaValues", [1.0]), list),
                 "gammaValues must be a list")
    elif mode == "scanFigure2":
        _number(config, "r0", 1.0, lo=1e-3)
        _number(config, "gamma", 2.0, lo=0.0)
    else:  # scanFigure3 / scanFigure4
        radii = config.get("radii")
        _require(isinstance(radii, list) and len(radii) == 4,
                 "radii must be [r0, r1, r2, R]")
        r0, r1, r2, R = (float(v) for v in radii)
        _require(r0 <= r1 < r2 <= R, "radii must satisfy r0 <= r1 < r2 <= R")
    return config


# ---------------------------------------------------------------------------
# artifact writers
# ---------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


class ArtifactWriter:
    def __init__(self, out_dir, chash):
        self.out_dir = out_dir
        self.header = f"# config_hash={chash} version={__version__}"
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def csv(self, name, columns, rows):
        with open(self.path(name), "w", newline="\n") as fh:
            fh.write(self.header + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        return self.path(name)

    def json(self, name, payload):
        payload = {"configHash": self.header.split()[1].split("=")[1],
                   "version": __version__, **payload}
        with open(self.path(name), "w", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return self.path(name)


# ---------------------------------------------------------------------------
# mode runners
# ---------------------------------------------------------------------------


def _build_step_config(config):
    st = config.get("stepper", {})
    norm = RegularizedNorm(st.get("normKind", "hyperbola"), float(st.get("nu", 0.05)))
    return StepConfig(
        h=float(st.get("h", 0.1)),
        norm=norm,
        max_steps=int(st.get("maxSteps", 10000)),
        steady_tolerance=float(st.get("steadyTolerance", 1e-7)),
        newton_tol=float(st.get("newtonTol", 1e-9)),
        newton_max_iter=int(st.get("newtonMaxIter", 100)),
    )


def _initial_fields(config, grid, domain):
    rng = np.random.default_rng(int(config.get("seed", 0)))
    init = config.get("initial", {})
    eta_spec = init.get("eta", "random")
    theta_spec = init.get("theta", "harmonic")

    if eta_spec == "random":
        eta = np.clip(0.5 + 0.3 * rng.standard_normal(grid.n), 0.0, 1.0)
    elif eta_spec == "one":
        eta = np.ones(grid.n)
    else:
        eta = np.full(grid.n, float(eta_spec))

    ghm = harmonic_extension(domain, grid).values
    if theta_spec == "harmonic":
        theta = ghm.copy()
    elif theta_spec == "random":
        sup = domain.gamma_sup
        theta = np.clip(ghm + 0.2 * rng.standard_normal(grid.n), -sup, sup)
    else:
        theta = np.full(grid.n, float(theta_spec))
    return ScalarField(grid, eta), ScalarField(grid, theta)


def run_simulation(config, writer):
    mode = config["mode"]
    if mode == "simulate1d":
        dom = config.get("domain", {})
        domain = Domain1D(float(dom.get("gammaLeft", 0.0)),
                          float(dom.get("gammaRight", 1.0)))
    else:
        dom = config["domain"]
        domain = DomainRadial(float(dom["r0"]), float(dom["R"]),
                              float(dom.get("gammaInner", 0.0)),
                              float(dom.get("gammaOuter", 1.0)))
    laws = MaterialLaws(float(config.get("laws", {}).get("delta0", 1e-3)))
    cfg = _build_step_config(config)
    grid = make_grid(domain, int(config.get("stepper", {}).get("n", 129)))
    eta0, theta0 = _initial_fields(config, grid, domain)

    rec = run_to_omega_limit(eta0, theta0, cfg, laws, domain,
                             snapshot_every=int(config.get("snapshotEvery", 0)))

    writer.csv(
        "energy.csv",
        ("time",) + EnergyReport.CSV_COLUMNS,
        [(t, *r.csv_values()) for t, r in zip(rec.times, rec.energy_reports)],
    )
    for i, (e, t) in enumerate(zip(rec.eta_snapshots, rec.theta_snapshots)):
        writer.csv(f"snapshot_{i:06d}.csv", ("x", "eta", "theta"),
                   zip(grid.nodes, e.values, t.values))
    eta_inf = rec.eta_snapshots[-1]
    writer.json("summary.json", {
        "converged": rec.converged,
        "steps": len(rec.times) - 1,
        "finalEnergy": rec.energy_reports[-1].relaxed_total,
        "minEta": float(np.min(eta_inf.values)),
        "maxEta": float(np.max(eta_inf.values)),
    })
    if config.get("plots", False):
        emit_svg_line_plot(
            {"relaxed": (rec.times, [r.relaxed_total for r in rec.energy_reports]),
             "sharp": (rec.times, [r.sharp_total for r in rec.energy_reports])},
            writer.path("energy.svg"), title="energy decay")
        emit_svg_line_plot(
            {"eta": (list(grid.nodes), list(eta_inf.values)),
             "theta": (list(grid.nodes), list(rec.theta_snapshots[-1].values))},
            writer.path("final_state.svg"), title="final state")
    return 0 if rec.converged else 2


def run_steady1d(config, writer):
    jumps = JumpSet1D([tuple(p) for p in config.get("jumps", [])])
    gamma = float(config["gammaRight"])
    n = int(config.get("n", 2049))
    state = build_steady_state(jumps, gamma)
    grid = make_grid(Domain1D(0.0, gamma), n)
    report = verify_euler_lagrange(state, grid)
    writer.csv("steady1d.csv", ("x", "eta", "thetaDensity", "theta", "w"),
               zip(grid.nodes, state.eta(grid.nodes),
                   state.theta_density(grid.nodes), state.theta(grid.nodes),
                   state.w(grid.nodes)))
    writer.json("summary.json", {
        "d": state.d,
        "atoms": [[loc, height] for loc, height in state.theta_atoms],
        "residuals": report,
    })
    if config.get("plots", False):
        emit_svg_line_plot(
            {"eta": (list(grid.nodes), list(state.eta(grid.nodes))),
             "theta": (list(grid.nodes), list(np.atleast_1d(state.theta(grid.nodes))))},
            writer.path("steady1d.svg"), title="steady profile")
    return 0


def run_steady_radial(config, writer):
    dom = config["domain"]
    domain = DomainRadial(float(dom["r0"]), float(dom["R"]),
                          float(dom.get("gammaInner", 0.0)),
                          float(dom.get("gammaOuter", 1.0)))
    laws = MaterialLaws(float(config.get("delta0", 0.0)))
    cfg = steadyradial.RadialConfig(domain, config.get("jumpRadii", []),
                                    config.get("thetaLevels", [None]), laws)
    state = steadyradial.solve_bands(cfg)
    n = int(config.get("n", 513))
    rr = np.linspace(domain.r0, domain.R, n)
    writer.csv("radial.csv", ("r", "eta", "etaPrime", "theta", "w"),
               zip(rr, state.eta(rr), state.eta_prime(rr), state.theta(rr),
                   np.asarray(state.w(rr), dtype=float)))
    writer.json("summary.json", {
        "found": state.found,
        "admissible": state.admissible,
        "thetaLevels": state.theta_levels,
        "jumpValues": state.jump_values,
        "wConstant": state.w_constant,
        "residuals": state.residuals,
    })
    if config.get("plots", False):
        emit_svg_line_plot(
            {"eta": (list(rr), list(state.eta(rr))),
             "w": (list(rr), list(np.asarray(state.w(rr), dtype=float)))},
            writer.path("radial.svg"), title="radial steady state")
    return 0 if state.found else 2


def run_scan_figure1(config, writer):
    r0 = float(config.get("r0", 1.0))
    gammas = [float(g) for g in config.get("gammaValues", [1.0])]
    n = int(config.get("n", 400))
    r_max = float(config.get("rMax", min(50.0, r0 + 40.0)))
    rows = []
    thresholds = {}
    for g in gammas:
        rr = np.linspace(r0, r_max, n)[1:]
        for R in rr:
            rows.append((g, float(R), steadyradial.f_outer_jump(r0, float(R), g)))
        thresholds[repr(g)] = steadyradial.find_r_star(r0, g, r_max)
    writer.csv("fig1_scan.csv", ("gamma", "R", "f"), rows)
    writer.json("fig1_thresholds.json", {"r0": r0, "RStar": thresholds})
    if config.get("plots", False):
        series = {}
        for g in gammas:
            xs = [r for gg, r, _ in rows if gg == g]
            ys = [f for gg, _, f in rows if gg == g]
            series[f"gamma={g:g}"] = (xs, ys)
        emit_svg_line_plot(series, writer.path("fig1.svg"),
                           title="outer-jump existence function")
    return 0


def _fig2_block(args):
    r0, gamma, r1, R_lo, R_hi, n = args
    rows = []
    for R in np.linspace(R_lo, R_hi, n):
        if R <= r1 + 1e-9 or r1 <= r0 + 1e-9:
            rows.append((r1, float(R), math.nan, False, True))
        else:
            g = steadyradial.G_interior(r0, r1, float(R), gamma)
            rows.append((r1, float(R), g, g >= 0.0, False))
    return rows


def run_scan_figure2(config, writer, jobs=1):
    r0 = float(config.get("r0", 1.0))
    gamma = float(config.get("gamma", 2.0))
    r1_lo, r1_hi = (float(v) for v in config.get("r1Range", [r0, r0 + 19.0]))
    R_lo, R_hi = (float(v) for v in config.get("RRange", [r0, r0 + 29.0]))
    n = int(config.get("n", 50))
    tasks = [(r0, gamma, float(r1), R_lo, R_hi, n)
             for r1 in np.linspace(r1_lo, r1_hi, n)]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_fig2_block, tasks))
    else:
        blocks = [_fig2_block(t) for t in tasks]
    rows = [row for block in blocks for row in block]
    writer.csv("fig2_contour.csv", ("r1", "R", "G", "admissible", "masked"), rows)
    n_adm = sum(1 for r in rows if r[3])
    writer.json("fig2_summary.json", {
        "r0": r0, "gamma": gamma, "admissibleCount": n_adm,
        "totalCount": len(rows),
    })
    return 0


def run_scan_figure34(config, writer, mode):
    r0, r1, r2, R = (float(v) for v in config["radii"])
    gamma_max = float(config.get("gammaMax", 20.0))
    n = int(config.get("n", 200))
    gammas = np.linspace(1e-3, gamma_max, n)
    rows = steadyradial.scan_two_jump_thresholds(r0, r1, r2, R, gammas)
    prefix = "fig3" if mode == "scanFigure3" else "fig4"
    writer.csv(f"{prefix}_scan.csv",
               ("gamma", "d1Raw", "d1Bar", "condition2", "condition3"), rows)
    rho_c2 = steadyradial.find_gamma_threshold(r0, r1, r2, R, "condition2", gamma_max)
    payload = {"radii": [r0, r1, r2, R]}
    if mode == "scanFigure3":
        payload["rho1"] = rho_c2
    else:
        rho_c3 = steadyradial.find_gamma_threshold(r0, r1, r2, R, "condition3", gamma_max)
        payload["rho2"] = rho_c2
        payload["rho3"] = rho_c3
    writer.json(f"{prefix}_thresholds.json", payload)
    if config.get("plots", False):
        emit_svg_line_plot(
            {"d1": ([g for g, *_ in rows], [d if d is not None else math.nan
                                            for _, d, *_ in rows]),
             "d1Bar": ([g for g, *_ in rows], [b for _, _, b, *_ in rows])},
            writer.path(f"{prefix}.svg"), title="two-jump thresholds")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _write_error(out_dir, code, kind, message):
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "error.json"), "w", newline="\n") as fh:
            json.dump({"exitCode": code, "kind": kind, "message": message},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError:  # pragma: no cover - error path of the error path
        pass


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="kwcflow",
        description="dynamic runs, steady states, and parameter scans for the "
                    "coupled order/orientation model",
    )
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a scalar config entry (dotted path)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker-pool size for scan modes")
    args = parser.parse_args(argv)

    out_dir = "."
    try:
        with open(args.config) as fh:
            config = json.load(fh)
        apply_overrides(config, args.set)
        validate_config(config)
        out_dir = config["outputDir"]
        writer = ArtifactWriter(out_dir, config_hash(config))

        mode = config["mode"]
        if mode in ("simulate1d", "simulateRadial"):
            return run_simulation(config, writer)
        if mode == "steady1d":
            return run_steady1d(config, writer)
        if mode == "steadyRadial":
            return run_steady_radial(config, writer)
        if mode == "scanFigure1":
            return run_scan_figure1(config, writer)
        if mode == "scanFigure2":
            return run_scan_figure2(config, writer, jobs=max(1, args.jobs))
        return run_scan_figure34(config, writer, mode)
    except (ValidationError, ValueError, TypeError, OSError, json.JSONDecodeError) as e:
        _write_error(out_dir, 1, type(e).__name__, str(e))
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SolverError as e:
        _write_error(out_dir, 2, type(e).__name__, str(e))
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (SchemeError, AssertionError) as e:
        _write_error(out_dir, 3, type(e).__name__, str(e))
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

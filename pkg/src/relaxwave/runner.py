"""Scenario orchestration: full simulation runs and simulation-free
verification bundles, with CSV/JSON outputs."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .ansatz import initial_condition_norm, initial_data
from .config import RunConfig
from .diagnostics import (DiagnosticsRecord, compute_record, fit_decay,
                          f_norm_series, interaction_integrals,
                          running_error_budget)
from .profiles import (build_shock_profile, verify_rarefaction_props,
                       verify_shock_bounds)
from .solver import BlowupError, StepWorkspace, cfl_dt, step_imex
from .state import save_checkpoint
from .weight_shift import weight_eval

CONSERVATION_TOL = 1e-10
ENVELOPE_FACTOR = 1.05
SHIFT_BOUND_COEF = 48.0 / 5.0


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def run_simulate(rc: RunConfig, out_dir=None) -> dict:
    """Run the configured scenario; write diagnostics, shift history,
    final checkpoint, and a JSON summary.  Returns the summary dict,
    whose `hard_pass` flag drives the process exit code."""
    rc.validate()
    cfg = rc.wave_config()
    grid = rc.grid1d()
    profile = build_shock_profile(cfg, rc.profile.n_table, rc.profile.u_clearance)
    scenario = rc.perturbation_scenario()
    state = initial_data(scenario, grid, profile, cfg)
    ws = StepWorkspace(grid)
    out_dir = Path(out_dir if out_dir is not None else rc.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    dt0 = cfl_dt(state, cfg, grid, rc.time.cfl)
    if rc.time.output_interval < dt0:
        raise ValueError(
            f"time.output_interval={rc.time.output_interval} is below the "
            f"CFL step {dt0:.3g}")
    c1_norm = initial_condition_norm(*state.interior(grid), grid, profile, cfg)

    records: list[DiagnosticsRecord] = []
    max_conservation = 0.0
    envelope = None
    envelope_ok = True
    blowup = None
    t_final = rc.time.t_final
    next_output = rc.time.output_interval
    first_record_done = False

    while state.t < t_final - 1e-12:
        dt = min(cfl_dt(state, cfg, grid, rc.time.cfl), t_final - state.t)
        try:
            info = step_imex(state, dt, profile, cfg, grid,
                             boundary=rc.scenario.boundary, ws=ws,
                             safety_margin=rc.scenario.safety_margin)
        except BlowupError as exc:
            blowup = str(exc)
            break
        max_conservation = max(max_conservation, info.conservation_residual)
        v = max(info.phi_linf, np.sqrt(cfg.tau) * info.r_linf)
        if envelope is None:
            envelope = v
        else:
            if v > ENVELOPE_FACTOR * envelope:
                envelope_ok = False
            envelope = max(envelope, v)
        if not first_record_done or state.t >= next_output - 1e-12 \
                or state.t >= t_final - 1e-12:
            records.append(compute_record(state, profile, cfg, grid))
            first_record_done = True
            while next_output <= state.t + 1e-12:
                next_output += rc.time.output_interval

    _write_csv(out_dir / "diagnostics.csv", DiagnosticsRecord.header(),
               [r.to_row() for r in records])
    sh = state.shift
    _write_csv(out_dir / "shift.csv", "t,X,Xdot",
               [f"{t:.17g},{x:.17g},{xd:.17g}"
                for t, x, xd in zip(sh.history_t, sh.history_x, sh.history_xdot)])
    save_checkpoint(out_dir / "checkpoint_final.csv", state, grid)

    summary = _summarize(rc, cfg, records, c1_norm, max_conservation,
                         envelope_ok, blowup)
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def _nearest_record(records, t):
    return min(records, key=lambda r: abs(r.t - t))


def _summarize(rc, cfg, records, c1_norm, max_conservation, envelope_ok,
               blowup) -> dict:
    t_final = rc.time.t_final
    checks = {}
    checks["conservation"] = {
        "max_residual": max_conservation,
        "passed": bool(max_conservation <= CONSERVATION_TOL),
    }
    checks["no_blowup"] = {"passed": blowup is None, "detail": blowup}
    checks["envelope"] = {"passed": bool(envelope_ok)}

    if records:
        # shift-rate bound |Xdot| <= (48/5) delta_S ||phi||_inf on every record
        bound_ok = all(
            abs(r.Xdot) <= SHIFT_BOUND_COEF * cfg.delta_s * r.phi_Linf + 1e-14
            for r in records)
        checks["shift_bound"] = {"passed": bool(bound_ok)}

        e0 = records[0].E_w
        e_cap = 5.0 * (e0 + cfg.u_m**2 * cfg.delta_r ** (8.0 / 33.0))
        e_max = max(r.E_w for r in records)
        checks["entropy_bounded"] = {
            "sup_E_w": e_max, "cap": e_cap, "passed": bool(e_max <= e_cap),
        }

        early = _nearest_record(records, 1.0)
        late = _nearest_record(records, t_final)
        sup_ratio = late.sup_u / early.sup_u if early.sup_u > 0 else 0.0
        checks["sup_u_decay"] = {
            "sup_u_early": early.sup_u, "sup_u_late": late.sup_u,
            "ratio": sup_ratio,
        }
        phi_early = max(r.phi_Linf for r in records if r.t <= max(5.0, records[0].t))
        phi_late = late.phi_Linf
        checks["phi_linf_decay"] = {
            "max_early": phi_early, "late": phi_late,
            "ratio": phi_late / phi_early if phi_early > 0 else 0.0,
        }
        xd_early = max(abs(r.Xdot) for r in records if r.t <= 0.1 * t_final)
        lo = [abs(r.Xdot) for r in records if r.t >= 0.9 * t_final]
        xd_late = max(lo) if lo else 0.0
        checks["xdot_decay"] = {
            "max_early": xd_early, "max_late": xd_late,
            "ratio": xd_late / xd_early if xd_early > 0 else 0.0,
        }
        checks["final"] = {
            "t": records[-1].t, "X": records[-1].X,
            "sup_u": records[-1].sup_u, "E_w": records[-1].E_w,
        }

    hard_pass = (checks["conservation"]["passed"]
                 and checks["no_blowup"]["passed"])
    return {
        "version": __version__,
        "schema": "relaxwave-summary-v1",
        "config": rc.to_dict(),
        "initial_condition_norm": c1_norm,
        "checks": checks,
        "hard_pass": bool(hard_pass),
    }


# ---------------------------------------------------------------------------
# simulation-free verification bundle
# ---------------------------------------------------------------------------

def weight_regularity_report(u_m: float, n_samples: int = 10000,
                             seed: int = 1234) -> dict:
    """C^2 junction mismatches and range checks for the weight function."""
    # branch formulas evaluated from both sides of each junction
    def branch1(u):
        return 2.5 * u_m * (u_m - u), -2.5 * u_m, 0.0

    def branch2(u):
        return (2.5 / u_m**2 * (u_m - u) * (4.0 * u**3 + u_m**3),
                2.5 / u_m**2 * (12.0 * u_m * u**2 - 16.0 * u**3 - u_m**3),
                60.0 * u / u_m**2 * (u_m - 2.0 * u))

    def branch3(_):
        return 1.875 * u_m**2, 0.0, 0.0

    gaps = []
    for left, right, at in ((branch1, branch2, 0.0),
                            (branch2, branch3, 0.5 * u_m)):
        lv, rv = left(at), right(at)
        gaps.append(tuple(abs(a - b) for a, b in zip(lv, rv)))
    scales = (u_m**2, u_m, 1.0)
    junction_ok = all(g[k] <= 1e-10 * scales[k] for g in gaps for k in range(3))

    rng = np.random.default_rng(seed)
    u_s = rng.uniform(-2.0 * u_m, u_m, size=n_samples)
    u_s = u_s[u_s > -2.0 * u_m]
    w, dw, ddw = weight_eval(u_s, u_m)
    ranges_ok = bool(
        np.all((1.875 * u_m**2 <= w) & (w < 7.5 * u_m**2))
        and np.all((-2.5 * u_m <= dw) & (dw <= 0.0))
        and np.all((0.0 <= ddw) & (ddw <= 7.5)))
    endpoint = weight_eval(-2.0 * u_m, u_m)[0]
    return {
        "junction_gaps": gaps,
        "endpoint_value": endpoint,
        "passed": bool(junction_ok and ranges_ok
                       and abs(endpoint - 7.5 * u_m**2) <= 1e-12),
    }


def run_verify(rc: RunConfig, out_dir=None, jobs: int = 1) -> dict:
    """Simulation-free verification: profile bounds, rarefaction
    properties, weight regularity, error-term decay, and interaction
    decay.  Writes verify_report.json; `passed` drives the exit code."""
    rc.validate()
    cfg = rc.wave_config()
    profile = build_shock_profile(cfg, rc.profile.n_table, rc.profile.u_clearance)

    def check_weight():
        return weight_regularity_report(cfg.u_m)

    def check_profile():
        return verify_shock_bounds(profile)

    def check_rarefaction():
        return verify_rarefaction_props(cfg, sample_times=(1.0, 10.0, 100.0))

    def check_f_rates():
        if cfg.delta_r == 0.0:
            return {"status": "degenerate", "passed": True}
        times = np.geomspace(5.0, 100.0, 25)
        series = f_norm_series(times, 0.0, profile, cfg)
        slopes = {k: fit_decay(times, series[k])[0] for k in ("k0", "k1", "k2")}
        budget = running_error_budget(100.0, profile, cfg)
        half = np.interp(50.0, budget["times"], budget["cumulative"])
        full = budget["cumulative"][-1]
        growth = full / half if half > 0 else np.inf
        return {
            "slopes": slopes,
            "budget_growth_50_to_100": float(growth),
            "passed": bool(slopes["k0"] <= -1.0 and slopes["k1"] <= -0.9
                           and slopes["k2"] <= -0.9 and growth <= 1.1),
        }

    def check_interactions():
        if cfg.delta_r == 0.0:
            return {"status": "degenerate", "passed": True}
        times = np.geomspace(1.0, 100.0, 25)
        vals = np.array([interaction_integrals(t, 0.0, profile, cfg)
                         for t in times])
        s1 = fit_decay(times, vals[:, 0])[0]
        s2 = fit_decay(times, vals[:, 1])[0]
        i6 = vals[:, 5]
        monotone = bool(np.all(np.diff(i6) < 0))
        return {
            "I1_exponent": -s1, "I2_exponent": -s2,
            "I6_monotone_decreasing": monotone,
            "passed": bool(s1 <= -0.6 and s2 <= -0.6 and monotone),
        }

    tasks = {
        "weight_regularity": check_weight,
        "profile_bounds": check_profile,
        "rarefaction_properties": check_rarefaction,
        "error_term_rates": check_f_rates,
        "interaction_rates": check_interactions,
    }
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {name: pool.submit(fn) for name, fn in tasks.items()}
            results = {name: fut.result() for name, fut in futures.items()}
    else:
        results = {name: fn() for name, fn in tasks.items()}

    report = {
        "version": __version__,
        "schema": "relaxwave-verify-v1",
        "config": rc.to_dict(),
        "checks": results,
        "passed": bool(all(r.get("passed") for r in results.values())),
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "verify_report.json").write_text(
            json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n")
    return report


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj

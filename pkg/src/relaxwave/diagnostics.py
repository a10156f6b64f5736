"""Measured quantities: weighted entropy, norms, wave-interaction
integrals, error-term norms, and decay-exponent fits.

The interaction integrals are evaluated by exact changes of variables:
integrands weighted by u^S_xi become integrals over the profile value
(du^S = u^S_xi dxi), and integrands weighted by u^R_xi are integrated
over the characteristic foot point of the Burgers surrogate, where they
are exponentially localized.  Both substitutions remove the algebraic
tails that would otherwise dominate the quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .ansatz import error_term_F_derivs, perturbation
from .norms import linf, sobolev_norms
from .profiles import (ShockProfile, _solve_foot_point, _w0_derivs,
                       rarefaction_exact, smooth_rarefaction_derivs)
from .state import Grid1D, SimState
from .wave_model import WaveConfig
from .weight_shift import weight_eval

__all__ = [
    "DiagnosticsRecord", "relative_entropy", "sobolev_norms",
    "sup_distance_composite", "interaction_integrals", "f_norm_series",
    "running_error_budget", "fit_decay", "compute_record",
]


@dataclass
class DiagnosticsRecord:
    """One output-time row; field order fixes the CSV column order."""

    t: float
    E_w: float
    phi_L2: float
    phi_H1: float
    phi_H2: float
    r_L2: float
    r_H1: float
    r_H2: float
    sup_u: float
    sup_q: float
    X: float
    Xdot: float
    I1: float
    I2: float
    I3: float
    I4: float
    I5: float
    I6: float
    F0_L2_sq: float
    F1_L2_sq: float
    F2_L2_sq: float
    phi_Linf: float

    @classmethod
    def header(cls) -> str:
        return ",".join(f.name for f in fields(cls))

    def to_row(self) -> str:
        return ",".join(f"{getattr(self, f.name):.17g}" for f in fields(self))


def relative_entropy(phi, r, x_shift: float, profile: ShockProfile,
                     cfg: WaveConfig, grid: Grid1D) -> float:
    """Weighted relative entropy sum_i w(u^S(xi_i+X)) (phi^2 + tau r^2)/2 dx."""
    u_s = profile.u_at(grid.centers() + x_shift)
    w = weight_eval(u_s, cfg.u_m)[0]
    return float(np.sum(w * (phi**2 + cfg.tau * r**2)) * 0.5 * grid.dx)


def sup_distance_composite(state: SimState, profile: ShockProfile,
                           cfg: WaveConfig, grid: Grid1D):
    """Sup distances to the composite wave built with the exact fan.

    sup_u compares u against u^S(xi+X) + u^r(x/t) - u_m; sup_q compares
    q against the shifted shock flux alone.  Undefined at t = 0.
    """
    if not state.t > 0:
        raise ValueError("the exact fan is undefined at t = 0")
    xi = grid.centers()
    u, q = state.interior(grid)
    x_shift = state.shift.x
    u_s = profile.u_at(xi + x_shift)
    fan = rarefaction_exact(state.t, xi + cfg.sigma * state.t, cfg)
    sup_u = linf(u - (u_s + fan - cfg.u_m))
    sup_q = linf(q - profile.q_of_u(u_s))
    return sup_u, sup_q


def _fan_value(t, x, cfg):
    """Exact fan between u_m and u_plus at similarity variable x/t."""
    return rarefaction_exact(t, x, cfg)


def interaction_integrals(t: float, x_shift: float, profile: ShockProfile,
                          cfg: WaveConfig, n_quad: int = 2001):
    """The six shock/rarefaction interaction integrals at time t.

    In the profile frame zeta, the pairings are u^S(zeta) with
    u^R(1+t, zeta + sigma t) and the exact fan at time 1+t; the domain
    splits at zeta = X and zeta = X + (f'(u_+) - sigma)(1+t).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if cfg.delta_r == 0.0:
        return (0.0,) * 6
    u_m = cfg.u_m
    lam_minus = 3.0 * u_m**2
    lam_plus = 3.0 * cfg.u_plus**2
    t_r = 1.0 + t
    edge = (lam_plus - cfg.sigma) * t_r

    # I1, I2: |u^S - u_m| u^R_xi, integrated over the foot point x0 where
    # the rarefaction slope weight w0'/(6 u^R) is exponentially localized
    def zeta_of_x0(x0):
        w0 = _w0_derivs(x0, lam_minus, lam_plus, 0)[0]
        return x0 + w0 * t_r - cfg.sigma * t

    lo, hi = -60.0, 60.0 + edge
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if zeta_of_x0(mid) < x_shift:
            lo = mid
        else:
            hi = mid
    x0_cut = 0.5 * (lo + hi)

    def slope_integrand(x0):
        w0, dw0 = _w0_derivs(x0, lam_minus, lam_plus, 1)
        zeta = x0 + w0 * t_r - cfg.sigma * t
        u_r = np.sqrt(w0 / 3.0)
        return np.abs(profile.u_at(zeta) - u_m) * dw0 / (6.0 * u_r)

    x0a = np.linspace(-40.0, x0_cut, n_quad)
    x0b = np.linspace(x0_cut, 40.0, n_quad)
    i1 = float(np.trapz(slope_integrand(x0a), x0a))
    i2 = float(np.trapz(slope_integrand(x0b), x0b))

    def u_r_at(zeta):
        vals, _ = smooth_rarefaction_derivs(t_r, zeta + cfg.sigma * t, cfg, 0)
        return vals[0]

    # I3: exponentially localized on [trunc_left, X]
    za = np.linspace(profile.trunc_left, x_shift, n_quad)
    i3 = float(np.trapz(np.abs(u_r_at(za) - u_m) * profile.eval(za, 1)[1], za))

    # I4, I5 on [X, X + edge]
    zb = np.linspace(x_shift, x_shift + edge, 2 * n_quad)
    u_s_xi = profile.eval(zb, 1)[1]
    fan = _fan_value(t_r, zb - x_shift + cfg.sigma * t_r, cfg)
    i4 = float(np.trapz(np.abs(u_r_at(zb) - fan) * u_s_xi, zb))
    i5 = float(np.trapz(np.abs(fan - u_m) * u_s_xi, zb))

    # I6 in profile-value space: u^S_xi dzeta = dv kills the algebraic tail
    v_edge = float(profile.u_at(x_shift + edge))
    dr_hi = u_m - v_edge
    dr_lo = float(profile.du_right[-1])
    if dr_hi <= dr_lo:
        i6 = 0.0
    else:
        dr = np.geomspace(dr_hi, dr_lo, n_quad)
        v = u_m - dr
        zeta = profile.xi_of_u(v)
        i6 = float(np.trapz(np.abs(u_r_at(zeta) - u_m), v))
    return i1, i2, i3, i4, i5, i6


def _f_tail_l1_l2(t, xi_max, x_shift, profile: ShockProfile, cfg: WaveConfig,
                  n_quad: int = 300):
    """Contribution of the algebraic right tail xi > xi_max to the L1 and
    L2 norms of F, where only the (u^R - u_m) u^S_xi term survives."""
    u_m = cfg.u_m
    v_hi = float(profile.u_at(xi_max + x_shift))
    dr_hi = u_m - v_hi
    dr_lo = float(profile.du_right[-1])
    if dr_hi <= dr_lo:
        return 0.0, 0.0
    dr = np.geomspace(dr_hi, dr_lo, n_quad)
    v = u_m - dr
    pos = profile.xi_of_u(v) + cfg.sigma * t
    b, _ = smooth_rarefaction_derivs(1.0 + t, pos, cfg, 0)
    core = 3.0 * (b[0] - u_m) * (2.0 * v + b[0] - u_m)
    l1 = float(np.trapz(np.abs(core), v))
    l2 = float(np.trapz(core**2 * profile.slope_of_u(v), v))
    return l1, l2


def f_norm_series(times, x_series, profile: ShockProfile, cfg: WaveConfig,
                  dx_quad: float = 0.02, pad: float = 80.0) -> dict:
    """L2 norms of F, F_xi, F_xixi and the L1 norm of F along times.

    Returns arrays keyed "k0", "k1", "k2" (integrals of the squared
    derivatives) plus "l1".  The slowly decaying right tail of |F| and
    |F|^2 is completed in profile-value space.
    """
    times = np.asarray(times, dtype=float)
    x_series = np.broadcast_to(np.asarray(x_series, dtype=float), times.shape)
    lam_plus = 3.0 * cfg.u_plus**2
    out = {"times": times, "k0": [], "k1": [], "k2": [], "l1": []}
    for t, x_shift in zip(times, x_series):
        edge = (lam_plus - cfg.sigma) * (1.0 + t)
        xi = np.arange(-pad, edge + pad, dx_quad)
        f0, f1, f2 = error_term_F_derivs(t, xi, x_shift, profile, cfg, order=2)
        tail_l1, tail_l2 = _f_tail_l1_l2(t, xi[-1], x_shift, profile, cfg)
        out["k0"].append(float(np.trapz(f0**2, xi)) + tail_l2)
        out["k1"].append(float(np.trapz(f1**2, xi)))
        out["k2"].append(float(np.trapz(f2**2, xi)))
        out["l1"].append(float(np.trapz(np.abs(f0), xi)) + tail_l1)
    for k in ("k0", "k1", "k2", "l1"):
        out[k] = np.asarray(out[k])
    return out


def running_error_budget(t_final: float, profile: ShockProfile,
                         cfg: WaveConfig, dt_sample: float = 0.25,
                         x_shift: float = 0.0) -> dict:
    """Cumulative integral of (L1 norm of F)^(4/3) from 0 to t_final."""
    times = np.arange(0.0, t_final + 0.5 * dt_sample, dt_sample)
    series = f_norm_series(times, x_shift, profile, cfg, dx_quad=0.05)
    rate = series["l1"] ** (4.0 / 3.0)
    cumulative = np.concatenate(
        [[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(times))])
    return {"times": times, "cumulative": cumulative}


def fit_decay(times, values, window=None):
    """Least-squares slope of log(values) against log(1 + t).

    Returns (slope, r_squared).  Raises on non-positive values in the
    window or fewer than 5 points.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is not None:
        sel = (times >= window[0]) & (times <= window[1])
        times, values = times[sel], values[sel]
    if times.size < 5:
        raise ValueError("need at least 5 points in the fit window")
    if np.any(values <= 0):
        raise ValueError("fit_decay requires positive values")
    x = np.log1p(times)
    y = np.log(values)
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(a, y, rcond=None)
    fit = a @ (slope, intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum((fit - y) ** 2)) / ss_tot
    return float(slope), float(r2)


def compute_record(state: SimState, profile: ShockProfile, cfg: WaveConfig,
                   grid: Grid1D) -> DiagnosticsRecord:
    """Assemble the full diagnostics row for the current state."""
    phi, r = perturbation(state, profile, cfg, grid)
    dx = grid.dx
    x_shift = state.shift.x
    sup_u, sup_q = sup_distance_composite(state, profile, cfg, grid)
    inter = interaction_integrals(state.t, x_shift, profile, cfg)
    f_series = f_norm_series(np.array([state.t]), x_shift, profile, cfg,
                             dx_quad=0.05)
    return DiagnosticsRecord(
        t=state.t,
        E_w=relative_entropy(phi, r, x_shift, profile, cfg, grid),
        phi_L2=sobolev_norms(phi, dx, 0),
        phi_H1=sobolev_norms(phi, dx, 1),
        phi_H2=sobolev_norms(phi, dx, 2),
        r_L2=sobolev_norms(r, dx, 0),
        r_H1=sobolev_norms(r, dx, 1),
        r_H2=sobolev_norms(r, dx, 2),
        sup_u=sup_u, sup_q=sup_q,
        X=x_shift, Xdot=state.shift.xdot,
        I1=inter[0], I2=inter[1], I3=inter[2],
        I4=inter[3], I5=inter[4], I6=inter[5],
        F0_L2_sq=float(f_series["k0"][0]),
        F1_L2_sq=float(f_series["k1"][0]),
        F2_L2_sq=float(f_series["k2"][0]),
        phi_Linf=linf(phi),
    )

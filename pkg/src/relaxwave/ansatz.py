"""Composite-wave ansatz, perturbation extraction, and the error term F.

The ansatz superposes the steady shock profile (in the shock frame
xi = x - sigma*t) and the smooth rarefaction started at time offset 1:

    u~(t, xi) = u^S(xi + X) + u^R(1 + t, xi + sigma*t + X) - u_m
    q~(t, xi) = q^S(xi + X) + u^R_x(1 + t, xi + sigma*t + X)

It fails to solve the PDE by the error term

    F = d/dxi [ f(u~) - f(u^S) - f(u^R) ] - u^R_xx,

assembled here analytically for the cubic flux so the delta_R -> 0 limit
is exact rather than a difference of near-equal cubics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .norms import sobolev_norms
from .profiles import ShockProfile, smooth_rarefaction_derivs
from .state import Grid1D, SimState
from .wave_model import WaveConfig


@dataclass
class AnsatzEval:
    """Pointwise ansatz values, first xi-derivatives, and error term."""

    u_tilde: np.ndarray
    q_tilde: np.ndarray
    u_tilde_xi: np.ndarray
    q_tilde_xi: np.ndarray
    F: np.ndarray


def ansatz_fields(t, xi, x_shift, profile: ShockProfile, cfg: WaveConfig,
                  x0_guess=None):
    """Lean (u~, q~) evaluation for the time loop; returns the foot
    points of the rarefaction solve for warm-starting the next call."""
    xi = np.asarray(xi, dtype=float)
    u_s = profile.u_at(xi + x_shift)
    q_s = profile.q_of_u(u_s)
    rar, x0 = smooth_rarefaction_derivs(
        1.0 + t, xi + cfg.sigma * t + x_shift, cfg, order=1, x0_guess=x0_guess)
    u_tilde = u_s + rar[0] - cfg.u_m
    q_tilde = q_s + rar[1]
    return u_tilde, q_tilde, x0


def ansatz_eval(t, xi, x_shift, profile: ShockProfile, cfg: WaveConfig) -> AnsatzEval:
    """Ansatz values, xi-derivatives, and error term at (t, xi)."""
    xi = np.asarray(xi, dtype=float)
    u_s, u_s_xi = profile.eval(xi + x_shift, order=1)
    q_s = profile.q_of_u(u_s)
    q_s_xi = 3.0 * (u_s**2 - cfg.u_m**2) * u_s_xi
    rar, _ = smooth_rarefaction_derivs(
        1.0 + t, xi + cfg.sigma * t + x_shift, cfg, order=2)
    u_r, u_r_x, u_r_xx = rar
    u_m = cfg.u_m
    f = (3.0 * (u_r - u_m) * (2.0 * u_s + u_r - u_m) * u_s_xi
         + 3.0 * (u_s - u_m) * (u_s + 2.0 * u_r - u_m) * u_r_x
         - u_r_xx)
    return AnsatzEval(
        u_tilde=u_s + u_r - u_m,
        q_tilde=q_s + u_r_x,
        u_tilde_xi=u_s_xi + u_r_x,
        q_tilde_xi=q_s_xi + u_r_xx,
        F=f,
    )


def error_term_F_derivs(t, xi, x_shift, profile: ShockProfile,
                        cfg: WaveConfig, order: int = 0):
    """F and its xi-derivatives up to `order` (max 2), fully analytic.

    The k-th derivative needs shock derivatives to order k+1 and
    rarefaction x-derivatives to order k+2.
    """
    if not 0 <= order <= 2:
        raise ValueError("order must be 0, 1, or 2")
    xi = np.asarray(xi, dtype=float)
    u_m = cfg.u_m
    shock = profile.eval(xi + x_shift, order=1 + order)
    a = shock[0]
    a1 = shock[1]
    rar, _ = smooth_rarefaction_derivs(
        1.0 + t, xi + cfg.sigma * t + x_shift, cfg, order=2 + order)
    b, b1, b2 = rar[0], rar[1], rar[2]

    out = [3.0 * (b - u_m) * (2.0 * a + b - u_m) * a1
           + 3.0 * (a - u_m) * (a + 2.0 * b - u_m) * b1
           - b2]
    if order >= 1:
        a2 = shock[2]
        b3 = rar[3]
        out.append(6.0 * (b - u_m) * a1**2
                   + 6.0 * (a - u_m) * b1**2
                   + 12.0 * (a + b - u_m) * a1 * b1
                   + 3.0 * (a - u_m) * (a + 2.0 * b - u_m) * b2
                   + 3.0 * (b - u_m) * (2.0 * a + b - u_m) * a2
                   - b3)
    if order >= 2:
        a3 = shock[3]
        b4 = rar[4]
        out.append(18.0 * a1**2 * b1 + 18.0 * a1 * b1**2
                   + 18.0 * (a - u_m) * b1 * b2
                   + 18.0 * (b - u_m) * a1 * a2
                   + 18.0 * (a + b - u_m) * (a1 * b2 + b1 * a2)
                   + 3.0 * (a - u_m) * (a + 2.0 * b - u_m) * b3
                   + 3.0 * (b - u_m) * (2.0 * a + b - u_m) * a3
                   - b4)
    return out


def error_term_F(t, xi, x_shift, profile: ShockProfile, cfg: WaveConfig):
    """Error term F of the composite ansatz at (t, xi)."""
    return error_term_F_derivs(t, xi, x_shift, profile, cfg, order=0)[0]


def perturbation(state: SimState, profile: ShockProfile, cfg: WaveConfig,
                 grid: Grid1D):
    """(phi, r) = state minus ansatz at the state's time and shift."""
    u, q = state.interior(grid)
    u_tilde, q_tilde, _ = ansatz_fields(state.t, grid.centers(),
                                        state.shift.x, profile, cfg)
    return u - u_tilde, q - q_tilde


@dataclass(frozen=True)
class PerturbationScenario:
    """Gaussian perturbation family added on top of the ansatz at t = 0.

    amp/center/width shape the bump in u; q_amp adds an optional bump to
    the flux variable (off by default: the stability statement only
    constrains sqrt(tau)*||q0||, and starting on the ansatz isolates the
    u-response).  max_c1_norm, when set, rescales the bump so the
    discrete initial-data norm stays below it.
    """

    amp: float = 0.05
    center: float = 0.0
    width: float = 2.0
    q_amp: float = 0.0
    q_center: float = 0.0
    q_width: float = 2.0
    safety_margin: float = 0.5
    max_c1_norm: float | None = None


def gaussian_h2_norm(amp: float, width: float) -> float:
    """Closed-form H^2 norm of amp*exp(-((x-c)/width)^2)."""
    s = width
    return abs(amp) * np.sqrt(np.sqrt(np.pi / 2.0) * (s + 1.0 / s + 3.0 / s**3))


def initial_condition_norm(u0, q0, grid: Grid1D, profile: ShockProfile,
                           cfg: WaveConfig) -> float:
    """Discrete version of the admissibility norm on the initial data.

    Sum of: L2 distance to the pure shock on xi < 0, L2 distance to the
    lifted shock (shock + u_+ - u_m) on xi > 0, H1 of the slope mismatch,
    and sqrt(tau) * H2 of q0.
    """
    xi = grid.centers()
    dx = grid.dx
    u_s, u_s_xi = profile.eval(xi, order=1)
    left = xi < 0.0
    t1 = np.sqrt(np.sum((u0[left] - u_s[left]) ** 2) * dx)
    lifted = u_s + cfg.u_plus - cfg.u_m
    t2 = np.sqrt(np.sum((u0[~left] - lifted[~left]) ** 2) * dx)
    d_slope = np.gradient(u0, dx, edge_order=2) - u_s_xi
    t3 = sobolev_norms(d_slope, dx, order=1)
    t4 = np.sqrt(cfg.tau) * sobolev_norms(q0, dx, order=2)
    return float(t1 + t2 + t3 + t4)


def initial_data(scenario: PerturbationScenario, grid: Grid1D,
                 profile: ShockProfile, cfg: WaveConfig) -> SimState:
    """Ansatz at t = 0 plus the scenario's Gaussian bumps (with ghosts).

    Rejects amplitudes that push u0 outside the safety band
    [u_- - margin, u_+ + margin].
    """
    xi = grid.centers_padded()
    u_tilde, q_tilde, _ = ansatz_fields(0.0, xi, 0.0, profile, cfg)
    phi0 = scenario.amp * np.exp(-(((xi - scenario.center) / scenario.width) ** 2))
    r0 = np.zeros_like(xi)
    if scenario.q_amp != 0.0:
        r0 = scenario.q_amp * np.exp(
            -(((xi - scenario.q_center) / scenario.q_width) ** 2))

    if scenario.max_c1_norm is not None:
        g = grid.ghost
        base = initial_condition_norm(u_tilde[g:-g], q_tilde[g:-g], grid,
                                      profile, cfg)
        full = initial_condition_norm((u_tilde + phi0)[g:-g],
                                      (q_tilde + r0)[g:-g], grid, profile, cfg)
        if base >= scenario.max_c1_norm:
            raise ValueError(
                f"ansatz data alone has norm {base:.3g} >= requested bound "
                f"{scenario.max_c1_norm:.3g}")
        if full > scenario.max_c1_norm:
            scale = 0.95 * (scenario.max_c1_norm - base) / (full - base)
            phi0 *= scale
            r0 *= scale

    u0 = u_tilde + phi0
    q0 = q_tilde + r0
    lo = cfg.u_minus - scenario.safety_margin
    hi = cfg.u_plus + scenario.safety_margin
    if np.any(u0 < lo) or np.any(u0 > hi):
        raise ValueError(
            f"initial data leaves the safety band [{lo}, {hi}]; "
            "reduce the perturbation amplitude")
    return SimState(u=u0, q=q0, t=0.0)

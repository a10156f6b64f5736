"""Weight function on the shock profile and the time-dependent shift.

The weight w(u^S) is the piecewise-polynomial C^2 function used by the
a-contraction argument: linear left of the sign change of u^S, quartic
up to u_m/2, constant after.  Derivatives are taken with respect to the
profile value u^S; callers compose with du^S/dxi as needed.

The shift X(t) solves the ODE

    dX/dt = 32/(25 u_m^2) * integral phi(t, xi) w(u^S(xi+X)) u^S_xi(xi+X) dxi

with X(0) = 0, discretized by forward Euler on the PDE time step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .profiles import ShockProfile

WEIGHT_INTEGRAL_COEF = 383.0 / 32.0   # integral of w over (u_-, u_m) in units of u_m^3


def weight_eval(u_s, u_m: float):
    """Weight value and u-derivatives (w, w', w'') at profile value u_s.

    Values outside [-2 u_m, u_m] are clamped to the far-field branches.
    The three branches join with C^2 continuity at u_s = 0 and u_s = u_m/2;
    the ranges are (15/8) u_m^2 <= w < (15/2) u_m^2, -(5/2) u_m <= w' <= 0,
    0 <= w'' <= 15/2.
    """
    u_s = np.clip(np.asarray(u_s, dtype=float), -2.0 * u_m, u_m)
    w1 = 2.5 * u_m * (u_m - u_s)
    w2 = 2.5 / u_m**2 * (u_m - u_s) * (4.0 * u_s**3 + u_m**3)
    dw2 = 2.5 / u_m**2 * (12.0 * u_m * u_s**2 - 16.0 * u_s**3 - u_m**3)
    ddw2 = 60.0 * u_s / u_m**2 * (u_m - 2.0 * u_s)
    w3 = 1.875 * u_m**2

    lo = u_s < 0.0
    hi = u_s >= 0.5 * u_m
    w = np.where(lo, w1, np.where(hi, w3, w2))
    dw = np.where(lo, -2.5 * u_m, np.where(hi, 0.0, dw2))
    ddw = np.where(lo, 0.0, np.where(hi, 0.0, ddw2))
    if w.ndim == 0:
        return float(w), float(dw), float(ddw)
    return w, dw, ddw


@dataclass(frozen=True)
class WeightFn:
    """Weight bound to a scenario; breakpoints sit at 0 and u_m/2."""

    u_m: float

    @property
    def breakpoints(self):
        return 0.0, 0.5 * self.u_m

    def __call__(self, u_s):
        return weight_eval(u_s, self.u_m)

    def integral(self) -> float:
        """Closed-form integral of w over the full profile range."""
        return WEIGHT_INTEGRAL_COEF * self.u_m**3


@dataclass
class ShiftState:
    """Current shift, its rate, and the recorded (t, X, Xdot) history."""

    x: float = 0.0
    xdot: float = 0.0
    history_t: list = field(default_factory=lambda: [0.0])
    history_x: list = field(default_factory=lambda: [0.0])
    history_xdot: list = field(default_factory=lambda: [0.0])


def shift_rhs(phi, profile: ShockProfile, x_shift: float, grid,
              shock_vals=None) -> float:
    """Midpoint-rule shift rate from the perturbation on the grid.

    shock_vals may carry precomputed (u^S, u^S_xi) at the shifted cell
    centers to avoid re-evaluating the profile in the time loop.  Beyond
    the profile truncation u^S_xi vanishes, so far-field cells contribute
    exactly zero.
    """
    u_m = profile.cfg.u_m
    if shock_vals is None:
        shock_vals = profile.eval(grid.centers() + x_shift, order=1)
    u_s, u_s_xi = shock_vals[0], shock_vals[1]
    w = weight_eval(u_s, u_m)[0]
    total = float(np.sum(phi * w * u_s_xi)) * grid.dx
    return 32.0 / (25.0 * u_m**2) * total


def advance_shift(state: ShiftState, rhs: float, dt: float,
                  t_new: float | None = None) -> ShiftState:
    """Forward-Euler update X <- X + dt * rhs; appends to the history."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    state.x += dt * rhs
    state.xdot = rhs
    if t_new is None:
        t_new = state.history_t[-1] + dt
    state.history_t.append(t_new)
    state.history_x.append(state.x)
    state.history_xdot.append(rhs)
    return state

"""Scenario definition and flux algebra for the cubic conservation law.

The model is the 1D scalar conservation law u_t + (u^3)_x = q_x coupled to
Cattaneo's law tau*q_t + q = u_x.  A left state u_- < 0 paired with
u_+ > -u_-/2 produces a composite Riemann pattern: a degenerate Oleinik
shock from u_- to u_m = -u_-/2 followed by a rarefaction from u_m to u_+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEGENERACY_RTOL = 1e-12


def flux_and_derivs(u):
    """Cubic flux f(u) = u^3 and its first three derivatives.

    Works on scalars or arrays; the third derivative is the constant 6.
    """
    u = np.asarray(u, dtype=float)
    f3 = np.full_like(u, 6.0)
    out = (u**3, 3.0 * u**2, 6.0 * u, f3)
    if u.ndim == 0:
        return tuple(float(v) for v in out)
    return out


@dataclass(frozen=True)
class WaveConfig:
    """Physical scenario: far-field states and relaxation time.

    Attributes:
        u_minus: Left far-field state, must be negative.
        u_plus: Right far-field state, must satisfy u_plus >= -u_minus/2.
        tau: Relaxation time of the heat-flux law, positive.
        mu: Viscosity coefficient; the model is normalized to mu = 1.
    """

    u_minus: float
    u_plus: float
    tau: float
    mu: float = 1.0

    def __post_init__(self):
        if not self.u_minus < 0:
            raise ValueError(f"u_minus must be negative, got {self.u_minus}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.mu != 1.0:
            raise ValueError("only mu = 1 is supported")
        if self.u_plus < self.u_m - DEGENERACY_RTOL * abs(self.u_minus):
            raise ValueError(
                f"u_plus={self.u_plus} below the degenerate point -u_minus/2="
                f"{self.u_m}; only composite (or pure degenerate-shock) "
                "configurations are supported"
            )

    @property
    def u_m(self) -> float:
        """Intermediate state joining the shock and the rarefaction."""
        return -self.u_minus / 2.0

    @property
    def sigma(self) -> float:
        """Shock speed; equals f'(u_m) = 3*u_m^2 for the degenerate shock."""
        return 3.0 * self.u_m**2

    @property
    def delta_s(self) -> float:
        """Shock strength |u_m - u_minus| = 3*u_m."""
        return 3.0 * self.u_m

    @property
    def delta_r(self) -> float:
        """Rarefaction strength |u_plus - u_m| (zero for a pure shock)."""
        return max(self.u_plus - self.u_m, 0.0)

    @property
    def tau_profile_bound(self) -> float:
        """Upper bound on tau for a monotone shock profile: 4/(9*sigma*u_-^2)."""
        return 4.0 / (9.0 * self.sigma * self.u_minus**2)

    @property
    def tau_theorem_bound(self) -> float:
        """Stricter tau bound of the stability theorem."""
        return min(1.0 / (63.0 * self.sigma * self.u_minus**2), 8.0 / 7785.0)

    def require_profile_mode(self):
        if not self.tau < self.tau_profile_bound:
            raise ValueError(
                f"tau={self.tau} violates the profile bound "
                f"tau < 4/(9*sigma*u_minus^2) = {self.tau_profile_bound:.6g}"
            )

    def in_theorem_mode(self) -> bool:
        return self.tau <= self.tau_theorem_bound


def char_speeds(u, cfg: WaveConfig, frame: str = "shifted"):
    """Characteristic speeds of the quasi-linear relaxation system.

    Eigenvalues of [[f'(u)-s, -1], [-1/tau, -s]] with s = 0 in the lab
    frame and s = sigma in the shock-comoving frame.  The discriminant
    f'(u)^2 + 4/tau is strictly positive, so the speeds are always real
    and distinct.

    Returns:
        (lambda_minus, lambda_plus) with lambda_minus < lambda_plus.
    """
    if cfg.tau <= 0:
        raise ValueError("char_speeds requires tau > 0")
    if frame == "lab":
        s = 0.0
    elif frame == "shifted":
        s = cfg.sigma
    else:
        raise ValueError(f"unknown frame {frame!r}")
    u = np.asarray(u, dtype=float)
    fp = 3.0 * u**2
    disc = np.sqrt(fp**2 + 4.0 / cfg.tau)
    lam_minus = 0.5 * (fp - 2.0 * s - disc)
    lam_plus = 0.5 * (fp - 2.0 * s + disc)
    if u.ndim == 0:
        return float(lam_minus), float(lam_plus)
    return lam_minus, lam_plus


def max_char_speed(u, cfg: WaveConfig, frame: str = "shifted"):
    """Largest absolute characteristic speed, used for CFL and Rusanov."""
    lam_minus, lam_plus = char_speeds(u, cfg, frame)
    return np.maximum(np.abs(lam_minus), np.abs(lam_plus))


def classify_riemann(u_l: float, u_r: float) -> str:
    """Classify the Riemann pattern of the cubic flux between u_l and u_r.

    Admissibility follows the Oleinik chord condition.  For u_l < 0 the
    admissible shocks reach at most u_r = -u_l/2; equality is the
    degenerate Oleinik shock and anything beyond splits into a composite
    wave.  The rules for u_l > 0 are mirror images.
    """
    if u_l == u_r:
        return "constant"
    if u_l == 0.0:
        return "rarefaction"
    u_deg = -u_l / 2.0
    tol = DEGENERACY_RTOL * abs(u_l)
    if abs(u_r - u_deg) <= tol:
        return "degenerate_shock"
    if u_l < 0:
        if u_r < u_l:
            return "rarefaction"
        if u_r < u_deg:
            return "shock"
        return "composite"
    if u_r > u_l:
        return "rarefaction"
    if u_r > u_deg:
        return "shock"
    return "composite"


def rankine_hugoniot_speed(u_l: float, u_r: float) -> float:
    """Chord slope (f(u_r) - f(u_l)) / (u_r - u_l)."""
    if u_l == u_r:
        raise ValueError("equal states have no shock speed")
    return (u_r**3 - u_l**3) / (u_r - u_l)


DEFAULT_SCENARIO = dict(u_minus=-1.0, u_plus=0.75, tau=1e-3)


def default_config() -> WaveConfig:
    """Desk-scale scenario used throughout the verification suite."""
    cfg = WaveConfig(**DEFAULT_SCENARIO)
    assert cfg.in_theorem_mode()
    return cfg

"""Numerical lab for composite degenerate-shock/rarefaction waves of the
cubic conservation law with Cattaneo heat flux."""

__version__ = "0.1.0"

from .ansatz import (AnsatzEval, PerturbationScenario, ansatz_eval,
                     error_term_F, initial_data, perturbation)
from .config import RunConfig
from .diagnostics import (DiagnosticsRecord, fit_decay, f_norm_series,
                          interaction_integrals, relative_entropy,
                          sobolev_norms, sup_distance_composite)
from .profiles import (RarefactionEval, ShockProfile, build_shock_profile,
                       rarefaction_exact, rarefaction_smooth,
                       verify_rarefaction_props, verify_shock_bounds)
from .solver import BlowupError, cfl_dt, fill_boundary, step_imex
from .state import Grid1D, SimState, load_checkpoint, save_checkpoint
from .wave_model import (WaveConfig, char_speeds, classify_riemann,
                         default_config, flux_and_derivs)
from .weight_shift import ShiftState, WeightFn, advance_shift, shift_rhs, weight_eval

__all__ = [
    "AnsatzEval", "BlowupError", "DiagnosticsRecord", "Grid1D",
    "PerturbationScenario", "RarefactionEval", "RunConfig", "ShiftState",
    "ShockProfile", "SimState", "WaveConfig", "WeightFn",
    "advance_shift", "ansatz_eval", "build_shock_profile", "cfl_dt",
    "char_speeds", "classify_riemann", "default_config", "error_term_F",
    "fill_boundary", "fit_decay", "f_norm_series", "flux_and_derivs",
    "initial_data", "interaction_integrals", "load_checkpoint",
    "perturbation", "rarefaction_exact", "rarefaction_smooth",
    "relative_entropy", "save_checkpoint", "shift_rhs", "sobolev_norms",
    "step_imex", "sup_distance_composite", "verify_rarefaction_props",
    "verify_shock_bounds", "weight_eval",
]

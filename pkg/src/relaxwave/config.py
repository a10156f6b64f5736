"""Run configuration: TOML-backed sections with embedded defaults.

Every physical default is part of the dataclasses below, so a config
file only needs the values it overrides; the summary echoes the fully
resolved configuration for provenance.
"""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ansatz import PerturbationScenario
from .state import Grid1D
from .wave_model import WaveConfig


@dataclass
class WaveSection:
    u_minus: float = -1.0
    u_plus: float = 0.75
    tau: float = 1e-3


@dataclass
class GridSection:
    xi_min: float = -100.0
    xi_max: float = 300.0
    dx: float = 0.05


@dataclass
class TimeSection:
    t_final: float = 100.0
    cfl: float = 0.45
    output_interval: float = 0.5


@dataclass
class ScenarioSection:
    family: str = "gaussian"
    amp: float = 0.05
    center: float = 0.0
    width: float = 2.0
    q_amp: float = 0.0
    q_center: float = 0.0
    q_width: float = 2.0
    boundary: str = "ansatz"
    seed: int = 0
    safety_margin: float = 0.5
    max_c1_norm: float = 0.0   # 0 disables the rescaling cap


@dataclass
class ProfileSection:
    n_table: int = 4001
    u_clearance: float = 1e-6


@dataclass
class OutputSection:
    directory: str = "out"
    formats: str = "csv,json"


_SECTIONS = {
    "wave": WaveSection,
    "grid": GridSection,
    "time": TimeSection,
    "scenario": ScenarioSection,
    "profile": ProfileSection,
    "output": OutputSection,
}


@dataclass
class RunConfig:
    wave: WaveSection = field(default_factory=WaveSection)
    grid: GridSection = field(default_factory=GridSection)
    time: TimeSection = field(default_factory=TimeSection)
    scenario: ScenarioSection = field(default_factory=ScenarioSection)
    profile: ProfileSection = field(default_factory=ProfileSection)
    output: OutputSection = field(default_factory=OutputSection)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        kwargs = {}
        for name, section_cls in _SECTIONS.items():
            section_data = dict(data.get(name, {}))
            known = {f.name for f in fields(section_cls)}
            unknown = set(section_data) - known
            if unknown:
                raise ValueError(f"unknown keys in [{name}]: {sorted(unknown)}")
            kwargs[name] = section_cls(**section_data)
        unknown_sections = set(data) - set(_SECTIONS)
        if unknown_sections:
            raise ValueError(f"unknown config sections: {sorted(unknown_sections)}")
        return cls(**kwargs)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))

    def to_dict(self) -> dict:
        return {name: asdict(getattr(self, name)) for name in _SECTIONS}

    def dump_toml(self, path=None) -> str:
        lines = []
        for name in _SECTIONS:
            lines.append(f"[{name}]")
            for f in fields(getattr(self, name)):
                lines.append(f"{f.name} = {_toml_value(getattr(getattr(self, name), f.name))}")
            lines.append("")
        text = "\n".join(lines)
        if path is not None:
            Path(path).write_text(text)
        return text

    def apply_overrides(self, overrides) -> "RunConfig":
        """Apply `section.key=value` strings; values parse as TOML scalars."""
        for item in overrides:
            key, _, raw = item.partition("=")
            if not _ or "." not in key:
                raise ValueError(f"override must look like section.key=value: {item!r}")
            section_name, field_name = key.strip().split(".", 1)
            if section_name not in _SECTIONS:
                raise ValueError(f"unknown section in override: {section_name!r}")
            section = getattr(self, section_name)
            if not hasattr(section, field_name):
                raise ValueError(f"unknown key {field_name!r} in [{section_name}]")
            current = getattr(section, field_name)
            setattr(section, field_name, _parse_scalar(raw.strip(), type(current)))
        return self

    # -- derived objects ----------------------------------------------------

    def wave_config(self) -> WaveConfig:
        return WaveConfig(u_minus=self.wave.u_minus, u_plus=self.wave.u_plus,
                          tau=self.wave.tau)

    def grid1d(self) -> Grid1D:
        return Grid1D.from_bounds(self.grid.xi_min, self.grid.xi_max, self.grid.dx)

    def perturbation_scenario(self) -> PerturbationScenario:
        s = self.scenario
        if s.family != "gaussian":
            raise ValueError(f"unknown perturbation family {s.family!r}")
        return PerturbationScenario(
            amp=s.amp, center=s.center, width=s.width,
            q_amp=s.q_amp, q_center=s.q_center, q_width=s.q_width,
            safety_margin=s.safety_margin,
            max_c1_norm=s.max_c1_norm if s.max_c1_norm > 0 else None,
        )

    def validate(self) -> "RunConfig":
        """Raise ValueError with a field path on any invalid setting."""
        try:
            cfg = self.wave_config()
            cfg.require_profile_mode()
        except ValueError as exc:
            raise ValueError(f"wave: {exc}") from exc
        try:
            self.grid1d()
        except ValueError as exc:
            raise ValueError(f"grid: {exc}") from exc
        if self.time.t_final <= 0:
            raise ValueError("time.t_final must be positive")
        if not 0 < self.time.cfl <= 1:
            raise ValueError("time.cfl must lie in (0, 1]")
        if self.time.output_interval <= 0:
            raise ValueError("time.output_interval must be positive")
        if self.scenario.boundary not in ("ansatz", "extrapolate"):
            raise ValueError("scenario.boundary must be 'ansatz' or 'extrapolate'")
        if self.profile.n_table < 100:
            raise ValueError("profile.n_table must be at least 100")
        return self


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return f'"{value}"'
    raise TypeError(f"cannot serialize {value!r}")


def _parse_scalar(raw: str, want: type):
    if want is bool:
        if raw.lower() in ("true", "1"):
            return True
        if raw.lower() in ("false", "0"):
            return False
        raise ValueError(f"cannot parse bool from {raw!r}")
    if want is int:
        return int(raw)
    if want is float:
        return float(raw)
    return raw.strip('"').strip("'")

"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment. Frequencies are given in Hz
(ordinary, not angular), lengths in m, times in s, velocities in m/s.
``t_span_s`` and ``bell_eta`` accept ``auto``.
"""
from __future__ import annotations

import dataclasses
import hashlib
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .measurement import DetectionModel
from .model import CollisionScenario, PhysicalSetup

TWO_PI = 2 * math.pi


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


@dataclass(frozen=True)
class RunConfig:
    # atom and cavity
    n_principal: int = 51
    atomic_frequency_hz: float = 51.1e9
    mirror_spacing_m: float = 0.0275
    waist_m: float = 0.006
    mode_splitting_hz: float = 128e3
    # crossing
    v1: float = 300.0
    v2: float = 243.0
    delta_a_hz: float = 470e3
    nbar: float = 0.25
    n_fock_mix: int = 3
    n_fock_dyn: int = 5
    t_span_s: float | None = None
    dt_s: float = 2e-9
    # detuning sweep
    eta_min: float = 5e4
    eta_max: float = 3e6
    n_points: int = 40
    include_eta_zero_reference: bool = True
    # Bell scan
    bell_eta: float | None = None
    n_phases: int = 81
    # detection
    detection_mode: str = "scale"
    detection_scale: float = 0.89
    misassign: float = 0.05

    def __post_init__(self):
        if self.detection_mode not in ("scale", "matrix"):
            raise ConfigError(f"detection_mode must be 'scale' or 'matrix', got {self.detection_mode!r}")
        if self.n_points < 1 or self.n_phases < 3:
            raise ConfigError("need n_points >= 1 and n_phases >= 3")
        if not 0 < self.eta_min <= self.eta_max:
            raise ConfigError("need 0 < eta_min <= eta_max")

    # -- presets ------------------------------------------------------------

    @classmethod
    def fig3_defaults(cls) -> RunConfig:
        """Second experiment: faster atoms and 5% per-atom misassignment."""
        return cls(v1=500.0, v2=319.0, detection_mode="matrix")

    # -- text format --------------------------------------------------------

    @classmethod
    def parse(cls, text: str, base: RunConfig | None = None) -> RunConfig:
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in values:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            values[key] = (lineno, value)
        return (base or cls()).with_values(values)

    @classmethod
    def from_file(cls, path, base: RunConfig | None = None) -> RunConfig:
        return cls.parse(Path(path).read_text(encoding="utf-8"), base)

    def with_overrides(self, overrides) -> RunConfig:
        """Apply ``key=value`` strings (command-line style)."""
        values = {}
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not of the form key=value")
            key, value = (part.strip() for part in item.split("=", 1))
            values[key] = (None, value)
        return self.with_values(values)

    def with_values(self, values: dict) -> RunConfig:
        types = {f.name: f.type for f in fields(self)}
        changes = {}
        for key, (lineno, value) in values.items():
            where = f"line {lineno}: " if lineno is not None else ""
            if key not in types:
                raise ConfigError(f"{where}unknown key {key!r}")
            try:
                changes[key] = _convert(types[key], value)
            except ValueError as exc:
                raise ConfigError(f"{where}{key}: {exc}") from None
        return dataclasses.replace(self, **changes)

    def serialize(self) -> str:
        return "".join(f"{f.name} = {_format(getattr(self, f.name))}\n" for f in fields(self))

    @property
    def hash(self) -> str:
        return hashlib.sha256(self.serialize().encode("utf-8")).hexdigest()[:12]

    # -- domain objects -----------------------------------------------------

    def setup(self) -> PhysicalSetup:
        return PhysicalSetup(
            n_principal=self.n_principal,
            omega=TWO_PI * self.atomic_frequency_hz,
            L=self.mirror_spacing_m,
            w=self.waist_m,
            Delta=TWO_PI * self.mode_splitting_hz,
        )

    def scenario(self, **changes) -> CollisionScenario:
        base = CollisionScenario(
            v1=self.v1,
            v2=self.v2,
            delta_a=TWO_PI * self.delta_a_hz,
            nbar=self.nbar,
            n_fock_mix=self.n_fock_mix,
            n_fock_dyn=self.n_fock_dyn,
            t_span=self.t_span_s,
            dt=self.dt_s,
        )
        return dataclasses.replace(base, **changes) if changes else base

    def detection(self) -> DetectionModel:
        return DetectionModel(self.detection_mode, scale=self.detection_scale, misassign=self.misassign)


def _convert(kind: str, text: str):
    optional = "None" in kind
    if optional and text.lower() == "auto":
        return None
    if kind.startswith("int"):
        return int(text)
    if kind.startswith("float"):
        value = float(text)
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value
    if kind.startswith("bool"):
        lowered = text.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    return text


def _format(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)

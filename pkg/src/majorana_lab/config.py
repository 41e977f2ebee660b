"""Experiment configuration: dataclasses, JSON parsing and validation.

Defaults: ``n=32, L=32, dt=0.01, T=4, s=1, cadence=10``, masses ``M=m=1``,
phase ``z=-i`` (the Chadam-Glassey phase), dealiasing on.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .fields import GridSpec, make_grid
from .flows import MODELS, ModelKind
from .majorana import UNIT_TOL, DataShape, check_causality


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


@dataclass
class GridConfig:
    n: int = 32
    L: float = 32.0


@dataclass
class DataConfig:
    type: str = "gaussian"
    centers: list = field(default_factory=lambda: [[0.0, 0.0, 0.0]])
    widths: list = field(default_factory=lambda: [2.0])
    A: float = 1.0
    eps: float = 0.1
    seed: int = 0
    # H^{s+1/2} norm of phi_plus(0) for the dkg model; None means A
    phi_norm: float | None = None
    # Sobolev index used to calibrate A and eps
    norm_s: float = 1.0
    # "sample" (random A/eps data) or "chadam_glassey" (exactly Majorana, z=-i)
    kind: str = "sample"

    def shape(self) -> DataShape:
        return DataShape(
            kind=self.type,
            centers=tuple(tuple(float(x) for x in c) for c in self.centers),
            widths=tuple(float(w) for w in self.widths),
        )


@dataclass
class DiagnosticsConfig:
    cadence: int = 10
    s: float = 1.0
    pullback_times: list = field(default_factory=list)
    beta: float | None = None
    c0: float | None = None


@dataclass
class SimConfig:
    model: str = "cubic"
    M: float = 1.0
    m: float = 1.0
    z: list = field(default_factory=lambda: [0.0, -1.0])
    grid: GridConfig = field(default_factory=GridConfig)
    dt: float = 0.01
    T: float = 4.0
    data: DataConfig = field(default_factory=DataConfig)
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    output: str = "out"
    dealias: bool = True

    @property
    def zc(self) -> complex:
        return complex(self.z[0], self.z[1])

    def model_kind(self) -> ModelKind:
        return ModelKind(self.model, M=float(self.M), m=float(self.m), z=self.zc)

    def grid_spec(self) -> GridSpec:
        return make_grid(self.grid.n, self.grid.L)

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    def causality_window(self) -> float:
        """Latest time at which periodic images cannot yet have interacted."""
        return self.grid.L / 2 - self.data.shape().support_radius()

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _build(cls, raw, where):
    if raw is None:
        return cls()
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected an object, got {type(raw).__name__}")
    known = set(cls.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    return cls(**raw)


def config_from_dict(raw: dict) -> SimConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    raw = dict(raw)
    sub = {
        "grid": _build(GridConfig, raw.pop("grid", None), "grid"),
        "data": _build(DataConfig, raw.pop("data", None), "data"),
        "diagnostics": _build(DiagnosticsConfig, raw.pop("diagnostics", None), "diagnostics"),
    }
    cfg = _build(SimConfig, raw, "config")
    cfg.grid, cfg.data, cfg.diagnostics = sub["grid"], sub["data"], sub["diagnostics"]
    validate(cfg)
    return cfg


def validate(cfg: SimConfig) -> SimConfig:
    if cfg.model not in MODELS:
        raise ConfigError(f"model: expected one of {MODELS}, got {cfg.model!r}")
    if cfg.M < 0 or cfg.m < 0:
        raise ConfigError("M/m: masses must be nonnegative")
    if len(cfg.z) != 2:
        raise ConfigError("z: expected [re, im]")
    if abs(abs(cfg.zc) - 1.0) > UNIT_TOL:
        raise ConfigError(f"z: Majorana phase must have |z| = 1, got {abs(cfg.zc)!r}")
    try:
        grid = cfg.grid_spec()
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None
    if not (np.isfinite(cfg.dt) and cfg.dt > 0):
        raise ConfigError("dt: must be positive")
    if cfg.dt > 0.5 * grid.dx:
        raise ConfigError(f"dt too large: dt={cfg.dt:g} exceeds 0.5*dx={0.5 * grid.dx:g}")
    if not (np.isfinite(cfg.T) and cfg.T >= 0):
        raise ConfigError("T: must be nonnegative")
    if abs(cfg.n_steps * cfg.dt - cfg.T) > 1e-9 * max(1.0, cfg.T):
        raise ConfigError(f"T: {cfg.T:g} is not a whole number of steps of dt={cfg.dt:g}")
    d = cfg.data
    if d.kind not in ("sample", "chadam_glassey"):
        raise ConfigError(f"data.kind: expected 'sample' or 'chadam_glassey', got {d.kind!r}")
    if d.kind == "chadam_glassey" and abs(cfg.zc + 1j) > UNIT_TOL:
        raise ConfigError("z: chadam_glassey data is Majorana for z = -i only")
    if d.A < 0 or d.eps < 0:
        raise ConfigError("data.A/data.eps: must be nonnegative")
    if d.phi_norm is not None and d.phi_norm < 0:
        raise ConfigError("data.phi_norm: must be nonnegative")
    try:
        shape = d.shape()
        check_causality(shape, grid.L, cfg.T)
    except ValueError as exc:
        raise ConfigError(f"data: {exc}") from None
    diag = cfg.diagnostics
    if int(diag.cadence) != diag.cadence or diag.cadence < 1:
        raise ConfigError("diagnostics.cadence: must be a positive integer")
    if diag.beta is not None and diag.beta <= 0:
        raise ConfigError("diagnostics.beta: must be positive")
    window = cfg.causality_window()
    for tp in diag.pullback_times:
        if tp < 0 or tp > cfg.T + 1e-12:
            raise ConfigError(f"diagnostics.pullback_times: {tp:g} outside [0, T]")
        if tp > window + 1e-12:
            raise ConfigError(
                f"diagnostics.pullback_times: {tp:g} beyond the causality window {window:.4g}"
            )
        k = round(tp / cfg.dt)
        if abs(k * cfg.dt - tp) > 1e-9:
            raise ConfigError(f"diagnostics.pullback_times: {tp:g} is not on the dt grid")
    return cfg


def parse_config(path) -> SimConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(raw)

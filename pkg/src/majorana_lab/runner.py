"""Fixed-step simulation driver and time-step convergence studies."""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import fields as F
from .config import SimConfig, validate
from .diagnostics import DiagnosticsRecord, record
from .flows import BlowUpError, SimState, reference_duhamel_step, strang_step
from .majorana import chadam_glassey_data, sample_data, sample_scalar_data, split

INTEGRATORS = {"strang": strang_step, "reference": reference_duhamel_step}


def initial_state(cfg: SimConfig) -> SimState:
    grid = cfg.grid_spec()
    model = cfg.model_kind()
    d = cfg.data
    shape = d.shape()
    if d.kind == "chadam_glassey":
        rng = np.random.default_rng(d.seed)
        f = np.zeros((grid.n,) * 3, dtype=np.complex128)
        g = np.zeros_like(f)
        for env in shape.envelopes(grid):
            a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            f += a * env
            g += b * env
        psi = F.apply_mask(chadam_glassey_data(f, g), grid, _mask(cfg, grid))
        norm = F.sobolev_norm(psi, grid, d.norm_s)
        psi = psi * (d.A / norm) if norm > 0 else psi
    else:
        psi = sample_data(d.A, d.eps, model.z, grid, shape, d.seed, s=d.norm_s, T=cfg.T, dealias=cfg.dealias)
    if model.name == "cubic":
        fields = {"psi": psi}
    else:
        sp = split(psi, model.z)
        fields = {"phi": sp.phi, "chi": sp.chi}
        if model.name == "dkg":
            phi_norm = d.A if d.phi_norm is None else d.phi_norm
            fields["phi_plus"] = sample_scalar_data(
                phi_norm, grid, model.m, shape, d.seed, s=d.norm_s, dealias=cfg.dealias
            )
    return SimState(model, grid, 0.0, fields)


def _mask(cfg, grid):
    return F.dealias_mask(grid) if cfg.dealias else grid.nyquist_mask


@dataclass
class RunResult:
    config: SimConfig
    initial: SimState
    final: SimState
    records: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    outcome: str = "completed"
    blowup_t: float | None = None
    detail: str = ""

    def series(self, column: str):
        return np.array([r.as_dict()[column] for r in self.records])

    @property
    def times(self):
        return np.array([r.t for r in self.records])


def run_simulation(cfg: SimConfig, observer=None, integrator: str = "strang", state: SimState | None = None) -> RunResult:
    """Advance from ``t = 0`` to ``T`` with fixed ``dt``.

    Diagnostics are recorded at step 0, every ``cadence`` steps and at the
    final step; ``observer(state)`` is called at the same instants. States at
    the configured pull-back times are kept in ``snapshots``. A blow-up stops
    the run and is reported through ``outcome``/``blowup_t``.
    """
    validate(cfg)
    step = INTEGRATORS[integrator]
    state = initial_state(cfg) if state is None else state
    initial = state
    diag = cfg.diagnostics
    snap_steps = {int(round(tp / cfg.dt)): tp for tp in diag.pullback_times}
    result = RunResult(cfg, initial, state)

    def visit(k, st):
        if k % diag.cadence == 0 or k == cfg.n_steps:
            result.records.append(record(st, diag.s, initial))
            if observer is not None:
                observer(st)
        if k in snap_steps:
            result.snapshots[snap_steps[k]] = st

    visit(0, state)
    for k in range(1, cfg.n_steps + 1):
        try:
            state = step(state, cfg.dt, cfg.dealias)
        except BlowUpError as exc:
            result.outcome = "blowup"
            result.blowup_t = exc.t_last_finite
            result.detail = str(exc)
            break
        # keep the clock on the exact step grid
        state.t = k * cfg.dt
        visit(k, state)
    result.final = state
    return result


def _state_distance(a: SimState, b: SimState) -> float:
    num = sum(F.l2_norm(a.fields[k] - b.fields[k], a.grid) ** 2 for k in a.fields)
    return math.sqrt(num)


def _state_norm(a: SimState) -> float:
    return math.sqrt(sum(F.l2_norm(v, a.grid) ** 2 for v in a.fields.values()))


def integrate(state: SimState, dt: float, T: float, integrator: str = "strang", dealias: bool = True) -> SimState:
    step = INTEGRATORS[integrator]
    n = int(round(T / dt))
    for k in range(1, n + 1):
        state = step(state, dt, dealias)
        state.t = k * dt
    return state


@dataclass
class ConvergenceResult:
    model: str
    integrator: str
    dts: list
    errors: list
    orders: list
    slope: float | None
    exact: bool

    def summary(self):
        if self.exact:
            return "exact"
        return f"{self.slope:.3f}"


ROUNDOFF_FLOOR = 1e-13


def convergence_study(cfg: SimConfig, dt_list, integrator="strang", T: float | None = None, refine: int = 10):
    """Observed order of ``integrator`` against the Duhamel oracle at ``min(dt)/refine``.

    Errors are relative L^2 distances of the terminal states. When every error
    sits at the roundoff floor (a linear run) the order is reported as exact.
    ``integrator`` may also be a list, in which case one oracle solution is
    shared and a ``{name: ConvergenceResult}`` dict is returned.
    """
    names = [integrator] if isinstance(integrator, str) else list(integrator)
    for name in names:
        if name not in INTEGRATORS:
            raise ValueError(f"unknown integrator {name!r}")
    dts = sorted((float(d) for d in dt_list), reverse=True)
    if len(dts) < 3:
        raise ValueError("need at least three time steps")
    ratios = [dts[i] / dts[i + 1] for i in range(len(dts) - 1)]
    if max(ratios) - min(ratios) > 1e-9 * max(ratios) or min(ratios) <= 1:
        raise ValueError("time steps must form a geometric progression")
    T = cfg.T if T is None else T
    for dt in dts:
        if abs(round(T / dt) * dt - T) > 1e-9 * max(1.0, T):
            raise ValueError(f"T={T:g} is not a whole number of steps of dt={dt:g}")
    cfg = replace(cfg, T=T)
    init = initial_state(cfg)
    ref_dt = dts[-1] / refine
    ref = integrate(init.copy(), ref_dt, T, "reference", cfg.dealias)
    scale = max(_state_norm(ref), 1e-300)
    results = {}
    for name in names:
        errors = []
        for dt in dts:
            out = integrate(init.copy(), dt, T, name, cfg.dealias)
            errors.append(_state_distance(out, ref) / scale)
        exact = all(e < ROUNDOFF_FLOOR for e in errors)
        orders = []
        slope = None
        if not exact:
            for i in range(len(dts) - 1):
                orders.append(math.log(errors[i] / errors[i + 1]) / math.log(dts[i] / dts[i + 1]))
            slope = float(np.polyfit(np.log(dts), np.log(errors), 1)[0])
        results[name] = ConvergenceResult(cfg.model, name, dts, errors, orders, slope, exact)
    return results[integrator] if isinstance(integrator, str) else results


def records_table(records: list[DiagnosticsRecord]):
    if not records:
        return [], []
    return records[0].columns(), [r.values() for r in records]

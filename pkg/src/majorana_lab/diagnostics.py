"""Conserved quantities, space-time L^4 norms, interval partitions and pull-backs."""

from dataclasses import dataclass, field

import numpy as np

from . import fields as F
from .clifford import scalar_density
from .flows import SimState, free_dirac_flow, free_halfwave_flow
from .majorana import defect, reconstruct


@dataclass
class DiagnosticsRecord:
    t: float
    charge: dict = field(default_factory=dict)
    defect_plus: dict = field(default_factory=dict)
    defect_minus: dict = field(default_factory=dict)
    scalar_density: float = 0.0
    hs_norms: dict = field(default_factory=dict)
    l4x: dict = field(default_factory=dict)
    linear_dev: dict = field(default_factory=dict)

    def columns(self):
        cols = ["t"]
        for prefix, d in self._groups():
            if prefix == "scalar_density":
                cols.append(prefix)
            else:
                cols += [f"{prefix}_{k}" for k in d]
        return cols

    def values(self):
        vals = [self.t]
        for prefix, d in self._groups():
            if prefix == "scalar_density":
                vals.append(d)
            else:
                vals += list(d.values())
        return vals

    def _groups(self):
        return [
            ("charge", self.charge),
            ("defect_plus", self.defect_plus),
            ("defect_minus", self.defect_minus),
            ("scalar_density", self.scalar_density),
            ("hs", self.hs_norms),
            ("l4x", self.l4x),
            ("linear_dev", self.linear_dev),
        ]

    def as_dict(self):
        return dict(zip(self.columns(), self.values()))


def diagnostic_spinors(state: SimState) -> dict:
    """Spinor fields to monitor; split models also report ``psi = phi + chi``."""
    f = state.fields
    if state.model.name == "cubic":
        return {"psi": f["psi"]}
    return {"phi": f["phi"], "chi": f["chi"], "psi": reconstruct(f["phi"], f["chi"])}


def free_evolve(state: SimState, fields: dict, t: float) -> dict:
    """Apply the exact free flow over time ``t`` to each named field."""
    out = {}
    for name, v in fields.items():
        if v.ndim == 4:
            out[name] = free_dirac_flow(v, state.grid, t, state.model.M)
        else:
            out[name] = free_halfwave_flow(v, state.grid, t, state.model.m)
    return out


def _derivative_weight(grid, s):
    return F.japanese_power(grid, s, 1.0)


def record(state: SimState, s: float = 1.0, initial: SimState | None = None) -> DiagnosticsRecord:
    """Compute every diagnostic of ``state`` without modifying it.

    Spinor ``H^s`` norms use index ``s``; the scalar ``phi_plus`` uses ``s + 1/2``.
    ``l4x`` is ``||<nabla>^s f||_{L^4_x}`` for every field.
    """
    grid, z = state.grid, state.model.z
    spinors = diagnostic_spinors(state)
    rec = DiagnosticsRecord(t=state.t)
    for name, v in spinors.items():
        rec.charge[name] = F.l2_norm(v, grid) ** 2
        rec.defect_plus[name] = F.l2_norm(defect(v, z, +1), grid)
        rec.defect_minus[name] = F.l2_norm(defect(v, z, -1), grid)
    rec.scalar_density = F.l2_norm(scalar_density(spinors["psi"]), grid)

    weight = _derivative_weight(grid, s)
    every = dict(spinors)
    for name in state.model.scalar_fields:
        every[name] = state.fields[name]
    for name, v in every.items():
        rec.hs_norms[name] = F.sobolev_norm(v, grid, s + (0.5 if v.ndim == 3 else 0.0))
    if state.model.name == "cubic":
        rec.hs_norms["phi_part"] = 0.5 * F.sobolev_norm(defect(spinors["psi"], z, +1), grid, s)
    for name, v in every.items():
        rec.l4x[name] = F.l4x_norm(F.apply_scalar_multiplier(v, grid, weight), grid)

    if initial is not None:
        init_every = dict(diagnostic_spinors(initial))
        for name in state.model.scalar_fields:
            init_every[name] = initial.fields[name]
        free = free_evolve(state, init_every, state.t - initial.t)
        for name, v in every.items():
            rec.linear_dev[name] = F.l2_norm(v - free[name], grid)
    return rec


# ----------------------------------------------------------- space-time L^4


def _check_series(times, values):
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.ndim != 1 or times.shape != values.shape or times.size < 2:
        raise ValueError("series needs matching 1-D time and value arrays with >= 2 samples")
    if not np.all(np.diff(times) > 0):
        raise ValueError("sample times must be strictly increasing")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValueError("series values must be finite and nonnegative (accumulated integral not monotone)")
    return times, values


class _Cumulative:
    """Exact integral of the piecewise-linear interpolant of ``g = value^4``."""

    def __init__(self, times, values):
        self.t = times
        self.g = values**4
        h = np.diff(times)
        self.F = np.concatenate([[0.0], np.cumsum(0.5 * h * (self.g[1:] + self.g[:-1]))])

    def in_cell(self, i, base=0.0):
        """Running integral minus ``base``, restricted to cell ``[t_i, t_{i+1}]``."""
        t0, F0 = float(self.t[i]), float(self.F[i]) - base
        g0 = float(self.g[i])
        curv = float(self.g[i + 1] - self.g[i]) / (2.0 * float(self.t[i + 1] - self.t[i]))

        def f(s):
            tau = s - t0
            return F0 + g0 * tau + curv * tau * tau

        return f

    def __call__(self, s):
        t, g = self.t, self.g
        i = int(np.clip(np.searchsorted(t, s, side="right") - 1, 0, t.size - 2))
        h = t[i + 1] - t[i]
        tau = s - t[i]
        return self.F[i] + g[i] * tau + (g[i + 1] - g[i]) * tau * tau / (2 * h)


def dnorm_accumulate(times, values, interval) -> float:
    """``(int_I value(t)^4 dt)^(1/4)`` by the trapezoid rule on the fourth powers."""
    times, values = _check_series(times, values)
    a, b = interval
    if a < times[0] - 1e-12 or b > times[-1] + 1e-12 or b < a:
        raise ValueError(f"interval [{a}, {b}] not covered by samples on [{times[0]}, {times[-1]}]")
    cum = _Cumulative(times, values)
    return float(max(cum(b) - cum(a), 0.0) ** 0.25)


@dataclass
class PartitionResult:
    breakpoints: list
    interval_norms: list
    tail_norm: float
    N: int
    total: float
    beta: float
    bound: float
    bound_holds: bool
    quadrature_error: float
    n0: float | None = None
    c0: float | None = None
    a_norm: float | None = None

    def to_dict(self):
        return dict(self.__dict__)


def _bisect(fn, lo, hi, target, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


def greedy_partition(times, values, beta: float, c0: float | None = None, a_norm: float | None = None) -> PartitionResult:
    """Cut the window into consecutive intervals each carrying D-norm ``beta/4``.

    Breakpoints are found by bisection on the running integral. The counting
    check ``N <= (4 G / beta)^4`` uses the measured whole-window norm ``G``;
    when ``c0`` and ``a_norm`` are given, ``N0 = 2^6 (c0 a_norm)^4 beta^-4`` is
    reported alongside.
    """
    if not (beta > 0):
        raise ValueError("beta must be positive")
    times, values = _check_series(times, values)
    cum = _Cumulative(times, values)
    level = (beta / 4.0) ** 4
    t_end = times[-1]
    total4 = cum(t_end)
    points = [float(times[0])]
    norms = []
    while True:
        start = points[-1]
        base = cum(start)
        if total4 - base < level:
            break
        # the crossing lies in the sample cell where the running integral passes the target
        i = int(np.clip(np.searchsorted(cum.F, base + level, side="left") - 1, 0, times.size - 2))
        lo = max(start, float(times[i]))
        s = _bisect(cum.in_cell(i, base), lo, float(times[i + 1]), level)
        norms.append(float(max(cum(s) - base, 0.0) ** 0.25))
        points.append(float(s))
    N = len(points) - 1
    G = float(total4**0.25)
    bound = (4.0 * G / beta) ** 4
    h = float(np.max(np.diff(times)))
    g = cum.g
    g2 = np.max(np.abs(np.diff(g, 2))) / h**2 if g.size > 2 else 0.0
    quad = h**2 / 12.0 * (t_end - times[0]) * float(g2)
    n0 = None
    if c0 is not None and a_norm is not None:
        n0 = 2.0**6 * (c0 * a_norm) ** 4 * beta**-4
    return PartitionResult(
        breakpoints=points,
        interval_norms=norms,
        tail_norm=float(max(total4 - cum(points[-1]), 0.0) ** 0.25),
        N=N,
        total=G,
        beta=float(beta),
        bound=bound,
        bound_holds=bool(N <= bound * (1 + 1e-12)),
        quadrature_error=quad,
        n0=n0,
        c0=c0,
        a_norm=a_norm,
    )


# ---------------------------------------------------------------- pull-back


def pullback(state: SimState, window: float | None = None) -> dict:
    """``w(t) = U(-t) field(t)`` for every field (spinors and ``phi_plus``)."""
    if window is not None and state.t > window + 1e-12:
        raise ValueError(f"snapshot time {state.t:g} lies beyond the causality window {window:g}")
    fields = dict(diagnostic_spinors(state))
    for name in state.model.scalar_fields:
        fields[name] = state.fields[name]
    return free_evolve(state, fields, -state.t)


def cauchy_table(pulled: list, grid: F.GridSpec, s: float = 1.0) -> dict:
    """Pairwise ``H^s`` distances between pulled-back snapshots, per field.

    ``phi_plus`` distances use index ``s + 1/2``.
    """
    out = {}
    if not pulled:
        return out
    for name in pulled[0]:
        k = len(pulled)
        tab = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                a, b = pulled[i][name], pulled[j][name]
                idx = s + (0.5 if a.ndim == 3 else 0.0)
                tab[i, j] = tab[j, i] = F.sobolev_norm(b - a, grid, idx)
        out[name] = tab
    return out

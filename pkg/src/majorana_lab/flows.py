"""Exact free flows, exact interaction substeps and the time integrators.

Three models share one machinery:

``cubic``  the Soler equation for a single spinor ``psi``;
``pair``   the split system for ``(phi, chi)`` driven by ``phibar chi + chibar phi``;
``dkg``    the split Dirac-Klein-Gordon system for ``(phi, chi, phi_plus)`` with the
           first-order scalar ``phi_plus = phi + i <nabla>_m^{-1} d_t phi``.

In Hamiltonian form every spinor obeys ``i d_t u = H_M u - V gamma^0 u`` with a
real potential ``V``, so the interaction part is the pointwise rotation
``exp(i dt V gamma^0)``. ``V`` is invariant along that rotation, which makes
the substeps exact.
"""

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import fields as F
from .clifford import STANDARD, cross_density, rotate_gamma0, scalar_density

MODELS = ("cubic", "pair", "dkg")
SPINOR_FIELDS = {"cubic": ("psi",), "pair": ("phi", "chi"), "dkg": ("phi", "chi")}
SCALAR_FIELDS = {"cubic": (), "pair": (), "dkg": ("phi_plus",)}
BLOWUP_LINF = 1e8


class BlowUpError(RuntimeError):
    """Raised when a field turns non-finite or exceeds the L-infinity threshold."""

    def __init__(self, t_last_finite, t_failed, detail):
        super().__init__(
            f"blow-up at t={t_failed:.6g} ({detail}); last finite state at t={t_last_finite:.6g}"
        )
        self.t_last_finite = t_last_finite
        self.t_failed = t_failed
        self.detail = detail


@dataclass(frozen=True)
class ModelKind:
    name: str
    M: float = 1.0
    m: float = 1.0
    z: complex = -1j

    def __post_init__(self):
        if self.name not in MODELS:
            raise ValueError(f"unknown model {self.name!r}; expected one of {MODELS}")
        if self.M < 0 or self.m < 0:
            raise ValueError("masses must be nonnegative")

    @property
    def spinor_fields(self):
        return SPINOR_FIELDS[self.name]

    @property
    def scalar_fields(self):
        return SCALAR_FIELDS[self.name]

    @property
    def field_names(self):
        return self.spinor_fields + self.scalar_fields


@dataclass
class SimState:
    model: ModelKind
    grid: F.GridSpec
    t: float
    fields: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = set(self.model.field_names) - set(self.fields)
        if missing:
            raise ValueError(f"state for model {self.model.name!r} lacks {sorted(missing)}")
        for name in self.model.spinor_fields:
            if self.fields[name].shape != (4,) + (self.grid.n,) * 3:
                raise ValueError(f"spinor field {name!r} has shape {self.fields[name].shape}")
        for name in self.model.scalar_fields:
            if self.fields[name].shape != (self.grid.n,) * 3:
                raise ValueError(f"scalar field {name!r} has shape {self.fields[name].shape}")

    def copy(self):
        return SimState(self.model, self.grid, self.t, {k: v.copy() for k, v in self.fields.items()})

    def with_fields(self, t, fields):
        return replace(self, t=t, fields=fields)


# ---------------------------------------------------------------- free flows


@lru_cache(maxsize=64)
def _dirac_propagator_parts(grid: F.GridSpec, dt: float, M: float):
    w = F.bessel_symbol_grid(grid, M)
    c = np.cos(dt * w)
    ratio = np.zeros_like(w)
    nz = w > 0
    ratio[nz] = np.sin(dt * w[nz]) / w[nz]
    return c, -1j * ratio


@lru_cache(maxsize=16)
def _sigma_k(grid: F.GridSpec):
    kx, ky, kz = grid.k
    return kx + 1j * ky, kx - 1j * ky, np.broadcast_to(kz, (grid.n,) * 3)


def _apply_dirac_symbol(img, grid: F.GridSpec, M: float):
    """``(alpha.k + M beta) img`` using the block form of the Dirac representation.

    ``alpha^j = [[0, s_j], [s_j, 0]]`` and ``beta = diag(I, -I)``, so only the
    2x2 matrix ``sigma.k`` is ever applied.
    """
    kp, km, kz = _sigma_k(grid)
    u0, u1, l0, l1 = img
    out = np.empty_like(img)
    out[0] = kz * l0 + km * l1 + M * u0
    out[1] = kp * l0 - kz * l1 + M * u1
    out[2] = kz * u0 + km * u1 - M * l0
    out[3] = kp * u0 - kz * u1 - M * l1
    return out


def free_dirac_image(img, grid: F.GridSpec, dt: float, M: float):
    """Free Dirac propagator on a Fourier image.

    ``e^{-i dt <k>} Pi_+ + e^{+i dt <k>} Pi_-`` equals
    ``cos(dt <k>) I - i sin(dt <k>) H(k) / <k>`` with ``H(k) = alpha.k + M beta``.
    """
    c, s = _dirac_propagator_parts(grid, float(dt), float(M))
    return c * img + s * _apply_dirac_symbol(img, grid, M)


def free_dirac_flow(psi, grid: F.GridSpec, dt: float, M: float):
    img = F.forward_transform(psi, grid)
    return F.inverse_transform(free_dirac_image(img, grid, dt, M), grid)


@lru_cache(maxsize=64)
def _halfwave_phase(grid: F.GridSpec, dt: float, m: float):
    return np.exp(-1j * dt * F.bessel_symbol_grid(grid, m))


def free_halfwave_flow(phi_plus, grid: F.GridSpec, dt: float, m: float):
    """Solve ``-i d_t u + <nabla>_m u = 0`` exactly over ``dt``."""
    return F.apply_scalar_multiplier(phi_plus, grid, _halfwave_phase(grid, float(dt), float(m)))


def free_flow(state: SimState, dt: float, mask=None) -> dict:
    """Exact free flow of every field of ``state``; optional Fourier mask folded in."""
    model, grid = state.model, state.grid
    out = {}
    for name in model.spinor_fields:
        img = free_dirac_image(F.forward_transform(state.fields[name], grid), grid, dt, model.M)
        if mask is not None:
            img = img * mask
        out[name] = F.inverse_transform(img, grid)
    for name in model.scalar_fields:
        img = F.forward_transform(state.fields[name], grid) * _halfwave_phase(grid, float(dt), float(model.m))
        if mask is not None:
            img = img * mask
        out[name] = F.inverse_transform(img, grid)
    return out


# ------------------------------------------------------ interaction substeps


def interaction_substep_cubic(psi, dt: float):
    return rotate_gamma0(dt * scalar_density(psi), psi)


def interaction_substep_pair(phi, chi, dt: float):
    if phi.shape != chi.shape:
        raise ValueError("phi and chi live on different grids")
    theta = dt * cross_density(phi, chi)
    return rotate_gamma0(theta, phi), rotate_gamma0(theta, chi)


def interaction_substep_dkg(phi, chi, phi_plus, grid: F.GridSpec, dt: float, m: float):
    if phi.shape != chi.shape or phi.shape[1:] != phi_plus.shape:
        raise ValueError("phi, chi and phi_plus live on different grids")
    theta = dt * phi_plus.real
    rho = cross_density(phi, chi)
    source = F.apply_scalar_multiplier(rho, grid, F.japanese_power(grid, -1.0, m)).real
    return (
        rotate_gamma0(theta, phi),
        rotate_gamma0(theta, chi),
        phi_plus + 1j * dt * source,
    )


def interaction_substep(state: SimState, dt: float) -> dict:
    f, name = state.fields, state.model.name
    if name == "cubic":
        return {"psi": interaction_substep_cubic(f["psi"], dt)}
    if name == "pair":
        phi, chi = interaction_substep_pair(f["phi"], f["chi"], dt)
        return {"phi": phi, "chi": chi}
    phi, chi, pp = interaction_substep_dkg(f["phi"], f["chi"], f["phi_plus"], state.grid, dt, state.model.m)
    return {"phi": phi, "chi": chi, "phi_plus": pp}


def nonlinear_rhs(state: SimState) -> dict:
    """Time derivative contributed by the interaction alone."""
    f, name = state.fields, state.model.name
    g0 = np.array([1, 1, -1, -1])[:, None, None, None]
    if name == "cubic":
        return {"psi": 1j * scalar_density(f["psi"]) * g0 * f["psi"]}
    if name == "pair":
        rho = cross_density(f["phi"], f["chi"])
        return {"phi": 1j * rho * g0 * f["phi"], "chi": 1j * rho * g0 * f["chi"]}
    V = f["phi_plus"].real
    rho = cross_density(f["phi"], f["chi"])
    source = F.apply_scalar_multiplier(rho, state.grid, F.japanese_power(state.grid, -1.0, state.model.m))
    return {
        "phi": 1j * V * g0 * f["phi"],
        "chi": 1j * V * g0 * f["chi"],
        "phi_plus": 1j * source.real,
    }


# ----------------------------------------------------------------- steppers


def step_mask(grid: F.GridSpec, dealias: bool):
    return F.dealias_mask(grid) if dealias else grid.nyquist_mask


def check_finite(state: SimState, t_prev: float):
    for name, v in state.fields.items():
        if not np.all(np.isfinite(v)):
            raise BlowUpError(t_prev, state.t, f"non-finite values in {name}")
        linf = float(np.max(np.abs(v)))
        if linf > BLOWUP_LINF:
            raise BlowUpError(t_prev, state.t, f"|{name}|_inf = {linf:.3g} exceeds {BLOWUP_LINF:g}")


def strang_step(state: SimState, dt: float, dealias: bool = True) -> SimState:
    """One ``L(dt/2) N(dt) L(dt/2)`` step; a negative ``dt`` runs backwards."""
    if not (np.isfinite(dt) and dt != 0):
        raise ValueError("dt must be finite and nonzero")
    half = free_flow(state, 0.5 * dt)
    mid = interaction_substep(state.with_fields(state.t, half), dt)
    out = free_flow(state.with_fields(state.t, mid), 0.5 * dt, mask=step_mask(state.grid, dealias))
    new = state.with_fields(state.t + dt, out)
    check_finite(new, state.t)
    return new


def _axpy(a: dict, scale, b: dict) -> dict:
    return {k: a[k] + scale * b[k] for k in a}


def reference_duhamel_step(state: SimState, dt: float, dealias: bool = True) -> SimState:
    """Integrating-factor (Lawson) RK4 step on the Duhamel form.

    With ``u = L(t) w`` the slow variable obeys ``w' = L(-t) P N(L(t) w)``; classical
    RK4 on ``w`` gives a fourth-order scheme that only ever uses the exact free
    flow and the interaction right-hand side. ``P`` is the step mask applied to
    every right-hand side, so the scheme is consistent with the spectrally
    truncated system rather than projecting once per step.
    """
    if not (np.isfinite(dt) and dt != 0):
        raise ValueError("dt must be finite and nonzero")
    h = dt
    grid = state.grid
    mask = step_mask(grid, dealias)

    def N(fields):
        rhs = nonlinear_rhs(state.with_fields(state.t, fields))
        return {k: F.apply_mask(v, grid, mask) for k, v in rhs.items()}

    def L(fields, tau):
        return free_flow(state.with_fields(state.t, fields), tau)

    u = state.fields
    k1 = N(u)
    Lu_half = L(u, h / 2)
    k2 = N(L(_axpy(u, h / 2, k1), h / 2))
    k3 = N(_axpy(Lu_half, h / 2, k2))
    k4 = N(_axpy(L(u, h), h, L(k3, h / 2)))
    Lk1 = L(k1, h)
    Lk23 = L(_axpy(k2, 1.0, k3), h / 2)
    Lu = L(u, h)
    out = {k: Lu[k] + h / 6 * (Lk1[k] + 2 * Lk23[k] + k4[k]) for k in u}
    new = state.with_fields(state.t + dt, out)
    check_finite(new, state.t)
    return new

"""Majorana conjugation, defects, the small/large split and initial data.

For a unit phase ``z`` the map ``C(psi) = z gamma^2 conj(psi)`` is an
antilinear involution. The split

    phi = (psi + C psi) / 2,    chi = (psi - C psi) / 2

gives ``C phi = phi`` and ``C chi = -chi`` in the Dirac representation, so
``chi`` satisfies ``chi + z gamma^2 chi* = 0`` (the large, Majorana part) and
``phi`` satisfies ``phi - z gamma^2 phi* = 0`` (the small part). Exactly
Majorana data therefore has ``phi = 0``.
"""

from dataclasses import dataclass

import numpy as np

from . import fields as F
from .clifford import STANDARD

UNIT_TOL = 1e-12
# Gaussian envelopes count as supported where they exceed 1e-6 of their peak.
GAUSSIAN_SUPPORT_WIDTHS = float(np.sqrt(2.0 * np.log(1e6)))
SHAPES = ("gaussian", "bump")


def _check_unit(z):
    if abs(abs(z) - 1.0) > UNIT_TOL:
        raise ValueError(f"Majorana phase must have |z| = 1, got |z| = {abs(z)!r}")


def conjugation(psi, z) -> np.ndarray:
    """Pointwise ``z gamma^2 conj(psi)``."""
    return z * np.einsum("ab,b...->a...", STANDARD.gamma[2], np.conj(psi))


def defect(psi, z, sign: int = 1) -> np.ndarray:
    """``psi + sign * z gamma^2 conj(psi)``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return psi + sign * conjugation(psi, z)


def defect_l2(psi, grid: F.GridSpec, z, sign: int = 1) -> float:
    return F.l2_norm(defect(psi, z, sign), grid)


def defect_hs(psi, grid: F.GridSpec, z, sign: int = 1, s: float = 1.0) -> float:
    return F.sobolev_norm(defect(psi, z, sign), grid, s)


@dataclass
class MajoranaSplit:
    phi: np.ndarray
    chi: np.ndarray
    z: complex


def split(psi, z) -> MajoranaSplit:
    _check_unit(z)
    c = conjugation(psi, z)
    return MajoranaSplit(phi=0.5 * (psi + c), chi=0.5 * (psi - c), z=z)


def reconstruct(phi, chi) -> np.ndarray:
    if np.shape(phi) != np.shape(chi):
        raise ValueError("phi and chi live on different grids")
    return phi + chi


def chadam_glassey_data(f, g) -> np.ndarray:
    """Assemble ``(f, g, -g*, f*)``; Majorana for ``z = -i``."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if f.shape != g.shape:
        raise ValueError("f and g live on different grids")
    return np.stack([f, g, -np.conj(g), np.conj(f)])


# ------------------------------------------------------------ data shapes


@dataclass(frozen=True)
class DataShape:
    """Sum of smooth envelopes, each centred at an offset from the box centre.

    ``gaussian``: ``exp(-r^2 / (2 w^2))``; ``bump``: ``exp(1 - 1/(1 - r^2/w^2))``
    inside ``r < w`` and zero outside.
    """

    kind: str = "gaussian"
    centers: tuple = ((0.0, 0.0, 0.0),)
    widths: tuple = (2.0,)

    def __post_init__(self):
        if self.kind not in SHAPES:
            raise ValueError(f"unsupported data shape {self.kind!r}; expected one of {SHAPES}")
        if len(self.centers) != len(self.widths) or not self.widths:
            raise ValueError("centers and widths must be nonempty and of equal length")
        if any(w <= 0 for w in self.widths):
            raise ValueError("widths must be positive")

    def support_radius(self) -> float:
        """Radius around the box centre outside which all envelopes vanish."""
        scale = GAUSSIAN_SUPPORT_WIDTHS if self.kind == "gaussian" else 1.0
        return max(
            float(np.linalg.norm(c)) + scale * w for c, w in zip(self.centers, self.widths)
        )

    def envelopes(self, grid: F.GridSpec):
        half = grid.L / 2
        for c, w in zip(self.centers, self.widths):
            r2 = 0.0
            for xi, ci in zip(grid.x, c):
                # minimum-image offset from the centre at half + ci
                d = (xi - ci) % grid.L - half
                r2 = r2 + d * d
            if self.kind == "gaussian":
                yield np.exp(-r2 / (2 * w * w))
            else:
                q = r2 / (w * w)
                inside = q < 1
                env = np.zeros(np.broadcast_shapes(*(np.shape(x) for x in grid.x)))
                env[inside] = np.exp(1.0 - 1.0 / (1.0 - q[inside]))
                yield env


def check_causality(shape: DataShape, L: float, T: float):
    r = shape.support_radius()
    if 2 * (r + T) > L:
        raise ValueError(
            f"causality: data support radius {r:.4g} with T={T:g} needs L >= {2 * (r + T):.4g}, got L={L:g}"
        )


def _random_spinor(shape: DataShape, grid: F.GridSpec, rng) -> np.ndarray:
    u = np.zeros((4,) + (grid.n,) * 3, dtype=np.complex128)
    for env in shape.envelopes(grid):
        amp = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        u += amp[:, None, None, None] * env
    return u


def _calibrate(u, grid, norm, s, mask):
    u = F.apply_mask(u, grid, mask)
    if norm == 0:
        return np.zeros_like(u)
    current = F.sobolev_norm(u, grid, s)
    if current == 0:
        raise ValueError("data shape produced an identically zero field")
    return u * (norm / current)


def sample_data(
    A: float,
    eps: float,
    z,
    grid: F.GridSpec,
    shape: DataShape = DataShape(),
    seed: int = 0,
    s: float = 1.0,
    T: float | None = None,
    dealias: bool = True,
) -> np.ndarray:
    """Approximately Majorana spinor: large part of ``H^s`` norm ``A`` plus small part of norm ``eps``.

    The large part satisfies ``chi + z gamma^2 chi* = 0`` and the small part
    ``phi - z gamma^2 phi* = 0``, so :func:`split` recovers them. Both are
    band-limited by the step mask before the norms are fixed.
    """
    if A < 0 or eps < 0:
        raise ValueError("A and eps must be nonnegative")
    _check_unit(z)
    if T is not None:
        check_causality(shape, grid.L, T)
    rng = np.random.default_rng(seed)
    mask = F.dealias_mask(grid) if dealias else grid.nyquist_mask
    u = _random_spinor(shape, grid, rng)
    v = _random_spinor(shape, grid, rng)
    chi = _calibrate(0.5 * (u - conjugation(u, z)), grid, A, s, mask)
    phi = _calibrate(0.5 * (v + conjugation(v, z)), grid, eps, s, mask)
    return phi + chi


def sample_scalar_data(
    norm: float,
    grid: F.GridSpec,
    m: float,
    shape: DataShape = DataShape(),
    seed: int = 0,
    s: float = 1.0,
    dealias: bool = True,
) -> np.ndarray:
    """``phi_plus(0) = phi(0) + i <nabla>_m^{-1} d_t phi(0)`` from real bumps, ``H^{s+1/2}`` norm ``norm``."""
    if norm < 0:
        raise ValueError("norm must be nonnegative")
    rng = np.random.default_rng([seed, 1])
    phi0 = np.zeros((grid.n,) * 3)
    phi1 = np.zeros((grid.n,) * 3)
    for env in shape.envelopes(grid):
        a, b = rng.standard_normal(2)
        phi0 = phi0 + a * env
        phi1 = phi1 + b * env
    dt_part = F.apply_scalar_multiplier(phi1, grid, F.japanese_power(grid, -1.0, m)).real
    mask = F.dealias_mask(grid) if dealias else grid.nyquist_mask
    out = F.apply_mask(phi0 + 1j * dt_part, grid, mask)
    if norm == 0:
        return np.zeros_like(out)
    return out * (norm / F.sobolev_norm(out, grid, s + 0.5))

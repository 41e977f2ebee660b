"""Periodic grid, unitary FFTs, Fourier multipliers, norms and masks.

Fields are plain complex arrays whose last three axes are the grid axes:
``(n, n, n)`` for scalars and ``(4, n, n, n)`` for spinors. The Nyquist
plane of every axis is excluded from the wavenumber lattice, so every
multiplier and transform here zeroes it.
"""

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft

from .clifford import STANDARD, DiracRep

AXES = (-3, -2, -1)
THREADS_ENV = "MAJORANA_LAB_THREADS"


def _workers() -> int:
    # Only splits independent 1-D transforms; results do not depend on it.
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class GridSpec:
    """Box ``[0, L)^3`` sampled with ``n`` points per axis."""

    n: int
    L: float

    @cached_property
    def dx(self) -> float:
        return self.L / self.n

    @cached_property
    def volume(self) -> float:
        return self.L**3

    @cached_property
    def axis_index(self) -> np.ndarray:
        """Integer wavenumber index per FFT slot (Nyquist slot reads ``-n/2``)."""
        return np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)

    @cached_property
    def axis_k(self) -> np.ndarray:
        k = 2 * np.pi / self.L * self.axis_index.astype(float)
        k[self.n // 2] = 0.0
        return k

    @cached_property
    def k(self):
        """Broadcastable ``(kx, ky, kz)`` with the Nyquist slot set to zero."""
        a = self.axis_k
        return a[:, None, None], a[None, :, None], a[None, None, :]

    @cached_property
    def k2(self) -> np.ndarray:
        kx, ky, kz = self.k
        return kx**2 + ky**2 + kz**2

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        keep = self.axis_index != -(self.n // 2)
        return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]

    @cached_property
    def x(self):
        a = np.arange(self.n) * self.dx
        return a[:, None, None], a[None, :, None], a[None, None, :]


def make_grid(n: int, L: float) -> GridSpec:
    if int(n) != n or n % 2:
        raise ValueError(f"n must be an even integer, got {n!r}")
    if not 8 <= n <= 512:
        raise ValueError(f"n must lie in [8, 512], got {n}")
    if not (np.isfinite(L) and L > 0):
        raise ValueError(f"L must be positive, got {L!r}")
    return GridSpec(int(n), float(L))


def _check_grid(values, grid: GridSpec):
    if np.shape(values)[-3:] != (grid.n,) * 3:
        raise ValueError(
            f"field shape {np.shape(values)} does not match grid n={grid.n}"
        )


def forward_transform(values, grid: GridSpec) -> np.ndarray:
    _check_grid(values, grid)
    out = scipy.fft.fftn(values, axes=AXES, norm="ortho", workers=_workers())
    out *= grid.nyquist_mask
    return out


def inverse_transform(image, grid: GridSpec) -> np.ndarray:
    _check_grid(image, grid)
    return scipy.fft.ifftn(
        image * grid.nyquist_mask, axes=AXES, norm="ortho", workers=_workers()
    )


def bessel_symbol(k, m: float):
    """``<k>_m = sqrt(m^2 + |k|^2)``; ``k`` is a 3-vector or a ``|k|^2`` array."""
    k = np.asarray(k, dtype=float)
    k2 = np.sum(k**2, axis=0) if k.ndim == 1 and k.shape[0] == 3 else k
    return np.sqrt(m * m + k2)


def bessel_symbol_grid(grid: GridSpec, m: float) -> np.ndarray:
    return np.sqrt(m * m + grid.k2)


def japanese_power(grid: GridSpec, s: float, m: float = 1.0) -> np.ndarray:
    """Symbol of ``<nabla>_m^s``; for ``m = 0`` negative powers kill the zero mode."""
    w = bessel_symbol_grid(grid, m)
    if s >= 0:
        return w**s
    out = np.zeros_like(w)
    nz = w > 0
    out[nz] = w[nz] ** s
    return out


def apply_scalar_multiplier(values, grid: GridSpec, symbol) -> np.ndarray:
    """Multiply every Fourier mode (of every component) by ``symbol(k)``.

    ``symbol`` is either an array broadcastable to ``(n, n, n)`` or a
    callable ``symbol(kx, ky, kz)`` evaluated on the lattice.
    """
    if callable(symbol):
        symbol = symbol(*grid.k)
    symbol = np.broadcast_to(np.asarray(symbol), (grid.n,) * 3)
    if not np.all(np.isfinite(symbol[grid.nyquist_mask])):
        raise ValueError("multiplier symbol is not finite on the lattice")
    sym = np.where(grid.nyquist_mask, symbol, 0.0)
    return inverse_transform(forward_transform(values, grid) * sym, grid)


def dirac_symbol(k, M: float, rep: DiracRep = STANDARD) -> np.ndarray:
    """``gamma^0 gamma^j k_j + M gamma^0`` at one wavevector."""
    alpha = rep.alpha
    return np.einsum("j,jab->ab", np.asarray(k, dtype=float), alpha) + M * rep.beta


def dirac_projector_symbol(k, M: float, sign: int, rep: DiracRep = STANDARD) -> np.ndarray:
    """Fourier symbol of the projection onto positive (+1) or negative (-1) energy."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k = np.asarray(k, dtype=float)
    w = math.hypot(M, *k)  # scaled, so tiny |k| does not underflow to zero energy
    if w == 0.0:
        return 0.5 * np.eye(4, dtype=np.complex128)
    return 0.5 * (np.eye(4) + sign * dirac_symbol(k, M, rep) / w)


def l2_norm(values, grid: GridSpec) -> float:
    v = np.asarray(values)
    return float(np.sqrt(grid.dx**3 * np.sum(v.real**2 + v.imag**2)))


def sobolev_norm(values, grid: GridSpec, s: float) -> float:
    """``H^s`` norm with weight ``(1 + |k|^2)^s`` and the box volume factor.

    With the unitary transform the ``s = 0`` case coincides with
    :func:`l2_norm` (Parseval).
    """
    img = forward_transform(values, grid)
    weight = (1.0 + grid.k2) ** s
    power = img.real**2 + img.imag**2
    if power.ndim == 4:
        power = power.sum(axis=0)
    return float(np.sqrt(grid.dx**3 * np.sum(weight * power)))


def l4x_norm(values, grid: GridSpec) -> float:
    """``(dx^3 sum |f|^4)^(1/4)`` with ``|f|`` the pointwise Euclidean modulus."""
    v = np.asarray(values)
    sq = v.real**2 + v.imag**2
    if sq.ndim == 4:
        sq = sq.sum(axis=0)
    return float((grid.dx**3 * np.sum(sq * sq)) ** 0.25)


def dealias_mask(grid: GridSpec) -> np.ndarray:
    """Two-thirds rule: keep axis indices with ``|i| <= n/3``; symmetric in ``k``."""
    keep = np.abs(grid.axis_index) <= grid.n // 3
    keep &= grid.axis_index != -(grid.n // 2)
    return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]


def apply_mask(values, grid: GridSpec, mask) -> np.ndarray:
    return inverse_transform(forward_transform(values, grid) * mask, grid)

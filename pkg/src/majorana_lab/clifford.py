"""Dirac matrices in the Dirac representation and pointwise spinor algebra.

Spinor arrays carry the four components on the leading axis, so a single
spinor has shape ``(4,)`` and a field on an ``n**3`` grid has shape
``(4, n, n, n)``.
"""

from dataclasses import dataclass, field

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


@dataclass(frozen=True)
class DiracRep:
    """A fixed set of four 4x4 gamma matrices, ``gamma[mu]`` for mu = 0..3."""

    gamma: np.ndarray
    metric: np.ndarray = field(default_factory=lambda: METRIC.copy())

    def __post_init__(self):
        if self.gamma.shape != (4, 4, 4):
            raise ValueError(f"gamma must have shape (4, 4, 4), got {self.gamma.shape}")

    @property
    def alpha(self) -> np.ndarray:
        """``gamma^0 gamma^j`` for j = 1, 2, 3, stacked on the first axis."""
        return np.stack([self.gamma[0] @ self.gamma[j] for j in (1, 2, 3)])

    @property
    def beta(self) -> np.ndarray:
        return self.gamma[0]


def standard_rep() -> DiracRep:
    g = np.zeros((4, 4, 4), dtype=np.complex128)
    g[0] = np.diag([1, 1, -1, -1]).astype(np.complex128)
    for j in range(3):
        g[j + 1, :2, 2:] = PAULI[j]
        g[j + 1, 2:, :2] = -PAULI[j]
    return DiracRep(g)


STANDARD = standard_rep()


def _check_index(mu):
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"spacetime index must be in 0..3, got {mu!r}")


def anticommutator(rep: DiracRep, mu: int, nu: int) -> np.ndarray:
    _check_index(mu)
    _check_index(nu)
    a, b = rep.gamma[mu], rep.gamma[nu]
    return a @ b + b @ a


def clifford_residual(rep: DiracRep, mu: int, nu: int) -> float:
    """Max-entry deviation of ``{gamma^mu, gamma^nu}`` from ``2 g^{mu nu} I``."""
    target = 2.0 * rep.metric[mu, nu] * np.eye(4)
    return float(np.max(np.abs(anticommutator(rep, mu, nu) - target)))


def majorana_identity_residual(rep: DiracRep, mu: int) -> float:
    """Max-entry magnitude of ``gamma^mu gamma^2 + gamma^2 conj(gamma^mu)``."""
    _check_index(mu)
    g2 = rep.gamma[2]
    return float(np.max(np.abs(rep.gamma[mu] @ g2 + g2 @ np.conj(rep.gamma[mu]))))


def bilinear_scalar(psi1, psi2, rep: DiracRep = STANDARD):
    """Dirac bilinear ``psi1^dagger gamma^0 psi2``, pointwise over trailing axes."""
    psi1 = np.asarray(psi1, dtype=np.complex128)
    psi2 = np.asarray(psi2, dtype=np.complex128)
    return np.einsum("a...,ab,b...->...", np.conj(psi1), rep.gamma[0], psi2)


def scalar_density(psi) -> np.ndarray:
    """Real density ``psibar psi`` for the Dirac representation.

    Grouped as (upper) - (lower) so that a Chadam-Glassey spinor
    ``(f, g, -g*, f*)`` gives exactly zero in floating point.
    """
    psi = np.asarray(psi)
    sq = psi.real**2 + psi.imag**2
    return (sq[0] + sq[1]) - (sq[2] + sq[3])


def cross_density(phi, chi) -> np.ndarray:
    """``phibar chi + chibar phi = 2 Re(phibar chi)`` for the Dirac representation."""
    prod = np.conj(phi) * chi
    return 2.0 * ((prod[0].real + prod[1].real) - (prod[2].real + prod[3].real))


def gamma0_rotation(theta: float) -> np.ndarray:
    """The unitary ``exp(i theta gamma^0)`` in the Dirac representation."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    p, m = np.exp(1j * theta), np.exp(-1j * theta)
    return np.diag([p, p, m, m])


def rotate_gamma0(theta, psi) -> np.ndarray:
    """Apply ``exp(i theta(x) gamma^0)`` pointwise; ``theta`` broadcasts over the grid."""
    phase = np.exp(1j * np.asarray(theta))
    out = np.empty_like(psi, dtype=np.complex128)
    out[0] = phase * psi[0]
    out[1] = phase * psi[1]
    pc = np.conj(phase)
    out[2] = pc * psi[2]
    out[3] = pc * psi[3]
    return out


def apply_matrix(mat, psi) -> np.ndarray:
    """Pointwise ``mat @ psi`` over the leading spinor axis."""
    return np.einsum("ab,b...->a...", mat, psi)

"""Invariant suites behind ``majorana-lab verify``.

Each suite returns a :class:`SuiteResult` with its largest residual; the
report is JSON-serialisable. ``FAULTS`` holds deliberately broken
representations so the failure path itself can be exercised.
"""

import time
from dataclasses import asdict, dataclass

import numpy as np

from . import fields as F
from .clifford import STANDARD, DiracRep, clifford_residual, majorana_identity_residual, rotate_gamma0
from .flows import free_dirac_flow, free_halfwave_flow
from .majorana import defect

ALGEBRA_TOL = 1e-14
PROJECTOR_TOL = 1e-12
FLOW_TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    checks: int
    runtime_s: float
    worst: str = ""


def _finish(name, residuals: dict, tol, t0):
    worst = max(residuals, key=residuals.get)
    top = float(residuals[worst])
    return SuiteResult(name, bool(top <= tol), top, tol, len(residuals), time.perf_counter() - t0, worst)


def corrupted_gamma2_rep() -> DiracRep:
    g = STANDARD.gamma.copy()
    g[2, 0, 0] += 1e-3
    return DiracRep(g)


FAULTS = {"gamma2": corrupted_gamma2_rep}


def clifford_suite(rep: DiracRep = STANDARD) -> SuiteResult:
    t0 = time.perf_counter()
    res = {f"{{g{mu},g{nu}}}": clifford_residual(rep, mu, nu) for mu in range(4) for nu in range(4)}
    g = rep.gamma
    res["g0 hermitian"] = float(np.max(np.abs(g[0] - g[0].conj().T)))
    for j in (1, 2, 3):
        res[f"g{j} antihermitian"] = float(np.max(np.abs(g[j] + g[j].conj().T)))
    return _finish("clifford", res, ALGEBRA_TOL, t0)


def majorana_identity_suite(rep: DiracRep = STANDARD) -> SuiteResult:
    t0 = time.perf_counter()
    res = {f"g{mu} g2 + g2 conj(g{mu})": majorana_identity_residual(rep, mu) for mu in range(4)}
    g2 = rep.gamma[2]
    eye = np.eye(4)
    res["re(g2)"] = float(np.max(np.abs(g2.real)))
    res["g2^2 + I"] = float(np.max(np.abs(g2 @ g2 + eye)))
    res["g2 conj(g2) - I"] = float(np.max(np.abs(g2 @ np.conj(g2) - eye)))
    return _finish("majorana_identity", res, ALGEBRA_TOL, t0)


def projector_suite(rep: DiracRep = STANDARD, samples: int = 1000, seed: int = 0, n: int = 32, L: float = 32.0) -> SuiteResult:
    """``P+ + P- = I``, ``P+- ^2 = P+-`` and ``P+ P- = 0`` at random lattice wavevectors."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = {}
    eye = np.eye(4)
    idx = rng.integers(-(n // 2) + 1, n // 2, size=(samples, 3))
    masses = rng.choice([0.0, 0.5, 1.0, 2.0], size=samples)
    for i, (j, M) in enumerate(zip(idx, masses)):
        if M == 0 and not j.any():
            j = np.array([1, 0, 0])  # zero energy has no sign
        k = 2 * np.pi * j / L
        pp = F.dirac_projector_symbol(k, M, +1, rep)
        pm = F.dirac_projector_symbol(k, M, -1, rep)
        res[f"sum[{i}]"] = float(np.max(np.abs(pp + pm - eye)))
        res[f"idem+[{i}]"] = float(np.max(np.abs(pp @ pp - pp)))
        res[f"idem-[{i}]"] = float(np.max(np.abs(pm @ pm - pm)))
        res[f"orth[{i}]"] = float(np.max(np.abs(pp @ pm)))
    return _finish("projector", res, PROJECTOR_TOL, t0)


def _plane_wave_residuals(grid, M, m, t):
    res = {}
    x = grid.x
    j = np.array([3, -2, 1])
    k = 2 * np.pi * j / grid.L
    wave = np.exp(1j * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]))
    w = float(np.sqrt(M * M + k @ k))
    vals, vecs = np.linalg.eigh(F.dirac_symbol(k, M))
    for sign, col in ((-1, 0), (+1, 3)):
        psi = vecs[:, col][:, None, None, None] * wave
        out = free_dirac_flow(psi, grid, t, M)
        res[f"dirac eigenmode {sign:+d}"] = float(np.max(np.abs(out - np.exp(-1j * vals[col] * t) * psi)))
        res[f"dirac eigenvalue {sign:+d}"] = abs(abs(vals[col]) - w)
    wm = float(np.sqrt(m * m + k @ k))
    out = free_halfwave_flow(wave, grid, t, m)
    res["halfwave eigenmode"] = float(np.max(np.abs(out - np.exp(-1j * wm * t) * wave)))
    return res


def flow_suite(n: int = 32, L: float = 32.0, steps: int = 100, dt: float = 0.01, seed: int = 0) -> SuiteResult:
    """Eigenmode phases, and norm plus defect conservation of the free flow over ``steps`` steps."""
    t0 = time.perf_counter()
    grid = F.make_grid(n, L)
    M = 1.0
    res = _plane_wave_residuals(grid, M, 1.0, steps * dt)

    rng = np.random.default_rng(seed)
    shape = (4,) + (n,) * 3
    psi = F.apply_mask(rng.standard_normal(shape) + 1j * rng.standard_normal(shape), grid, grid.nyquist_mask)
    zs = [np.exp(1j * a) for a in rng.uniform(0, 2 * np.pi, 2)] + [0.7 - 0.2j]

    def measures(u):
        out = {"l2": F.l2_norm(u, grid), "h1": F.sobolev_norm(u, grid, 1.0)}
        for zi, z in enumerate(zs):
            for sign in (1, -1):
                out[f"defect{sign:+d} z{zi}"] = F.l2_norm(defect(u, z, sign), grid)
        return out

    base = measures(psi)
    u = psi
    for _ in range(steps):
        u = free_dirac_flow(u, grid, dt, M)
    for key, val in measures(u).items():
        res[f"free drift {key}"] = abs(val - base[key]) / base[key]

    # pointwise defect modulus along a gamma^0 rotation with a random real angle
    small = psi[:, :8, :8, :8]
    theta = rng.standard_normal(small.shape[1:])
    rot = rotate_gamma0(theta, small)
    for zi, z in enumerate(zs):
        for sign in (1, -1):
            before = np.linalg.norm(defect(small, z, sign), axis=0)
            after = np.linalg.norm(defect(rot, z, sign), axis=0)
            res[f"rotation defect{sign:+d} z{zi}"] = float(np.max(np.abs(after - before) / np.maximum(before, 1e-300)))
    return _finish("flow", res, FLOW_TOL, t0)


def run_all(rep: DiracRep = STANDARD, flow: bool = True) -> dict:
    suites = [clifford_suite(rep), majorana_identity_suite(rep), projector_suite(rep)]
    if flow:
        suites.append(flow_suite())
    return {
        "passed": all(s.passed for s in suites),
        "suites": {s.name: asdict(s) for s in suites},
    }

"""Self-contained invariant suite behind ``majorana verify``.

Each check returns a :class:`CheckResult`; sizes are smaller than the pytest
acceptance module so the whole run stays well under a minute.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import grid, poincare, spectral, weyl
from .axial import helicity_basis
from .clifford import ETA, alpha_dot, gamma, quaternion_units


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value) and self.value <= self.tolerance)


def _timed(name: str, tol: float, fn: Callable[[], float]) -> CheckResult:
    t0 = time.perf_counter()
    value = float(fn())
    return CheckResult(name, value, tol, time.perf_counter() - t0)


def _random_momenta(rng: np.random.Generator, n: int) -> np.ndarray:
    p = rng.normal(size=(n, 3)) * rng.uniform(0.1, 10.0, size=(n, 1))
    p[:4] = [[0, 3.0, 0], [0, -2.0, 0], [1e-10, 1.0, 0], [0, 0, 5.0]]
    return p


def check_algebra() -> float:
    g = [gamma(mu) for mu in range(4)]
    worst = 0.0
    for a in range(4):
        for b in range(4):
            ac = g[a] @ g[b] + g[b] @ g[a]
            worst = max(worst, np.abs(ac - 2 * ETA[a, b] * np.eye(4)).max())
    i_, j_, k_ = quaternion_units()
    worst = max(worst, np.abs(i_ @ j_ - k_).max(), np.abs(j_ @ k_ - i_).max(), np.abs(k_ @ i_ - j_).max())
    return worst


def check_basis(rng: np.random.Generator) -> float:
    worst = 0.0
    for p in _random_momenta(rng, 200):
        b = helicity_basis(p).matrix
        ev = np.linalg.norm(p) * np.diag([1, 1, -1, -1])
        worst = max(worst, np.abs(b.T @ b - np.eye(4)).max(),
                    np.abs(b.T @ alpha_dot(p) @ b - ev).max() / np.linalg.norm(p))
    return worst


def check_evolution(rng: np.random.Generator) -> float:
    worst = 0.0
    for m in (0.0, 0.3, 1.0):
        for _ in range(20):
            p = rng.normal(size=3)
            mode = spectral.PairedAxialMode.make(p, m, rng.normal(size=4), rng.normal(size=4))
            t = rng.uniform(0, 20)
            a = spectral.evolve(mode, t).amplitudes
            b = spectral.evolve_L_form(mode, t).amplitudes
            worst = max(worst, np.abs(a - b).max())
    return worst


def _packet(rng: np.random.Generator, box: float, mass: float, count: int) -> spectral.WavePacket:
    pk = spectral.WavePacket(box, mass, 1)
    for k in range(1, count + 1):
        pk = pk.with_mode((0, 0, k), rng.normal(size=4), rng.normal(size=4))
    return pk


def check_oracle(rng: np.random.Generator) -> float:
    box, n = 20 * math.pi, 256
    pk = _packet(rng, box, 1.0, 12)
    z = box * np.arange(n) / n
    state = grid.GridState(box, n, spectral.synthesize(pk, z, 0.0), 1, 1.0)
    ref = spectral.synthesize(pk, z, 25.0)
    out = grid.evolve(state, 25.0).field
    return np.linalg.norm(out - ref) / np.linalg.norm(ref)


def check_conservation(rng: np.random.Generator) -> float:
    pk = _packet(rng, 20 * math.pi, 1.0, 10)
    n0 = pk.norm_sq()
    return abs(pk.evolve(100.0).norm_sq() - n0) / n0


def check_pairing(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(20):
        q, m = rng.uniform(0.1, 5), rng.uniform(0.1, 2)
        worst = max(worst, spectral.counter_wave_nullspace(q, m, "A-").shape[1])
    return worst


def check_uncertainty() -> float:
    st = grid.gaussian_state(20 * math.pi, 512, math.pi, k0=1.0, mass=1.0)
    cert = grid.uncertainty_certificate(st)[0]
    return max(0.0, 0.5 - cert.product)


def check_poincare(rng: np.random.Generator) -> float:
    m = 0.8
    pk = spectral.WavePacket(10.0, m, 3)
    for key in [(1, 0, 0), (0, 1, 2), (1, -1, 1)]:
        pk = pk.with_mode(key, rng.normal(size=4), rng.normal(size=4))
    modes = poincare.covariant_packet(pk)
    ref = poincare.invariant_product(modes, modes)
    worst = abs(ref - pk.norm_sq()) / ref
    for _ in range(10):
        lt = poincare.LorentzTransform.boost(rng.normal(size=3), rng.uniform(0, 1.5))
        moved = [poincare.lorentz_act(c, lt) for c in modes]
        worst = max(worst, abs(poincare.invariant_product(moved, moved) - ref) / ref)
    return worst


def check_weyl(rng: np.random.Generator) -> float:
    psi = rng.normal(size=4)
    phi = weyl.from_majorana(psi)
    return max(np.abs(weyl.to_majorana(phi) - psi).max(), phi.chirality_residual())


def check_heisenberg() -> float:
    worst = 0.0
    for ratio in (0.1, 0.5, 0.9):
        m = 1.0
        q = m * math.sqrt(1 / ratio**2 - 1)
        osc = spectral.axial_oscillation(spectral.heisenberg_probe_mode((0, 0, q), m))
        worst = max(worst, abs(osc.rotating_magnitude / q - ratio))
    return worst


def run_all(seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        _timed("clifford algebra", 1e-14, check_algebra),
        _timed("helicity basis", 1e-10, lambda: check_basis(rng)),
        _timed("evolution routes", 1e-10, lambda: check_evolution(rng)),
        _timed("grid oracle", 1e-8, lambda: check_oracle(rng)),
        _timed("plancherel drift", 1e-11, lambda: check_conservation(rng)),
        _timed("no single traveling wave", 0.0, lambda: check_pairing(rng)),
        _timed("uncertainty bound", 1e-3, check_uncertainty),
        _timed("poincare invariance", 1e-9, lambda: check_poincare(rng)),
        _timed("weyl round trip", 1e-12, lambda: check_weyl(rng)),
        _timed("axial rotation magnitude", 1e-12, check_heisenberg),
    ]

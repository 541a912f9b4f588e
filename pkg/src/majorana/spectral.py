"""Wavepackets as paired axial modes and their closed-form time evolution.

A packet lives in a periodic box of side ``L`` with lattice momenta
``2 pi n / L``; ``dim = 1`` packets keep every momentum on the z axis.  The
continuum measure ``d^3p`` becomes ``(2 pi / L)^dim`` per lattice point, so the
field of a packet is

    psi(x) = (2 pi)^(-dim/2) (2 pi / L)^dim  sum_p exp(I p.x) u(p)

and the position-space scalar product over the box equals the lattice
Plancherel sum exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

import numpy as np

from .axial import (
    HelicityBasis,
    Momentum3,
    evolution_generators,
    helicity_basis,
    paired_generator,
)
from .clifford import quaternion_units

_I, _J, _K = quaternion_units()


@dataclass(frozen=True, eq=False)
class PairedAxialMode:
    """Amplitudes ``(c1, c2, d1, d2)`` at ``+p`` (``plus``) and ``-p`` (``minus``).

    ``p`` is always the lexicographically positive member of the pair.
    """

    p: Momentum3
    m: float
    plus: np.ndarray
    minus: np.ndarray

    def __post_init__(self):
        if not self.p.is_canonical():
            raise ValueError(f"momentum {self.p} is not in the canonical half-space")
        if self.m < 0:
            raise ValueError("mass must be non-negative")
        object.__setattr__(self, "plus", np.asarray(self.plus, dtype=float).reshape(4))
        object.__setattr__(self, "minus", np.asarray(self.minus, dtype=float).reshape(4))

    @classmethod
    def make(cls, p, m: float, plus=(0, 0, 0, 0), minus=(0, 0, 0, 0)) -> "PairedAxialMode":
        """Build a mode, swapping the roles of ``plus``/``minus`` if ``p`` is not canonical."""
        p = Momentum3.of(p)
        if p.norm == 0.0:
            raise ValueError("paired modes need a non-zero momentum")
        if p.is_canonical():
            return cls(p, float(m), plus, minus)
        return cls(-p, float(m), minus, plus)

    @classmethod
    def from_amplitudes(cls, p, m: float, amplitudes) -> "PairedAxialMode":
        a = np.asarray(amplitudes, dtype=float)
        return cls.make(p, m, a[:4], a[4:])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.concatenate([self.plus, self.minus])

    @property
    def energy(self) -> float:
        return self.p.energy(self.m)

    def norm_sq(self) -> float:
        return float(self.plus @ self.plus + self.minus @ self.minus)

    def even_odd(self) -> tuple[np.ndarray, np.ndarray]:
        c = 0.5 * np.array([
            self.plus[0] + self.minus[0], self.plus[0] - self.minus[0],
            self.plus[1] + self.minus[1], self.plus[1] - self.minus[1],
        ])
        d = 0.5 * np.array([
            self.plus[2] + self.minus[2], self.plus[2] - self.minus[2],
            self.plus[3] + self.minus[3], self.plus[3] - self.minus[3],
        ])
        return c, d

    def sides(self):
        """``(momentum, amplitudes)`` for ``+p`` and ``-p``."""
        return ((self.p, self.plus), (-self.p, self.minus))


def evolve(mode: PairedAxialMode, t: float) -> PairedAxialMode:
    """Advance the amplitudes by the SO(4) flow ``exp(t E K+-)`` on even/odd parts."""
    u = evolution_generators(mode.p, mode.m).propagator(t)
    a = u @ mode.amplitudes
    return replace(mode, plus=a[:4], minus=a[4:])


def evolve_L_form(mode: PairedAxialMode, t: float) -> PairedAxialMode:
    """Same flow, computed with ``cos(Et) -+ L+- sin(Et)`` on the unsplit amplitudes.

    ``L+-`` act on the field: the ``I`` part keeps the momentum, the ``J`` part
    sends ``exp(I p.x)`` to ``exp(-I p.x)`` because ``J`` anticommutes with ``I``.
    """
    gens = evolution_generators(mode.p, mode.m)
    energy = gens.energy
    ratio_p = mode.p.norm / energy
    ratio_m = mode.m / energy
    cos_t, sin_t = math.cos(energy * t), math.sin(energy * t)
    bases = (helicity_basis(mode.p).matrix, helicity_basis(-mode.p).matrix)
    acc = [np.zeros(4), np.zeros(4)]
    for side, amps in enumerate((mode.plus, mode.minus)):
        other = 1 - side
        u_c = bases[side][:, :2] @ amps[:2]
        u_d = bases[side][:, 2:] @ amps[2:]
        # (cos - L+ sin) on the positive-helicity part
        acc[side] += cos_t * u_c - sin_t * ratio_p * (_I @ u_c)
        acc[other] += -sin_t * ratio_m * (_J @ u_c)
        # (cos + L- sin) on the negative-helicity part
        acc[side] += cos_t * u_d + sin_t * ratio_p * (_I @ u_d)
        acc[other] += -sin_t * ratio_m * (_J @ u_d)
    return replace(mode, plus=bases[0].T @ acc[0], minus=bases[1].T @ acc[1])


# -- standing and traveling waves ---------------------------------------------------

def standing_wave_vectors(p, m: float, amps) -> tuple[np.ndarray, ...]:
    """``V_cc, V_cs, V_sc, V_ss`` at a single momentum from ``(c1, c2, d1, d2)``."""
    c1, c2, d1, d2 = (float(a) for a in amps)
    basis = helicity_basis(p)
    v1p, v2p, v1m, v2m = basis.v_plus_1, basis.v_plus_2, basis.v_minus_1, basis.v_minus_2
    q = Momentum3.of(p).norm
    e = math.hypot(m, q)
    v_cc = c1 * v1p + c2 * v2p + d1 * v1m + d2 * v2m
    v_cs = ((m * d1 + q * c2) * v1p - (m * d2 + q * c1) * v2p
            - (m * c1 + q * d2) * v1m + (m * c2 + q * d1) * v2m) / e
    v_sc = -c2 * v1p + c1 * v2p - d2 * v1m + d1 * v2m
    v_ss = (-(m * d2 - q * c1) * v1p - (m * d1 - q * c2) * v2p
            + (m * c2 - q * d1) * v1m + (m * c1 - q * d2) * v2m) / e
    return v_cc, v_cs, v_sc, v_ss


def traveling_matrices(q: float, m: float) -> dict[str, np.ndarray]:
    """Linear maps from ``(c1, c2, d1, d2)`` to the coefficients ``A+-^i``, ``B+-^i``.

    ``q`` is ``|p|``.  Keys are ``"A+", "A-", "B+", "B-"``.
    """
    e = math.hypot(m, q)
    r, s = q / e, m / e
    # 1 - q/E without cancellation when m << q
    gap = m * m / (e * (e + q)) if e > 0 else 1.0
    out = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        hi, lo = (1 + r, gap) if sign > 0 else (gap, 1 + r)
        out["A" + tag] = np.array([
            [hi, 0, 0, -sign * s],
            [0, hi, -sign * s, 0],
            [0, sign * s, lo, 0],
            [sign * s, 0, 0, lo],
        ])
        out["B" + tag] = np.array([
            [0, -hi, -sign * s, 0],
            [hi, 0, 0, sign * s],
            [sign * s, 0, 0, -lo],
            [0, -sign * s, lo, 0],
        ])
    return out


@dataclass(frozen=True, eq=False)
class TravelingDecomposition:
    """Traveling-wave form at one momentum.

    Field contribution (without the box prefactor)::

        1/2 [cos(p.x - Et) A+ + cos(p.x + Et) A- + sin(p.x - Et) B+ + sin(p.x + Et) B-]
    """

    p: Momentum3
    m: float
    coefficients: dict
    basis: HelicityBasis

    def _vec(self, key: str) -> np.ndarray:
        return self.basis.matrix @ self.coefficients[key]

    @property
    def A_plus(self) -> np.ndarray:
        return self._vec("A+")

    @property
    def A_minus(self) -> np.ndarray:
        return self._vec("A-")

    @property
    def B_plus(self) -> np.ndarray:
        return self._vec("B+")

    @property
    def B_minus(self) -> np.ndarray:
        return self._vec("B-")

    def field(self, x, t: float) -> np.ndarray:
        theta = np.asarray(x, dtype=float) @ self.p.vec
        e = self.p.energy(self.m)
        out = (np.multiply.outer(self.A_plus, np.cos(theta - e * t))
               + np.multiply.outer(self.A_minus, np.cos(theta + e * t))
               + np.multiply.outer(self.B_plus, np.sin(theta - e * t))
               + np.multiply.outer(self.B_minus, np.sin(theta + e * t)))
        return 0.5 * out


def traveling_coefficients(p, m: float, amps) -> TravelingDecomposition:
    p = Momentum3.of(p)
    mats = traveling_matrices(p.norm, m)
    a = np.asarray(amps, dtype=float)
    coeffs = {k: mat @ a for k, mat in mats.items()}
    return TravelingDecomposition(p, float(m), coeffs, helicity_basis(p))


def traveling_decomposition(mode: PairedAxialMode) -> tuple[TravelingDecomposition, TravelingDecomposition]:
    """Traveling-wave coefficients of both members of the pair (``+p`` first)."""
    return tuple(traveling_coefficients(q, mode.m, amps) for q, amps in mode.sides())


def counter_wave_nullspace(q: float, m: float, component: str = "A-") -> np.ndarray:
    """Amplitude vectors ``(c1, c2, d1, d2)`` for which one traveling component vanishes.

    Columns span the null space.  For ``m > 0`` it is empty for every
    component, so no single traveling wave exists; for ``m = 0`` it is
    two-dimensional.
    """
    mat = traveling_matrices(q, m)[component]
    _, sv, vt = np.linalg.svd(mat)
    tol = 1e-12 * max(1.0, sv[0])
    return vt[sv <= tol].T


def pairwave_ratios(q: float, m: float, amps) -> tuple[float, float]:
    """``|A-|/|A+|`` and ``|B-|/|B+|`` (coefficient norms; the basis is orthonormal)."""
    mats = traveling_matrices(q, m)
    a = np.asarray(amps, dtype=float)
    n = {k: float(np.linalg.norm(mat @ a)) for k, mat in mats.items()}
    return n["A-"] / n["A+"], n["B-"] / n["B+"]


def high_energy_limit(ratio: float, c1: float, c2: float) -> dict[str, np.ndarray]:
    """Leading-order coefficients for ``d = 0`` and small ``ratio = m / E_q``.

    The entries of order ``m/E`` are exact; the ``2 c`` and ``m^2 / 2E^2``
    entries are leading-order approximations.
    """
    s = ratio
    h = s * s / 2
    return {
        "A+": np.array([2 * c1, 2 * c2, s * c2, s * c1]),
        "B+": np.array([-2 * c2, 2 * c1, s * c1, -s * c2]),
        "A-": np.array([h * c1, h * c2, -s * c2, -s * c1]),
        "B-": np.array([-h * c2, h * c1, -s * c1, s * c2]),
    }


HIGH_ENERGY_EXACT_SLOTS = (2, 3)


def long_wave_limit(c1: float, c2: float) -> dict[str, np.ndarray]:
    """Limit ``|q| << m`` with ``d = 0``: the ``+q`` and ``-q`` parts have equal size."""
    out = {}
    for sign, tag in ((1, "+"), (-1, "-")):
        out["A" + tag] = np.array([c1, c2, sign * c2, sign * c1])
        out["B" + tag] = np.array([-c2, c1, sign * c1, -sign * c2])
    return out


# -- packets --------------------------------------------------------------------

Key = tuple[int, int, int]


def is_canonical_key(n: Key) -> bool:
    for c in n:
        if c != 0:
            return c > 0
    return False


@dataclass(frozen=True, eq=False)
class WavePacket:
    """Paired modes on the lattice of a periodic box, keyed by canonical integer index."""

    box_length: float
    mass: float
    dim: int = 1
    modes: Mapping[Key, PairedAxialMode] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim not in (1, 3):
            raise ValueError("dim must be 1 or 3")
        if self.box_length <= 0:
            raise ValueError("box length must be positive")
        if self.mass < 0:
            raise ValueError("mass must be non-negative")
        for key, mode in self.modes.items():
            if not is_canonical_key(key):
                raise ValueError(f"lattice index {key} is not canonical")
            if self.dim == 1 and (key[0] or key[1]):
                raise ValueError("1D packets only hold momenta along z")
            if not np.allclose(mode.p.vec, self.momentum(key), rtol=1e-12, atol=0):
                raise ValueError(f"mode momentum does not match lattice index {key}")
        object.__setattr__(self, "modes", dict(self.modes))

    @property
    def dp(self) -> float:
        return 2.0 * math.pi / self.box_length

    @property
    def measure(self) -> float:
        return self.dp**self.dim

    def momentum(self, key: Key) -> np.ndarray:
        return self.dp * np.asarray(key, dtype=float)

    def index_of(self, p, tol: float = 1e-9) -> Key:
        """Canonical lattice index of ``p``; raises if ``p`` is not a lattice momentum."""
        n = np.asarray(Momentum3.of(p).vec) / self.dp
        key = tuple(int(round(c)) for c in n)
        if np.abs(n - key).max() > tol:
            raise ValueError(f"momentum {tuple(Momentum3.of(p).vec)} is not on the lattice 2 pi n / L")
        if self.dim == 1 and (key[0] or key[1]):
            raise ValueError("1D packets only hold momenta along z")
        if not is_canonical_key(key):
            key = tuple(-c for c in key)
        if key == (0, 0, 0):
            raise ValueError("the zero momentum has no helicity basis")
        return key

    def with_mode(self, key: Key, plus=(0, 0, 0, 0), minus=(0, 0, 0, 0)) -> "WavePacket":
        key = tuple(int(c) for c in key)
        if self.dim == 1 and len(key) == 1:
            key = (0, 0, key[0])
        if not is_canonical_key(key):
            key = tuple(-c for c in key)
            plus, minus = minus, plus
        mode = PairedAxialMode(Momentum3.of(self.momentum(key)), self.mass, plus, minus)
        modes = dict(self.modes)
        modes[key] = mode
        return replace(self, modes=modes)

    def evolve(self, t: float) -> "WavePacket":
        return replace(self, modes={k: evolve(m, t) for k, m in self.modes.items()})

    def norm_sq(self) -> float:
        return plancherel(self, self)


def lattice_positions(box_length: float, n: int, dim: int) -> np.ndarray:
    """Grid sites ``i L / N`` as an array of 3-vectors (``(N**dim, 3)``), C order."""
    axis = box_length * np.arange(n) / n
    if dim == 1:
        pos = np.zeros((n, 3))
        pos[:, 2] = axis
        return pos
    gx, gy, gz = np.meshgrid(axis, axis, axis, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)


def _as_positions(x, dim: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    if x.ndim == 2 and x.shape[1] == 3:
        return x, False
    if dim == 1:
        z = np.atleast_1d(x).reshape(-1)
        pos = np.zeros((z.size, 3))
        pos[:, 2] = z
        return pos, x.ndim == 0
    if x.shape == (3,):
        return x[None, :], True
    raise ValueError("3D positions must have shape (3,) or (n, 3)")


def synthesize(packet: WavePacket, x, t: float = 0.0) -> np.ndarray:
    """Field of the packet at positions ``x`` and time ``t`` via standing waves.

    Each momentum contributes
    ``cos(p.x)cos(Et) V_cc + cos(p.x)sin(Et) V_cs + sin(p.x)cos(Et) V_sc + sin(p.x)sin(Et) V_ss``
    built from the initial amplitudes.  ``x`` holds z coordinates for 1D
    packets, 3-vectors otherwise.  Returns shape ``(4, n)`` (``(4,)`` for a
    single point).
    """
    pos, single = _as_positions(x, packet.dim)
    out = np.zeros((4, pos.shape[0]))
    for mode in packet.modes.values():
        e = mode.energy
        ce, se = math.cos(e * t), math.sin(e * t)
        for q, amps in mode.sides():
            if not amps.any():
                continue
            v_cc, v_cs, v_sc, v_ss = standing_wave_vectors(q, mode.m, amps)
            theta = pos @ q.vec
            out += np.multiply.outer(ce * v_cc + se * v_cs, np.cos(theta))
            out += np.multiply.outer(ce * v_sc + se * v_ss, np.sin(theta))
    out *= (2.0 * math.pi) ** (-packet.dim / 2) * packet.measure
    return out[:, 0] if single else out


def plancherel(packet1: WavePacket, packet2: WavePacket) -> float:
    """Lattice Plancherel product: ``dp^dim * sum_p (c1.c2 + d1.d2)`` over all lattice ``p``.

    Both members of every pair are summed, so this equals the position-space
    product ``int psi1^T psi2`` over the box.
    """
    if packet1.dim != packet2.dim or not math.isclose(packet1.box_length, packet2.box_length, rel_tol=1e-12):
        raise ValueError("packets live on different lattices")
    total = 0.0
    for key, m1 in packet1.modes.items():
        m2 = packet2.modes.get(key)
        if m2 is None:
            continue
        total += float(m1.plus @ m2.plus + m1.minus @ m2.minus)
    return packet1.measure * total


def packet_from_field(field_values: np.ndarray, box_length: float, mass: float, dim: int = 1,
                      max_index: int | None = None) -> WavePacket:
    """Project a real bispinor field sampled on the lattice onto paired axial modes.

    ``field_values`` has shape ``(4, N)`` (``dim = 1``) or ``(4, N, N, N)``.
    The zero mode and the Nyquist planes carry no helicity basis / no pair and
    are dropped.
    """
    field_values = np.asarray(field_values, dtype=float)
    n = field_values.shape[1]
    axes = tuple(range(1, dim + 1))
    f = np.fft.fftn(field_values, axes=axes)
    dx = box_length / n
    # u(p) = (2 pi)^(-dim/2) dx^dim sum_x exp(-I p.x) psi(x)
    pref = (2.0 * math.pi) ** (-dim / 2) * dx**dim
    u_all = pref * (f.real + np.tensordot(_I, f.imag, axes=(1, 0)))
    packet = WavePacket(box_length, mass, dim)
    modes = {}
    limit = n // 2 - 1 if max_index is None else max_index
    rng = range(-limit, limit + 1)
    keys = ([(0, 0, k) for k in rng] if dim == 1
            else [(a, b, c) for a in rng for b in rng for c in rng])
    for key in keys:
        if not is_canonical_key(key):
            continue
        neg = tuple(-c for c in key)
        idx = tuple(k % n for k in key[3 - dim:])
        nidx = tuple(k % n for k in neg[3 - dim:])
        u_p = u_all[(slice(None),) + idx]
        u_m = u_all[(slice(None),) + nidx]
        p = Momentum3.of(packet.momentum(key))
        plus = helicity_basis(p).matrix.T @ u_p
        minus = helicity_basis(-p).matrix.T @ u_m
        if plus.any() or minus.any():
            modes[key] = PairedAxialMode(p, float(mass), plus, minus)
    return replace(packet, modes=modes)


# -- axial momentum in the Heisenberg picture --------------------------------------

_PARITY = np.diag([1.0] * 4 + [-1.0] * 4)


def heisenberg_axial_expectation(mode: PairedAxialMode, t: float) -> np.ndarray:
    """``<p5>`` at time ``t`` for a state made of one paired mode (norm divided out)."""
    evolved = evolve(mode, t)
    a = evolved.amplitudes
    return mode.p.vec * float(a @ _PARITY @ a) / float(a @ a)


@dataclass(frozen=True)
class AxialOscillation:
    """``<p5>(t) = constant + cos_part cos(2Et) + sin_part sin(2Et)``."""

    constant: np.ndarray
    cos_part: np.ndarray
    sin_part: np.ndarray
    frequency: float

    @property
    def rotating_magnitude(self) -> float:
        return float(math.hypot(np.linalg.norm(self.cos_part), np.linalg.norm(self.sin_part)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (self.constant[:, None] * np.ones_like(t)[None]
                + np.multiply.outer(self.cos_part, np.cos(self.frequency * t))
                + np.multiply.outer(self.sin_part, np.sin(self.frequency * t)))


def axial_oscillation(mode: PairedAxialMode) -> AxialOscillation:
    """Closed-form split of ``<p5>(t)`` into a constant and a part rotating at ``2E``.

    Uses ``psi(t) = cos(Et) psi + sin(Et) G psi / E`` with ``G^2 = -E^2`` for the
    paired generator ``G``.
    """
    x = mode.amplitudes
    nrm = float(x @ x)
    e = mode.energy
    g = paired_generator(mode.p, mode.m)
    gx = g @ x
    a = float(x @ _PARITY @ x) / nrm
    b = float(gx @ _PARITY @ gx) / (e * e * nrm)
    c = float(x @ _PARITY @ gx) / (e * nrm)
    p = mode.p.vec
    return AxialOscillation(p * (a + b) / 2, p * (a - b) / 2, p * c, 2.0 * e)


def heisenberg_probe_mode(p, m: float) -> PairedAxialMode:
    """Unit paired mode whose ``<p5>`` oscillation reaches the full ``|p| m / E``.

    Bispinor ``v1+(p) / sqrt 2`` at ``+p`` and ``J v1+(p) / sqrt 2`` at ``-p``.
    """
    p = Momentum3.of(p)
    v1 = helicity_basis(p).v_plus_1
    plus = np.array([1.0, 0.0, 0.0, 0.0]) / math.sqrt(2.0)
    minus = helicity_basis(-p).matrix.T @ (_J @ v1) / math.sqrt(2.0)
    return PairedAxialMode.make(p, m, plus, minus)

"""Axial plane waves, the real helicity basis and the amplitude-flow generators.

Amplitudes of a paired mode are always laid out as an 8-vector
``(c1, c2, d1, d2)`` at ``+p`` followed by ``(c1, c2, d1, d2)`` at ``-p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import alpha_dot, expm_antisym, quaternion_units, spinor_generator

SINGULAR_RTOL = 1e-8

_I, _J, _K = quaternion_units()


@dataclass(frozen=True)
class Momentum3:
    p1: float
    p2: float
    p3: float

    @classmethod
    def of(cls, p) -> "Momentum3":
        if isinstance(p, Momentum3):
            return p
        p1, p2, p3 = (float(c) for c in p)
        return cls(p1, p2, p3)

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3])

    @property
    def norm(self) -> float:
        return math.sqrt(self.p1**2 + self.p2**2 + self.p3**2)

    def energy(self, m: float) -> float:
        if m < 0:
            raise ValueError("mass must be non-negative")
        return math.hypot(m, self.norm)

    def __neg__(self) -> "Momentum3":
        return Momentum3(-self.p1, -self.p2, -self.p3)

    def is_canonical(self) -> bool:
        """True for the lexicographically positive half of momentum space."""
        for c in (self.p1, self.p2, self.p3):
            if c != 0.0:
                return c > 0.0
        return False


def axial_plane_wave(p, v, x) -> np.ndarray:
    """Evaluate ``(2 pi)^{-3/2} exp(I p.x) v``.

    ``x`` is a single position (shape ``(3,)``) or a stack ``(n, 3)``; the
    result has shape ``(4,)`` or ``(4, n)``.
    """
    p = Momentum3.of(p).vec
    v = np.asarray(v, dtype=float)
    if abs(v @ v - 1.0) > 1e-12:
        raise ValueError("axial plane waves take a unit bispinor")
    x = np.asarray(x, dtype=float)
    theta = x @ p
    pref = (2.0 * math.pi) ** -1.5
    return pref * (np.multiply.outer(v, np.cos(theta)) + np.multiply.outer(_I @ v, np.sin(theta)))


# -- helicity basis -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HelicityBasis:
    v_plus_1: np.ndarray
    v_plus_2: np.ndarray
    v_minus_1: np.ndarray
    v_minus_2: np.ndarray
    at: Momentum3
    fallback: bool = False

    @property
    def matrix(self) -> np.ndarray:
        """Columns ``v1+, v2+, v1-, v2-``."""
        return np.column_stack([self.v_plus_1, self.v_plus_2, self.v_minus_1, self.v_minus_2])


def _gap(p: np.ndarray, norm: float) -> float:
    # |p| - p2 without cancellation near the +e2 ray
    if p[1] > 0:
        return (p[0] ** 2 + p[2] ** 2) / (norm + p[1])
    return norm - p[1]


def _formula_v1(p: np.ndarray, norm: float) -> np.ndarray:
    gap = _gap(p, norm)
    return np.array([-p[2], -gap, p[0], 0.0]) / math.sqrt(2.0 * norm * gap)


def needs_fallback(p) -> bool:
    """True where the explicit basis formula is within the singular-ray threshold."""
    p = Momentum3.of(p)
    return _gap(p.vec, p.norm) < SINGULAR_RTOL * p.norm


def _quarter_turn_spinor() -> np.ndarray:
    # spinor of the rotation by -pi/2 about the z axis
    omega = np.zeros((4, 4))
    omega[1, 2], omega[2, 1] = -math.pi / 2, math.pi / 2
    return expm_antisym(spinor_generator(omega))


def helicity_basis(p) -> HelicityBasis:
    """Real orthonormal basis diagonalising ``alpha.p`` with eigenvalues ``+-|p|``.

    Generated from ``v1+`` by the quaternion units: ``v2+ = I v1+``,
    ``v1- = J v1+``, ``v2- = K v1+``.  On the ray ``p ~ +e2`` the formula is
    evaluated at the momentum rotated by a quarter turn about z and mapped back
    with the matching spinor rotation, which commutes with ``I, J, K``.
    """
    p = Momentum3.of(p)
    norm = p.norm
    if norm == 0.0:
        raise ValueError("helicity basis is undefined at zero momentum")
    vec = p.vec
    fallback = needs_fallback(p)
    if fallback:
        turned = np.array([-vec[1], vec[0], vec[2]])
        v1 = _quarter_turn_spinor() @ _formula_v1(turned, norm)
    else:
        v1 = _formula_v1(vec, norm)
    return HelicityBasis(v1, _I @ v1, _J @ v1, _K @ v1, p, fallback)


# -- evolution generators ---------------------------------------------------------

def paired_generator(p, m: float) -> np.ndarray:
    """Exact 8x8 generator of the amplitude flow on the ``{+p, -p}`` subspace.

    Obtained by restricting ``h = -alpha.grad - m J`` to
    ``exp(I p.x) u + exp(-I p.x) w`` and projecting on the helicity bases at
    ``+p`` and ``-p``.  Its square is ``-E_p^2``.
    """
    p = Momentum3.of(p)
    a_i = alpha_dot(p.vec) @ _I
    h8 = np.block([[-a_i, -m * _J], [-m * _J, a_i]])
    b = np.zeros((8, 8))
    b[:4, :4] = helicity_basis(p).matrix
    b[4:, 4:] = helicity_basis(-p).matrix
    return b.T @ h8 @ b


@dataclass(frozen=True, eq=False)
class EvolutionGenerators:
    p: Momentum3
    m: float
    energy: float
    K_plus: np.ndarray | None
    K_minus: np.ndarray | None
    n: tuple[float, float, float] | None
    L_plus: np.ndarray
    L_minus: np.ndarray
    singular: bool

    def propagator(self, t: float) -> np.ndarray:
        """8x8 orthogonal amplitude propagator over time ``t``."""
        if self.singular:
            return expm_antisym(paired_generator(self.p, self.m), t)
        rot_c = expm_antisym(self.K_plus, t * self.energy)
        rot_d = expm_antisym(self.K_minus, t * self.energy)
        return _JOIN_C @ rot_c @ _SPLIT_C + _JOIN_D @ rot_d @ _SPLIT_D


def _even_odd_maps(first: int, second: int) -> tuple[np.ndarray, np.ndarray]:
    # 8-vector -> (x1', x1'', x2', x2'') and back, for slots ``first``/``second``
    split = np.zeros((4, 8))
    join = np.zeros((8, 4))
    for row, idx in enumerate((first, second)):
        split[2 * row, [idx, idx + 4]] = 0.5
        split[2 * row + 1, [idx, idx + 4]] = 0.5, -0.5
        join[[idx, idx + 4], 2 * row] = 1.0
        join[[idx, idx + 4], 2 * row + 1] = 1.0, -1.0
    return split, join


_SPLIT_C, _JOIN_C = _even_odd_maps(0, 1)
_SPLIT_D, _JOIN_D = _even_odd_maps(2, 3)


def even_odd(amplitudes) -> tuple[np.ndarray, np.ndarray]:
    """Even/odd vectors ``(c1', c1'', c2', c2'')`` and ``(d1', d1'', d2', d2'')``."""
    a = np.asarray(amplitudes, dtype=float)
    return _SPLIT_C @ a, _SPLIT_D @ a


def _k_matrix(sign: int, n1: float, n2: float, n3: float) -> np.ndarray:
    s = sign
    return np.array([
        [0.0, -n1, s * n2, s * n3],
        [n1, 0.0, -s * n3, s * n2],
        [-s * n2, s * n3, 0.0, n1],
        [-s * n3, -s * n2, -n1, 0.0],
    ])


def pair_needs_fallback(p) -> bool:
    """True when either member of the ``+-p`` pair sits on a singular ray."""
    p = Momentum3.of(p)
    r = math.hypot(p.p1, p.p3)
    return needs_fallback(p) or needs_fallback(-p) or r < SINGULAR_RTOL * p.norm


def evolution_generators(p, m: float) -> EvolutionGenerators:
    """K+- matrices (even/odd amplitude flow) and the L+- field operators.

    ``K+- = -+ n2 I +- n3 J + n1 K`` with ``n1 = m p1 / (E r)``,
    ``n2 = |p| / E``, ``n3 = m p3 / (E r)`` and ``r = sqrt(p1^2 + p3^2)``.
    Near the rays ``p ~ +-e2`` the K route depends on the explicit basis
    formula, so the propagator switches to the exact paired generator.
    """
    p = Momentum3.of(p)
    norm = p.norm
    if norm == 0.0:
        raise ValueError("evolution generators need a non-zero momentum")
    if m < 0:
        raise ValueError("mass must be non-negative")
    energy = p.energy(m)
    r = math.hypot(p.p1, p.p3)
    L_plus = (norm / energy) * _I + (m / energy) * _J
    L_minus = (norm / energy) * _I - (m / energy) * _J
    singular = pair_needs_fallback(p)
    if m > 0 and r < SINGULAR_RTOL * norm:
        K_plus = K_minus = None
        n = None
    else:
        n1 = m * p.p1 / (energy * r) if m > 0 else 0.0
        n3 = m * p.p3 / (energy * r) if m > 0 else 0.0
        n2 = norm / energy
        n = (n1, n2, n3)
        K_plus = _k_matrix(+1, n1, n2, n3)
        K_minus = _k_matrix(-1, n1, n2, n3)
    return EvolutionGenerators(p, float(m), energy, K_plus, K_minus, n, L_plus, L_minus, singular)

"""Real-arithmetic Dirac algebra in a Majorana representation.

Every gamma matrix here is purely imaginary, so products of two of them,
``i * gamma`` and ``gamma_5 * gamma^0`` are real 4x4 matrices.  Those real
matrices are what the rest of the package works with; the complex gammas are
kept for self-checks and the Weyl bridge.

Conventions: metric ``eta = diag(+1, -1, -1, -1)``; ``gamma_5 = i g0 g1 g2 g3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_S0 = np.eye(2, dtype=complex)
_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)


def _blocks(a, b, c, d):
    return np.block([[a, b], [c, d]])


@lru_cache(maxsize=None)
def _gammas():
    g0 = _blocks(_Z2, _S2, _S2, _Z2)
    g1 = 1j * _blocks(-_S0, _Z2, _Z2, _S0)
    g2 = 1j * _blocks(_Z2, _S1, _S1, _Z2)
    g3 = -1j * _blocks(_Z2, _S3, _S3, _Z2)
    g5 = 1j * _blocks(_Z2, _S0, -_S0, _Z2)
    out = (g0, g1, g2, g3, g5)
    for g in out:
        g.setflags(write=False)
    return out


def gamma(mu: int) -> np.ndarray:
    """Return the complex 4x4 Dirac matrix ``gamma^mu`` (``mu = 5`` gives gamma_5)."""
    if mu not in (0, 1, 2, 3, 5):
        raise IndexError(f"gamma index must be 0..3 or 5, got {mu!r}")
    return _gammas()[4 if mu == 5 else mu].copy()


@lru_cache(maxsize=None)
def _units():
    g0, _, _, _, g5 = _gammas()
    i_hat = np.real(1j * g5)
    j_hat = np.real(1j * g0)
    k_hat = np.real(-g5 @ g0)
    for m in (i_hat, j_hat, k_hat):
        m.setflags(write=False)
    return i_hat, j_hat, k_hat


def quaternion_units() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Real matrices ``I = i g5``, ``J = i g0``, ``K = -g5 g0``.

    They satisfy ``I^2 = J^2 = K^2 = -1`` and ``IJ = K``, ``KI = J``, ``JK = I``.
    """
    return tuple(m.copy() for m in _units())


@lru_cache(maxsize=None)
def _alphas():
    g0 = _gammas()[0]
    out = []
    for k in (1, 2, 3):
        a = g0 @ _gammas()[k]
        assert np.abs(a.imag).max() == 0.0
        a = np.ascontiguousarray(a.real)
        a.setflags(write=False)
        out.append(a)
    return tuple(out)


def real_generators() -> tuple[tuple[np.ndarray, np.ndarray, np.ndarray], np.ndarray]:
    """Return ``(alpha_1, alpha_2, alpha_3)`` with ``alpha_k = g0 g^k`` and ``J = i g0``.

    The free Hamiltonian on real bispinors is ``-alpha_k d_k - m J``.
    """
    return tuple(a.copy() for a in _alphas()), _units()[1].copy()


def alpha_dot(p) -> np.ndarray:
    """``sum_k alpha_k p^k`` for a spatial 3-vector."""
    a1, a2, a3 = _alphas()
    return p[0] * a1 + p[1] * a2 + p[2] * a3


@lru_cache(maxsize=None)
def _sigma_real():
    g = _gammas()
    out = np.zeros((4, 4, 4, 4))
    for mu in range(4):
        for nu in range(4):
            c = g[mu] @ g[nu] - g[nu] @ g[mu]
            assert np.abs(c.imag).max() == 0.0
            out[mu, nu] = c.real
    out.setflags(write=False)
    return out


def spinor_generator(omega) -> np.ndarray:
    """Real matrix ``omega_{mu nu} [g^mu, g^nu] / 8`` for antisymmetric ``omega``."""
    omega = np.asarray(omega, dtype=float)
    return np.einsum("mn,mnab->ab", omega, _sigma_real()) / 8.0


# -- predicates ---------------------------------------------------------------

def is_orthogonal(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.abs(m.T @ m - np.eye(m.shape[0])).max() <= tol)


def is_antisymmetric(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return bool(np.abs(m + m.T).max() <= tol)


def quaternion_coordinates(m) -> np.ndarray:
    """Project a 4x4 real matrix onto span{1, I, J, K}; returns ``(s0, s1, s2, s3)``."""
    i_hat, j_hat, k_hat = _units()
    m = np.asarray(m, dtype=float)
    return np.array([
        np.trace(m) / 4.0,
        -np.trace(m @ i_hat) / 4.0,
        -np.trace(m @ j_hat) / 4.0,
        -np.trace(m @ k_hat) / 4.0,
    ])


def is_quaternionic(m, tol: float = 1e-12) -> bool:
    """True when ``m`` lies in the real span of ``{1, I, J, K}``."""
    s = quaternion_coordinates(m)
    return bool(np.abs(Quaternion(*s).to_mat4() - m).max() <= tol)


@dataclass(frozen=True)
class Quaternion:
    s0: float
    s1: float = 0.0
    s2: float = 0.0
    s3: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2, self.s3], dtype=float)

    def norm_sq(self) -> float:
        return float(self.as_array() @ self.as_array())

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.s0, -self.s1, -self.s2, -self.s3)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a0, a1, a2, a3 = self.as_array()
        b0, b1, b2, b3 = other.as_array()
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def to_mat4(self) -> np.ndarray:
        i_hat, j_hat, k_hat = _units()
        return self.s0 * np.eye(4) + self.s1 * i_hat + self.s2 * j_hat + self.s3 * k_hat


# -- matrix exponential -------------------------------------------------------

_TAYLOR_TERMS = 18
_SCALE_TARGET = 0.5


def _expm_taylor(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    norm = np.abs(a).sum(axis=1).max()
    squarings = 0 if norm <= _SCALE_TARGET else int(math.ceil(math.log2(norm / _SCALE_TARGET)))
    a = a / 2.0**squarings
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, _TAYLOR_TERMS + 1):
        term = term @ a / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def expm_antisym(m, t: float = 1.0) -> np.ndarray:
    """``exp(t m)`` for a real antisymmetric matrix.

    When ``m @ m == -lam**2 * I`` (every quaternionic generator, K and L
    matrices included) the closed form ``cos(lam t) I + sin(lam t) m / lam`` is
    used; otherwise scaling and squaring over an 18-term Taylor series.
    """
    m = np.asarray(m, dtype=float)
    scale = max(1.0, float(np.abs(m).max()))
    if not is_antisymmetric(m, 1e-12 * scale):
        raise ValueError("expm_antisym requires an antisymmetric matrix")
    n = m.shape[0]
    sq = m @ m
    lam_sq = -np.trace(sq) / n
    if lam_sq > 0 and np.abs(sq + lam_sq * np.eye(n)).max() <= 1e-13 * max(1.0, lam_sq):
        lam = math.sqrt(lam_sq)
        return math.cos(lam * t) * np.eye(n) + (math.sin(lam * t) / lam) * m
    if not m.any():
        return np.eye(n)
    return _expm_taylor(t * m)


def expm_series(m, t: float = 1.0) -> np.ndarray:
    """Scaled-squaring Taylor exponential for any square real matrix."""
    return _expm_taylor(t * np.asarray(m, dtype=float))

"""Right-handed Weyl bispinors and their one-to-one map onto real bispinors.

``M(phi) = phi + conj(phi)`` sends a right-handed ``phi`` (``g5 phi = phi``) to
a real bispinor; the inverse is the chiral projector ``(1 + g5)/2``.  With
``g5 = -i I`` the chirality condition reads ``im = -I re``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .clifford import gamma, quaternion_units

_I, _J, _K = quaternion_units()
_G5 = gamma(5)
_P_RIGHT = 0.5 * (np.eye(4) + _G5)
_P_LEFT = 0.5 * (np.eye(4) - _G5)

CHIRALITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeylBispinor:
    """Complex bispinor ``re + i im`` (either may carry trailing grid axes)."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if re.shape != im.shape or re.shape[0] != 4:
            raise ValueError("re and im must share a shape with 4 leading components")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_complex(cls, phi) -> "WeylBispinor":
        phi = np.asarray(phi, dtype=complex)
        return cls(phi.real, phi.imag)

    @property
    def complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def chirality_residual(self) -> float:
        phi = self.complex
        res = np.tensordot(_G5, phi, axes=(1, 0)) - phi
        scale = max(1.0, float(np.abs(phi).max(initial=0.0)))
        return float(np.abs(res).max(initial=0.0)) / scale

    def is_right_handed(self, tol: float = CHIRALITY_TOL) -> bool:
        return self.chirality_residual() <= tol

    def scaled(self, lam: complex) -> "WeylBispinor":
        return WeylBispinor.from_complex(lam * self.complex)


def right_handed(re) -> WeylBispinor:
    """The right-handed bispinor whose real part is ``re``."""
    re = np.asarray(re, dtype=float)
    return WeylBispinor(re, -np.tensordot(_I, re, axes=(1, 0)))


def to_majorana(phi: WeylBispinor) -> np.ndarray:
    if not phi.is_right_handed():
        raise ValueError(f"bispinor is not right-handed (residual {phi.chirality_residual():.3g})")
    return 2.0 * phi.re


def from_majorana(psi) -> WeylBispinor:
    psi = np.asarray(psi, dtype=float)
    return WeylBispinor.from_complex(np.tensordot(_P_RIGHT, psi, axes=(1, 0)))


def left_part(phi: WeylBispinor) -> np.ndarray:
    """``(1 - g5)/2`` applied to ``phi``; zero for right-handed input."""
    return np.tensordot(_P_LEFT, phi.complex, axes=(1, 0))


@dataclass(frozen=True)
class ProductComparison:
    majorana: float
    weyl: complex
    transpose_product: complex

    @property
    def identity_residual(self) -> float:
        """``|majorana - 2 Re(weyl)|``."""
        return abs(self.majorana - 2.0 * self.weyl.real)


def compare_products(phi1: WeylBispinor, phi2: WeylBispinor, cell: float = 1.0) -> ProductComparison:
    """Real product of the images against the complex product of the Weyl fields.

    For grid fields ``cell`` is the volume element; for constant bispinors
    leave it at 1.  Also reports ``sum phi1^T phi2``, which vanishes for two
    right-handed spinors because ``g5`` is antisymmetric here.
    """
    for phi in (phi1, phi2):
        if not phi.is_right_handed():
            raise ValueError("compare_products takes right-handed bispinors")
    a, b = phi1.complex, phi2.complex
    maj = float(np.sum(to_majorana(phi1) * to_majorana(phi2)) * cell)
    weyl = complex(np.sum(np.conj(a) * b) * cell)
    tr = complex(np.sum(a * b) * cell)
    return ProductComparison(maj, weyl, tr)


def _spectral_derivative_complex(f: np.ndarray, box_length: float, axis: int) -> np.ndarray:
    n = f.shape[axis]
    k = 2 * math.pi * np.fft.fftfreq(n, box_length / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    shape = [1] * f.ndim
    shape[axis] = n
    return np.fft.ifft(1j * k.reshape(shape) * np.fft.fft(f, axis=axis), axis=axis)


def momentum_correspondence(phi: WeylBispinor, box_length: float) -> float:
    """Relative residual of ``M(p phi) = p5 M(phi)`` for a periodic grid field.

    ``phi`` has shape ``(4, N)`` (a line along z) or ``(4, N, N, N)``.  The
    complex momentum ``-i grad`` acts on ``phi`` with a complex FFT derivative;
    the axial momentum ``-I grad`` acts on the real image.
    """
    f = phi.complex
    if f.ndim not in (2, 4):
        raise ValueError("expected a (4, N) or (4, N, N, N) grid field")
    psi = to_majorana(phi)
    total = 0.0
    for axis in range(1, f.ndim):
        p_phi = -1j * _spectral_derivative_complex(f, box_length, axis)
        lhs = 2.0 * p_phi.real
        d_psi = _spectral_derivative_complex(psi.astype(complex), box_length, axis).real
        rhs = -np.tensordot(_I, d_psi, axes=(1, 0))
        total += float(np.sum((lhs - rhs) ** 2))
    denom = math.sqrt(float(np.sum(np.abs(f) ** 2)))
    if denom == 0.0:
        return 0.0
    return math.sqrt(total) / denom

"""Poincare group acting on covariant amplitudes of the real bispinor field.

A paired mode is rewritten as positive/negative frequency parts
``v+(p)``, ``v-(p)`` which transform as

    v'(p) = S(L) v(L^-1 p),        v+(p) -> exp(+I p.a) v+(p)  under translation,

with ``S(L) = exp(omega_{mu nu} [g^mu, g^nu] / 8)`` real.  Wigner amplitudes
``a = sqrt(m) S(H(p))^-1 v+`` turn the Lorentz action into an orthogonal
rotation ``D = S(R)`` by the Wigner rotation ``R = H(p)^-1 L H(L^-1 p)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .axial import Momentum3, helicity_basis
from .clifford import (
    ETA,
    Quaternion,
    alpha_dot,
    expm_series,
    gamma,
    quaternion_coordinates,
    quaternion_units,
    spinor_generator,
)
from .spectral import PairedAxialMode, WavePacket

_I, _J, _K = quaternion_units()

# lower-index plane (i, j) with omega_ij = angle rotates by +angle about axis k
_ROTATION_PLANES = {0: (2, 3), 1: (3, 1), 2: (1, 2)}

# the fixed orthogonal change of basis taking g^i g^j to the quaternion units
_S0 = np.eye(2)
_S1 = np.array([[0.0, 1.0], [1.0, 0.0]])
QUATERNION_FRAME = np.block([[_S0, -_S1], [-_S0, -_S1]]) / math.sqrt(2.0)


def _levi_civita() -> np.ndarray:
    e = np.zeros((3, 3, 3))
    e[0, 1, 2] = e[1, 2, 0] = e[2, 0, 1] = 1.0
    e[0, 2, 1] = e[2, 1, 0] = e[1, 0, 2] = -1.0
    return e


_EPS = _levi_civita()


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """Proper orthochronous ``L^mu_nu`` with its spinor matrix ``S(L)``.

    ``spinor`` is produced by exponentiating generators (or multiplying
    spinors of factors), never reconstructed from ``matrix``, so the sign is
    always determined.
    """

    matrix: np.ndarray
    spinor: np.ndarray | None = None
    omega: np.ndarray | None = None
    # round-off of a product scales with its factors, not with the result
    factor_scale: float = field(default=1.0, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("Lorentz matrix must be 4x4")
        scale = max(1.0, float(np.abs(m).max()), self.factor_scale) ** 2
        if np.abs(m.T @ ETA @ m - ETA).max() > 1e-12 * scale:
            raise ValueError("matrix does not preserve the Minkowski metric")
        if m[0, 0] < 1.0 - 1e-12 or np.linalg.det(m) < 0:
            raise ValueError("transform is not proper orthochronous")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_omega(cls, omega) -> "LorentzTransform":
        """``L = exp(eta omega)`` for antisymmetric lower-index ``omega``."""
        omega = np.asarray(omega, dtype=float)
        if np.abs(omega + omega.T).max() > 1e-14 * max(1.0, float(np.abs(omega).max())):
            raise ValueError("omega must be antisymmetric")
        return cls(expm_series(ETA @ omega), expm_series(spinor_generator(omega)), omega)

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls.from_omega(np.zeros((4, 4)))

    @classmethod
    def rotation(cls, axis, angle: float) -> "LorentzTransform":
        """Right-handed rotation by ``angle`` about a coordinate index or a 3-vector."""
        omega = np.zeros((4, 4))
        if isinstance(axis, (int, np.integer)):
            i, j = _ROTATION_PLANES[int(axis)]
            omega[i, j], omega[j, i] = angle, -angle
        else:
            n = np.asarray(axis, dtype=float)
            n = n / np.linalg.norm(n)
            omega[1:, 1:] = angle * np.einsum("ijk,k->ij", _EPS, n)
        return cls.from_omega(omega)

    @classmethod
    def boost(cls, direction, rapidity: float) -> "LorentzTransform":
        """Pure boost sending ``(m, 0, 0, 0)`` towards ``+direction``."""
        if isinstance(direction, (int, np.integer)):
            n = np.eye(3)[int(direction)]
        else:
            n = np.asarray(direction, dtype=float)
            n = n / np.linalg.norm(n)
        omega = np.zeros((4, 4))
        omega[0, 1:] = rapidity * n
        omega[1:, 0] = -rapidity * n
        return cls.from_omega(omega)

    @classmethod
    def from_matrix(cls, matrix) -> "LorentzTransform":
        """Recover generators with the principal matrix logarithm."""
        from scipy.linalg import logm

        log = logm(np.asarray(matrix, dtype=float))
        if np.abs(np.imag(log)).max() > 1e-10:
            raise ValueError("matrix has no real logarithm")
        omega = ETA @ np.real(log)
        omega = 0.5 * (omega - omega.T)
        return cls.from_omega(omega)

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        spinor = None
        if self.spinor is not None and other.spinor is not None:
            spinor = self.spinor @ other.spinor
        scale = (max(1.0, float(np.abs(self.matrix).max()), self.factor_scale)
                 * max(1.0, float(np.abs(other.matrix).max()), other.factor_scale))
        return LorentzTransform(self.matrix @ other.matrix, spinor, factor_scale=scale)

    def inverse(self) -> "LorentzTransform":
        spinor = None if self.spinor is None else np.linalg.inv(self.spinor)
        omega = None if self.omega is None else -self.omega
        return LorentzTransform(ETA @ self.matrix.T @ ETA, spinor, omega)

    def act(self, p4) -> np.ndarray:
        return self.matrix @ np.asarray(p4, dtype=float)

    def is_rotation(self, tol: float = 1e-10) -> bool:
        return bool(abs(self.matrix[0, 0] - 1.0) <= tol and np.abs(self.matrix[0, 1:]).max() <= tol)


def spinor_rep(transform: LorentzTransform) -> np.ndarray:
    if transform.spinor is None:
        raise ValueError("transform carries no generator decomposition for S(L)")
    return transform.spinor


def intertwining_residual(transform: LorentzTransform) -> float:
    """``max |S^-1 g^mu S - L^mu_nu g^nu|`` over ``mu``."""
    s = spinor_rep(transform)
    s_inv = np.linalg.inv(s)
    g = [gamma(mu) for mu in range(4)]
    worst = 0.0
    for mu in range(4):
        lhs = s_inv @ g[mu] @ s
        rhs = sum(transform.matrix[mu, nu] * g[nu] for nu in range(4))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def double_cover_sign(l1: LorentzTransform, l2: LorentzTransform) -> int:
    """Sign ``s`` with ``S(L1 L2) = s S(L1) S(L2)``, ``S(L1 L2)`` taken from its own generators."""
    composite = LorentzTransform.from_matrix(l1.matrix @ l2.matrix)
    prod = spinor_rep(l1) @ spinor_rep(l2)
    s = spinor_rep(composite)
    if np.abs(s - prod).max() <= 1e-8 * max(1.0, float(np.abs(prod).max())):
        return 1
    if np.abs(s + prod).max() <= 1e-8 * max(1.0, float(np.abs(prod).max())):
        return -1
    raise ArithmeticError("spinor of the composite differs from the product beyond sign")


def four_momentum(p, m: float) -> np.ndarray:
    p = Momentum3.of(p)
    return np.concatenate([[p.energy(m)], p.vec])


def standard_boost(p, m: float) -> LorentzTransform:
    """Rotation-free boost ``H(p)`` with ``H(p) (m, 0, 0, 0) = (E_p, p)``."""
    if m <= 0:
        raise ValueError("the standard boost needs m > 0")
    p = Momentum3.of(p)
    norm = p.norm
    if norm == 0.0:
        return LorentzTransform.identity()
    return LorentzTransform.boost(p.vec / norm, math.asinh(norm / m))


# -- covariant amplitudes ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CovariantMode:
    """``v+(p)`` and ``v-(p)`` at an on-shell momentum, with invariant weight ``d^3p / E_p``."""

    p: Momentum3
    m: float
    v_plus: np.ndarray
    v_minus: np.ndarray
    weight: float = 1.0

    @property
    def energy(self) -> float:
        return self.p.energy(self.m)

    @property
    def four_momentum(self) -> np.ndarray:
        return four_momentum(self.p, self.m)


def constraint_residual(mode: CovariantMode) -> float:
    """Residual of ``E I v+- = (alpha.p) I v+- +- m J v-+``, relative to ``E |v|``."""
    a = alpha_dot(mode.p.vec)
    e = mode.energy
    r_plus = e * _I @ mode.v_plus - a @ _I @ mode.v_plus - mode.m * _J @ mode.v_minus
    r_minus = e * _I @ mode.v_minus - a @ _I @ mode.v_minus + mode.m * _J @ mode.v_plus
    scale = e * max(1.0, float(np.abs(mode.v_plus).max()), float(np.abs(mode.v_minus).max()))
    return max(float(np.abs(r_plus).max()), float(np.abs(r_minus).max())) / scale


CONSTRAINT_TOL = 1e-8


def covariant_split(mode: PairedAxialMode, weight: float = 1.0) -> tuple[CovariantMode, CovariantMode]:
    """Covariant amplitudes at ``+p`` and ``-p`` of a paired mode.

    With ``v(p) = E u(p)`` and ``vdot(p) = E du(p)/dt`` (``u`` the bispinor
    coefficient of ``exp(I p.x)``), the parts are
    ``v+(p) = (v + I vdot / E)/2`` and ``v-(-p) = (v - I vdot / E)/2``.
    ``weight`` is the lattice measure ``dp^dim``; it is divided by ``E``.
    """
    p, m = mode.p, mode.m
    e = mode.energy
    a = alpha_dot(p.vec)
    u = helicity_basis(p).matrix @ mode.plus
    w = helicity_basis(-p).matrix @ mode.minus
    du = -a @ _I @ u - m * _J @ w
    dw = a @ _I @ w - m * _J @ u
    v_p, vd_p = e * u, e * du
    v_m, vd_m = e * w, e * dw
    plus_p = 0.5 * (v_p + _I @ vd_p / e)
    minus_mp = 0.5 * (v_p - _I @ vd_p / e)
    plus_mp = 0.5 * (v_m + _I @ vd_m / e)
    minus_p = 0.5 * (v_m - _I @ vd_m / e)
    w_e = weight / e
    out = (CovariantMode(p, m, plus_p, minus_p, w_e), CovariantMode(-p, m, plus_mp, minus_mp, w_e))
    for c in out:
        if constraint_residual(c) > CONSTRAINT_TOL:
            raise ArithmeticError("covariant amplitudes violate the mass-shell constraint")
    return out


def covariant_packet(packet: WavePacket) -> list[CovariantMode]:
    """Covariant amplitudes at every lattice momentum of the packet (both pair members)."""
    out = []
    for key in sorted(packet.modes):
        out.extend(covariant_split(packet.modes[key], packet.measure))
    return out


def lorentz_act(mode: CovariantMode, transform: LorentzTransform) -> CovariantMode:
    """Move the mode to ``L p`` carrying ``S(L) v+-``; the invariant weight is unchanged."""
    s = spinor_rep(transform)
    p_new = transform.act(mode.four_momentum)[1:]
    return replace(mode, p=Momentum3.of(p_new), v_plus=s @ mode.v_plus, v_minus=s @ mode.v_minus)


def minkowski_dot(p4, a4) -> float:
    return float(np.asarray(p4) @ ETA @ np.asarray(a4))


def axial_phase(angle: float) -> np.ndarray:
    """``exp(I angle) = cos(angle) + sin(angle) I``."""
    return math.cos(angle) * np.eye(4) + math.sin(angle) * _I


def translate(mode: CovariantMode, a) -> CovariantMode:
    """``v+- -> exp(+- I p.a) v+-`` with the Minkowski product ``p.a``."""
    pa = minkowski_dot(mode.four_momentum, a)
    return replace(mode, v_plus=axial_phase(pa) @ mode.v_plus, v_minus=axial_phase(-pa) @ mode.v_minus)


def _match(modes1, modes2):
    if len(modes1) != len(modes2):
        raise ValueError("mode sets have different lengths")
    for a, b in zip(modes1, modes2):
        if np.abs(a.p.vec - b.p.vec).max() > 1e-9 * max(1.0, a.p.norm):
            raise ValueError("mode sets are not aligned on the same momenta")
        if a.m != b.m:
            raise ValueError("mode sets have different masses")
    return zip(modes1, modes2)


def invariant_product(modes1, modes2) -> float:
    """``(2/m^2) sum (d^3p/E) vbar1+ (g0 E - g^k p^k) v2+`` in real form.

    ``vbar = v^T g0`` and ``g0 g^k = alpha_k``, so the summand is
    ``v1+^T (E - alpha.p) v2+``.
    """
    total = 0.0
    m = None
    for a, b in _match(modes1, modes2):
        m = a.m
        if m <= 0:
            raise ValueError("the invariant product needs m > 0")
        e = a.energy
        total += a.weight * float(a.v_plus @ (e * b.v_plus - alpha_dot(a.p.vec) @ b.v_plus))
    if m is None:
        return 0.0
    return 2.0 / m**2 * total


# -- Wigner amplitudes ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WignerAmplitudes:
    """Real dimensionless amplitudes of ``v+(p)`` in the boosted rest-frame basis."""

    p: Momentum3
    m: float
    a: np.ndarray
    weight: float = 1.0

    @property
    def energy(self) -> float:
        return self.p.energy(self.m)


def wigner_amplitudes(mode: CovariantMode) -> WignerAmplitudes:
    """Solve ``v+(p) = a^i S(H(p)) e_i / sqrt(m)``."""
    if mode.m <= 0:
        raise ValueError("Wigner amplitudes need m > 0")
    s_h = spinor_rep(standard_boost(mode.p, mode.m))
    cols = s_h / math.sqrt(mode.m)
    a = np.linalg.solve(cols, mode.v_plus)
    return WignerAmplitudes(mode.p, mode.m, a, mode.weight)


def wigner_product(amps1, amps2) -> float:
    """``(2/m^2) sum (d^3p/E) a1 . a2``."""
    total = 0.0
    m = None
    for a, b in zip(amps1, amps2):
        if np.abs(a.p.vec - b.p.vec).max() > 1e-9 * max(1.0, a.p.norm):
            raise ValueError("amplitude sets are not aligned on the same momenta")
        m = a.m
        total += a.weight * float(a.a @ b.a)
    if m is None:
        return 0.0
    return 2.0 / m**2 * total


def wigner_rotation(transform: LorentzTransform, p, m: float) -> tuple[LorentzTransform, np.ndarray]:
    """``R = H(p)^-1 L H(L^-1 p)`` and its amplitude matrix ``D = S(R)``."""
    p = Momentum3.of(p)
    back = transform.inverse().act(four_momentum(p, m))[1:]
    r = standard_boost(p, m).inverse() @ transform @ standard_boost(back, m)
    return r, spinor_rep(r)


def wigner_act(amps: WignerAmplitudes, transform: LorentzTransform) -> WignerAmplitudes:
    """Amplitudes at ``L p`` from those at ``p``: ``a'(Lp) = D(L, Lp) a(p)``."""
    target = transform.act(four_momentum(amps.p, amps.m))[1:]
    _, d = wigner_rotation(transform, target, amps.m)
    return replace(amps, p=Momentum3.of(target), a=d @ amps.a)


def wigner_translate(amps: WignerAmplitudes, a) -> WignerAmplitudes:
    pa = minkowski_dot(four_momentum(amps.p, amps.m), a)
    return replace(amps, a=axial_phase(pa) @ amps.a)


def rotation_angle(transform: LorentzTransform) -> float:
    """Angle of the spatial rotation block (the transform must fix the time axis)."""
    if not transform.is_rotation(1e-9):
        raise ValueError("transform is not a spatial rotation")
    c = 0.5 * (np.trace(transform.matrix[1:, 1:]) - 1.0)
    return math.acos(max(-1.0, min(1.0, c)))


# -- quaternion and SU(2) forms -------------------------------------------------------

def quaternion_decompose(transform: LorentzTransform, tol: float = 1e-12) -> Quaternion:
    """Coordinates of ``O S(R) O^-1`` in the basis ``1, I, J, K``."""
    if not transform.is_rotation():
        raise ValueError("quaternion_decompose takes a spatial rotation")
    q = QUATERNION_FRAME @ spinor_rep(transform) @ QUATERNION_FRAME.T
    s = quaternion_coordinates(q)
    quat = Quaternion(*s)
    if np.abs(quat.to_mat4() - q).max() > tol:
        raise ArithmeticError("O S(R) O^-1 is not quaternionic")
    return quat


def _check_unit_su2(u: np.ndarray, tol: float) -> tuple[complex, complex]:
    u = np.asarray(u, dtype=complex)
    alpha, beta = u[0, 0], u[1, 0].conjugate()
    shape_ok = (abs(u[0, 1] + beta) <= tol and abs(u[1, 1] - alpha.conjugate()) <= tol)
    if not shape_ok:
        raise ValueError("u must have the form [[alpha, -beta], [conj(beta), conj(alpha)]]")
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > tol:
        raise ValueError("u is not unitary with unit determinant")
    return alpha, beta


def su2_real_form(u, tol: float = 1e-12) -> np.ndarray:
    """Real 4x4 matrix of ``xi -> u xi`` on ``(xi1', xi1'', xi2', xi2'')``."""
    alpha, beta = _check_unit_su2(u, tol)
    a1, a2, b1, b2 = alpha.real, alpha.imag, beta.real, beta.imag
    return np.array([
        [a1, -a2, -b1, b2],
        [a2, a1, -b2, -b1],
        [b1, b2, a1, a2],
        [-b2, b1, -a2, a1],
    ])


def su2_stack(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex)
    return np.array([xi[0].real, xi[0].imag, xi[1].real, xi[1].imag])


def su2_from_quaternion(q: Quaternion) -> np.ndarray:
    """``u`` with ``alpha' = s0, beta' = s1, beta'' = s2, alpha'' = s3``."""
    alpha = complex(q.s0, q.s3)
    beta = complex(q.s1, q.s2)
    return np.array([[alpha, -beta], [beta.conjugate(), alpha.conjugate()]])


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
# rotation about x, y, z by theta  <->  exp(sign * i sigma_k theta / 2)
SU2_AXIS_MAP = {0: (0, -1.0), 1: (2, +1.0), 2: (1, -1.0)}


def su2_from_rotation(axis: int, angle: float) -> np.ndarray:
    """SU(2) element matching a coordinate-axis rotation under the fixed frame ``O``."""
    k, sign = SU2_AXIS_MAP[axis]
    return math.cos(angle / 2) * np.eye(2) + 1j * sign * math.sin(angle / 2) * _PAULI[k]


# -- irreducibility witness -------------------------------------------------------------

@dataclass(frozen=True)
class CommutantReport:
    dimension: int
    singular_values: np.ndarray
    min_invertibility: float
    closed_under_products: bool

    @property
    def irreducible(self) -> bool:
        """A 4-dim commutant that is a division algebra leaves no invariant subspace."""
        return self.dimension == 4 and self.min_invertibility > 1e-6 and self.closed_under_products


def commutant(matrices, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Basis of real ``X`` with ``X M = M X`` for all given ``M`` (rows of ``vec X``), and singular values."""
    n = matrices[0].shape[0]
    eye = np.eye(n)
    rows = [np.kron(m, eye) - np.kron(eye, m.T) for m in matrices]
    _, sv, vt = np.linalg.svd(np.vstack(rows))
    null = vt[np.count_nonzero(sv > tol):]
    return null.reshape(-1, n, n), sv


def irreducibility_witness(matrices, rng: np.random.Generator | None = None, trials: int = 20) -> CommutantReport:
    """Commutant rank plus a check that random commutant elements are invertible."""
    rng = np.random.default_rng(0) if rng is None else rng
    basis, sv = commutant(matrices)
    dim = basis.shape[0]
    worst = math.inf
    for _ in range(trials if dim else 0):
        x = np.tensordot(rng.normal(size=dim), basis, axes=1)
        x /= np.linalg.norm(x)
        worst = min(worst, float(np.linalg.svd(x, compute_uv=False).min()))
    closed = True
    if dim:
        flat = basis.reshape(dim, -1)
        for a in basis:
            for b in basis:
                prod = (a @ b).ravel()
                resid = prod - flat.T @ (flat @ prod)
                closed &= bool(np.abs(resid).max() <= 1e-9)
    return CommutantReport(dim, sv, 0.0 if dim == 0 else worst, closed)


def wigner_rotation_matrices(rng: np.random.Generator, count: int) -> list[np.ndarray]:
    """``S(R)`` for random rotations."""
    out = []
    for _ in range(count):
        axis = rng.normal(size=3)
        out.append(spinor_rep(LorentzTransform.rotation(axis, rng.uniform(0, 2 * math.pi))))
    return out

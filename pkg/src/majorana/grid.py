"""Brute-force oracle: the real evolution equation on a periodic spatial lattice.

Nothing here uses the helicity basis or the paired-mode machinery.  The
Hamiltonian ``h = -alpha_k D_k - m J`` is applied with Fourier-collocation
derivatives (or 2nd-order central differences), and time stepping is either
classical RK4 or the exact per-wavenumber exponential

    exp(t h_k) = cos(E_k t) + sin(E_k t) h_k / E_k,   h_k = -i alpha.kappa - m J,

which holds because ``h_k^2 = -(m^2 + kappa^2)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .clifford import quaternion_units, real_generators

_I, _J, _K = quaternion_units()
_ALPHA, _ = real_generators()

OBSERVABLES = ("axial_momentum", "position", "position_sq", "axial_momentum_sq")


@dataclass(frozen=True, eq=False)
class GridState:
    """Real bispinor field on an ``N`` (or ``N^3``) periodic lattice of side ``L``.

    ``field`` has shape ``(4, N)`` for ``dim = 1`` (the line is the z axis) or
    ``(4, N, N, N)`` with array axes ``x, y, z``.
    """

    L: float
    N: int
    field: np.ndarray
    dim: int = 1
    mass: float = 0.0
    t: float = 0.0
    derivative: str = "spectral"

    def __post_init__(self):
        if self.dim not in (1, 3):
            raise ValueError("dim must be 1 or 3")
        if self.derivative not in ("spectral", "central"):
            raise ValueError("derivative must be 'spectral' or 'central'")
        f = np.asarray(self.field, dtype=float)
        if f.shape != (4,) + (self.N,) * self.dim:
            raise ValueError(f"field shape {f.shape} does not match N={self.N}, dim={self.dim}")
        object.__setattr__(self, "field", f)

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def cell(self) -> float:
        return self.dx**self.dim

    @property
    def coordinates(self) -> np.ndarray:
        return self.dx * np.arange(self.N)

    def with_field(self, field: np.ndarray, t: float | None = None) -> "GridState":
        return replace(self, field=field, t=self.t if t is None else t)

    def physical_axes(self) -> tuple[int, ...]:
        return (2,) if self.dim == 1 else (0, 1, 2)

    def array_axis(self, axis: int) -> int:
        if axis not in self.physical_axes():
            raise ValueError(f"axis {axis} is not active on a {self.dim}D grid")
        return 1 if self.dim == 1 else axis + 1


def positions(state: GridState) -> np.ndarray:
    """Site coordinates as 3-vectors, C order (matches ``field.reshape(4, -1)``)."""
    axis = state.coordinates
    if state.dim == 1:
        pos = np.zeros((state.N, 3))
        pos[:, 2] = axis
        return pos
    g = np.meshgrid(axis, axis, axis, indexing="ij")
    return np.stack([c.ravel() for c in g], axis=1)


def _symbol_1d(state: GridState, real_fft: bool) -> np.ndarray:
    n, dx = state.N, state.dx
    k = 2 * math.pi * (np.fft.rfftfreq(n, dx) if real_fft else np.fft.fftfreq(n, dx))
    if state.derivative == "central":
        return np.sin(k * dx) / dx
    if n % 2 == 0:
        k = np.where(np.isclose(np.abs(k), math.pi / dx), 0.0, k)
    return k


def _symbols(state: GridState) -> list[np.ndarray]:
    """Broadcastable derivative symbols (``D -> i kappa``) per physical axis, rfftn layout."""
    if state.dim == 1:
        return [np.zeros(1), np.zeros(1), _symbol_1d(state, True)]
    full = _symbol_1d(state, False)
    half = _symbol_1d(state, True)
    return [full[:, None, None], full[None, :, None], half[None, None, :]]


def _spatial_axes(state: GridState) -> tuple[int, ...]:
    return tuple(range(1, state.dim + 1))


def derivative(state: GridState, axis: int, field: np.ndarray | None = None) -> np.ndarray:
    """``d/dx_axis`` of the field (components along the leading axis)."""
    f = state.field if field is None else field
    state.array_axis(axis)
    kappa = _symbols(state)[axis]
    axes = _spatial_axes(state)
    spec = np.fft.rfftn(f, axes=axes)
    shape = tuple(state.N for _ in axes)
    if state.dim == 1:
        spec = spec * (1j * kappa)[None, :]
    else:
        spec = spec * (1j * kappa)[None]
    return np.fft.irfftn(spec, s=shape, axes=axes)


def _mat(m: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.tensordot(m, f, axes=(1, 0))


def apply_hamiltonian(state: GridState, field: np.ndarray | None = None) -> np.ndarray:
    """``(-alpha_k D_k - m J) psi`` in real arithmetic."""
    f = state.field if field is None else field
    out = -state.mass * _mat(_J, f)
    for axis in state.physical_axes():
        out -= _mat(_ALPHA[axis], derivative(state, axis, f))
    return out


def max_energy(state: GridState) -> float:
    sym = _symbols(state)
    k2 = sum(np.max(np.abs(s)) ** 2 for s in sym)
    return math.sqrt(state.mass**2 + k2)


def _exact(state: GridState, tau: float) -> np.ndarray:
    axes = _spatial_axes(state)
    spec = np.fft.rfftn(state.field, axes=axes)
    kx, ky, kz = _symbols(state)
    if state.dim == 1:
        kx = ky = np.zeros_like(kz)
    k2 = kx**2 + ky**2 + kz**2
    energy = np.sqrt(state.mass**2 + k2)
    cos_e = np.cos(energy * tau)
    sinc = np.where(energy > 0, np.sin(energy * tau) / np.where(energy > 0, energy, 1.0), tau)
    a_spec = (np.einsum("ab,b...->a...", _ALPHA[0], spec) * kx
              + np.einsum("ab,b...->a...", _ALPHA[1], spec) * ky
              + np.einsum("ab,b...->a...", _ALPHA[2], spec) * kz)
    h_spec = -1j * a_spec - state.mass * np.einsum("ab,b...->a...", _J, spec)
    new = cos_e * spec + sinc * h_spec
    shape = tuple(state.N for _ in axes)
    return np.fft.irfftn(new, s=shape, axes=axes)


def _rk4(state: GridState, dt: float) -> np.ndarray:
    f = state.field
    k1 = apply_hamiltonian(state, f)
    k2 = apply_hamiltonian(state, f + 0.5 * dt * k1)
    k3 = apply_hamiltonian(state, f + 0.5 * dt * k2)
    k4 = apply_hamiltonian(state, f + dt * k3)
    return f + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


RK4_MARGIN = 0.5


def step(state: GridState, dt: float, method: str = "exact_spectral") -> GridState:
    """Advance one step.  RK4 requires ``dt * E_max <= 0.5``."""
    if method == "exact_spectral":
        return state.with_field(_exact(state, dt), state.t + dt)
    if method == "rk4":
        if abs(dt) * max_energy(state) > RK4_MARGIN * (1 + 1e-12):
            raise ValueError(f"rk4 step dt={dt} violates dt*E_max <= {RK4_MARGIN}")
        return state.with_field(_rk4(state, dt), state.t + dt)
    raise ValueError(f"unknown method {method!r}")


def evolve(state: GridState, duration: float, method: str = "exact_spectral",
           dt: float | None = None) -> GridState:
    """Evolve for ``duration``; the exact stepper takes a single step unless ``dt`` is given."""
    if method == "exact_spectral" and dt is None:
        return step(state, duration, method)
    if dt is None:
        dt = 0.1 / max_energy(state)
    n = max(1, int(math.ceil(abs(duration) / dt - 1e-9)))
    h = duration / n
    t0 = state.t
    for _ in range(n):
        state = step(state, h, method)
    return state.with_field(state.field, t0 + duration)


# -- observables ------------------------------------------------------------------

def inner(a: GridState, b: GridState | np.ndarray) -> float:
    fb = b.field if isinstance(b, GridState) else b
    return float(np.sum(a.field * fb) * a.cell)


def norm_sq(state: GridState) -> float:
    return inner(state, state)


def axial_momentum_apply(state: GridState, axis: int, field: np.ndarray | None = None) -> np.ndarray:
    """``p5 psi = -I D psi`` along one axis."""
    return -_mat(_I, derivative(state, axis, field))


def _coordinate(state: GridState, axis: int) -> np.ndarray:
    x = state.coordinates
    if state.dim == 1:
        return x[None, :]
    shape = [1, 1, 1]
    shape[axis] = state.N
    return x.reshape(shape)[None]


def expectation(state: GridState, observable: str, axis: int = 2, tol: float = 1e-8) -> float:
    """Expectation value of a real observable in a normalised state."""
    if observable not in OBSERVABLES:
        raise ValueError(f"unknown observable {observable!r}")
    state.array_axis(axis)
    nrm = norm_sq(state)
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state is not normalised (norm^2 = {nrm})")
    f = state.field
    if observable == "axial_momentum":
        return inner(state, axial_momentum_apply(state, axis))
    if observable == "axial_momentum_sq":
        d = derivative(state, axis)
        return float(np.sum(d * d) * state.cell)
    x = _coordinate(state, axis)
    density = f * f
    power = 1 if observable == "position" else 2
    return float(np.sum(density * x**power) * state.cell)


def check_localized(state: GridState, axis: int, sigmas: float = 5.0) -> None:
    mean = expectation(state, "position", axis)
    var = expectation(state, "position_sq", axis) - mean**2
    width = math.sqrt(max(var, 0.0))
    if mean - sigmas * width < 0.0 or mean + sigmas * width > state.L:
        raise ValueError("packet is not localised away from the periodic seam")


@dataclass(frozen=True)
class AxisUncertainty:
    axis: int
    var_x: float
    var_p: float
    vertex_alpha: float
    vertex_value: float
    discriminant: float
    commutator_residual: float

    @property
    def product(self) -> float:
        """``Delta x * Delta p5`` (bounded below by 1/2)."""
        return math.sqrt(self.var_x * self.var_p)


def commutator_residual(state: GridState, axis: int) -> float:
    """``|| [x, p5] psi - I psi || / || psi ||`` (``i gamma_5 = I``)."""
    x = _coordinate(state, axis)
    xp = x * axial_momentum_apply(state, axis)
    px = axial_momentum_apply(state, axis, x * state.field)
    res = xp - px - _mat(_I, state.field)
    return math.sqrt(float(np.sum(res * res)) / float(np.sum(state.field**2)))


def uncertainty_certificate(state: GridState) -> list[AxisUncertainty]:
    """Evaluate ``I(a) = a^2 <dp5^2> - a + <dx^2>`` at its vertex, per active axis.

    ``I >= 0`` for every real ``a`` is equivalent to a non-positive
    discriminant ``1 - 4 <dx^2><dp5^2>``.
    """
    out = []
    for axis in state.physical_axes():
        check_localized(state, axis)
        mean_x = expectation(state, "position", axis)
        var_x = expectation(state, "position_sq", axis) - mean_x**2
        mean_p = expectation(state, "axial_momentum", axis)
        var_p = expectation(state, "axial_momentum_sq", axis) - mean_p**2
        alpha = 1.0 / (2.0 * var_p)
        value = alpha**2 * var_p - alpha + var_x
        out.append(AxisUncertainty(axis, var_x, var_p, alpha, value,
                                   1.0 - 4.0 * var_x * var_p, commutator_residual(state, axis)))
    return out


# -- construction and export --------------------------------------------------------

def gaussian_state(L: float, N: int, width: float, k0: float = 0.0, spinor=(1, 0, 0, 0),
                   center: float | None = None, mass: float = 0.0, chirp: float = 0.0) -> GridState:
    """Normalised 1D packet ``g(z) (cos(phi) v + sin(phi) I v)`` with ``phi = k0 z + chirp z^2``.

    ``g`` is a Gaussian with position spread ``width``; without chirp it is a
    minimum-uncertainty state for ``(z, p5)``.
    """
    v = np.asarray(spinor, dtype=float)
    v = v / np.linalg.norm(v)
    z = L * np.arange(N) / N
    c = L / 2 if center is None else center
    env = np.exp(-((z - c) ** 2) / (4.0 * width**2))
    phase = k0 * (z - c) + chirp * (z - c) ** 2
    f = np.outer(v, env * np.cos(phase)) + np.outer(_I @ v, env * np.sin(phase))
    f /= math.sqrt(np.sum(f * f) * L / N)
    return GridState(L, N, f, 1, mass)


def write_state_csv(state: GridState, path) -> None:
    """CSV with ``site, x, y, z, psi1..psi4, density`` at 17 significant digits."""
    pos = positions(state)
    flat = state.field.reshape(4, -1)
    dens = np.sum(flat * flat, axis=0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["site", "x", "y", "z", "psi1", "psi2", "psi3", "psi4", "density"])
        for i in range(flat.shape[1]):
            row = [i] + [f"{v:.17g}" for v in pos[i]] + [f"{v:.17g}" for v in flat[:, i]] + [f"{dens[i]:.17g}"]
            w.writerow(row)

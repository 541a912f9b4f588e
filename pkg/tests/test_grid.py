import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from majorana import grid, spectral
from majorana.axial import helicity_basis, paired_generator
from majorana.clifford import quaternion_units

I_, J_, K_ = quaternion_units()
BOX, N = 20 * math.pi, 256


def _packet(rng, mass=1.0, count=8, box=BOX):
    pk = spectral.WavePacket(box, mass, 1)
    for k in range(1, count + 1):
        pk = pk.with_mode((0, 0, k), rng.normal(size=4), rng.normal(size=4))
    return pk


def _state(pk, n=N, t=0.0, derivative="spectral"):
    z = pk.box_length * np.arange(n) / n
    return grid.GridState(pk.box_length, n, spectral.synthesize(pk, z, t), 1, pk.mass, t, derivative)


def test_state_validation():
    with pytest.raises(ValueError):
        grid.GridState(1.0, 8, np.zeros((4, 9)))
    with pytest.raises(ValueError):
        grid.GridState(1.0, 8, np.zeros((4, 8)), dim=2)
    with pytest.raises(ValueError):
        grid.GridState(1.0, 8, np.zeros((4, 8)), derivative="upwind")


def test_constant_field_massless_is_stationary(rng):
    st_ = grid.GridState(BOX, 32, np.repeat(rng.normal(size=(4, 1)), 32, axis=1))
    assert np.abs(grid.apply_hamiltonian(st_)).max() <= 1e-14


def test_hamiltonian_is_antisymmetric(rng):
    a, b = _state(_packet(rng)), _state(_packet(rng))
    lhs = grid.inner(a, grid.apply_hamiltonian(b)) + grid.inner(b, grid.apply_hamiltonian(a))
    assert abs(lhs) <= 1e-12 * max(1, grid.norm_sq(a))


@pytest.mark.parametrize("derivative", ["spectral", "central"])
def test_hamiltonian_antisymmetric_with_random_fields(rng, derivative):
    a = grid.GridState(5.0, 32, rng.normal(size=(4, 32)), mass=0.6, derivative=derivative)
    b = a.with_field(rng.normal(size=(4, 32)))
    lhs = grid.inner(a, grid.apply_hamiltonian(b)) + grid.inner(b, grid.apply_hamiltonian(a))
    assert abs(lhs) <= 1e-12


def test_hamiltonian_reproduces_paired_rate(rng):
    m = 0.7
    pk = spectral.WavePacket(BOX, m, 1).with_mode((0, 0, 5), rng.normal(size=4), rng.normal(size=4))
    mode = pk.modes[(0, 0, 5)]
    st_ = _state(pk, 64)
    rate = spectral.packet_from_field(grid.apply_hamiltonian(st_), BOX, m, 1).modes[(0, 0, 5)]
    expected = paired_generator(mode.p, m) @ mode.amplitudes
    assert np.abs(rate.amplitudes - expected).max() <= 1e-10


def test_zero_step_is_identity(rng):
    st_ = _state(_packet(rng))
    assert np.abs(grid.step(st_, 0.0).field - st_.field).max() <= 1e-15
    assert np.array_equal(grid.step(st_, 0.0, "rk4").field, st_.field)


def test_rk4_rejects_unstable_step(rng):
    st_ = _state(_packet(rng))
    with pytest.raises(ValueError):
        grid.step(st_, 0.6 / grid.max_energy(st_), "rk4")
    with pytest.raises(ValueError):
        grid.step(st_, 0.1, "euler")


def test_exact_stepper_matches_synthesis(rng):
    pk = _packet(rng)
    st_ = _state(pk)
    for t in (0.7, 13.0):
        ref = spectral.synthesize(pk, st_.coordinates, t)
        assert np.linalg.norm(grid.evolve(st_, t).field - ref) / np.linalg.norm(ref) <= 1e-12


def test_exact_stepper_norm_drift(rng):
    st_ = _state(_packet(rng))
    n0 = grid.norm_sq(st_)
    for t in np.linspace(0, 100, 11):
        assert abs(grid.norm_sq(grid.evolve(st_, t)) - n0) / n0 <= 1e-12


def test_exact_stepper_3d(rng):
    keys = [(1, 0, 0), (0, 2, -1), (1, 1, 1), (0, 0, 3)]
    pk = spectral.WavePacket(2 * math.pi, 0.9, 3)
    for key in keys:
        pk = pk.with_mode(key, rng.normal(size=4), rng.normal(size=4))
    n = 16
    pos = spectral.lattice_positions(pk.box_length, n, 3)
    field = spectral.synthesize(pk, pos).reshape(4, n, n, n)
    st_ = grid.GridState(pk.box_length, n, field, 3, pk.mass)
    t = 2.3
    ref = spectral.synthesize(pk, pos, t).reshape(4, n, n, n)
    assert np.linalg.norm(grid.evolve(st_, t).field - ref) / np.linalg.norm(ref) <= 1e-12
    rk = grid.evolve(st_, t, "rk4", dt=0.05 / grid.max_energy(st_))
    assert np.linalg.norm(rk.field - ref) / np.linalg.norm(ref) <= 1e-6


def test_central_differences_converge_at_second_order(rng):
    pk = spectral.WavePacket(2 * math.pi, 0.5, 1).with_mode((0, 0, 1), rng.normal(size=4), rng.normal(size=4))
    t = 1.0
    errs = []
    for n in (32, 64):
        st_ = _state(pk, n, derivative="central")
        ref = spectral.synthesize(pk, st_.coordinates, t)
        errs.append(np.linalg.norm(grid.evolve(st_, t).field - ref) / np.linalg.norm(ref))
    order = math.log2(errs[0] / errs[1])
    assert 1.8 <= order <= 2.2


def test_expectation_requires_normalised_state(rng):
    st_ = grid.gaussian_state(BOX, N, 3.0)
    with pytest.raises(ValueError):
        grid.expectation(st_.with_field(2 * st_.field), "position")
    with pytest.raises(ValueError):
        grid.expectation(st_, "energy")
    with pytest.raises(ValueError):
        grid.expectation(st_, "position", axis=0)


def test_symmetric_gaussian_centre():
    st_ = grid.gaussian_state(BOX, N, 3.0, k0=0.8, center=25.0)
    assert grid.expectation(st_, "position") == pytest.approx(25.0, abs=1e-10)


@given(st.floats(0.5, 3.0), st.sampled_from([(1, 0, 0, 0), (0, 1, 0, 0), (0.3, -0.1, 0.8, 0.2)]))
def test_windowed_plane_wave_axial_momentum(k0, spinor):
    st_ = grid.gaussian_state(BOX, 512, BOX / 20, k0=k0, spinor=spinor)
    assert grid.expectation(st_, "axial_momentum") == pytest.approx(k0, rel=1e-8)


@pytest.mark.parametrize("width", [BOX / 20, BOX / 10])
def test_gaussian_uncertainty_saturates(width):
    cert = grid.uncertainty_certificate(grid.gaussian_state(BOX, 512, width, k0=1.2))[0]
    assert cert.product >= 0.5 - 1e-3
    assert abs(cert.discriminant) <= 1e-2
    # at L/10 the 5-sigma tails meet the seam and are cut off
    rel = 1e-8 if width < BOX / 10 else 1e-4
    assert cert.var_x == pytest.approx(width**2, rel=rel)
    assert cert.var_p == pytest.approx(1 / (4 * width**2), rel=rel)
    if width < BOX / 10:
        # x psi jumps by L at the seam; only a packet with negligible seam amplitude has a clean commutator
        assert cert.commutator_residual <= 1e-3


def test_chirped_packet_has_negative_discriminant():
    width, chirp = BOX / 20, 0.05
    cert = grid.uncertainty_certificate(grid.gaussian_state(BOX, 512, width, k0=0.5, chirp=chirp))[0]
    assert cert.discriminant < -0.1
    assert cert.vertex_value > 0
    # phase chirp * z^2 adds (2 chirp width)^2 to the axial-momentum variance
    assert cert.var_p == pytest.approx(1 / (4 * width**2) + 4 * chirp**2 * width**2, rel=1e-8)


def test_localisation_precondition():
    st_ = grid.gaussian_state(BOX, 512, BOX / 8)
    with pytest.raises(ValueError):
        grid.uncertainty_certificate(st_)


def test_state_csv(tmp_path, rng):
    st_ = grid.GridState(1.0, 4, rng.normal(size=(4, 4)))
    path = tmp_path / "s.csv"
    grid.write_state_csv(st_, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "site,x,y,z,psi1,psi2,psi3,psi4,density"
    assert len(lines) == 5
    vals = [float(v) for v in lines[1].split(",")[4:8]]
    assert vals == list(st_.field[:, 0])

import math

import numpy as np
import pytest
from hypothesis import given

from majorana import weyl
from majorana.clifford import gamma

from strategies import amplitude4

G5 = gamma(5)
P_R = 0.5 * (np.eye(4) + G5)


def _random_right(rng):
    return weyl.from_majorana(rng.normal(size=4))


def test_projector_algebra():
    assert np.abs(P_R @ P_R - P_R).max() <= 1e-15


def test_basis_vector_projection():
    phi = weyl.from_majorana(np.eye(4)[0])
    assert np.abs(phi.complex - P_R @ np.eye(4)[0]).max() == 0.0
    assert phi.chirality_residual() <= 1e-15
    assert np.abs(weyl.left_part(phi)).max() <= 1e-15


@given(amplitude4)
def test_round_trips(psi):
    phi = weyl.from_majorana(psi)
    assert phi.is_right_handed()
    assert np.array_equal(weyl.to_majorana(phi), 2 * phi.re)
    assert np.abs(weyl.to_majorana(phi) - psi).max() <= 1e-12 * max(1, np.abs(psi).max())
    back = weyl.from_majorana(weyl.to_majorana(phi))
    assert np.abs(back.complex - phi.complex).max() <= 1e-12 * max(1, np.abs(psi).max())


def test_right_handed_constructor_and_rejection(rng):
    r = rng.normal(size=4)
    phi = weyl.right_handed(r)
    assert phi.is_right_handed()
    assert np.array_equal(weyl.to_majorana(phi), 2 * r)
    with pytest.raises(ValueError):
        weyl.to_majorana(weyl.WeylBispinor(r, np.zeros(4)))


def test_zero_maps_to_zero():
    zero = weyl.WeylBispinor(np.zeros(4), np.zeros(4))
    assert not weyl.to_majorana(zero).any()
    assert not weyl.from_majorana(np.zeros(4)).complex.any()


def test_real_but_not_complex_linear(rng):
    phi = _random_right(rng)
    lam = 2.7
    assert np.abs(weyl.to_majorana(phi.scaled(lam)) - lam * weyl.to_majorana(phi)).max() <= 1e-14
    lhs = weyl.to_majorana(phi.scaled(1j))
    rhs = 1j * weyl.to_majorana(phi)
    assert np.abs(lhs - rhs).max() > 1e-3
    assert np.abs(rhs.imag).max() > 0


def test_product_non_preservation_witness(rng):
    phi1 = _random_right(rng)
    phi2 = phi1.scaled(1j)
    cmp = weyl.compare_products(phi1, phi2)
    assert abs(cmp.weyl.real) <= 1e-15 and abs(cmp.weyl) > 0.1
    assert abs(cmp.majorana) <= 1e-14


def test_product_identities(rng):
    phi1, phi2 = _random_right(rng), _random_right(rng)
    same = weyl.compare_products(phi1, phi1)
    assert math.isclose(same.majorana, 4 * np.sum(phi1.re**2), rel_tol=1e-14)
    assert math.isclose(same.majorana, 2 * np.vdot(phi1.complex, phi1.complex).real, rel_tol=1e-14)
    cmp = weyl.compare_products(phi1, phi2)
    assert cmp.identity_residual <= 1e-12
    assert abs(cmp.transpose_product) <= 1e-14


def _grid(n=64, box=2 * math.pi):
    return box * np.arange(n) / n, box


def test_momentum_correspondence_single_mode(rng):
    z, box = _grid()
    r = rng.normal(size=(4, 1)) * np.cos(3 * z) + rng.normal(size=(4, 1)) * np.sin(3 * z)
    phi = weyl.right_handed(r)
    assert weyl.momentum_correspondence(phi, box) <= 1e-10


def test_momentum_correspondence_constant_field(rng):
    phi = weyl.right_handed(np.repeat(rng.normal(size=(4, 1)), 32, axis=1))
    assert weyl.momentum_correspondence(phi, 2 * math.pi) <= 1e-15


def test_momentum_correspondence_gaussian_envelope(rng):
    z, box = _grid(256, 20.0)
    env = np.exp(-((z - 10) ** 2) / 4) * np.cos(2.5 * z)
    phi = weyl.right_handed(rng.normal(size=(4, 1)) * env)
    assert weyl.momentum_correspondence(phi, box) <= 1e-8


def test_momentum_correspondence_3d(rng):
    n, box = 8, 2 * math.pi
    x = box * np.arange(n) / n
    gx, gy, gz = np.meshgrid(x, x, x, indexing="ij")
    r = rng.normal(size=(4, 1, 1, 1)) * np.cos(gx + 2 * gy - gz)
    assert weyl.momentum_correspondence(weyl.right_handed(r), box) <= 1e-10

"""Period data validation, coordinate maps and characteristic enumeration."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from abeltheta.errors import DivisibilityViolation, NotPositiveDefinite, NotSymmetric
from abeltheta.lattice import (Characteristic, complex_to_real, cube_to_point,
                               enumerate_characteristics, iso_map, phi_L0_lift,
                               random_cube_points, real_to_complex, validate_period_data)


def real_embedding_matrix(p):
    """Oracle: the 2n x 2n real matrix sending x to (Re z, Im z)."""
    n = p.n
    top = np.hstack([np.diag(p.delta_vec), p.re_z])
    bottom = np.hstack([np.zeros((n, n)), p.im_z])
    return np.vstack([top, bottom])


def solve_real_coords(p, z):
    """Oracle for complex_to_real: solve the assembled real linear system."""
    rhs = np.concatenate([np.asarray(z).real, np.asarray(z).imag])
    return np.linalg.solve(real_embedding_matrix(p), rhs)


def iso_forward_n1(p, mu_hat):
    """Oracle: the printed n=1 reduction of the dual-coordinate isomorphism."""
    delta = p.delta[0]
    tau1, tau2 = p.Z[0, 0].real, p.Z[0, 0].imag
    xi1 = 2.0 * math.pi * delta / tau2 * mu_hat.imag
    xi2 = 2.0 * math.pi / tau2 * (tau1 * mu_hat.imag - tau2 * mu_hat.real)
    return np.array([xi1, xi2])


def test_validate_identity_imaginary_part():
    p = validate_period_data([1], [[1j]])
    assert np.allclose(p.W, [[1.0]])
    assert p.Delta == 1
    assert p.lambda_min == pytest.approx(1.0)


def test_validate_diagonal_inverse():
    p = validate_period_data([1, 2], [[1j, 0], [0, 2j]])
    assert np.allclose(p.W, np.diag([1.0, 0.5]))
    assert p.Delta == 2


def test_validate_rejections():
    with pytest.raises(DivisibilityViolation):
        validate_period_data([2, 3], np.diag([1j, 1j]))
    with pytest.raises(NotSymmetric):
        validate_period_data([1, 1], [[1j, 0.5], [0.1, 1j]])
    with pytest.raises(NotPositiveDefinite):
        validate_period_data([1], [[-1j]])
    with pytest.raises(NotPositiveDefinite):
        validate_period_data([1, 1], [[1j, 2j], [2j, 1j]])


def test_validate_accepts_tiny_asymmetry():
    z = np.array([[1j, 0.3 + 1e-15], [0.3, 2j]])
    p = validate_period_data([1, 2], z)
    assert np.array_equal(p.Z, p.Z.T)  # stored symmetrized


def test_real_to_complex_lattice_basis_vectors():
    p = validate_period_data([2], [[0.3 + 1.2j]])
    z = real_to_complex(p, [1.0, 0.0]).coords
    assert z[0] == pytest.approx(2.0)
    p1 = validate_period_data([1], [[1j]])
    z = real_to_complex(p1, [0.0, 1.0]).coords
    assert z[0] == pytest.approx(1j)


def test_real_to_complex_matrix_oracle():
    p = validate_period_data([1, 2], [[1j, 0], [0, 2j]])
    x = np.array([0.0, 0.0, 1.0, 0.0])
    z = real_to_complex(p, x).coords
    assert np.allclose(z, [1j, 0.0], atol=1e-15)
    embed = real_embedding_matrix(p) @ x
    assert np.allclose(z, embed[:2] + 1j * embed[2:], atol=1e-15)


def test_complex_to_real_inverse_examples():
    p1 = validate_period_data([1], [[1j]])
    x = complex_to_real(p1, [1j]).coords
    assert np.allclose(x, [0.0, 1.0], atol=1e-14)
    p = validate_period_data([1, 2], [[1j, 0], [0, 2j]])
    x = complex_to_real(p, [1j, 0.0]).coords
    assert np.allclose(x, [0, 0, 1, 0], atol=1e-14)
    assert np.allclose(x, solve_real_coords(p, [1j, 0.0]), atol=1e-13)


def test_coordinate_round_trips_random():
    rng = np.random.default_rng(7)
    for delta, z in [([1], [[0.5 + 0.8j]]), ([1, 2], [[1j, 0.2], [0.2, 2j]]),
                     ([1, 1, 2], np.diag([1j, 1.5j, 2j]) + 0.1)]:
        p = validate_period_data(delta, np.asarray(z, dtype=complex))
        for _ in range(100):
            x = rng.standard_normal(2 * p.n)
            back = complex_to_real(p, real_to_complex(p, x)).coords
            assert np.abs(back - x).max() < 1e-12
            zpt = rng.standard_normal(p.n) + 1j * rng.standard_normal(p.n)
            zback = real_to_complex(p, complex_to_real(p, zpt)).coords
            assert np.abs(zback - zpt).max() < 1e-12


def test_phi_lift_examples():
    p = validate_period_data([1, 2], [[1j, 0], [0, 2j]])
    mu = np.array([0.3 + 0.4j, -1.0 + 0.2j])
    assert np.allclose(phi_L0_lift(p, mu).coords, [2 * mu[0], mu[1]])
    p1 = validate_period_data([1], [[1j]])
    assert phi_L0_lift(p1, [0.3 + 0.4j]).coords[0] == pytest.approx(0.3 + 0.4j)
    p3 = validate_period_data([1, 1, 3], np.diag([1j, 1j, 1j]))
    out = phi_L0_lift(p3, [1.0, 1j, 1 + 1j]).coords
    assert np.allclose(out, [3.0, 3j, 1 + 1j])


def test_iso_map_n1_reduction_oracle():
    p = validate_period_data([1], [[1j]])
    xi = iso_map(p, [0.5j], "forward").xi
    assert np.allclose(xi, [math.pi, 0.0], atol=1e-14)
    assert np.allclose(xi, iso_forward_n1(p, 0.5j), atol=1e-14)
    rng = np.random.default_rng(11)
    for delta, tau in [([1], 1j), ([2], 0.3 + 1.2j), ([3], -0.4 + 0.7j)]:
        p = validate_period_data(delta, [[tau]])
        for _ in range(20):
            mh = complex(rng.standard_normal() + 1j * rng.standard_normal())
            xi = iso_map(p, [mh], "forward").xi
            assert np.allclose(xi, iso_forward_n1(p, mh), atol=1e-12)


def test_iso_map_zero_and_round_trip():
    p = validate_period_data([1, 2], [[1j, 0.2], [0.2, 2j]])
    assert np.allclose(iso_map(p, np.zeros(2), "forward").xi, 0.0)
    rng = np.random.default_rng(13)
    for _ in range(100):
        mh = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        back = iso_map(p, iso_map(p, mh, "forward"), "inverse").coords
        assert np.abs(back - mh).max() < 1e-12
    xi = iso_map(p, rng.standard_normal(2) + 1j * rng.standard_normal(2), "forward")
    assert np.allclose(xi.eta * 2 * math.pi, xi.xi)


def test_enumerate_characteristics():
    p1 = validate_period_data([1], [[1j]])
    assert [m.m for m in enumerate_characteristics(p1)] == [(0,)]
    p2 = validate_period_data([2], [[1j]])
    assert [m.m for m in enumerate_characteristics(p2)] == [(0,), (1,)]
    p12 = validate_period_data([1, 2], [[1j, 0], [0, 2j]])
    chars = [m.m for m in enumerate_characteristics(p12)]
    assert chars == [(0, 0), (0, 1)]
    p23 = validate_period_data([2, 4], [[1j, 0], [0, 1j]])
    got = [m.m for m in enumerate_characteristics(p23)]
    expected = list(itertools.product(range(2), range(4)))  # Cartesian oracle
    assert got == expected
    assert len(got) == p23.Delta


def test_characteristic_bounds():
    p = validate_period_data([2], [[1j]])
    Characteristic.of(p, [1])
    with pytest.raises(ValueError):
        Characteristic.of(p, [2])
    with pytest.raises(ValueError):
        Characteristic.of(p, [-1])


def test_cube_sampling_in_fundamental_domain():
    p = validate_period_data([1, 2], [[1j, 0.2], [0.2, 2j]])
    rng = np.random.default_rng(5)
    pts = random_cube_points(p, rng, 10)
    for z in pts:
        x = complex_to_real(p, z).coords
        assert np.all(x > -1e-12) and np.all(x < 1.0 + 1e-12)
    assert np.allclose(cube_to_point(p, np.zeros(4)).coords, 0.0)

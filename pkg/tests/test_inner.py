"""Inner products: quadrature vs closed form, Gram structure, Gaussian utilities."""

from __future__ import annotations

import itertools
import math
import os

import numpy as np
import pytest

from abeltheta.errors import NotPositiveDefinite
from abeltheta.inner import (QuadratureSpec, closed_form_norm, gaussian_integral, gram_matrix,
                             l2_inner_product_quadrature, unfold_check)
from abeltheta.lattice import Characteristic, enumerate_characteristics, validate_period_data
from abeltheta.theta import radius_for

P1 = validate_period_data([1], [[1j]])
P2 = validate_period_data([2], [[1j]])
P3 = validate_period_data([3], [[0.3 + 1.2j]])
PLAN1 = radius_for(P1, 1e-12)
PLAN2 = radius_for(P2, 1e-12)
Q32 = QuadratureSpec(32)

# closed form sqrt(det(Im Z / 2)) * prod(delta) * exp(2 pi (m/d).Im Z (m/d)),
# frozen after evaluating it for the catalogue cases and confirming against
# the independent quadrature oracle below
NORM_D1_M0 = 0.7071067811865476          # sqrt(1/2)
NORM_D2_M0 = 1.4142135623730951          # sqrt(2)
NORM_D2_M1 = 6.8030423536502065          # sqrt(2) * e^(pi/2)


def theta_series_grid(p, m, pts, radius=10):
    """Independent theta sum on many points (term loop, no shells, no Kahan)."""
    c = np.array(m, dtype=float) / np.array(p.delta, dtype=float)
    total = np.zeros(pts.shape[0], dtype=complex)
    for k in itertools.product(range(-radius, radius + 1), repeat=p.n):
        kv = np.array(k, dtype=float)
        expo = (1j * math.pi * kv @ p.Z @ kv + 2j * math.pi * (c @ p.Z @ kv)
                + 2j * math.pi * (pts @ (kv + c)))
        total += np.exp(expo)
    return total


def inner_product_oracle(p, m, m2, mu, nodes=48):
    """Independent quadrature of the inner product on the cube grid."""
    axes = [np.arange(nodes) / nodes] * (2 * p.n)
    mesh = np.meshgrid(*axes, indexing="ij")
    t = np.stack([g.ravel() for g in mesh], axis=1)
    z = t[:, : p.n] * p.delta_vec + t[:, p.n:] @ p.Z.T + np.asarray(mu, dtype=complex)
    h = np.exp(-2.0 * math.pi * np.einsum("pi,ij,pj->p", z.imag, p.W, z.imag))
    f = h * theta_series_grid(p, m, z) * np.conj(theta_series_grid(p, m2, z))
    jac = p.Delta * np.linalg.det(p.im_z)
    return complex(f.mean() * jac)


def gauss2d_oracle(a, half_width=8.0, nodes=801):
    """Tensor trapezoid of exp(-x.Ax) over the square [-L, L]^2."""
    xs = np.linspace(-half_width, half_width, nodes)
    w = np.full(nodes, xs[1] - xs[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    quad = a[0, 0] * X ** 2 + 2 * a[0, 1] * X * Y + a[1, 1] * Y ** 2
    return float(np.einsum("i,j,ij->", w, w, np.exp(-quad)))


def test_closed_form_norm_values():
    assert closed_form_norm(P1, Characteristic((0,))) == pytest.approx(NORM_D1_M0, rel=1e-15)
    assert closed_form_norm(P2, Characteristic((0,))) == pytest.approx(NORM_D2_M0, rel=1e-15)
    assert closed_form_norm(P2, Characteristic((1,))) == pytest.approx(NORM_D2_M1, rel=1e-15)
    pblock = validate_period_data([1, 1], [[1j, 0], [0, 1j]])
    # block factorization oracle: the two elliptic factors multiply
    assert closed_form_norm(pblock, Characteristic((0, 0))) == pytest.approx(
        NORM_D1_M0 ** 2, rel=1e-14)


def test_closed_form_vs_independent_quadrature_oracle():
    assert closed_form_norm(P1, Characteristic((0,))) == pytest.approx(
        inner_product_oracle(P1, (0,), (0,), [0.0]).real, rel=1e-10)
    assert closed_form_norm(P2, Characteristic((1,))) == pytest.approx(
        inner_product_oracle(P2, (1,), (1,), [0.0]).real, rel=1e-10)


def test_quadrature_orthogonality_example():
    val = l2_inner_product_quadrature(P2, Characteristic((0,)), Characteristic((1,)),
                                      None, Q32, PLAN2)
    assert abs(val) < 1e-8 * NORM_D2_M1


def test_quadrature_diagonal_examples():
    val = l2_inner_product_quadrature(P1, Characteristic((0,)), Characteristic((0,)),
                                      None, Q32, PLAN1)
    assert val.real == pytest.approx(NORM_D1_M0, rel=1e-8)
    # mu-independence at a nonzero translation, against the m=1 closed form
    val = l2_inner_product_quadrature(P2, Characteristic((1,)), Characteristic((1,)),
                                      [0.3 + 0.2j], Q32, PLAN2)
    assert val.real == pytest.approx(NORM_D2_M1, rel=1e-8)
    assert val.real == pytest.approx(
        inner_product_oracle(P2, (1,), (1,), [0.3 + 0.2j]).real, rel=1e-8)


def test_gram_matrix_structure():
    g = gram_matrix(P2, None, Q32, PLAN2)
    diag = g.matrix.diagonal()
    assert diag[0].real == pytest.approx(NORM_D2_M0, rel=1e-8)
    assert diag[1].real == pytest.approx(NORM_D2_M1, rel=1e-8)
    assert abs(g.matrix[0, 1]) < 1e-8 * diag.real.max()
    assert np.abs(g.matrix - g.matrix.conj().T).max() < 1e-13 * diag.real.max()
    assert np.all(diag.real > 0)
    assert g.est_error < 1e-8

    g1 = gram_matrix(P1, None, Q32, PLAN1)
    assert g1.matrix.shape == (1, 1)
    assert g1.matrix[0, 0].real == pytest.approx(math.sqrt(0.5), rel=1e-10)


def test_gram_mu_independence():
    rng = np.random.default_rng(91)
    base = gram_matrix(P3, None, Q32, radius_for(P3, 1e-12))
    scale = base.matrix.diagonal().real.max()
    for _ in range(2):
        mu = rng.random() * 3 + 1j * rng.random() * P3.Z[0, 0].imag
        g = gram_matrix(P3, [mu], Q32, radius_for(P3, 1e-12))
        assert np.abs(g.matrix - base.matrix).max() < 1e-8 * scale


def test_gram_convergence_spectral():
    # visible decay at coarse node counts, floor saturation afterwards
    errs = {}
    for nodes in (4, 8, 16, 32):
        errs[nodes] = gram_matrix(P2, [0.11 + 0.23j], QuadratureSpec(nodes), PLAN2).est_error
    assert errs[8] <= errs[4] / 10.0 or (errs[4] < 1e-12 and errs[8] < 1e-12)
    assert errs[16] < 1e-12 and errs[32] < 1e-12


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(3)


def test_parallel_workers_do_not_change_bits():
    old = os.environ.get("ABELTHETA_THREADS")
    try:
        os.environ["ABELTHETA_THREADS"] = "1"
        a = gram_matrix(P2, [0.2 + 0.1j], QuadratureSpec(16, parallel=True), PLAN2)
        os.environ["ABELTHETA_THREADS"] = "3"
        b = gram_matrix(P2, [0.2 + 0.1j], QuadratureSpec(16, parallel=True), PLAN2)
    finally:
        if old is None:
            os.environ.pop("ABELTHETA_THREADS", None)
        else:
            os.environ["ABELTHETA_THREADS"] = old
    assert np.array_equal(a.matrix, b.matrix)


def test_gaussian_integral_values():
    assert gaussian_integral([[1.0]]) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    a = 2.0 * np.eye(2)
    assert gaussian_integral(a) == pytest.approx(math.pi / 2.0, rel=1e-15)
    assert gaussian_integral(a) == pytest.approx(gauss2d_oracle(a), rel=1e-8)
    with pytest.raises(NotPositiveDefinite):
        gaussian_integral([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        gaussian_integral([[1.0, 0.5], [0.2, 1.0]])


def test_unfold_check_examples():
    total, exact = unfold_check(np.array([[math.pi]]), [0.3], 8)
    assert exact == pytest.approx(1.0, rel=1e-14)
    assert total == pytest.approx(1.0, rel=1e-10)

    t2, e2 = unfold_check(np.array([[math.pi]]), [0.0], 2)
    t8, e8 = unfold_check(np.array([[math.pi]]), [0.0], 8)
    assert abs(t8 - e8) < abs(t2 - e2)
    assert abs(t8 - e8) < 1e-6

    total, exact = unfold_check(math.pi * np.eye(2), [0.1, 0.7], 6)
    assert total == pytest.approx(exact, rel=1e-8)
    assert exact == pytest.approx(1.0, rel=1e-14)

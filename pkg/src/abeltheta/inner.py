"""L2 inner products of theta sections by periodic quadrature.

The inner product pairs sections of the translated bundle over the torus:

    (theta_m, theta_m')(mu) = integral over M of
        h(z + mu) theta_m(z + mu) conj(theta_m'(z + mu)) dvol,

with h the log-quadratic metric exp(-2 pi Im w . W Im w) and
dvol = prod_a dz_{a1} dz_{a2} = (i/2)^n dz ^ dzbar.

Quadrature runs in cube coordinates t in [0,1)^{2n}, where

    z_{a1} = delta_a t_a + sum_l Re(tau_{al}) t_{n+l},
    z_{a2} = sum_l Im(tau_{al}) t_{n+l},

so the domain is the unit cube, the Jacobian is the constant
J = (prod delta_a) det(Im Z), and the integrand is exactly 1-periodic in
every t_i (the metric absorbs the section's quasi-periodicity factors). An
equispaced tensor grid is therefore a trapezoidal rule on the torus and
converges spectrally.

The closed form for the diagonal,

    I_m = sqrt(det(Im Z / 2)) (prod delta_a) exp(2 pi (m/delta).Im Z (m/delta)),

is independent of mu; `gram_matrix` reports the worst relative defect of the
quadrature diagonal against it as est_error.

Node evaluation may be split across worker threads (ABELTHETA_THREADS caps
the count); the truncation radius is fixed globally before splitting and each
point's compensated term sum is independent of the split, so results are
bitwise identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefinite
from .lattice import Characteristic, PeriodData, as_complex_vector, enumerate_characteristics
from .theta import TruncationPlan, _certified_radius, _raw_theta_sum, _tail_data

__all__ = [
    "QuadratureSpec",
    "GramResult",
    "worker_count",
    "l2_inner_product_quadrature",
    "closed_form_norm",
    "gram_matrix",
    "gaussian_integral",
    "unfold_check",
]

_GRID_CHUNK = 1 << 14


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product equispaced rule: nodes_per_axis points per cube axis."""

    nodes_per_axis: int = 32
    parallel: bool = False

    def __post_init__(self):
        if self.nodes_per_axis < 4:
            raise ValueError("nodes_per_axis must be at least 4")


@dataclass(frozen=True)
class GramResult:
    """Pairwise inner products of the theta basis at a fixed translation mu.

    matrix is Delta x Delta, indexed by the lexicographic characteristic
    order; est_error is the worst relative deviation of the diagonal from the
    closed form.
    """

    matrix: np.ndarray
    mu: np.ndarray
    est_error: float
    max_tail: float


def worker_count() -> int:
    """Worker cap from ABELTHETA_THREADS (default 1; results never depend on it)."""
    raw = os.environ.get("ABELTHETA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cube_grid_points(p: PeriodData, nodes: int) -> np.ndarray:
    """Grid images z(t) for the equispaced cube grid, shape (nodes^{2n}, n)."""
    axes = [np.arange(nodes) / nodes] * (2 * p.n)
    mesh = np.meshgrid(*axes, indexing="ij")
    t = np.stack([g.ravel() for g in mesh], axis=1)
    return t[:, : p.n] * p.delta_vec + t[:, p.n:] @ p.Z.T


def _theta_grid_values(p: PeriodData, m: Characteristic, pts: np.ndarray,
                       plan: TruncationPlan, threads: int) -> tuple[np.ndarray, float]:
    """theta_m at grid points with one globally fixed radius; thread-splittable."""
    cfrac = m.fractions(p)
    prefactor, sigma = _tail_data(p, cfrac, pts)
    radius, tail = _certified_radius(p, plan, float(prefactor.max()), float(sigma.max()))
    values = np.empty(pts.shape[0], dtype=complex)
    starts = range(0, pts.shape[0], _GRID_CHUNK)

    def fill(start: int) -> None:
        chunk = pts[start:start + _GRID_CHUNK]
        values[start:start + chunk.shape[0]] = _raw_theta_sum(p, cfrac, chunk, radius)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)
    return values, tail


def _metric_weights(p: PeriodData, w_pts: np.ndarray) -> np.ndarray:
    """exp(-2 pi Im w . W Im w) at each point."""
    y = w_pts.imag
    return np.exp(-2.0 * math.pi * np.einsum("pi,ij,pj->p", y, p.W, y))


def _gram_entries(p: PeriodData, chars, mu: np.ndarray, q: QuadratureSpec,
                  plan: TruncationPlan) -> tuple[np.ndarray, float]:
    threads = worker_count() if q.parallel else 1
    w_pts = _cube_grid_points(p, q.nodes_per_axis) + mu
    h = _metric_weights(p, w_pts)
    jac = p.Delta * float(np.linalg.det(p.im_z))
    count = w_pts.shape[0]

    values = []
    max_tail = 0.0
    for m in chars:
        vals, tail = _theta_grid_values(p, m, w_pts, plan, threads)
        values.append(vals)
        max_tail = max(max_tail, tail)

    gram = np.empty((len(chars), len(chars)), dtype=complex)
    for a, va in enumerate(values):
        ha = h * va
        for b, vb in enumerate(values):
            gram[a, b] = np.sum(ha * np.conj(vb)) * (jac / count)
    return gram, max_tail


def l2_inner_product_quadrature(p: PeriodData, m: Characteristic, m2: Characteristic,
                                mu, q: QuadratureSpec, plan: TruncationPlan) -> complex:
    """Quadrature value of (theta_m, theta_m2) at translation mu."""
    mv = np.zeros(p.n, dtype=complex) if mu is None else as_complex_vector(mu, p.n)
    gram, _ = _gram_entries(p, [m, m2], mv, q, plan)
    return complex(gram[0, 1])


def closed_form_norm(p: PeriodData, m: Characteristic) -> float:
    """Exact diagonal inner product; independent of the translation mu."""
    c = m.fractions(p)
    det_half = np.linalg.det(p.im_z / 2.0)
    return float(math.sqrt(det_half) * p.Delta *
                 math.exp(2.0 * math.pi * (c @ p.im_z @ c)))


def gram_matrix(p: PeriodData, mu, q: QuadratureSpec, plan: TruncationPlan) -> GramResult:
    """All pairwise inner products of the theta basis at translation mu."""
    mv = np.zeros(p.n, dtype=complex) if mu is None else as_complex_vector(mu, p.n)
    chars = enumerate_characteristics(p)
    gram, max_tail = _gram_entries(p, chars, mv, q, plan)
    rel = max(
        abs(gram[a, a].real - closed_form_norm(p, m)) / closed_form_norm(p, m)
        for a, m in enumerate(chars)
    )
    return GramResult(matrix=gram, mu=mv, est_error=float(rel), max_tail=max_tail)


def gaussian_integral(A) -> float:
    """Integral over R^n of exp(-x.A x) for symmetric positive definite A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be a square matrix")
    if np.abs(A - A.T).max() > 1e-12 * max(1.0, np.abs(A).max()):
        raise NotPositiveDefinite("A is not symmetric")
    try:
        chol = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("A is not positive definite") from exc
    n = A.shape[0]
    return float(math.pi ** (n / 2.0) / np.prod(np.diagonal(chol)))


def unfold_check(A, p_shift, K: int, nodes: int = 24) -> tuple[float, float]:
    """Cell-by-cell unfolding of a Gaussian against its closed-form integral.

    Computes sum over ||k||_inf <= K of the integral of exp(-x.A x) over the
    unit cube shifted by k + p_shift (Gauss-Legendre per cell), paired with
    the closed form from `gaussian_integral`. The two agree as K grows.
    """
    A = np.asarray(A, dtype=float)
    exact = gaussian_integral(A)
    n = A.shape[0]
    shift = np.asarray(p_shift, dtype=float).reshape(n)

    x1, w1 = np.polynomial.legendre.leggauss(nodes)
    x1 = 0.5 * (x1 + 1.0)  # map to [0, 1]
    w1 = 0.5 * w1
    grids = np.meshgrid(*([x1] * n), indexing="ij")
    cell_pts = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.ones(cell_pts.shape[0])
    for axis in range(n):
        wg = np.meshgrid(*([w1] * n), indexing="ij")[axis].ravel()
        weights = weights * wg

    total = 0.0
    for k in np.ndindex(*([2 * K + 1] * n)):
        offset = np.array(k, dtype=float) - K + shift
        pts = cell_pts + offset
        vals = np.exp(-np.einsum("pi,ij,pj->p", pts, A, pts))
        total += float(weights @ vals)
    return total, exact

"""Curvature forms, Chern data and flatness checks for the direct-image bundles.

Every metric in the catalogue is log-quadratic, so each curvature
Theta = -d d-bar log h is a constant-coefficient (1,1)-form obtained by linear
algebra on the quadratic exponent: for h = exp(-2 pi q(Im w)) one gets
Theta = pi sum_ab q_ab dw_a ^ dwbar_b. Finite differences appear only as a
cross-check of that exact route.

A `TwoForm` stores a coefficient matrix over one of six bases together with
an exact rational scaling vector: coeffs[a, b] = base[a, b] * s_a * s_b with
s_a a Fraction. The dual-coordinate forms carry s_a = delta_a / delta_n, and
pulling back along the polarization isogeny (mu_hat_a = (delta_n/delta_a)
mu_a) cancels those Fractions exactly, so pullback identities between
catalogue forms hold with zero residual rather than within roundoff.

Bases:
    dmu_dmubar          sum K[a,b] dmu_a ^ dmubar_b         (n x n complex)
    dmuhat_dmuhatbar    same over the dual coordinates      (n x n complex)
    mixed_z_mu          joint w = (z, mu)                   (2n x 2n complex)
    mixed_z_muhat       joint w = (z, mu_hat)               (2n x 2n complex)
    real_dx             sum_{i<j} A[i,j] dx_i ^ dx_j        (2n x 2n real antisym)
    real_deta           same over eta coordinates on M*     (2n x 2n real antisym)

Curvature-type forms have Hermitian coefficient matrices in holomorphic
bases; first-Chern forms (real 2-forms) have anti-Hermitian ones. Chern
numbers integrate top wedge powers of constant forms over the unit cell
(volume 1 in x and in eta coordinates), which reduces to n! times a Pfaffian
and is carried out in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .bundles import LogQuadraticMetric, metric_catalogue
from .inner import QuadratureSpec, closed_form_norm, gram_matrix
from .lattice import Characteristic, PeriodData, as_complex_vector, enumerate_characteristics
from .theta import TruncationPlan

__all__ = [
    "TwoForm",
    "PoincareConnection",
    "ChernData",
    "FlatnessReport",
    "TrivialityReport",
    "curvature_of_log_quadratic_metric",
    "curvature_fd_matrix",
    "curvature_fd_residual",
    "poincare_connection",
    "pullback_dual_to_mu",
    "curvature_direct_image",
    "chern_data",
    "chern_number",
    "integral_top_power",
    "flatness_report",
    "triviality_report",
    "symbolic_equal",
    "numeric_residual",
]

_HOLO_BASES = ("dmu_dmubar", "dmuhat_dmuhatbar", "mixed_z_mu", "mixed_z_muhat")
_REAL_BASES = ("real_dx", "real_deta")
_FORM_TOL = 1e-12


def _ones(count: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1) for _ in range(count))


@dataclass(frozen=True)
class TwoForm:
    """Constant-coefficient 2-form: coeffs[a,b] = base[a,b] * scale_a * scale_b."""

    basis: str
    base: np.ndarray
    scale: tuple[Fraction, ...]
    rank_factor: int = 1

    def __post_init__(self):
        base = np.asarray(self.base)
        if base.ndim != 2 or base.shape[0] != base.shape[1]:
            raise ValueError("coefficient matrix must be square")
        if len(self.scale) != base.shape[0]:
            raise ValueError("scale vector length must match the matrix size")
        tol = _FORM_TOL * max(1.0, np.abs(base).max())
        if self.basis in _REAL_BASES:
            base = np.asarray(base, dtype=float)
            if np.abs(base + base.T).max() > tol:
                raise ValueError(f"{self.basis} coefficients must be antisymmetric")
        elif self.basis in _HOLO_BASES:
            base = np.asarray(base, dtype=complex)
            herm = np.abs(base - base.conj().T).max()
            anti = np.abs(base + base.conj().T).max()
            if min(herm, anti) > tol:
                raise ValueError(
                    f"{self.basis} coefficients must be Hermitian (curvature) "
                    f"or anti-Hermitian (Chern form)"
                )
        else:
            raise ValueError(f"unknown basis {self.basis!r}")
        base = base.copy()
        base.setflags(write=False)
        object.__setattr__(self, "base", base)

    @property
    def coeffs(self) -> np.ndarray:
        if all(s == 1 for s in self.scale):
            return self.base
        sf = np.array([float(s) for s in self.scale])
        return self.base * np.outer(sf, sf)

    @property
    def n_indices(self) -> int:
        return self.base.shape[0]


def symbolic_equal(f1: TwoForm, f2: TwoForm) -> bool:
    """Exact coefficient-level equality: same basis, rank, scales and base entries."""
    return (
        f1.basis == f2.basis
        and f1.rank_factor == f2.rank_factor
        and f1.scale == f2.scale
        and f1.base.shape == f2.base.shape
        and bool(np.array_equal(f1.base, f2.base))
    )


def numeric_residual(f1: TwoForm, f2: TwoForm) -> float:
    """Largest entrywise difference of the effective coefficients."""
    return float(np.abs(f1.coeffs - f2.coeffs).max())


# ---------------------------------------------------------------------------
# basis conversions


def _dmu_to_dx_matrix(p: PeriodData) -> np.ndarray:
    """dmu_a = sum_i M[a,i] dx_i with M = (Delta_delta | Z)."""
    return np.hstack([np.diag(p.delta_vec).astype(complex), p.Z])


def _dmuhat_to_deta_matrix(p: PeriodData) -> np.ndarray:
    """dmuhat_a = sum_i N[a,i] deta_i, from the inverse of the Iso relations."""
    d = p.delta_vec
    dn = float(p.delta[-1])
    inv_d = np.diag(1.0 / d).astype(complex)
    return dn * np.hstack([inv_d @ p.Z @ inv_d, -inv_d])


def _dx_to_dmu_matrices(p: PeriodData) -> tuple[np.ndarray, np.ndarray]:
    """dx_i = sum_a (R1[i,a] dmu_a + R2[i,a] dmubar_a)."""
    inv_d = np.diag(1.0 / p.delta_vec).astype(complex)
    R1 = np.vstack([0.5j * inv_d @ np.conj(p.Z) @ p.W, -0.5j * p.W.astype(complex)])
    R2 = np.vstack([-0.5j * inv_d @ p.Z @ p.W, 0.5j * p.W.astype(complex)])
    return R1, R2


def _deta_to_dmuhat_matrices(p: PeriodData) -> tuple[np.ndarray, np.ndarray]:
    """deta_i = sum_a (S1[i,a] dmuhat_a + S2[i,a] dmuhatbar_a)."""
    d = np.diag(p.delta_vec).astype(complex)
    dn = float(p.delta[-1])
    W = p.W.astype(complex)
    top = (d @ W @ d) / (2j * dn)
    bottom = (p.re_z @ W @ d) / (2j * dn) - d / (2.0 * dn)
    S1 = np.vstack([top, bottom])
    return S1, np.conj(S1)


def _holo_to_real(K: np.ndarray, M: np.ndarray) -> np.ndarray:
    """sum K[a,b] dw_a ^ dwbar_b -> antisymmetric real coefficients over dx."""
    C = M.T @ K @ np.conj(M)
    A = C - C.T
    imag = np.abs(A.imag).max()
    if imag > _FORM_TOL * max(1.0, np.abs(A).max()):
        raise ValueError(
            "form is not real; only first-Chern-type forms convert to a real basis "
            f"(imaginary residue {imag:.3e})"
        )
    return A.real


def _real_to_holo(A: np.ndarray, R1: np.ndarray, R2: np.ndarray) -> np.ndarray:
    """Antisymmetric real coefficients -> dw ^ dwbar coefficients, checking (1,1) type."""
    offtype = R1.T @ A @ R1
    if np.abs(offtype).max() > _FORM_TOL * max(1.0, np.abs(A).max()):
        raise ValueError("form has a (2,0) component; cannot express in a (1,1) basis")
    return R1.T @ A @ R2


def to_basis(form: TwoForm, target: str, p: PeriodData) -> TwoForm:
    """Convert between the paired bases dmu <-> real_dx and dmuhat <-> real_deta."""
    if target == form.basis:
        return form
    if form.basis == "dmu_dmubar" and target == "real_dx":
        return TwoForm("real_dx", _holo_to_real(form.coeffs, _dmu_to_dx_matrix(p)),
                       _ones(2 * p.n), form.rank_factor)
    if form.basis == "dmuhat_dmuhatbar" and target == "real_deta":
        return TwoForm("real_deta", _holo_to_real(form.coeffs, _dmuhat_to_deta_matrix(p)),
                       _ones(2 * p.n), form.rank_factor)
    if form.basis == "real_dx" and target == "dmu_dmubar":
        R1, R2 = _dx_to_dmu_matrices(p)
        return TwoForm("dmu_dmubar", _real_to_holo(form.coeffs, R1, R2),
                       _ones(p.n), form.rank_factor)
    if form.basis == "real_deta" and target == "dmuhat_dmuhatbar":
        S1, S2 = _deta_to_dmuhat_matrices(p)
        return TwoForm("dmuhat_dmuhatbar", _real_to_holo(form.coeffs, S1, S2),
                       _ones(p.n), form.rank_factor)
    raise ValueError(f"no conversion from {form.basis!r} to {target!r}")


def pullback_dual_to_mu(form: TwoForm, p: PeriodData) -> TwoForm:
    """Pull a dual-coordinate form back along the isogeny lift.

    Substitutes dmuhat_a = (delta_n/delta_a) dmu_a, i.e. multiplies the
    rational scaling of each dual slot by delta_n/delta_a exactly. For the
    catalogue forms this cancels their scaling and the result shares the base
    matrix bitwise, so pullback identities can be asserted symbolically.
    """
    dn = p.delta[-1]
    if form.basis == "dmuhat_dmuhatbar":
        scale = tuple(s * Fraction(dn, d) for s, d in zip(form.scale, p.delta))
        return TwoForm("dmu_dmubar", form.base, scale, form.rank_factor)
    if form.basis == "mixed_z_muhat":
        scale = list(form.scale)
        for a, d in enumerate(p.delta):
            scale[p.n + a] = scale[p.n + a] * Fraction(dn, d)
        return TwoForm("mixed_z_mu", form.base, tuple(scale), form.rank_factor)
    raise ValueError(f"pullback applies to dual-coordinate bases, not {form.basis!r}")


# ---------------------------------------------------------------------------
# curvature of the catalogue metrics


def curvature_of_log_quadratic_metric(metric: LogQuadraticMetric) -> TwoForm:
    """Exact curvature -d dbar log h = pi sum q_ab dw_a ^ dwbar_b.

    Metrics supported on a single factor return the n x n block (the
    coordinate on a single torus factor is written mu); genuinely joint
    metrics return the full 2n x 2n mixed form.
    """
    p = metric.p
    n = p.n
    Q = metric.quadratic
    z_only = np.all(Q[:, n:] == 0.0) and np.all(Q[n:, :] == 0.0)
    mu_only = np.all(Q[:, :n] == 0.0) and np.all(Q[:n, :] == 0.0)
    if z_only:
        return TwoForm("dmu_dmubar", math.pi * Q[:n, :n], _ones(n))
    if mu_only:
        return TwoForm("dmu_dmubar", math.pi * Q[n:, n:], _ones(n))
    return TwoForm("mixed_z_mu", math.pi * Q, _ones(2 * n))


def _neg_log_h(metric: LogQuadraticMetric, w: np.ndarray) -> float:
    """-log h as a function of the joint complex coordinates w = (v, mu)."""
    y = w.imag
    return 2.0 * math.pi * float(y @ metric.quadratic @ y)


def _complex_hessian_fd(f: Callable[[np.ndarray], float], w0: np.ndarray,
                        step: float) -> np.ndarray:
    """Central-difference d^2 f / dw_a dwbar_b at w0."""
    m = w0.shape[0]
    dirs = [np.eye(m)[a] for a in range(m)] + [1j * np.eye(m)[a] for a in range(m)]

    def second(u: np.ndarray, v: np.ndarray) -> float:
        return (
            f(w0 + step * (u + v)) - f(w0 + step * (u - v))
            - f(w0 + step * (v - u)) + f(w0 - step * (u + v))
        ) / (4.0 * step * step)

    H = np.empty((m, m), dtype=complex)
    for a in range(m):
        for b in range(m):
            xx = second(dirs[a], dirs[b])
            yy = second(dirs[m + a], dirs[m + b])
            xy = second(dirs[a], dirs[m + b])
            yx = second(dirs[m + a], dirs[b])
            H[a, b] = 0.25 * (xx + yy) + 0.25j * (xy - yx)
    return H


def curvature_fd_matrix(metric: LogQuadraticMetric, w0, step: float = 1e-3) -> np.ndarray:
    """Finite-difference d dbar of -log h at w0, one Richardson level.

    Returns the full 2n x 2n mixed coefficient matrix; for the quadratic
    catalogue metrics it must match pi * metric.quadratic.
    """
    w0 = as_complex_vector(w0, 2 * metric.p.n)
    f = lambda w: _neg_log_h(metric, w)
    coarse = _complex_hessian_fd(f, w0, step)
    fine = _complex_hessian_fd(f, w0, step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def curvature_fd_residual(metric: LogQuadraticMetric, w0, step: float = 1e-3) -> float:
    """max |FD curvature - exact curvature| over all mixed coefficients."""
    H = curvature_fd_matrix(metric, w0, step)
    return float(np.abs(H - math.pi * metric.quadratic).max())


# ---------------------------------------------------------------------------
# the Poincare-bundle connection in dual coordinates


@dataclass(frozen=True)
class PoincareConnection:
    """The unitary connection form A of the Poincare bundle in dual coordinates.

    A = sum_ab ( dzbar_mu[a,b] mu_hat_b ) dzbar_a
      + sum_ab ( dz_mubar[a,b] conj(mu_hat)_b ) dz_a,

    with dzbar_mu[a,b] = pi W_ab delta_b/delta_n and dz_mubar = -dzbar_mu.
    The structurally absent pairings (holomorphic coefficient against dz,
    antiholomorphic against dzbar) are stored as exact zero blocks so the
    (2,0)/(0,2) vanishing of the curvature is a stored fact, not a tolerance.
    """

    p: PeriodData
    base: np.ndarray             # pi W
    mu_scale: tuple[Fraction, ...]

    @property
    def dzbar_mu(self) -> np.ndarray:
        sf = np.array([float(s) for s in self.mu_scale])
        return self.base * sf[None, :]

    @property
    def dz_mubar(self) -> np.ndarray:
        return -self.dzbar_mu

    @property
    def dz_mu(self) -> np.ndarray:
        return np.zeros_like(self.base)

    @property
    def dzbar_mubar(self) -> np.ndarray:
        return np.zeros_like(self.base)

    def evaluate(self, mu_hat) -> tuple[np.ndarray, np.ndarray]:
        """Coefficient vectors of dz and dzbar in A at a dual point."""
        mh = as_complex_vector(mu_hat, self.p.n)
        return self.dz_mubar @ np.conj(mh), self.dzbar_mu @ mh

    def curvature(self) -> TwoForm:
        """Exterior derivative dA as a mixed (1,1)-form over w = (z, mu_hat)."""
        n = self.p.n
        zero = np.zeros((n, n))
        base = np.block([[zero, self.base], [self.base, zero]])
        scale = _ones(n) + self.mu_scale
        return TwoForm("mixed_z_muhat", base, scale)

    def curvature_offtype(self) -> tuple[np.ndarray, np.ndarray]:
        """(2,0) and (0,2) coefficient blocks of dA; exactly zero."""
        return self.dz_mu, self.dzbar_mubar


def poincare_connection(p: PeriodData) -> PoincareConnection:
    """Connection A = pi sum W_ab ((delta_b/delta_n) mu_hat_b dzbar_a - (delta_a/delta_n) conj(mu_hat)_a dz_b)."""
    dn = p.delta[-1]
    scale = tuple(Fraction(d, dn) for d in p.delta)
    return PoincareConnection(p=p, base=math.pi * np.asarray(p.W), mu_scale=scale)


# ---------------------------------------------------------------------------
# direct images, Chern data and Chern numbers


def curvature_direct_image(p: PeriodData, side: str) -> TwoForm:
    """Curvature of the rank-Delta direct image, as scalar form times identity.

    side="E_prime": (-pi sum W_ab dmu_a ^ dmubar_b) . I_Delta, the negative
    of the base-bundle curvature. side="E": the same with coefficients
    scaled by delta_a delta_b / delta_n^2 in dual coordinates. rank_factor
    records the identity-matrix rank Delta.
    """
    base = -(math.pi * np.asarray(p.W)).astype(complex)
    if side == "E_prime":
        return TwoForm("dmu_dmubar", base, _ones(p.n), rank_factor=p.Delta)
    if side == "E":
        dn = p.delta[-1]
        scale = tuple(Fraction(d, dn) for d in p.delta)
        return TwoForm("dmuhat_dmuhatbar", base, scale, rank_factor=p.Delta)
    raise ValueError(f"side must be 'E_prime' or 'E', got {side!r}")


def _pair_form(p: PeriodData, coefficients: Sequence[float], basis: str) -> TwoForm:
    """sum_i a_i d?_i ^ d?_{n+i} as an antisymmetric coefficient matrix."""
    n = p.n
    A = np.zeros((2 * n, 2 * n))
    for i, a in enumerate(coefficients):
        A[i, n + i] = a
        A[n + i, i] = -a
    return TwoForm(basis, A, _ones(2 * n))


@dataclass(frozen=True)
class ChernData:
    """First Chern forms of the direct images in all bases used by the checks.

    c1_E_prime / c1_E_dual_coords are the holomorphic-basis forms
    -(i/2) Delta sum W dmu ^ dmubar (resp. the dual-coordinate version);
    c1_real is -Delta sum delta_i dx_i ^ dx_{n+i}; c1_E is the eta-coordinate
    form -sum (Delta/delta_i) deta_i ^ deta_{n+i}; omega_dual is its negative,
    the dual polarization, with exact integer coefficients Delta/delta_i.
    """

    c1_E_prime: TwoForm
    c1_E: TwoForm
    c1_real: TwoForm
    omega_dual: TwoForm
    c1_E_dual_coords: TwoForm
    omega_dual_integer_coeffs: tuple[int, ...]


def chern_data(p: PeriodData) -> ChernData:
    n = p.n
    dn = p.delta[-1]
    holo_base = (-0.5j * p.Delta) * np.asarray(p.W, dtype=complex)
    c1_E_prime = TwoForm("dmu_dmubar", holo_base, _ones(n))
    c1_E_dual = TwoForm("dmuhat_dmuhatbar", holo_base,
                        tuple(Fraction(d, dn) for d in p.delta))
    c1_real = _pair_form(p, [-p.Delta * d for d in p.delta], "real_dx")
    ratios = tuple(p.Delta // d for d in p.delta)  # exact: each delta_i divides Delta
    c1_E = _pair_form(p, [-r for r in ratios], "real_deta")
    omega_dual = _pair_form(p, ratios, "real_deta")
    return ChernData(
        c1_E_prime=c1_E_prime,
        c1_E=c1_E,
        c1_real=c1_real,
        omega_dual=omega_dual,
        c1_E_dual_coords=c1_E_dual,
        omega_dual_integer_coeffs=ratios,
    )


def _pfaffian(A: list[list]) -> object:
    """Pfaffian by recursive expansion along the first row (exact on ints)."""
    m = len(A)
    if m == 0:
        return 1
    if m % 2 == 1:
        return 0
    total = 0
    for j in range(1, m):
        if A[0][j] == 0:
            continue
        keep = [i for i in range(m) if i not in (0, j)]
        minor = [[A[r][c] for c in keep] for r in keep]
        total += (-1) ** (j - 1) * A[0][j] * _pfaffian(minor)
    return total


def chern_number(p: PeriodData, side: str) -> int:
    """Integral of c_1^n over the torus, by exact wedge algebra.

    The unit cell has volume 1 in x (side="E_prime") and in eta
    (side="E") coordinates, so the integral of the n-th wedge power of a
    constant form with antisymmetric integer coefficients A is n! Pf(A).
    """
    n = p.n
    if side == "E_prime":
        pair = [-p.Delta * d for d in p.delta]
    elif side == "E":
        pair = [-(p.Delta // d) for d in p.delta]
    else:
        raise ValueError(f"side must be 'E_prime' or 'E', got {side!r}")
    A = [[0] * (2 * n) for _ in range(2 * n)]
    for i, a in enumerate(pair):
        A[i][n + i] = a
        A[n + i][i] = -a
    return math.factorial(n) * _pfaffian(A)


def integral_top_power(form: TwoForm, p: PeriodData) -> float:
    """Float-path integral of the n-th wedge power of a real-basis form."""
    if form.basis not in _REAL_BASES:
        raise ValueError("top-power integrals are taken in a real basis")
    A = [[float(v) for v in row] for row in np.asarray(form.coeffs)]
    return float(math.factorial(p.n) * _pfaffian(A))


# ---------------------------------------------------------------------------
# flatness of the L2 metric and the triviality consequences


@dataclass(frozen=True)
class FlatnessReport:
    """Observed mu-dependence of the theta-basis norms.

    variation: worst relative spread of a diagonal Gram entry across the mu
    samples. dd_log_estimate: central finite-difference d dbar estimate of
    log of the diagonal, taken in the first mu coordinate at the first
    sample. Both vanish (to quadrature accuracy) for the flat L2 metric.
    """

    variation: float
    dd_log_estimate: float
    diagonals: np.ndarray  # (samples, Delta)


def _biased_diagonal(p: PeriodData, mu: np.ndarray, q: QuadratureSpec,
                     plan: TruncationPlan, metric_bias: float) -> np.ndarray:
    gram = gram_matrix(p, mu, q, plan)
    diag = gram.matrix.diagonal().real.copy()
    if metric_bias != 0.0:
        diag = diag * math.exp(metric_bias * float(np.abs(mu) ** 2 @ np.ones(p.n)))
    return diag


def flatness_report(p: PeriodData, mu_samples: Sequence, q: QuadratureSpec,
                    plan: TruncationPlan, metric_bias: float = 0.0,
                    fd_step: float = 1e-2,
                    sample_diagonals: np.ndarray | None = None) -> FlatnessReport:
    """Measure how much the diagonal inner products move with mu.

    metric_bias multiplies the metric by exp(metric_bias |mu|^2); nonzero
    values exist so tests can confirm the detector reacts to a non-invariant
    metric. Callers that already hold the Gram diagonals of the samples
    (unbiased, in sample order) can pass them to skip recomputation.
    """
    if len(mu_samples) < 3:
        raise ValueError("need at least 3 mu samples")
    mus = [as_complex_vector(mu, p.n) for mu in mu_samples]
    if sample_diagonals is not None:
        diags = np.asarray(sample_diagonals, dtype=float).copy()
        if metric_bias != 0.0:
            for row, mu in zip(diags, mus):
                row *= math.exp(metric_bias * float(np.abs(mu) ** 2 @ np.ones(p.n)))
    else:
        diags = np.array([_biased_diagonal(p, mu, q, plan, metric_bias) for mu in mus])
    spread = diags.max(axis=0) - diags.min(axis=0)
    variation = float((spread / np.abs(diags.mean(axis=0))).max())

    center = mus[0]
    e1 = np.zeros(p.n, dtype=complex)
    e1[0] = 1.0
    h = fd_step
    stencil = [center + h * e1, center - h * e1, center + 1j * h * e1, center - 1j * h * e1]
    logs = [np.log(_biased_diagonal(p, mu, q, plan, metric_bias)) for mu in stencil]
    log_center = np.log(diags[0])
    dd = (logs[0] + logs[1] + logs[2] + logs[3] - 4.0 * log_center) / (4.0 * h * h)
    return FlatnessReport(variation=variation,
                          dd_log_estimate=float(np.abs(dd).max()),
                          diagonals=diags)


@dataclass(frozen=True)
class TrivialityReport:
    """Numerically checkable consequences of the direct image splitting trivially.

    The direct image splits into line bundles spanned by the individual theta
    sections; flat norms across mu and a nowhere-vanishing norm for every
    characteristic are the measurable consequences checked here. Passing is
    evidence consistent with triviality, not a proof of it.
    """

    flatness: FlatnessReport
    min_norm: float
    norm_positive: bool
    flat_within_tol: bool
    passed: bool


def triviality_report(p: PeriodData, mu_samples: Sequence, q: QuadratureSpec,
                      plan: TruncationPlan, metric_bias: float = 0.0,
                      variation_tol: float = 1e-8,
                      flatness: FlatnessReport | None = None) -> TrivialityReport:
    flat = flatness if flatness is not None else flatness_report(
        p, mu_samples, q, plan, metric_bias=metric_bias)
    norms = [closed_form_norm(p, m) for m in enumerate_characteristics(p)]
    min_norm = float(min(norms))
    norm_positive = min_norm > 0.0
    flat_ok = flat.variation < variation_tol
    return TrivialityReport(
        flatness=flat,
        min_norm=min_norm,
        norm_positive=norm_positive,
        flat_within_tol=flat_ok,
        passed=bool(norm_positive and flat_ok),
    )

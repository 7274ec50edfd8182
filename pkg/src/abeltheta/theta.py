"""Theta functions on a polarized torus with certified lattice-sum truncation.

The series evaluated here is, for a characteristic m (fractions c = m/delta),

    theta_m(z) = sum_{k in Z^n} exp( pi i k.Z k + 2 pi i c.Z k + 2 pi i (k+c).z ).

With c = 0 this is the classical Riemann theta function. Term moduli are
governed by Y = Im Z: writing y = Im z and s = c + W y (W = Y^{-1}),

    |term_k| = exp(-pi (k+s).Y (k+s)) * exp(pi s.Y s - 2 pi c.y),

a Gaussian centred at -s. Truncation keeps k with max-norm <= R. Since
x.Y x >= lambda_min |x|_2^2 and |k+s|_2 >= max(||k||_inf - ||s||_inf, 0),
the dropped terms are bounded by

    tail(R) <= prefactor * sum_{r>R} N_n(r) exp(-pi lambda_min max(r - sigma, 0)^2)

where sigma = ||s||_inf, N_n(r) = (2r+1)^n - (2r-1)^n counts the shell
||k||_inf = r, and prefactor = exp(pi s.Y s - 2 pi c.y). This majorant is what
`radius_for` inverts and what evaluation reports as the certified tail.

Point evaluations first reduce the argument: with b = round(c + W y) integer,

    theta_m(z) = exp(-2 pi i b.z' - pi i b.Z b) * theta_m(z'),   z' = z - Z b,

which moves the Gaussian centre into [-1/2, 1/2]^n and prevents overflow of
the summand for large Im z; the reduction exponent is accumulated in log
space and exponentiated once. Reported tail bounds are absolute bounds on the
returned value (reduction factor included) and are kept <= the plan's
target_eps by enlarging the radius up to the configured cap.

Summation is shell-by-shell in increasing max-norm, lexicographic inside each
shell, with Kahan-compensated accumulation; results are therefore independent
of how callers split point batches across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EpsTooSmall, PlanError
from .lattice import Characteristic, PeriodData, as_complex_vector, lattice_shift

__all__ = [
    "TruncationPlan",
    "ThetaValue",
    "radius_for",
    "shell_tail_bound",
    "riemann_theta",
    "theta_m",
    "theta_m_translated",
    "quasiperiodicity_residual",
    "empirical_tail_mass",
    "theta_on_points",
]

DEFAULT_RADIUS_CAP = 64
DEFAULT_EPS = 1e-12
# terms below this underflow to zero in double precision; the pad keeps the
# computed majorant an upper bound for the mass dropped that way
_UNDERFLOW_PAD = 1e-315
_MIN_CERTIFIABLE_EPS = 1e-310


@dataclass(frozen=True)
class TruncationPlan:
    """Certified truncation recipe for the theta lattice sum.

    radius is the smallest R whose majorant (see module docstring) with the
    planned shift_bound stays below target_eps; evaluation may enlarge it,
    never beyond cap.
    """

    radius: int
    target_eps: float
    lambda_min: float
    shift_bound: float
    cap: int = DEFAULT_RADIUS_CAP


@dataclass(frozen=True)
class ThetaValue:
    """A theta value together with a certified absolute truncation bound."""

    value: complex
    tail_bound: float


def _shell_count(n: int, r: int) -> float:
    if r == 0:
        return 1.0
    return float((2 * r + 1) ** n - (2 * r - 1) ** n)


def shell_tail_bound(n: int, lambda_min: float, radius: int, sigma: float,
                     max_shells: int = 4096) -> float:
    """Upper bound for sum over ||k||_inf > radius of exp(-pi lambda_min max(||k||-sigma,0)^2).

    Summed shell by shell until terms underflow; the returned value includes a
    pad dominating everything dropped below the underflow threshold.
    """
    total = 0.0
    for r in range(radius + 1, radius + max_shells + 1):
        gap = max(float(r) - sigma, 0.0)
        term = _shell_count(n, r) * math.exp(-math.pi * lambda_min * gap * gap)
        total += term
        if term == 0.0 and gap > 1.0:
            return total + _UNDERFLOW_PAD
    return math.inf


def radius_for(p: PeriodData, eps: float, shift_bound: float = 0.5,
               cap: int = DEFAULT_RADIUS_CAP) -> TruncationPlan:
    """Smallest truncation radius whose certified tail stays below eps.

    shift_bound must dominate the max-norm of the Gaussian centre
    c + W Im z after argument reduction (0.5 suffices for reduced scalar
    evaluation; grid evaluation passes its own bound).
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if shift_bound < 0.0:
        raise ValueError("shift_bound must be nonnegative")
    if eps < _MIN_CERTIFIABLE_EPS:
        raise EpsTooSmall(f"eps={eps:g} is below the double-precision certification floor")
    for radius in range(1, cap + 1):
        if shell_tail_bound(p.n, p.lambda_min, radius, shift_bound) <= eps:
            return TruncationPlan(radius=radius, target_eps=eps,
                                  lambda_min=p.lambda_min, shift_bound=shift_bound, cap=cap)
    raise EpsTooSmall(
        f"no radius <= {cap} certifies eps={eps:g} "
        f"(lambda_min={p.lambda_min:g}, shift_bound={shift_bound:g})"
    )


@lru_cache(maxsize=32)
def _shell_indices(n: int, radius: int) -> np.ndarray:
    """Integer points of [-R, R]^n ordered by (max-norm shell, lexicographic)."""
    axes = [np.arange(-radius, radius + 1)] * n
    grid = np.meshgrid(*axes, indexing="ij")
    K = np.stack([g.ravel() for g in grid], axis=1)
    shells = np.abs(K).max(axis=1)
    order = np.lexsort(tuple(K[:, j] for j in reversed(range(n))) + (shells,))
    K = np.ascontiguousarray(K[order])
    K.setflags(write=False)
    return K


def _kahan_sum_terms(E: np.ndarray) -> np.ndarray:
    """Compensated sum of E over axis 0, accumulating rows in array order."""
    s = np.zeros(E.shape[1], dtype=complex)
    comp = np.zeros(E.shape[1], dtype=complex)
    for j in range(E.shape[0]):
        y = E[j] - comp
        t = s + y
        comp = (t - s) - y
        s = t
    return s


def _sum_terms_powers(K: np.ndarray, cexp: np.ndarray, cfrac: np.ndarray,
                      chunk: np.ndarray, radius: int) -> np.ndarray:
    """Kahan term sum using per-axis power tables for exp(2 pi i (k+c).z).

    Each term is cexp_k * exp(2 pi i c.z) * prod_a u_a^{k_a} with
    u_a = exp(2 pi i z_a); the powers come from cumulative products, which
    costs one multiply per table entry instead of one exp per term. Term
    order is identical to the direct path (shell-major), only the rounding
    of individual terms differs.
    """
    n_pts = chunk.shape[0]
    u = np.exp(2j * math.pi * chunk)
    base = np.exp(2j * math.pi * (chunk @ cfrac))
    tables = []
    for a in range(chunk.shape[1]):
        tab = np.empty((2 * radius + 1, n_pts), dtype=complex)
        tab[radius] = 1.0
        inv = 1.0 / u[:, a]
        for j in range(1, radius + 1):
            tab[radius + j] = tab[radius + j - 1] * u[:, a]
            tab[radius - j] = tab[radius - j + 1] * inv
        tables.append(tab)
    s = np.zeros(n_pts, dtype=complex)
    comp = np.zeros(n_pts, dtype=complex)
    for t in range(K.shape[0]):
        row = cexp[t] * base
        for a, tab in enumerate(tables):
            row = row * tab[radius + K[t, a]]
        y = row - comp
        tot = s + y
        comp = (tot - s) - y
        s = tot
    return s


def _raw_theta_sum(p: PeriodData, cfrac: np.ndarray, pts: np.ndarray, radius: int,
                   max_block_elems: int = 1 << 22) -> np.ndarray:
    """Truncated series at each point (no reduction, no tail accounting)."""
    K = _shell_indices(p.n, radius)
    quad = np.einsum("ti,ij,tj->t", K, p.Z, K)
    const = 1j * math.pi * quad + 2j * math.pi * (K @ (p.Z @ cfrac))
    values = np.empty(pts.shape[0], dtype=complex)
    block = max(1, max_block_elems // K.shape[0])
    im_max = float(np.abs(pts.imag).max()) if pts.size else 0.0
    # power tables hold u^(+-R); stay far from the overflow threshold
    fast = 2.0 * math.pi * radius * im_max < 600.0
    cexp = np.exp(const) if fast else None
    for start in range(0, pts.shape[0], block):
        chunk = pts[start:start + block]
        if fast:
            values[start:start + chunk.shape[0]] = _sum_terms_powers(
                K, cexp, cfrac, chunk, radius)
        else:
            phase = 2j * math.pi * ((K + cfrac) @ chunk.T)
            E = np.exp(phase + const[:, None])
            values[start:start + chunk.shape[0]] = _kahan_sum_terms(E)
    return values


def _tail_data(p: PeriodData, cfrac: np.ndarray, pts: np.ndarray):
    """Per-point prefactor and max-norm of the Gaussian centre c + W Im z."""
    y = pts.imag
    s = cfrac + y @ p.W
    sigma = np.abs(s).max(axis=1)
    quad = np.einsum("pi,ij,pj->p", s, p.im_z, s)
    prefactor = np.exp(math.pi * quad - 2.0 * math.pi * (y @ cfrac))
    return prefactor, sigma


def _certified_radius(p: PeriodData, plan: TruncationPlan, bound_scale: float,
                      sigma: float) -> tuple[int, float]:
    """Smallest radius >= plan.radius with bound_scale * majorant <= target_eps."""
    for radius in range(plan.radius, plan.cap + 1):
        tail = bound_scale * shell_tail_bound(p.n, plan.lambda_min, radius, sigma)
        if tail <= plan.target_eps:
            return radius, tail
    raise PlanError(
        f"cannot certify tail <= {plan.target_eps:g} within radius cap {plan.cap} "
        f"(needed scale {bound_scale:g}, sigma {sigma:g})"
    )


def theta_on_points(p: PeriodData, m: Characteristic, pts: np.ndarray,
                    plan: TruncationPlan) -> tuple[np.ndarray, float]:
    """Evaluate theta_m at many points without argument reduction.

    Intended for quadrature grids, where Im z is already bounded. Returns the
    values and a single certified absolute tail bound valid for every point.
    """
    pts = np.asarray(pts, dtype=complex)
    cfrac = m.fractions(p)
    prefactor, sigma = _tail_data(p, cfrac, pts)
    radius, tail = _certified_radius(p, plan, float(prefactor.max()), float(sigma.max()))
    values = _raw_theta_sum(p, cfrac, pts, radius)
    return values, tail


def _theta_point(p: PeriodData, cfrac: np.ndarray, z: np.ndarray,
                 plan: TruncationPlan) -> ThetaValue:
    """Reduced single-point evaluation with certified absolute tail bound."""
    y = z.imag
    b = np.rint(cfrac + p.W @ y)
    zred = z - p.Z @ b
    # quasi-periodicity factor for the shift by Z b, assembled in log space
    red_log = -2j * math.pi * (b @ zred) - 1j * math.pi * (b @ (p.Z @ b))
    factor = np.exp(red_log)

    pts = zred[None, :]
    prefactor, sigma = _tail_data(p, cfrac, pts)
    scale = float(prefactor[0]) * abs(factor)
    radius, tail = _certified_radius(p, plan, scale, float(sigma[0]))
    value = factor * _raw_theta_sum(p, cfrac, pts, radius)[0]
    return ThetaValue(value=complex(value), tail_bound=tail)


def riemann_theta(p: PeriodData, z, plan: TruncationPlan) -> ThetaValue:
    """The Riemann theta function sum_k exp(pi i k.Z k + 2 pi i k.z)."""
    zv = as_complex_vector(z, p.n)
    return _theta_point(p, np.zeros(p.n), zv, plan)


def theta_m(p: PeriodData, m: Characteristic, z, plan: TruncationPlan,
            path: str = "direct") -> ThetaValue:
    """Theta basis element for characteristic m.

    path="direct" sums the defining series. path="reduce_to_riemann" uses the
    identity theta_m(z) = exp(2 pi i c.z) * riemann_theta(z + Z c) with
    c = m/delta; the two agree within the combined tail bounds.
    """
    zv = as_complex_vector(z, p.n)
    cfrac = m.fractions(p)
    if path == "direct":
        return _theta_point(p, cfrac, zv, plan)
    if path == "reduce_to_riemann":
        base = riemann_theta(p, zv + p.Z @ cfrac, plan)
        pref = np.exp(2j * math.pi * (cfrac @ zv))
        return ThetaValue(value=complex(pref * base.value),
                          tail_bound=abs(pref) * base.tail_bound)
    raise ValueError(f"path must be 'direct' or 'reduce_to_riemann', got {path!r}")


def theta_m_translated(p: PeriodData, m: Characteristic, v, mu,
                       plan: TruncationPlan) -> ThetaValue:
    """Section value theta_m(v; mu), which by definition equals theta_m(v + mu)."""
    vv = as_complex_vector(v, p.n)
    mv = as_complex_vector(mu, p.n)
    return theta_m(p, m, vv + mv, plan)


def empirical_tail_mass(p: PeriodData, m: Characteristic, z, plan: TruncationPlan,
                        extra_shells: int = 40) -> tuple[float, float]:
    """(sum of |terms| over the shells just past the certified radius, bound).

    Mirrors the reduction and radius selection of a point evaluation, then
    adds up the moduli of the next `extra_shells` shells of the reduced
    series (scaled by the reduction factor, like the reported bound). The
    first component can never exceed the second.
    """
    zv = as_complex_vector(z, p.n)
    cfrac = m.fractions(p)
    b = np.rint(cfrac + p.W @ zv.imag)
    zred = zv - p.Z @ b
    factor = abs(np.exp(-2j * math.pi * (b @ zred) - 1j * math.pi * (b @ (p.Z @ b))))
    prefactor, sigma = _tail_data(p, cfrac, zred[None, :])
    radius, bound = _certified_radius(p, plan, float(prefactor[0]) * factor, float(sigma[0]))
    big = _shell_indices(p.n, radius + extra_shells)
    K = big[np.abs(big).max(axis=1) > radius]
    quad = np.einsum("ti,ij,tj->t", K, p.Z, K)
    expo = (1j * math.pi * quad + 2j * math.pi * (K @ (p.Z @ cfrac))
            + 2j * math.pi * ((K + cfrac) @ zred))
    return float(factor * np.abs(np.exp(expo)).sum()), bound


def quasiperiodicity_residual(p: PeriodData, m: Characteristic, z, generator: int,
                              plan: TruncationPlan, perturb: float = 0.0) -> float:
    """Defect of the lattice transformation law at z for one generator (1..2n).

    Generators 1..n shift z_alpha by delta_alpha and leave theta_m invariant;
    generator n+alpha shifts z by the row tau_{alpha,.} and multiplies by
    exp(-2 pi i z_alpha - pi i tau_{alpha alpha}). The residual is normalized
    by max(1, |theta_m(z)|, |expected|): the quasi-periodicity factor can be
    exponentially large, and without the last term the residual would merely
    report roundoff amplified by that scale. `perturb` scales the expected
    factor by exp(perturb) and exists so tests can confirm the detector fires.
    """
    zv = as_complex_vector(z, p.n)
    base = theta_m(p, m, zv, plan).value
    shifted = theta_m(p, m, zv + lattice_shift(p, generator), plan).value
    if generator <= p.n:
        expected = base
    else:
        alpha = generator - p.n - 1
        expected = np.exp(-2j * math.pi * zv[alpha] - 1j * math.pi * p.Z[alpha, alpha]) * base
    if perturb != 0.0:
        expected = expected * math.exp(perturb)
    return float(abs(shifted - expected) / max(1.0, abs(base), abs(expected)))

"""Multiplier systems, Hermitian metrics and the trivializing section.

Every line bundle handled here is described by its multipliers: nowhere-zero
holomorphic factors e_lambda attached to the lattice generators, each stored
symbolically as exp(const + a.z + b.mu) with an affine-linear exponent. The
symbolic storage lets the cocycle compatibility conditions be checked by
coefficient arithmetic (exact zeros for the catalogue systems) as well as
numerically at sample points.

Bundles over the single torus M use generators 1..2n acting on v. Bundles
over the product M x M use generators 1..4n: indices 1..2n shift v, indices
2n+1..2n+2n shift mu, in both cases by delta_alpha e_alpha (first half) or by
the row tau_{alpha,.} of Z (second half).

The catalogue:

    L0          e_alpha = 1,  e_{n+alpha} = exp(-2 pi i z_a - pi i tau_aa)
    Lmu         translate of L0:          exp(-2 pi i (z_a + mu_a) - pi i tau_aa)
    Ktilde      on M x M, both variable families carry the Lmu-type factor
    PullbackP   on M x M: e_{n+a,0} = exp(-2 pi i mu_a), e_{0,n+b} = exp(-2 pi i z_b)
    CalL_xi     flat bundle with constant multipliers exp(i xi_j)
    P_muhat     e_{n+a} = exp(-2 pi i (delta_a/delta_n) mu_hat_a)
    L_Delta_xi  CalL_xi twisted by P_muhat^*, rewritten purely in xi

Metrics are log-quadratic: h = exp(-2 pi q(Im z, Im mu)) for a real symmetric
coefficient matrix q, which makes curvatures exact linear algebra downstream.
The catalogue enum of bundles and metrics is closed on purpose: these are the
systems the verification suites exercise, and adding one is a code change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import MissingParam
from .lattice import Characteristic, PeriodData, as_complex_vector, as_real_vector, lattice_shift
from .theta import ThetaValue, TruncationPlan, theta_m_translated

__all__ = [
    "AffineExponent",
    "MultiplierSystem",
    "LogQuadraticMetric",
    "BUNDLE_IDS",
    "METRIC_IDS",
    "multiplier_system",
    "cocycle_residual",
    "symbolic_cocycle_residual",
    "metric_catalogue",
    "metric_eval",
    "metric_quasiperiodicity_residual",
    "section_transformation_residual",
    "trivializing_section",
    "trivializing_section_exponents",
]

_TWO_PI_I = 2j * math.pi

BUNDLE_IDS = ("L0", "Lmu", "Ktilde", "PullbackP", "CalL_xi", "P_muhat", "L_Delta_xi")
METRIC_IDS = ("h_L0", "h_Lmu", "h_P", "h_Ktilde", "h_pi1L0", "h_pi2L0")


@dataclass(frozen=True)
class AffineExponent:
    """Exponent const + z_coeff.z + mu_coeff.mu of one multiplier."""

    const: complex
    z_coeff: np.ndarray
    mu_coeff: np.ndarray

    @staticmethod
    def zero(n: int) -> "AffineExponent":
        return AffineExponent(0j, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))

    def __add__(self, other: "AffineExponent") -> "AffineExponent":
        return AffineExponent(self.const + other.const,
                              self.z_coeff + other.z_coeff,
                              self.mu_coeff + other.mu_coeff)

    def __sub__(self, other: "AffineExponent") -> "AffineExponent":
        return AffineExponent(self.const - other.const,
                              self.z_coeff - other.z_coeff,
                              self.mu_coeff - other.mu_coeff)

    def shifted(self, dz: Optional[np.ndarray] = None,
                dmu: Optional[np.ndarray] = None) -> "AffineExponent":
        """Substitute z -> z + dz, mu -> mu + dmu; only the constant moves."""
        const = self.const
        if dz is not None:
            const = const + self.z_coeff @ dz
        if dmu is not None:
            const = const + self.mu_coeff @ dmu
        return AffineExponent(const, self.z_coeff, self.mu_coeff)

    def scaled(self, factor: float) -> "AffineExponent":
        return AffineExponent(factor * self.const, factor * self.z_coeff, factor * self.mu_coeff)

    def __call__(self, v: np.ndarray, mu: np.ndarray) -> complex:
        return complex(self.const + self.z_coeff @ v + self.mu_coeff @ mu)


@dataclass(frozen=True)
class MultiplierSystem:
    """Closed-form multipliers of one catalogue bundle.

    exponents[g-1] is the exponent of e_{lambda_g}; `base` is "M" (2n
    generators) or "MxM" (4n generators, v-family first).
    """

    bundle_id: str
    p: PeriodData
    base: str
    exponents: tuple[AffineExponent, ...]
    params: dict

    @property
    def generator_count(self) -> int:
        return len(self.exponents)

    def multiplier(self, generator: int, v, mu=None) -> complex:
        """Value of e_{lambda_generator} at (v, mu)."""
        vv = as_complex_vector(v, self.p.n)
        mv = np.zeros(self.p.n) if mu is None else as_complex_vector(mu, self.p.n)
        return complex(np.exp(self.exponents[generator - 1](vv, mv)))

    def generator_shift(self, generator: int) -> tuple[Optional[np.ndarray], Optional[np.ndarray]]:
        """(dz, dmu) performed by the given generator."""
        two_n = 2 * self.p.n
        if not 1 <= generator <= self.generator_count:
            raise ValueError(f"generator must be in 1..{self.generator_count}, got {generator}")
        if generator <= two_n:
            return lattice_shift(self.p, generator), None
        return None, lattice_shift(self.p, generator - two_n)

    def perturbed(self, generator: int, scale: float) -> "MultiplierSystem":
        """Copy with one exponent scaled; used to confirm the cocycle detector fires."""
        exps = list(self.exponents)
        exps[generator - 1] = exps[generator - 1].scaled(scale)
        return replace(self, exponents=tuple(exps))


def _l0_family_exponents(p: PeriodData, on_mu: bool, extra_mu: bool) -> list[AffineExponent]:
    """The 2n exponents of an L0-type factor acting through one variable.

    on_mu selects which variable the generators shift / which coordinate
    enters the exponent; extra_mu adds the translation term -2 pi i mu_a of
    the Ktilde family (both coordinates present).
    """
    n = p.n
    out = [AffineExponent.zero(n) for _ in range(n)]
    for a in range(n):
        z_coeff = np.zeros(n, dtype=complex)
        mu_coeff = np.zeros(n, dtype=complex)
        if on_mu:
            mu_coeff[a] = -_TWO_PI_I
            if extra_mu:
                z_coeff[a] = -_TWO_PI_I
        else:
            z_coeff[a] = -_TWO_PI_I
            if extra_mu:
                mu_coeff[a] = -_TWO_PI_I
        out.append(AffineExponent(-1j * math.pi * p.Z[a, a], z_coeff, mu_coeff))
    return out


def multiplier_system(p: PeriodData, bundle_id: str, mu=None, xi=None,
                      mu_hat=None) -> MultiplierSystem:
    """Build the closed-form multiplier system of a catalogue bundle.

    Raises MissingParam when the bundle needs mu (Lmu), xi (CalL_xi,
    L_Delta_xi) or mu_hat (P_muhat) and it was not supplied.
    """
    n = p.n
    zero = AffineExponent.zero(n)
    params: dict = {}

    if bundle_id == "L0":
        exps = _l0_family_exponents(p, on_mu=False, extra_mu=False)
        return MultiplierSystem("L0", p, "M", tuple(exps), params)

    if bundle_id == "Lmu":
        if mu is None:
            raise MissingParam("bundle Lmu requires mu")
        mv = as_complex_vector(mu, n)
        params["mu"] = mv
        exps = [zero] * n
        for a in range(n):
            z_coeff = np.zeros(n, dtype=complex)
            z_coeff[a] = -_TWO_PI_I
            const = -_TWO_PI_I * mv[a] - 1j * math.pi * p.Z[a, a]
            exps.append(AffineExponent(const, z_coeff, np.zeros(n, dtype=complex)))
        return MultiplierSystem("Lmu", p, "M", tuple(exps), params)

    if bundle_id == "Ktilde":
        v_family = _l0_family_exponents(p, on_mu=False, extra_mu=True)
        mu_family = _l0_family_exponents(p, on_mu=True, extra_mu=True)
        return MultiplierSystem("Ktilde", p, "MxM", tuple(v_family + mu_family), params)

    if bundle_id == "PullbackP":
        exps = [zero] * n
        for a in range(n):
            mu_coeff = np.zeros(n, dtype=complex)
            mu_coeff[a] = -_TWO_PI_I
            exps.append(AffineExponent(0j, np.zeros(n, dtype=complex), mu_coeff))
        exps += [zero] * n
        for b in range(n):
            z_coeff = np.zeros(n, dtype=complex)
            z_coeff[b] = -_TWO_PI_I
            exps.append(AffineExponent(0j, z_coeff, np.zeros(n, dtype=complex)))
        return MultiplierSystem("PullbackP", p, "MxM", tuple(exps), params)

    if bundle_id == "CalL_xi":
        if xi is None:
            raise MissingParam("bundle CalL_xi requires xi")
        xv = as_real_vector(getattr(xi, "xi", xi), 2 * n)
        params["xi"] = xv
        exps = [AffineExponent(1j * xv[j], np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))
                for j in range(2 * n)]
        return MultiplierSystem("CalL_xi", p, "M", tuple(exps), params)

    if bundle_id == "P_muhat":
        if mu_hat is None:
            raise MissingParam("bundle P_muhat requires mu_hat")
        mh = as_complex_vector(mu_hat, n)
        params["mu_hat"] = mh
        d = p.delta_vec
        dn = float(p.delta[-1])
        exps = [zero] * n
        for a in range(n):
            const = -_TWO_PI_I * (d[a] / dn) * mh[a]
            exps.append(AffineExponent(const, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex)))
        return MultiplierSystem("P_muhat", p, "M", tuple(exps), params)

    if bundle_id == "L_Delta_xi":
        if xi is None:
            raise MissingParam("bundle L_Delta_xi requires xi")
        xv = as_real_vector(getattr(xi, "xi", xi), 2 * n)
        params["xi"] = xv
        d = p.delta_vec
        exps = [AffineExponent(1j * xv[a], np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))
                for a in range(n)]
        for a in range(n):
            const = 1j * ((p.Z[a, :] / d) @ xv[:n])
            exps.append(AffineExponent(const, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex)))
        return MultiplierSystem("L_Delta_xi", p, "M", tuple(exps), params)

    raise ValueError(f"unknown bundle_id {bundle_id!r}; expected one of {BUNDLE_IDS}")


def _pi_star_l0(p: PeriodData, factor: int) -> MultiplierSystem:
    """Pullback of L0 along projection onto factor 1 (v) or 2 (mu) of M x M."""
    n = p.n
    zero = AffineExponent.zero(n)
    family = _l0_family_exponents(p, on_mu=(factor == 2), extra_mu=False)
    if factor == 1:
        exps = family + [zero] * (2 * n)
    else:
        exps = [zero] * (2 * n) + family
    return MultiplierSystem(f"pi{factor}_L0", p, "MxM", tuple(exps), {})


def _cocycle_sides(ms: MultiplierSystem, i: int, j: int) -> tuple[AffineExponent, AffineExponent]:
    """Exponents of e_i(. + lambda_j) e_j(.) and e_j(. + lambda_i) e_i(.)."""
    dzi, dmui = ms.generator_shift(i)
    dzj, dmuj = ms.generator_shift(j)
    lhs = ms.exponents[i - 1].shifted(dz=dzj, dmu=dmuj) + ms.exponents[j - 1]
    rhs = ms.exponents[j - 1].shifted(dz=dzi, dmu=dmui) + ms.exponents[i - 1]
    return lhs, rhs


def symbolic_cocycle_residual(ms: MultiplierSystem, i: int, j: int) -> float:
    """Coefficient-level defect of the compatibility relation for (i, j).

    Both sides carry the same affine coefficients and the same two original
    constants, which cancel identically; what remains is the difference of
    the two shift increments, and it must be an integer multiple of 2 pi i
    (the multipliers then agree as exponentials). The cancellation is done
    at the term level, not by subtracting rounded sums, so the residual is
    exactly 0.0 for every catalogue system.
    """
    dzi, dmui = ms.generator_shift(i)
    dzj, dmuj = ms.generator_shift(j)
    ei = ms.exponents[i - 1]
    ej = ms.exponents[j - 1]

    def increment(form: AffineExponent, dz, dmu) -> complex:
        inc = 0j
        if dz is not None:
            inc = inc + form.z_coeff @ dz
        if dmu is not None:
            inc = inc + form.mu_coeff @ dmu
        return inc

    inc_ij = increment(ei, dzj, dmuj)
    inc_ji = increment(ej, dzi, dmui)
    coeff_resid = max(
        np.abs((ei.z_coeff + ej.z_coeff) - (ej.z_coeff + ei.z_coeff)).max(),
        np.abs((ei.mu_coeff + ej.mu_coeff) - (ej.mu_coeff + ei.mu_coeff)).max(),
    )
    diff = inc_ij - inc_ji
    k = round((diff / _TWO_PI_I).real)
    return float(max(coeff_resid, abs(diff - k * _TWO_PI_I)))


def cocycle_residual(ms: MultiplierSystem, i: int, j: int, v, mu=None) -> float:
    """|LHS - RHS| / max(1, |RHS|) of the compatibility relation at (v, mu)."""
    vv = as_complex_vector(v, ms.p.n)
    mv = np.zeros(ms.p.n) if mu is None else as_complex_vector(mu, ms.p.n)
    lhs, rhs = _cocycle_sides(ms, i, j)
    lhs_val = np.exp(lhs(vv, mv))
    rhs_val = np.exp(rhs(vv, mv))
    return float(abs(lhs_val - rhs_val) / max(1.0, abs(rhs_val)))


@dataclass(frozen=True)
class LogQuadraticMetric:
    """Hermitian metric exp(-2 pi q(Im z, Im mu)) with symmetric coefficients q."""

    metric_id: str
    p: PeriodData
    quadratic: np.ndarray  # (2n, 2n) over the stacked vector (Im z, Im mu)
    needs_mu: bool

    def value(self, v, mu=None) -> float:
        yz = as_complex_vector(v, self.p.n).imag
        if mu is None:
            if self.needs_mu:
                raise MissingParam(f"metric {self.metric_id} requires mu")
            ym = np.zeros(self.p.n)
        else:
            ym = as_complex_vector(mu, self.p.n).imag
        stacked = np.concatenate([yz, ym])
        return float(np.exp(-2.0 * math.pi * (stacked @ self.quadratic @ stacked)))


def metric_catalogue(p: PeriodData, metric_id: str) -> LogQuadraticMetric:
    n = p.n
    W = np.asarray(p.W)
    zero = np.zeros((n, n))
    blocks = {
        "h_L0": ([[W, zero], [zero, zero]], False),
        "h_Lmu": ([[W, W], [W, W]], True),
        "h_Ktilde": ([[W, W], [W, W]], True),
        "h_P": ([[zero, W], [W, zero]], True),
        "h_pi1L0": ([[W, zero], [zero, zero]], False),
        "h_pi2L0": ([[zero, zero], [zero, W]], True),
    }
    if metric_id not in blocks:
        raise ValueError(f"unknown metric_id {metric_id!r}; expected one of {METRIC_IDS}")
    q, needs_mu = blocks[metric_id]
    return LogQuadraticMetric(metric_id, p, np.block(q), needs_mu)


def metric_eval(p: PeriodData, metric_id: str, v, mu=None) -> float:
    """Value of a catalogue metric at (v, mu); raises MissingParam when mu is needed."""
    return metric_catalogue(p, metric_id).value(v, mu)


def _paired_system(p: PeriodData, metric_id: str, mu) -> MultiplierSystem:
    """Multiplier system whose transformation law the metric satisfies."""
    if metric_id == "h_L0":
        return multiplier_system(p, "L0")
    if metric_id == "h_Lmu":
        if mu is None:
            raise MissingParam("metric h_Lmu requires mu")
        return multiplier_system(p, "Lmu", mu=mu)
    if metric_id == "h_Ktilde":
        return multiplier_system(p, "Ktilde")
    if metric_id == "h_P":
        return multiplier_system(p, "PullbackP")
    if metric_id == "h_pi1L0":
        return _pi_star_l0(p, 1)
    if metric_id == "h_pi2L0":
        return _pi_star_l0(p, 2)
    raise ValueError(f"unknown metric_id {metric_id!r}")


def metric_quasiperiodicity_residual(p: PeriodData, metric_id: str, generator: int,
                                     v, mu=None) -> float:
    """Relative defect of h(x + lambda) = |e_lambda(x)|^{-2} h(x) at (v, mu).

    For the h_Lmu metric the law is taken in the v variable with mu the fixed
    translation parameter; joint metrics (h_Ktilde, h_P, h_pi*) also accept
    generators 2n+1..4n acting on mu.
    """
    metric = metric_catalogue(p, metric_id)
    system = _paired_system(p, metric_id, mu)
    vv = as_complex_vector(v, p.n)
    mv = np.zeros(p.n, dtype=complex) if mu is None else as_complex_vector(mu, p.n)

    if system.base == "M":
        if not 1 <= generator <= 2 * p.n:
            raise ValueError(f"generator must be in 1..{2 * p.n} for metric {metric_id}")
        dz, dmu = lattice_shift(p, generator), None
    else:
        dz, dmu = system.generator_shift(generator)

    v_shift = vv + dz if dz is not None else vv
    mu_shift = mv + dmu if dmu is not None else mv
    mu_arg = mu_shift if (metric.needs_mu or mu is not None) else None

    h0 = metric.value(vv, mv if (metric.needs_mu or mu is not None) else None)
    h1 = metric.value(v_shift, mu_arg)
    factor = abs(np.exp(system.exponents[generator - 1](vv, mv))) ** (-2.0)
    # metrics are positive, so the relative defect is cleanest as a ratio
    return float(abs(h1 / (factor * h0) - 1.0))


def section_transformation_residual(p: PeriodData, m: Characteristic, generator: int,
                                    v, mu, plan: TruncationPlan) -> float:
    """Defect of theta_m(v; mu) under one M x M lattice generator of Ktilde.

    Checks theta_m(v + dz; mu + dmu) = e_lambda(v; mu) theta_m(v; mu) with the
    Ktilde multipliers, normalized by max(1, |theta_m(v; mu)|, |expected|) so
    that exponentially large multipliers do not just amplify roundoff.
    """
    system = multiplier_system(p, "Ktilde")
    vv = as_complex_vector(v, p.n)
    mv = as_complex_vector(mu, p.n)
    dz, dmu = system.generator_shift(generator)
    v_shift = vv + dz if dz is not None else vv
    mu_shift = mv + dmu if dmu is not None else mv
    base = theta_m_translated(p, m, vv, mv, plan).value
    shifted = theta_m_translated(p, m, v_shift, mu_shift, plan).value
    expected = np.exp(system.exponents[generator - 1](vv, mv)) * base
    return float(abs(shifted - expected) / max(1.0, abs(base), abs(expected)))


def trivializing_section(p: PeriodData, xi, z) -> complex:
    """The nowhere-zero section Phi_xi(z) = exp(i sum_a (xi_a/delta_a) z_a)."""
    xv = as_real_vector(getattr(xi, "xi", xi), 2 * p.n)
    zv = as_complex_vector(z, p.n)
    return complex(np.exp(1j * ((xv[: p.n] / p.delta_vec) @ zv)))


def trivializing_section_exponents(p: PeriodData, xi) -> tuple[complex, ...]:
    """Closed-form log transformation factors of Phi_xi for generators 1..2n.

    Shifting z_a by delta_a multiplies Phi_xi by exp(i xi_a); shifting by the
    row tau_{a,.} multiplies it by exp(i sum_b (tau_{ab}/delta_b) xi_b). These
    coincide with the L_Delta_xi multiplier exponents.
    """
    xv = as_real_vector(getattr(xi, "xi", xi), 2 * p.n)
    d = p.delta_vec
    first = [1j * xv[a] for a in range(p.n)]
    second = [1j * ((p.Z[a, :] / d) @ xv[: p.n]) for a in range(p.n)]
    return tuple(complex(c) for c in first + second)

"""Period-matrix data model and coordinate systems on a polarized complex torus.

Conventions. The torus is M = V/Lambda with dim_C V = n. A lattice basis
lambda_1, ..., lambda_2n is chosen so that the polarization form is
sum_i delta_i dx_i ^ dx_{n+i} in the dual real coordinates x_1, ..., x_2n,
with elementary divisors delta_1 | delta_2 | ... | delta_n. In the complex
basis v_alpha = lambda_alpha / delta_alpha the period matrix is the n x 2n
block (Delta_delta, Z): lambda_alpha = delta_alpha v_alpha and
lambda_{n+alpha} = sum_k tau_{alpha k} v_k, where Z = (tau_{alpha beta}) is
symmetric with positive definite imaginary part. W denotes (Im Z)^{-1}.

Complex coordinates of a point relate to the real lattice coordinates by

    z_alpha = delta_alpha x_alpha + sum_k tau_{alpha k} x_{n+k}.

The dual torus Pic^0(M) carries complex coordinates mu_hat_alpha in the
basis v*_alpha = (delta_alpha/delta_n) dy*_alpha, and the real model
M* = V*/(2 pi Lambda*) carries coordinates xi (with eta = xi / (2 pi)).
`iso_map` converts between the two; `phi_L0_lift` is the lift of the
polarization isogeny M -> Pic^0(M), which scales coordinates by
delta_n / delta_alpha.

Points are never reduced modulo the lattice automatically: theta values are
quasi-periodic rather than periodic, so any wrap must be explicit at the
call site.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisibilityViolation, NotPositiveDefinite, NotSymmetric

__all__ = [
    "PeriodData",
    "ComplexPoint",
    "RealPoint",
    "DualComplexPoint",
    "DualRealPoint",
    "Characteristic",
    "validate_period_data",
    "real_to_complex",
    "complex_to_real",
    "phi_L0_lift",
    "iso_map",
    "enumerate_characteristics",
    "cube_to_point",
    "random_cube_points",
    "lattice_shift",
]

_SYMMETRY_RTOL = 1e-12


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def as_complex_vector(x, n: int) -> np.ndarray:
    """Coerce a point-like object to a finite complex vector of length n."""
    v = np.asarray(getattr(x, "coords", x), dtype=complex).reshape(-1)
    if v.shape != (n,):
        raise ValueError(f"expected a length-{n} vector, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise ValueError("point has non-finite entries")
    return v


def as_real_vector(x, m: int) -> np.ndarray:
    v = np.asarray(getattr(x, "coords", x), dtype=float).reshape(-1)
    if v.shape != (m,):
        raise ValueError(f"expected a length-{m} real vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("point has non-finite entries")
    return v


@dataclass(frozen=True)
class PeriodData:
    """Validated period matrix (Delta_delta, Z) of a polarized complex torus.

    Attributes
    ----------
    n : complex dimension.
    delta : polarization type (delta_1, ..., delta_n), a divisor chain.
    Z : symmetric n x n complex matrix with Im Z positive definite.
    W : (Im Z)^{-1}, cached for metric and truncation formulas.
    Delta : product of the delta_alpha = rank of the theta space.
    lambda_min : smallest eigenvalue of Im Z, used by truncation bounds.
    """

    n: int
    delta: tuple[int, ...]
    Z: np.ndarray
    W: np.ndarray
    Delta: int
    lambda_min: float

    @property
    def im_z(self) -> np.ndarray:
        return self.Z.imag

    @property
    def re_z(self) -> np.ndarray:
        return self.Z.real

    @property
    def delta_vec(self) -> np.ndarray:
        return np.array(self.delta, dtype=float)

    def __repr__(self) -> str:  # keep reprs short in reports
        return f"PeriodData(n={self.n}, delta={list(self.delta)})"


@dataclass(frozen=True)
class ComplexPoint:
    """Point of V in the complex coordinates z_alpha dual to v_alpha."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(np.asarray(self.coords, dtype=complex)))


@dataclass(frozen=True)
class RealPoint:
    """Point of V in the real coordinates x_1..x_{2n} dual to the lattice basis."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(np.asarray(self.coords, dtype=float)))


@dataclass(frozen=True)
class DualComplexPoint:
    """Point of the dual torus in the coordinates mu_hat_alpha (basis v*_alpha)."""

    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(np.asarray(self.coords, dtype=complex)))


@dataclass(frozen=True)
class DualRealPoint:
    """Point of M* = V*/(2 pi Lambda*): xi coordinates, with eta = xi/(2 pi)."""

    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", _readonly(np.asarray(self.xi, dtype=float)))

    @property
    def eta(self) -> np.ndarray:
        return self.xi / (2.0 * math.pi)


@dataclass(frozen=True)
class Characteristic:
    """Index m with 0 <= m_alpha < delta_alpha labelling a theta basis element."""

    m: tuple[int, ...]

    @staticmethod
    def of(p: PeriodData, m: Iterable[int]) -> "Characteristic":
        mt = tuple(int(v) for v in m)
        if len(mt) != p.n:
            raise ValueError(f"characteristic has length {len(mt)}, expected {p.n}")
        for alpha, (m_a, d_a) in enumerate(zip(mt, p.delta), start=1):
            if not 0 <= m_a < d_a:
                raise ValueError(
                    f"characteristic out of range: m_{alpha}={m_a} not in [0, {d_a})"
                )
        return Characteristic(mt)

    def fractions(self, p: PeriodData) -> np.ndarray:
        """The vector m_alpha / delta_alpha entering series and norm formulas."""
        return np.array(self.m, dtype=float) / p.delta_vec


def validate_period_data(delta: Sequence[int], Z) -> PeriodData:
    """Check and package a period matrix.

    Raises DivisibilityViolation if the delta chain fails delta_a | delta_{a+1},
    NotSymmetric if max|Z - Z^T| exceeds 1e-12 * max|Z| (inputs are decimals,
    exact symmetry cannot be assumed), and NotPositiveDefinite if the smallest
    eigenvalue of Im Z is <= 0. Z is stored symmetrized so that transposition
    identities downstream hold exactly.
    """
    delta = tuple(int(d) for d in delta)
    if len(delta) == 0:
        raise ValueError("delta must be nonempty")
    if any(d < 1 for d in delta):
        raise DivisibilityViolation(f"polarization type must be positive, got {delta}")
    for a in range(len(delta) - 1):
        if delta[a + 1] % delta[a] != 0:
            raise DivisibilityViolation(
                f"delta_{a + 1}={delta[a]} does not divide delta_{a + 2}={delta[a + 1]}"
            )
    n = len(delta)
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != (n, n):
        raise ValueError(f"Z must be {n}x{n}, got {Z.shape}")

    scale = max(np.abs(Z).max(), 1.0)
    asym = np.abs(Z - Z.T).max()
    if asym > _SYMMETRY_RTOL * scale:
        raise NotSymmetric(f"max|Z - Z^T| = {asym:.3e} exceeds {_SYMMETRY_RTOL * scale:.3e}")
    Z = 0.5 * (Z + Z.T)

    Y = Z.imag
    eigs = np.linalg.eigvalsh(Y)
    lambda_min = float(eigs[0])
    if lambda_min <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue of Im Z is {lambda_min:.3e}")

    W = np.linalg.inv(Y)
    W = 0.5 * (W + W.T)
    resid = np.abs(W @ Y - np.eye(n)).max()
    if resid > 1e-12 * max(1.0, np.abs(W).max() * np.abs(Y).max()):
        raise NotPositiveDefinite(f"Im Z is too ill-conditioned to invert: |W Y - I| = {resid:.3e}")

    Delta = 1
    for d in delta:
        Delta *= d
    return PeriodData(
        n=n,
        delta=delta,
        Z=_readonly(Z),
        W=_readonly(W),
        Delta=Delta,
        lambda_min=lambda_min,
    )


def real_to_complex(p: PeriodData, x) -> ComplexPoint:
    """Map lattice coordinates x in R^{2n} to z_alpha = delta_alpha x_alpha + sum_k tau_{alpha k} x_{n+k}."""
    xv = as_real_vector(x, 2 * p.n)
    z = p.delta_vec * xv[: p.n] + p.Z @ xv[p.n :]
    return ComplexPoint(z)


def complex_to_real(p: PeriodData, z) -> RealPoint:
    """Invert `real_to_complex` via the block formula built from Delta_delta^{-1}, conj(Z) and W."""
    zv = as_complex_vector(z, p.n)
    first = (0.5j / p.delta_vec) * (np.conj(p.Z) @ (p.W @ zv) - p.Z @ (p.W @ np.conj(zv)))
    second = -0.5j * (p.W @ (zv - np.conj(zv)))
    x = np.concatenate([first, second])
    # the combination is real by construction; the imaginary residue is roundoff
    return RealPoint(x.real)


def phi_L0_lift(p: PeriodData, mu) -> DualComplexPoint:
    """Lift of the polarization isogeny: mu_hat_alpha = (delta_n/delta_alpha) mu_alpha."""
    mv = as_complex_vector(mu, p.n)
    return DualComplexPoint((p.delta[-1] / p.delta_vec) * mv)


def iso_map(p: PeriodData, point, direction: str = "forward"):
    """Convert between dual-torus coordinates mu_hat and the flat model coordinates xi.

    direction="forward" maps a DualComplexPoint to the DualRealPoint with

        xi_(1..n)    = (2 pi / delta_n) Delta_delta W Delta_delta Im(mu_hat)
        xi_(n+1..2n) = (2 pi / delta_n) [ (Re Z) W Delta_delta Im(mu_hat) - Delta_delta Re(mu_hat) ]

    direction="inverse" applies

        mu_hat = (delta_n / 2 pi) [ Delta^{-1} Z Delta^{-1} xi_(1..n) - Delta^{-1} xi_(n+1..2n) ].
    """
    n = p.n
    d = p.delta_vec
    dn = float(p.delta[-1])
    if direction == "forward":
        mu_hat = as_complex_vector(point, n)
        im_part = d * (p.W @ (d * mu_hat.imag))
        xi1 = (2.0 * math.pi / dn) * im_part
        xi2 = (2.0 * math.pi / dn) * (p.re_z @ (p.W @ (d * mu_hat.imag)) - d * mu_hat.real)
        return DualRealPoint(np.concatenate([xi1, xi2]))
    if direction == "inverse":
        xi = as_real_vector(getattr(point, "xi", point), 2 * n)
        mu_hat = (dn / (2.0 * math.pi)) * ((p.Z @ (xi[:n] / d)) / d - xi[n:] / d)
        return DualComplexPoint(mu_hat)
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def enumerate_characteristics(p: PeriodData) -> list[Characteristic]:
    """All characteristics in lexicographic order; the list has exactly Delta entries."""
    return [Characteristic(m) for m in itertools.product(*(range(d) for d in p.delta))]


def cube_to_point(p: PeriodData, t) -> ComplexPoint:
    """Map cube coordinates t in [0,1)^{2n} to the corresponding point of V.

    t parametrizes the fundamental domain: z = Delta_delta t_(1..n) + Z t_(n+1..2n).
    """
    tv = as_real_vector(t, 2 * p.n)
    return ComplexPoint(p.delta_vec * tv[: p.n] + p.Z @ tv[p.n :])


def random_cube_points(p: PeriodData, rng: np.random.Generator, count: int) -> list[ComplexPoint]:
    """Draw `count` points uniformly from the fundamental domain."""
    ts = rng.random((count, 2 * p.n))
    return [cube_to_point(p, t) for t in ts]


def lattice_shift(p: PeriodData, generator: int) -> np.ndarray:
    """Complex coordinates of the lattice generator (1-based index in 1..2n).

    Generators 1..n are delta_alpha e_alpha; generators n+1..2n are the rows
    tau_{alpha,.} of Z.
    """
    n = p.n
    if not 1 <= generator <= 2 * n:
        raise ValueError(f"generator must be in 1..{2 * n}, got {generator}")
    if generator <= n:
        shift = np.zeros(n, dtype=complex)
        shift[generator - 1] = p.delta[generator - 1]
        return shift
    return np.array(p.Z[generator - n - 1, :], dtype=complex)

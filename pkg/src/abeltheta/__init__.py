"""Theta bases, Hermitian metrics and Picard-bundle curvature on polarized complex tori.

The package evaluates the theta basis of an ample line bundle on a complex
torus with certified lattice-sum truncation, builds the multiplier systems
and log-quadratic metrics of the associated bundles on the torus and its
dual, computes L2 inner products by spectrally convergent periodic
quadrature, and derives the constant-coefficient curvature and Chern data of
the direct-image (Picard) bundles by exact linear algebra. A CLI
(`abeltheta`) exposes evaluation, Gram matrices, the curvature report and a
full verification suite.
"""

from .bundles import (LogQuadraticMetric, MultiplierSystem, cocycle_residual, metric_eval,
                      metric_quasiperiodicity_residual, multiplier_system,
                      section_transformation_residual, symbolic_cocycle_residual,
                      trivializing_section, trivializing_section_exponents)
from .curvature import (ChernData, FlatnessReport, PoincareConnection, TrivialityReport, TwoForm,
                        chern_data, chern_number, curvature_direct_image,
                        curvature_of_log_quadratic_metric, flatness_report, poincare_connection,
                        pullback_dual_to_mu, triviality_report)
from .errors import (AbelThetaError, DivisibilityViolation, EpsTooSmall, MissingParam,
                     NotPositiveDefinite, NotSymmetric, ParseError, PlanError, UnknownCommand,
                     ValidationError)
from .inner import (GramResult, QuadratureSpec, closed_form_norm, gaussian_integral, gram_matrix,
                    l2_inner_product_quadrature, unfold_check)
from .lattice import (Characteristic, ComplexPoint, DualComplexPoint, DualRealPoint, PeriodData,
                      RealPoint, complex_to_real, cube_to_point, enumerate_characteristics,
                      iso_map, phi_L0_lift, random_cube_points, real_to_complex,
                      validate_period_data)
from .theta import (ThetaValue, TruncationPlan, quasiperiodicity_residual, radius_for,
                    riemann_theta, theta_m, theta_m_translated)

__version__ = "0.1.0"

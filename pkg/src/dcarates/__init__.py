"""Tight one-step analysis of difference-of-convex iterations.

The package classifies a splitting ``F = f1 - f2`` by its four curvature
bounds into one of six decrease regimes with exact coefficients, turns the
coefficients into sublinear residual rates, searches for the curvature shift
maximising the rate denominator, generates one-dimensional worst-case
instances attaining the rates, maps proximal-gradient setups onto equivalent
splittings, and drives a sparse-pca experiment demonstrating curvature
shifting at work.
"""

from .curvature import (INF, CurvatureOrderError, NegativeMu1Error,
                        NoDecreaseGuaranteeError, ObjectiveCurvatures,
                        Splitting, SplittingError, inv, objective_curvatures,
                        validate_splitting)
from .engine import (DcaTrajectory, DcOracles, DivergenceDetectedError,
                     InterpolationResult, OneStepCheck, OracleFailureError,
                     Triplet, check_one_step, check_prop2_bounds,
                     interpolation_check, run_dca)
from .pgd import (PgdSetting, PgdSigmaPlus, ProxFailureError, SigmaPlusBranch,
                  pgd_rate, pgd_sigma_plus, pgd_to_dca, run_pgd,
                  stepsize_sweep)
from .rates import (InfeasibleRangeError, InvalidNError, RateBound,
                    ShiftResult, feasible_shift_interval, optimize_shift,
                    rate_bound, shifted_splitting)
from .regimes import (EmptyGridError, GridCell, OutsideAllRegimesError,
                      Regime, RegimeReport, boundary_e, classify,
                      contour_grid, regime_coefficients, threshold_b)
from .spca import (NegativeCurvatureError, NEpsilonTable,
                   NoConsensusClusterError, SingularCaseError, SpcaProblem,
                   build_problem, power_iteration_extremes, run_experiment,
                   spca_conjugate_step)
from .worstcase import (DegenerateMu1Error, DomainViolationError,
                        NonInvertibleDerivativeError, PiecewiseQuadratic1D,
                        QuadPiece, WorstCaseInstance, as_oracles, instance_p1,
                        instance_p2)

__version__ = '0.1.0'

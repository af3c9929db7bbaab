"""Forced hyperbolic mean curvature flow: simulation and verification.

Convex plane curves evolve by S_tau = W, W_tau = (W_theta^2 - 1) k + c S in
the support-function variables; round circles and spheres reduce to the
radial ODE r_tt = -c0 / r + c(t) r.
"""

from ._kernels import BACKEND
from .errors import (ConfigError, ConvexityLossError, HMCFError, IntegrationFailure,
                     InvalidComparisonError, InvalidFixtureError, InvalidInputError,
                     NotApplicableError)
from .forcing import ForcingSchedule
from .geometry import (AngularGrid, CurveGeometry, SupportState, check_convex, curvature_from_support,
                       curve_geometry, curve_length, differentiate_periodic, harmonic_support,
                       reconstruct_curve, support_of_circle)
from .ma_solver import (EvolveOptions, FlowTrajectory, StopReason, StopTag, check_tau_hyperbolic,
                        discriminant, evolve, ma_coefficients, pde_rhs, step)
from .radial import (RadialProblem, RadialTrajectory, collapse_lower_bound, collapse_upper_bound,
                     energy_envelope_check, integrate_radial)
from .spheres import (SphereFamily, SphereTensors, cylinder_residual, sphere_flow,
                      verify_metric_evolution, verify_normal_evolution,
                      verify_scalar_evolutions, verify_second_form_evolution)
from .verification import (CheckReport, check_containment, check_convexity_preservation,
                           check_length_monotonicity, check_sigma_positivity)

__version__ = "0.1.0"

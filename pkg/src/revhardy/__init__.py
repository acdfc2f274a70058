"""Numerical and closed-form checks of reverse Hardy-type inequalities with
negative exponents ``q <= p < 0`` on polar spaces and homogeneous groups."""

from .bilinear import (BilinearReport, SWParams, chain_check, counter_norm, hls_param_check,
                       sw_form, sw_lower_constant, sw_param_check, verify_sw)
from .closedform import (PowerParams, ball_power_integral, balance_check_conjugate,
                         balance_check_direct, complement_power_integral,
                         hardy_constant_conjugate, hardy_constant_direct, solve_beta)
from .errors import (BalanceViolated, ConfigError, DegenerateSampler, DivergentIntegral,
                     InadmissibleExponent, InadmissibleTail, InadmissibleWeights,
                     InvalidExponents, InvalidParams, NonConvergent, NumericalError,
                     RevHardyError)
from .exponents import ExponentPair, constant_bounds, lower_factor, make_exponents
from .hardy import (DProfile, HardyOptions, HardyReport, PiecewisePowerFunction,
                    RadialFunction, RadialWeight, WeightPair, conjugate_hardy_ratio,
                    d1_profile, d2_profile, extremal_family, hardy_lhs, hardy_ratio, hardy_rhs,
                    power_weights, proof_identity_check, reverse_holder_check, verify_hardy)
from .montecarlo import MCEstimate, PairSampler, RadialPowerSampler, mc_pair_integrate
from .quadrature import (CumulativeIntegral, EndpointExponents, QuadratureConfig, cumulative,
                         integrate_semiaxis)
from .spaces import (HomogeneousGroup, PolarSpace, kernel_norm, make_space, polar_integrate,
                     sphere_area)

__version__ = "0.1.0"

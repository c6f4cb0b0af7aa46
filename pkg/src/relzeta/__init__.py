"""Relative zeta regularisation of a pair of Schroedinger operators.

The Coulomb plus point-interaction pair is built in; any other pair can be fed
to the engine through :class:`RelativeModel`.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import (BoundStateError, BracketError, BranchError, ConvergenceError, DivergenceError,
                     DomainError, EigenvaluePoleError, IllConditionedError, PoleError, RelZetaError)
from .expansions import Expansion, ExpansionTerm, RelativeModel
from .model import (F, I_closed, I_contour, ModelParams, bound_state_threshold, coulomb_delta_model,
                    find_bound_state, large_lambda_expansion, large_lambda_series, relative_trace,
                    small_lambda_expansion)
from .quadrature import (AccuracyBudget, TailModel, hankel_heat_trace, integrate_finite, integrate_tail,
                         integrate_vertical_line)
from .specfun import EULER_GAMMA, bernoulli, digamma, log_gamma, trigamma
from .spectral import (SpectralCoefficients, fit_tail_coefficients, large_v_coefficients, resolve_sign,
                       resolved_coefficients, small_v_coefficients, spectral_measure, spectral_table)
from .zeta import (LaurentData, PartitionResult, contour_heat_trace, heat_trace, laurent_at_minus_half,
                   laurent_ring_fit, log_eta, log_partition, residua_L, zeta_continued)

__all__ = [
    "__version__", "BACKEND",
    "RelZetaError", "PoleError", "EigenvaluePoleError", "DomainError", "BoundStateError",
    "ConvergenceError", "DivergenceError", "BranchError", "BracketError", "IllConditionedError",
    "Expansion", "ExpansionTerm", "RelativeModel",
    "F", "I_closed", "I_contour", "ModelParams", "bound_state_threshold", "coulomb_delta_model",
    "find_bound_state", "large_lambda_expansion", "large_lambda_series", "relative_trace",
    "small_lambda_expansion",
    "AccuracyBudget", "TailModel", "hankel_heat_trace", "integrate_finite", "integrate_tail",
    "integrate_vertical_line",
    "EULER_GAMMA", "bernoulli", "digamma", "log_gamma", "trigamma",
    "SpectralCoefficients", "fit_tail_coefficients", "large_v_coefficients", "resolve_sign",
    "resolved_coefficients", "small_v_coefficients", "spectral_measure", "spectral_table",
    "LaurentData", "PartitionResult", "contour_heat_trace", "heat_trace", "laurent_at_minus_half",
    "laurent_ring_fit", "log_eta", "log_partition", "residua_L", "zeta_continued",
]

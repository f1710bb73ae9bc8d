"""Uniform error estimates for the Lanczos method: iteration, spectra, bounds and experiments."""

__version__ = "0.1.0"

from .orthopoly import (  # noqa: E402
    JacobiParams,
    QuadratureRule,
    ThreeTermRecurrence,
    chebyshev_T,
    gauss_legendre,
    jacobi_eval,
    largest_zero,
    recurrence_from_density,
    recurrence_from_discrete_measure,
    tridiag_eigenvalues,
)
from .spectra import (  # noqa: E402
    Spectrum,
    laplacian_inverse_operator,
    laplacian_operator,
    lap_spectrum,
    legendre_hard_instance,
    jacobi_hard_instance,
    log_spectrum,
    semi_spectrum,
    unif_spectrum,
)
from .lanczos import RitzReport, TridiagonalMatrix, measure_ritz, relative_error, ritz_values  # noqa: E402
from .bounds import BoundReport, asymptotic_predictor, bessel_limit, main_upper_bound  # noqa: E402
from .experiments import AggregateStats, ExperimentConfig, run_experiment  # noqa: E402

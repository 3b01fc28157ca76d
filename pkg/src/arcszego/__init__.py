"""Numerical laboratory for orthogonal polynomials on smooth Jordan arcs.

The pipeline: open the arc, solve for the exterior conformal map, push
harmonic measure and densities to a circle quadrature, orthonormalize,
and compare Christoffel and extremal-polynomial data against the limits
predicted by outer functions and reproducing kernels.  ``experiments``
packages the comparisons as drivers; ``cli`` runs them from JSON
configs.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .christoffel import (OrthonormalSystem, arnoldi_system,
                          christoffel_value, extremal_values, orthonormalize,
                          widom_square)
from .conformal import ConformalFrame, build_frame, harmonic_density
from .experiments import (ConvergenceReport, ExperimentConfig, circle_oracle,
                          run_faber_check, run_maximizer_scan,
                          run_strong_asymptotics, run_widom_sweep)
from .faber import FaberPolynomial, faber_transform
from .geometry import ArcGeometry, OpenedCurve, open_arc
from .measure import (DiscreteInnerProduct, MeasureSpec, normalized_on,
                      szego_log_mean, transplant_quadrature, widom_log_mean)
from .szego import (KernelData, OuterFunction, SzegoFunctions, kernel,
                    szego_data, szego_function, widom_limit_rhs)

__all__ = [
    "BACKEND", "__version__",
    "ArcGeometry", "OpenedCurve", "open_arc",
    "ConformalFrame", "build_frame", "harmonic_density",
    "MeasureSpec", "DiscreteInnerProduct", "transplant_quadrature",
    "normalized_on", "szego_log_mean", "widom_log_mean",
    "OrthonormalSystem", "arnoldi_system", "orthonormalize",
    "christoffel_value", "extremal_values", "widom_square",
    "OuterFunction", "SzegoFunctions", "KernelData",
    "szego_function", "szego_data", "kernel", "widom_limit_rhs",
    "FaberPolynomial", "faber_transform",
    "ExperimentConfig", "ConvergenceReport",
    "run_widom_sweep", "run_strong_asymptotics", "run_maximizer_scan",
    "run_faber_check", "circle_oracle",
]

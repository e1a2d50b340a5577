"""Fractal Fourier series ``F(t) = sum f(n) e(n**k t) / n**p``.

Evaluation with certified truncation, growth and Hoelder exponent fits,
box-counting dimensions, and the closed-form exponents they are checked
against. Hot loops run under numba when available; set
``FRACFOURIER_DISABLE_NUMBA=1`` to force the pure numpy path.
"""

__version__ = "0.1.0"

from .arith import CoefficientSource, SieveTable, build_sieve, coeff
from .boxdim import (
    BoxCountCurve,
    boxcount_graph,
    boxcount_path,
    check_theorem_inequalities,
    estimate_dimension,
)
from .errors import (
    ArgumentError,
    DegenerateDataError,
    FracError,
    NumericError,
    RangeError,
    ResourceError,
)
from .scaling import (
    ExponentReport,
    FitPolicy,
    LogLogFit,
    dyadic_ladder,
    estimate_alpha,
    estimate_holder,
    fit_loglog,
    theorem_bounds,
    theoretical_exponents,
)
from .series import (
    Assumption,
    Component,
    SampleGrid,
    SeriesSpec,
    WeierstrassSpec,
    abel_identity_check,
    choose_truncation,
    evaluate_grid,
    exp_sum,
    exp_sum_prefix_profile,
    partial_sum,
    riemann_eval,
    tail_bound,
    uniform_grid,
    weierstrass_eval,
    weierstrass_grid,
)

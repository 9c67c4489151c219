"""Poisson distribution of order k: pmf structure, critical parameters, bounds.

The scaled pmf h(n; lambda) = exp(k*lambda) * P(Y = n) is evaluated by an
O(n*k) recurrence (compiled kernel with a pure-Python fallback); on top of
it sit the median/mode machinery, the peak taxonomy, the critical-parameter
solvers and the bound-verification scanner.
"""

from .distribution import (
    DerivedParams,
    ExactPmfPolynomial,
    ModeResult,
    OrderKParams,
    ScaledPmfTable,
    cdf_and_median,
    derived_params,
    exact_pmf_polynomial,
    mode_set,
    pmf,
    principal_mode,
    scaled_pmf_table,
)
from .critical import (
    CriticalR,
    DoubleModeEvent,
    FirstDoubleMode,
    RootBracket,
    SolverConfig,
    consecutive_double_mode,
    double_mode_between,
    first_double_mode,
    jump_boundaries,
    solve_r_k,
)
from .shape import (
    ModeJumpEvent,
    MountainRange,
    Peak,
    PeakKind,
    PmfShape,
    Regime,
    analyze_shape,
    classify_regime,
    excluded_values,
    mode_trajectory,
)
from .bounds import (
    BoundReport,
    MedianAsymptotic,
    MedianBounds,
    ModeAsymptotic,
    ModeBounds,
    check_median_bounds,
    check_mode_bounds,
    conjecture_scan,
    median_asymptotic_eval,
    median_bounds,
    median_zero_criterion,
    mode_asymptotic_eval,
    mode_bounds,
    mode_zero_sufficient,
    scaled_shape_formulas,
    summarize_reports,
)
from .kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "OrderKParams",
    "DerivedParams",
    "ScaledPmfTable",
    "ExactPmfPolynomial",
    "ModeResult",
    "scaled_pmf_table",
    "exact_pmf_polynomial",
    "pmf",
    "cdf_and_median",
    "mode_set",
    "principal_mode",
    "derived_params",
    "CriticalR",
    "FirstDoubleMode",
    "DoubleModeEvent",
    "RootBracket",
    "SolverConfig",
    "solve_r_k",
    "first_double_mode",
    "double_mode_between",
    "jump_boundaries",
    "consecutive_double_mode",
    "PmfShape",
    "MountainRange",
    "Peak",
    "PeakKind",
    "Regime",
    "ModeJumpEvent",
    "analyze_shape",
    "classify_regime",
    "mode_trajectory",
    "excluded_values",
    "BoundReport",
    "MedianBounds",
    "ModeBounds",
    "MedianAsymptotic",
    "ModeAsymptotic",
    "median_zero_criterion",
    "mode_zero_sufficient",
    "median_bounds",
    "mode_bounds",
    "check_median_bounds",
    "check_mode_bounds",
    "median_asymptotic_eval",
    "mode_asymptotic_eval",
    "scaled_shape_formulas",
    "conjecture_scan",
    "summarize_reports",
    "KERNEL_BACKEND",
]

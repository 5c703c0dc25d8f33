"""Skew transforms for heavy-tailed data, with tail-index and fit diagnostics.

The package covers the full pipeline: simulate from reference families,
apply or invert the skewing transform, estimate its parameters by iterated
moment matching, screen the tail regime before trusting those estimates,
and test the back-transformed output for symmetry and whiteness.
"""

from .errors import (
    DegenerateError,
    DomainError,
    FitError,
    InputError,
    IoError,
    LwfError,
    ParamError,
    ParseError,
    RangeError,
)
from .experiments import ReturnsSeries, run_acf_check, run_regime_scan, run_table1, run_table2
from .igmm import FitReport, FitStatus, IgmmConfig, Tau, fit, normal_score
from .lambertw import Branch, g_u, g_u_relation_check, i_divergence, lambert_w
from .sampling import (
    AcfResult,
    Exponential,
    Moments,
    Normal,
    Pareto,
    Sample,
    SkewedT,
    SkewNormal,
    StudentT,
    Weibull,
    acf,
    draw,
    harmonic_mean,
    moments,
)
from .stat_tests import (
    TestMethod,
    TestResult,
    fit_student_t,
    kolmogorov_pvalue,
    ks_bootstrap_t,
    ks_naive_t,
    ljung_box,
    robust_jb,
)
from .tail_index import (
    HalfLine,
    RealLine,
    Regime,
    RegimeBands,
    RegimeClassification,
    TailIndexPath,
    UnitInterval,
    build_regime_bands,
    classify_regime,
    default_k_range,
    harmonic_moment_estimator,
    hill_estimator,
    johnson_eta,
    modified_hill_path,
    pareto_alpha_mle,
    pareto_alpha_tscore,
    pareto_t_score,
    t_hill,
)
from .transform import InverseReport, LwfParams, Policy, forward, handle_zeros, inverse

__version__ = "0.1.0"

__all__ = [
    "AcfResult",
    "Branch",
    "DegenerateError",
    "DomainError",
    "Exponential",
    "FitError",
    "FitReport",
    "FitStatus",
    "HalfLine",
    "IgmmConfig",
    "InputError",
    "InverseReport",
    "IoError",
    "LwfError",
    "LwfParams",
    "Moments",
    "Normal",
    "ParamError",
    "ParseError",
    "Pareto",
    "Policy",
    "RangeError",
    "RealLine",
    "Regime",
    "RegimeBands",
    "RegimeClassification",
    "ReturnsSeries",
    "Sample",
    "SkewNormal",
    "SkewedT",
    "StudentT",
    "TailIndexPath",
    "Tau",
    "TestMethod",
    "TestResult",
    "UnitInterval",
    "Weibull",
    "acf",
    "build_regime_bands",
    "classify_regime",
    "default_k_range",
    "draw",
    "fit",
    "fit_student_t",
    "forward",
    "g_u",
    "g_u_relation_check",
    "handle_zeros",
    "harmonic_mean",
    "harmonic_moment_estimator",
    "hill_estimator",
    "i_divergence",
    "inverse",
    "johnson_eta",
    "kolmogorov_pvalue",
    "ks_bootstrap_t",
    "ks_naive_t",
    "lambert_w",
    "ljung_box",
    "moments",
    "modified_hill_path",
    "normal_score",
    "pareto_alpha_mle",
    "pareto_alpha_tscore",
    "pareto_t_score",
    "robust_jb",
    "run_acf_check",
    "run_regime_scan",
    "run_table1",
    "run_table2",
    "t_hill",
]

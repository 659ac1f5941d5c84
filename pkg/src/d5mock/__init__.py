"""Numerics for the second-order mock theta function D5 and its companions.

Evaluates D5, D5*, omega, f, h1 and h2 in their Eulerian, alternative and
Lerch-sum forms, computes the Mordell and Watson integrals by trapezoidal
quadrature, and checks the transformation formulas that tie them together.
"""
from .errors import DomainError, NonConvergence, NonUnit, OrderMismatch, PoleError
from .mocktheta import (
    FunctionId,
    Representation,
    Tag,
    d5_alt,
    d5_series,
    d5_star_at_root,
    d5_star_radial_limit,
    d5_star_series,
    f_alt,
    f_series,
    h1_series,
    h2_series,
    lerch_f,
    lerch_h1,
    lerch_h2,
    lerch_omega,
    omega_alt,
    omega_series,
    qhyper_lhs,
    qhyper_rhs,
    representations,
)
from .mordell import QuadratureResult, mordell_integral, watson_integral
from .numkernel import (
    EvalResult,
    Nome,
    eta_quotient_correction,
    jacobi_triple_product_residual,
    nome_pair,
    qpoch_finite,
    qpoch_infinite,
    theta_psi,
    working_precision,
)
from .qexpand import TruncatedSeries, expansion, qpoch_series, series_eval, series_inv_unit, series_mul
from .verify import (
    REGISTRY,
    IdentityReport,
    WrtEntry,
    check_d5_decomposition,
    check_main_theorem,
    check_representations,
    check_watson,
    run_grid,
    wrt_table,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EvalResult",
    "FunctionId",
    "IdentityReport",
    "Nome",
    "NonConvergence",
    "NonUnit",
    "OrderMismatch",
    "PoleError",
    "QuadratureResult",
    "REGISTRY",
    "Representation",
    "Tag",
    "TruncatedSeries",
    "WrtEntry",
    "check_d5_decomposition",
    "check_main_theorem",
    "check_representations",
    "check_watson",
    "d5_alt",
    "d5_series",
    "d5_star_at_root",
    "d5_star_radial_limit",
    "d5_star_series",
    "eta_quotient_correction",
    "expansion",
    "f_alt",
    "f_series",
    "h1_series",
    "h2_series",
    "jacobi_triple_product_residual",
    "lerch_f",
    "lerch_h1",
    "lerch_h2",
    "lerch_omega",
    "mordell_integral",
    "nome_pair",
    "omega_alt",
    "omega_series",
    "qhyper_lhs",
    "qhyper_rhs",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_series",
    "representations",
    "run_grid",
    "series_eval",
    "series_inv_unit",
    "series_mul",
    "theta_psi",
    "watson_integral",
    "working_precision",
    "wrt_table",
]

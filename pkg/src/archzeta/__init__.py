"""Archimedean zeta functions E|f|^{2s} of complex polynomials: exact pole data and Monte-Carlo checks."""
from .algebra import Polynomial, evaluate, parse_polynomial, support, to_text
from .bfunction import BFunction, bfun_brieskorn_pham, bfun_monomial, bfunction_for, minimal_exponent, reduce
from .newton import build_polyhedron, denef_sargos_report
from .sampling import Region, SamplePlan
from .snc import ResolutionData, candidate_poles, check_cor17, lct_snc
from .zeta_numeric import detect_poles, eval_zeta_direct, fit_tail, reduce_by_gamma, sample_abs_f

__version__ = "0.1.0"

__all__ = [
    "BFunction", "Polynomial", "Region", "ResolutionData", "SamplePlan",
    "bfun_brieskorn_pham", "bfun_monomial", "bfunction_for", "build_polyhedron", "candidate_poles",
    "check_cor17", "denef_sargos_report", "detect_poles", "eval_zeta_direct", "evaluate", "fit_tail",
    "lct_snc", "minimal_exponent", "parse_polynomial", "reduce", "reduce_by_gamma", "sample_abs_f",
    "support", "to_text",
]

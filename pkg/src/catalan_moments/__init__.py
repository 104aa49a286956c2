"""Exact and certified computations on Catalan-type Stieltjes moment sequences."""

from importlib import resources

from .exactcore import DomainError, ExactMatrix, exact_determinant, leading_principal_minors
from .sequences import (Family, FamilyId, MomentSequence, PowerSequence, family, generate,
                        power, product, scale, verify_factorization)
from .hankel import (HankelCertificate, ProbeReport, Verdict, certify_stieltjes_exact,
                     certify_stieltjes_power, divisibility_probe)
from .mellin import MellinRangeError, dual_form, duplication_check, mellin_form, mellin_moment_consistency
from .special import log_gamma
from .densities import DensityId, density_eval, model, moment_quadrature
from .divisibility import (CarlemanDiagnostic, Classification, Determinacy, HFunction,
                           bernstein_product_check, carleman_diagnose,
                           complete_monotonicity_check, determinacy_classify, h_functions)

__version__ = "0.1.0"


def report_schema() -> dict:
    """The JSON schema every CLI report validates against."""
    import json
    text = resources.files(__name__).joinpath("schemas/report.schema.json").read_text("utf-8")
    return json.loads(text)

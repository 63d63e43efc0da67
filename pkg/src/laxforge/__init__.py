"""laxforge: Lax pairs and quadratic first integrals for linear Hamiltonian
systems Gamma xdot = -P x, with computational verification of the spectral,
involution, conservation, and Poisson-map properties of the construction."""

from . import dynamics, groebner, laxpairs, matrices, poisson, sampling, spectral
from .errors import LaxforgeError, ParseError, ValidationError, VerificationError
from .laxpairs import (
    LaxPairModel,
    QuadraticIntegral,
    block_lax_2n,
    build_lax2,
    integral_of_pair,
    normalize_n1,
    real_form_lax,
    real_imag_split,
    same_lambda_block_lax,
    sqrt_lax_n1,
)
from .matrices import ValidatedSystem, validate_system
from .spectral import (
    AdmissiblePair,
    LambdaClass,
    SpectralData,
    eigen_decompose,
    select_admissible_pair,
    v_lambda_basis,
)

__version__ = "0.1.0"

__all__ = [
    "dynamics", "groebner", "laxpairs", "matrices", "poisson", "sampling",
    "spectral",
    "LaxforgeError", "ParseError", "ValidationError", "VerificationError",
    "LaxPairModel", "QuadraticIntegral", "block_lax_2n", "build_lax2",
    "integral_of_pair", "normalize_n1", "real_form_lax", "real_imag_split",
    "same_lambda_block_lax", "sqrt_lax_n1",
    "ValidatedSystem", "validate_system",
    "AdmissiblePair", "LambdaClass", "SpectralData", "eigen_decompose",
    "select_admissible_pair", "v_lambda_basis",
    "__version__",
]

"""High-precision Bessel moments, level-6 modular forms, Eichler integrals and L-values."""

from .specfun import DEFAULT_CTX, DivergenceError, DomainError, PrecisionContext
from .moments import MomentSpec, ikm, jym, transform
from .modular import QSeries, ModularFormSpec, eval_form, get_form
from .eichler import ContourPath, EichlerSpec, lvalue
from .verify import registry, run, run_suite

__all__ = [
    "DEFAULT_CTX",
    "DivergenceError",
    "DomainError",
    "PrecisionContext",
    "MomentSpec",
    "ikm",
    "jym",
    "transform",
    "QSeries",
    "ModularFormSpec",
    "eval_form",
    "get_form",
    "ContourPath",
    "EichlerSpec",
    "lvalue",
    "registry",
    "run",
    "run_suite",
]

__version__ = "0.1.0"

"""Finite categories, arrow categories, and the PSC/CoCC/SEC/IMC symmetry hierarchy."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    FiniteCategory,
    Functor,
    NatTransf,
    RawCategory,
    Report,
    check_functor,
    check_naturality,
    validate_category,
)
from .comma import Caps, LevelTower, build_arrow_category  # noqa: E402
from .symmetry import (  # noqa: E402
    CoccStructure,
    PscStructure,
    check_cocc,
    check_imc,
    check_psc,
    check_sec,
    classify,
    search_cocc,
    search_psc,
)

__all__ = [
    "FiniteCategory", "Functor", "NatTransf", "RawCategory", "Report",
    "check_functor", "check_naturality", "validate_category",
    "Caps", "LevelTower", "build_arrow_category",
    "CoccStructure", "PscStructure", "check_cocc", "check_imc", "check_psc",
    "check_sec", "classify", "search_cocc", "search_psc",
]

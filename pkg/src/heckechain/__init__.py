"""Congruence chains between mod-ell eigensystems at desk scale."""

from .arith import DomainError
from .congruence import CongruenceEdge, check_congruence, cross_bound, scan_congruences
from .eigensystems import Eigensystem, decompose, sturm_bound
from .graph import CongruenceGraph, MazurReport, mazur_report
from .images import ImageClass, classify_image, is_adequate
from .lifting import IntegralOrbitClass, integral_classes, reduce_class_mod
from .mlt import (
    EdgeContext,
    GoodDihedralPair,
    MltVerdict,
    best_verdict,
    find_good_dihedral,
)
from .modsym import ModularSymbolSpace, symbol_space
from .planner import (
    GoodDihedral,
    Plan,
    PrincipalSeries,
    Steinberg,
    Supercuspidal,
    SystemDescriptor,
    connect,
    plan_to_safe_form,
)
from .store import Store

__version__ = "0.1.0"

__all__ = [
    "CongruenceEdge",
    "CongruenceGraph",
    "DomainError",
    "EdgeContext",
    "Eigensystem",
    "GoodDihedral",
    "GoodDihedralPair",
    "ImageClass",
    "IntegralOrbitClass",
    "MazurReport",
    "MltVerdict",
    "ModularSymbolSpace",
    "Plan",
    "PrincipalSeries",
    "Steinberg",
    "Store",
    "Supercuspidal",
    "SystemDescriptor",
    "best_verdict",
    "check_congruence",
    "classify_image",
    "connect",
    "cross_bound",
    "decompose",
    "find_good_dihedral",
    "integral_classes",
    "is_adequate",
    "mazur_report",
    "plan_to_safe_form",
    "reduce_class_mod",
    "scan_congruences",
    "sturm_bound",
    "symbol_space",
]

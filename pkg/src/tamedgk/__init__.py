"""Exact computations for tamed almost generalized Kaehler structures on Lie algebras."""

from .algebra import ComplexTensor, Form, Multivector, PsiTensor, VectorValuedTwoForm, wedge
from .connections import Connection, bismut, chern, levi_civita
from .hermitian import TamedPackage, induce_tamed_package, integrable, tames
from .lie import LieAlgebra, StructurePackage, closed_forms_basis, exterior_derivative
from .poisson import (SkewEndo, bivector_from_skew, schouten_bracket, solve_twisting_form,
                      twist_bivector)
from .report import AnalysisReport, analyze_text
from .structure_file import ParseError, parse_structure_file, serialize_structure

__all__ = [
    "AnalysisReport", "ComplexTensor", "Connection", "Form", "LieAlgebra", "Multivector",
    "ParseError", "PsiTensor", "SkewEndo", "StructurePackage", "TamedPackage",
    "VectorValuedTwoForm", "analyze_text", "bismut", "bivector_from_skew", "chern",
    "closed_forms_basis", "exterior_derivative", "induce_tamed_package", "integrable",
    "levi_civita", "parse_structure_file", "schouten_bracket", "serialize_structure",
    "solve_twisting_form", "tames", "twist_bivector", "wedge",
]

"""Exact Hecke algebras of universal tree groups relative to a vertex stabilizer."""

from .combinatorics import IntPolynomial, f, f_prime, f_values, multinomial, poly_P, sum_set, verify_identity
from .errors import TreeHeckeError
from .generation import completion_check, equation_system, express_full, express_leading, generation_verdict, rank_check, subbase
from .hecke import HeckeElement, commutativity_probe, leading_product, leading_product_multi, mul
from .permgroup import analyze, closure, label_consistency_check, parse_generators, suborbit_table
from .tree import build_structure_table, class_size, convolve_oracle, load_or_build, orbit_count, profile_of_path
from .words import validate_word

__version__ = "0.1.0"

__all__ = [
    "HeckeElement",
    "IntPolynomial",
    "TreeHeckeError",
    "analyze",
    "build_structure_table",
    "class_size",
    "closure",
    "commutativity_probe",
    "completion_check",
    "convolve_oracle",
    "equation_system",
    "express_full",
    "express_leading",
    "f",
    "f_prime",
    "f_values",
    "generation_verdict",
    "label_consistency_check",
    "leading_product",
    "leading_product_multi",
    "load_or_build",
    "mul",
    "multinomial",
    "orbit_count",
    "parse_generators",
    "poly_P",
    "profile_of_path",
    "rank_check",
    "subbase",
    "suborbit_table",
    "sum_set",
    "validate_word",
    "verify_identity",
]

"""Classification of code loops via orbits of GL(d, 2) on parameter vectors."""
from .gf2 import BitVec, gl_order, mat_inv, mat_mul
from .polarization import ParamVector, SquareMap, TriForm, format_form, parse_form
from .stratifier import EnumerationReport, brute_force_orbits, canonicalize, enumerate_all

__version__ = "0.1.0"

__all__ = [
    "BitVec", "gl_order", "mat_inv", "mat_mul", "ParamVector", "SquareMap", "TriForm",
    "format_form", "parse_form", "EnumerationReport", "brute_force_orbits", "canonicalize",
    "enumerate_all",
]

"""Temperley-Lieb standard modules, their loop Hamiltonians and the
intertwiners into XXZ-type spin chains, with exact and numerical checks."""

__version__ = "0.1.0"

from .diagrams import Diagram, TLElement, concat, enumerate_diagrams, generator
from .intertwiner import ArcDepthError, f_matrix, qnum, s_matrix
from .links import Link, enumerate_links, gram_matrix, hamiltonian_matrix
from .poly import BETA, ONE, ZERO, PolyMatrix, ScalarPoly, q_from_beta
from .structure import dimension_audit, sector_decomposition

__all__ = [
    "ArcDepthError", "BETA", "Diagram", "Link", "ONE", "PolyMatrix", "ScalarPoly",
    "TLElement", "ZERO", "concat", "dimension_audit", "enumerate_diagrams",
    "enumerate_links", "f_matrix", "generator", "gram_matrix", "hamiltonian_matrix",
    "q_from_beta", "qnum", "s_matrix", "sector_decomposition",
]

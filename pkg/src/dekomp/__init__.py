"""Direct-sum decompositions of finitely presented modules from their relation matrices."""

from __future__ import annotations

__version__ = "0.1.0"

from .decompose import UnsupportedRing, decompose, dn, dn_relative, engine_for, is_isomorphic
from .matrix import (InvertibleMatrix, RingMatrix, block_number, detect_blocks, direct_sum,
                     minimize_presentation, parse_matrix_text, read_matrix)
from .modules import FiniteModule, build_module, find_nontrivial_idempotent
from .report import CertificationError, DecompositionReport
from .rings import Ring, parse_ring

__all__ = [
    "CertificationError", "DecompositionReport", "FiniteModule", "InvertibleMatrix", "Ring",
    "RingMatrix", "UnsupportedRing", "block_number", "build_module", "decompose",
    "detect_blocks", "direct_sum", "dn", "dn_relative", "engine_for",
    "find_nontrivial_idempotent", "is_isomorphic", "minimize_presentation", "parse_matrix_text",
    "parse_ring", "read_matrix",
]

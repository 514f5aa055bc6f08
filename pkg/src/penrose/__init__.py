"""Exact construction, completion and verification of Penrose conic and quadric cubes."""
from __future__ import annotations

from .completion import SevenConfig, complete, complete_quadric_via_basis, refine_classify
from .engine import PenroseLattice, PenroseParams, build_lattice, verify_all
from .lift3d import ExtrusionFrame, extrude_seven, slice_cube
from .matrix import SymMatrix
from .poly import Poly
from .scenarios import SCENARIOS, classify, random_instance

__version__ = "0.1.0"

__all__ = [
    "ExtrusionFrame", "PenroseLattice", "PenroseParams", "Poly", "SCENARIOS", "SevenConfig", "SymMatrix",
    "build_lattice", "classify", "complete", "complete_quadric_via_basis", "extrude_seven", "random_instance",
    "refine_classify", "slice_cube", "verify_all",
]

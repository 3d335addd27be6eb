"""Simulation and verification toolkit for distance-four postselected error correction.

Sixteen-qubit stabilizer codes on a 25-qubit planar grid, flag-based
stabilizer measurement circuits, fault-tolerant measurement sequences,
a lookup-table block decoder and a union-find rejection decoder, plus a
Pauli-frame Monte Carlo engine for acceptance and logical-error statistics.
"""

__version__ = "0.1.0"

from .pauli import PauliString, commutes, propagate_through_cnot
from .layouts import Layout, build_rotated_grid, build_sycamore_subset, is_adjacent
from .codes import CodeSpec, CodeParams, build_surface_code, build_rm16_code, validate_code

__all__ = [
    "PauliString",
    "commutes",
    "propagate_through_cnot",
    "Layout",
    "build_rotated_grid",
    "build_sycamore_subset",
    "is_adjacent",
    "CodeSpec",
    "CodeParams",
    "build_surface_code",
    "build_rm16_code",
    "validate_code",
]

"""Exact partition calculus for the inclusion of the symmetric group in the quantum permutation group.

Subpackages and modules:

* :mod:`snmax.partitions` set partitions, crossings, dihedral actions, two-line diagrams
* :mod:`snmax.algebra` exact arithmetic over Q, Q[N] and Q(N)
* :mod:`snmax.vectors` partition vectors, crossing-part reduction, dense oracles
* :mod:`snmax.generation` crossing profiles, case dispatch, generation certificates
* :mod:`snmax.moments` level-five and level-six moment matrices, Hermitian form
* :mod:`snmax.hyperplanes` maximal hyperplane intersections on a kernel
* :mod:`snmax.weingarten` Haar moments via the Weingarten formula
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import BudgetError, DomainError, ShapeError, SizeError, SpecializationError
from .partitions import CROSSING, SetPartition, TwoLinePartition, compose, crossings
from .vectors import PartitionVector, apply_morphism, red_cr

__all__ = [
    "__version__", "BudgetError", "DomainError", "ShapeError", "SizeError", "SpecializationError",
    "CROSSING", "SetPartition", "TwoLinePartition", "compose", "crossings",
    "PartitionVector", "apply_morphism", "red_cr",
]

"""Numerical toolkit for linear relations.

Relations are subspaces of X × Y stored by orthonormal graph bases.  The
submodules cover subspace arithmetic (:mod:`relkit.subspace`), relation
algebra (:mod:`relkit.relation`), operator/multivalued splitting and
resolvents (:mod:`relkit.arens`), singular values and block operators
(:mod:`relkit.schatten`), graph-projection perturbation checks
(:mod:`relkit.perturbation`) and the seeded harness
(:mod:`relkit.generators`, :mod:`relkit.suite`, :mod:`relkit.cli`).
"""

from .errors import (DimensionMismatch, HypothesisViolated, InvalidInput, NotInGammaSet,
                     NotInResolventSet, NotSingleValued, RelkitError)
from .relation import LinearRelation, OperatorOnSubspace
from .subspace import DEFAULT_TOL, Subspace, Tolerances

__all__ = [
    "DEFAULT_TOL", "DimensionMismatch", "HypothesisViolated", "InvalidInput", "LinearRelation",
    "NotInGammaSet", "NotInResolventSet", "NotSingleValued", "OperatorOnSubspace", "RelkitError",
    "Subspace", "Tolerances",
]

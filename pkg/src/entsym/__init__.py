"""Finite-dimensional C*-algebras as special symmetric Frobenius algebras,
channel verification, cocycle twists of group-graded channels, and the
entanglement-assisted interconversion schemes they generate.

The usual entry points:

* :mod:`entsym.tensors` - dense complex primitives (Kronecker, cups/caps,
  swap, traces, an in-house Hermitian eigensolver).
* :mod:`entsym.frobenius` - algebra constructors and axiom checks.
* :mod:`entsym.channels` - the CP condition and the Choi oracle.
* :mod:`entsym.groups` - finite abelian groups, cocycles, projective
  representations, twisted group algebras.
* :mod:`entsym.twists` - the interconversion pair (u, v), channel twisting,
  naturality and coding-scheme equations.
* :mod:`entsym.coding` - coding schemes, weakly symmetric capacities,
  Blahut-Arimoto, capacity certificates.
* :mod:`entsym.cli` - the ``entsym`` command.
"""

from .channels import ChannelMap, choi_matrix, cp_condition_operator, is_channel
from .frobenius import (
    FrobeniusAlgebra,
    bh_iso,
    check_algebra,
    matrix_algebra,
    max_entangled_element,
    multimatrix_algebra,
    tensor_product,
)
from .groups import (
    Cocycle2,
    FiniteAbelianGroup,
    GradedAlgebra,
    clock_shift_rep,
    twisted_group_algebra,
    weyl_cocycle,
)
from .tensors import Tolerance
from .twists import UptInstance, build_entangled_pair, transform_channel

__version__ = "0.1.0"

__all__ = [
    "ChannelMap",
    "Cocycle2",
    "FiniteAbelianGroup",
    "FrobeniusAlgebra",
    "GradedAlgebra",
    "Tolerance",
    "UptInstance",
    "bh_iso",
    "build_entangled_pair",
    "check_algebra",
    "choi_matrix",
    "clock_shift_rep",
    "cp_condition_operator",
    "is_channel",
    "matrix_algebra",
    "max_entangled_element",
    "multimatrix_algebra",
    "tensor_product",
    "transform_channel",
    "twisted_group_algebra",
    "weyl_cocycle",
    "__version__",
]

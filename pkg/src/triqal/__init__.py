"""triqal: verification and computation for ternary algebras with an
order-3 basis relabelling.

Core objects: dense tensor arithmetic (:mod:`triqal.tensor_core`), the
operator axioms (:mod:`triqal.lawrence`), Frobenius structure and the full
algebra (:mod:`triqal.frobenius`), the pentagon identity and its relatives
(:mod:`triqal.pentagon`), the two-parameter solution family
(:mod:`triqal.families`), and lens-space contraction networks
(:mod:`triqal.lens`).
"""

__version__ = "0.1.0"

from .tensor_core import (
    BasisPermutation,
    DenseTensor,
    apply_basis_perm,
    contract,
    max_abs_diff,
    permute_legs,
)

__all__ = [
    "__version__",
    "BasisPermutation",
    "DenseTensor",
    "apply_basis_perm",
    "contract",
    "max_abs_diff",
    "permute_legs",
]

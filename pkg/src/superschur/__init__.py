"""Exact computations with Brauer-type diagram algebras, classical matrix
Lie superalgebras and their tensor actions: fundamental theorems of invariant
theory, centraliser coalgebras, quasi-hereditary structure and Ringel-duality
checks, all over Q or a prime field."""

from .linalg import (QQ, GF, SuperSpace, BilinearForm, TensorSpace, SumSpace,
                     SparseOperator, tensor_operator, braiding_operator,
                     standard_form, kernel_basis, generated_subalgebra)

__version__ = "0.1.0"

"""Tensor products, path objects, functor categories, fiber products, quotients, homotopies."""

from .homotopy import FOUND, NONE, Homotopy, find_homotopy, verify_homotopy
from .fun import FiberProduct, FunctorCategory, fiber_product, fun_dg
from .path import PathObject, path_object
from .quotient import DrinfeldQuotient, drinfeld_quotient, quotient_functor
from .tensor import (
    TensorCategory,
    associator,
    is_basis_bijection,
    left_unitor,
    right_unitor,
    swap_functor,
    tensor,
    tensor_label,
)

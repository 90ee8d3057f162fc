"""DG categories: presentations, tabulations, functors and checkers."""

from .category import (
    COMPLETE,
    TRUNCATED,
    DGCategory,
    DGFunctor,
    DisjointUnion,
    FullSubcategory,
    Mor,
    ProductCategory,
    TableCategory,
    canonical_form,
    check_functor,
    compose_functors,
    disjoint_union,
    empty_category,
    empty_functor,
    finite_basis_generators,
    functors_equal,
    identity_functor,
    inclusion_functor,
    materialize,
    unit_category,
    zero_category,
)
from .checks import (
    FAIL,
    INCONCLUSIVE,
    NO,
    PASS,
    YES,
    H0Category,
    Verdict,
    Witnessed,
    check_axioms,
    h0,
    induced_cohomology_map,
    is_contractible,
    is_homotopy_equivalent,
    is_invertible_h0,
    is_quasi_equivalence,
    morita_proxy,
)
from .functor import functor_from_generators
from .presentation import DGPresentation, Generator, PresentedCategory, expr_str, parse_expr, presentation, tabulate

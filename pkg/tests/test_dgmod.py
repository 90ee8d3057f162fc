from __future__ import annotations

import pytest

from dgcalc.errors import PreconditionError, WindowError
from dgcalc.exactlin import GF
from dgcalc.dgcore.checks import PASS, YES, check_axioms, is_homotopy_equivalent, is_quasi_equivalence
from dgcalc.dgcore.presentation import presentation, tabulate
from dgcalc.dgmod import (
    ModMap,
    b_plus,
    check_module,
    compose_maps,
    cone,
    direct_sum,
    hat,
    identity_map,
    is_closed_map,
    map_differential,
    map_linearity_violations,
    maps_equal,
    module_contractible,
    module_hom,
    module_of_bplus_morphism,
    scalar_map,
    shift,
    yoneda,
    zero_map,
)

from _cats import acyc_cat, arrow_cat, dual_cat, k_cat


def dims(M, Z):
    return {n: M.dim(Z, n) for n in M.degrees() if M.dim(Z, n)}


# --------------------------------------------------------------------------
# modules


def test_yoneda_of_dual_numbers():
    D = dual_cat()
    M = yoneda(D, "X")
    assert M.finite
    assert dims(M, "X") == {0: 2}
    assert check_module(M) == []
    e = D.gen("e")
    one = M.basis_elem("X", 0, 0)
    assert M.act(one, e) == M.basis_elem("X", 0, 1)
    assert M.act(M.act(one, e), e).is_zero()


def test_yoneda_on_arrow_category():
    A = arrow_cat()
    Y = yoneda(A, "Y")
    assert dims(Y, "X") == {0: 1} and dims(Y, "Y") == {0: 1}
    assert dims(yoneda(A, "X"), "Y") == {}
    assert check_module(Y) == []


def test_shift_moves_degrees_and_stays_a_module():
    M = yoneda(dual_cat(), "X")
    for n in (-2, 1, 3):
        S = shift(M, n)
        assert dims(S, "X") == {-n: 2}
        assert check_module(S) == []
    assert shift(shift(M, 2), -2) is M
    assert shift(M, 0) is M


def test_shifted_differential_sign():
    A = acyc_cat(window=(-4, 1))
    M = yoneda(A, "X")
    S = shift(M, 1)
    # c lives in degree -1 of M, so in degree -2 of M[1]; d(c) = 1 picks up a sign
    c = S.basis_elem("X", -2, 0)
    assert S.d(c) == S.basis_elem("X", -1, 0).scale(-1)
    assert check_module(S) == []


def test_direct_sum():
    D = dual_cat()
    M = yoneda(D, "X")
    S = direct_sum(M, shift(M, 1))
    assert dims(S, "X") == {0: 2, -1: 2}
    assert check_module(S) == []
    m = S.basis_elem("X", 0, 1)
    assert S.component(0, m) == M.basis_elem("X", 0, 1)
    assert S.inject(0, M.basis_elem("X", 0, 1)) == m


def test_direct_sum_of_nothing():
    with pytest.raises(PreconditionError):
        direct_sum()


# --------------------------------------------------------------------------
# maps and cones


def left_e(M):
    """Postcomposition with e on X^ over the dual numbers."""
    D = M.base
    e = D.gen("e")
    images = {}
    for Z in D.objects:
        for n in M.degrees():
            for i in range(M.dim(Z, n)):
                g = D.basis_mor(Z, "X", n, i)
                v = D.compose(e, g)
                if not v.is_zero():
                    images[(Z, n, i)] = dict(v.support())
    return ModMap(M, M, 0, images)


def test_postcomposition_is_a_closed_module_map():
    M = yoneda(dual_cat(), "X")
    phi = left_e(M)
    assert map_linearity_violations(phi) == []
    assert is_closed_map(phi)
    assert maps_equal(compose_maps(phi, phi), zero_map(M, M))


def test_nonlinear_map_is_rejected_by_cone():
    M = yoneda(dual_cat(), "X")
    bad = ModMap(M, M, 0, {("X", 0, 0): {0: M.field.one}})
    assert map_linearity_violations(bad)
    with pytest.raises(PreconditionError):
        cone(bad)


def test_cone_needs_degree_zero():
    M = yoneda(dual_cat(), "X")
    with pytest.raises(PreconditionError):
        cone(zero_map(M, M, 1))


def test_cone_of_zero_is_a_direct_sum():
    D = dual_cat()
    M, N = yoneda(D, "X"), shift(yoneda(D, "X"), -1)
    C = cone(zero_map(M, N))
    S = direct_sum(shift(M, 1), N)
    for n in C.degrees():
        assert C.dim("X", n) == S.dim("X", n)
        for i in range(C.dim("X", n)):
            assert dict(C.d(C.basis_elem("X", n, i)).support()) == dict(S.d(S.basis_elem("X", n, i)).support())
    assert check_module(C) == []


def test_cone_d_squared_and_contractibility():
    M = yoneda(dual_cat(), "X")
    C = cone(identity_map(M))
    assert check_module(C) == []
    r = module_contractible(C)
    assert r.ok
    assert maps_equal(map_differential(r.witness), identity_map(C))


def test_cone_of_multiplication_by_scalar():
    M = yoneda(dual_cat(), "X")
    assert module_contractible(cone(scalar_map(M, 3))).ok
    F3 = GF(3)
    M3 = yoneda(dual_cat(field=F3), "X")
    # 3 = 0 in F_3, so the cone is M[1] ⊕ M with no twisting
    assert not module_contractible(cone(scalar_map(M3, 3))).ok


def test_cone_of_nilpotent_map_is_not_contractible():
    M = yoneda(dual_cat(), "X")
    assert not module_contractible(cone(left_e(M))).ok


def test_representable_and_untwisted_sum_are_not_contractible():
    k = k_cat()
    assert not module_contractible(yoneda(k, "X")).ok
    M = direct_sum(yoneda(k, "X"), shift(yoneda(k, "X"), 1))
    assert not module_contractible(M).ok


def test_contractibility_needs_finite_module():
    with pytest.raises(WindowError):
        module_contractible(yoneda(acyc_cat(), "X"))


def test_module_hom_of_representables():
    # Hom(X^, Y^) is B(X, Y) by Yoneda
    A = arrow_cat()
    X, Y = yoneda(A, "X"), yoneda(A, "Y")
    for p in (-1, 0, 1):
        assert len(module_hom(X, Y, p)) == A.dim("X", "Y", p)
        assert len(module_hom(Y, X, p)) == A.dim("Y", "X", p)
    D = dual_cat()
    assert len(module_hom(yoneda(D, "X"), yoneda(D, "X"), 0)) == 2


# --------------------------------------------------------------------------
# b_plus


def test_b_plus_cap_zero_is_the_category():
    D = dual_cat()
    P = b_plus(D, 0)
    assert P.objects == (hat("X"),) or list(P.objects) == [hat("X")]
    for n in D.degrees():
        assert P.dim(hat("X"), hat("X"), n) == D.dim("X", "X", n)


def test_b_plus_object_count():
    assert len(b_plus(k_cat(), 1, (0,)).objects) == 2
    assert len(b_plus(k_cat(), 1, (-1, 0, 1)).objects) == 4
    # multisets of size <= 2 from 3 cones: 1 + 3 + 6
    assert len(b_plus(k_cat(window=(-6, 3)), 2, (-1, 0, 1)).objects) == 10
    assert len(b_plus(arrow_cat(), 1, (0,)).objects) == 2 * (1 + 2)


@pytest.mark.parametrize("make,cap,shifts", [
    (k_cat, 1, (0,)),
    (k_cat, 1, (-1, 0, 1)),
    (dual_cat, 1, (0,)),
    (arrow_cat, 1, (0,)),
])
def test_b_plus_homs_match_module_homs(make, cap, shifts):
    P = b_plus(make(), cap, shifts)
    for x in P.objects:
        for y in P.objects:
            M, N = P.as_module(x), P.as_module(y)
            for p in (-1, 0, 1):
                assert P.dim(x, y, p) == len(module_hom(M, N, p)), (x, y, p)


@pytest.mark.parametrize("make", [k_cat, dual_cat, arrow_cat])
def test_b_plus_composition_and_differential_are_module_operations(make):
    P = b_plus(make(), 1, (0,))
    mods: dict = {}

    def mod(f):
        return module_of_bplus_morphism(P, f, mods)

    for x in P.objects:
        for y in P.objects:
            for p in (-1, 0):
                for i in range(P.dim(x, y, p)):
                    f = P.basis_mor(x, y, p, i)
                    phi = mod(f)
                    assert map_linearity_violations(phi) == []
                    if P.known(p + 1):
                        assert maps_equal(mod(P.d(f)), map_differential(phi))
                    for z in P.objects:
                        for j in range(P.dim(y, z, 0)):
                            g = P.basis_mor(y, z, 0, j)
                            assert maps_equal(mod(P.compose(g, f)), compose_maps(mod(g), phi))


@pytest.mark.parametrize("make", [k_cat, dual_cat, arrow_cat])
def test_b_plus_axioms_and_yoneda(make):
    P = b_plus(make(), 1, (0,))
    assert check_axioms(P) == []
    assert is_quasi_equivalence(P.yoneda_functor()).verdict == PASS
    for x in P.objects:
        assert is_homotopy_equivalent(P, x, hat(P.root[x])).verdict == YES


def test_b_plus_added_modules_are_sums_with_contractible_cones():
    P = b_plus(dual_cat(), 1, (0,))
    added = [x for x in P.objects if x != hat("X")]
    (x,) = added
    assert check_module(P.as_module(x)) == []
    assert not module_contractible(P.as_module(x)).ok


def test_b_plus_preconditions():
    with pytest.raises(PreconditionError):
        b_plus(k_cat(), -1)
    with pytest.raises(PreconditionError):
        b_plus(k_cat(), 1, ())
    T = tabulate(presentation(["X"], [("p", "X", "X", 1)], window=(-1, 3), cap=3))
    with pytest.raises(PreconditionError):
        b_plus(T, 1)
    # the window shrinks so that every degree only reads known degrees of the base
    A = acyc_cat(window=(-2, 0))
    P = b_plus(A, 1, (-3, 3))
    assert all(A.known(n + d) for n in P.degrees() for d in range(-6, 7))
    assert P.lo >= A.lo + 6
    # a finite k fits any shift span
    assert len(b_plus(k_cat(window=(0, 0)), 1, (-3, 3)).objects) == 3

from __future__ import annotations

import pytest
import sympy

from dgcalc.errors import CapExceededError, FieldMismatchError, PreconditionError, StructuralError
from dgcalc.exactlin import GF, QQ, cohomology
from dgcalc.dgcore.category import (
    COMPLETE,
    canonical_form,
    compose_functors,
    disjoint_union,
    empty_category,
    functors_equal,
    identity_functor,
)
from dgcalc.dgcore.checks import INCONCLUSIVE, PASS, check_axioms, h0, is_contractible, is_quasi_equivalence
from dgcalc.dgcore.functor import functor_from_generators
from dgcalc.dgcore.presentation import presentation, tabulate
from dgcalc.constructions.fun import fiber_product, fun_dg
from dgcalc.constructions.homotopy import FOUND, NONE, Homotopy, find_homotopy, verify_homotopy
from dgcalc.constructions.path import path_object
from dgcalc.constructions.quotient import drinfeld_quotient
from dgcalc.constructions.tensor import (
    associator,
    is_basis_bijection,
    left_unitor,
    right_unitor,
    swap_functor,
    tensor,
)

from _cats import acyc_cat, arrow_cat, dual_cat, iso_cat, k_cat, zero_cat
from _oracles import word_complex_cohomology, word_complex_k_mod_k


def parallel_pair():
    """u0, u1: X -> Y with a homotopy t, d(t) = u1 - u0."""
    return tabulate(presentation(["X", "Y"], [("u0", "X", "Y", 0), ("u1", "X", "Y", 0), ("t", "X", "Y", -1)],
                                 d={"t": "u1 - u0"}, name="par"))


# --------------------------------------------------------------------------
# tensor


def test_unit_tensor_is_basis_bijection():
    for B in (dual_cat(), arrow_cat(), acyc_cat()):
        kB = tensor(k_cat(), B)
        ok, problems = is_basis_bijection(left_unitor(kB))
        assert ok, problems
        Bk = tensor(B, k_cat())
        assert is_basis_bijection(right_unitor(Bk))[0]


def test_koszul_convention_on_pure_tensors():
    A = acyc_cat()
    T = tensor(A, A)
    c, one = A.gen("c"), A.identity("X")
    f1 = T.compose(T.pure(c, one), T.pure(one, c))
    g1 = T.compose(T.pure(one, c), T.pure(c, one))
    assert f1 == T.pure(c, c)
    # (1 (x) g)(f (x) 1) = (-1)^(|g||f|) f (x) g with |f| = |g| = -1
    assert g1 == T.pure(c, c).scale(-1)


def test_dual_tensor_dual_basis():
    D = dual_cat()
    T = tensor(D, D)
    x = T.objects[0]
    assert T.basis(x, x, 0) == ("1_X⊗1_X", "1_X⊗e", "e⊗1_X", "e⊗e")
    assert all(T.d(T.basis_mor(x, x, 0, i)).is_zero() for i in range(4))
    assert check_axioms(T) == []


def test_tensor_differential_sign():
    A = acyc_cat()
    T = tensor(A, A)
    c, one = A.gen("c"), A.identity("X")
    # d(c (x) c) = d(c) (x) c + (-1)^|c| c (x) d(c)
    assert T.d(T.pure(c, c)) == T.pure(one, c) - T.pure(c, one)


def test_symmetry_and_associativity_are_bijections():
    A, B, C = dual_cat(), arrow_cat(), acyc_cat()
    AB, BA = tensor(A, B), tensor(B, A)
    assert is_basis_bijection(swap_functor(AB, BA))[0]
    AC = tensor(A, C)
    assert is_basis_bijection(swap_functor(AC, tensor(C, A)))[0]
    ab_c, a_bc = tensor(tensor(A, B), C), tensor(A, tensor(B, C))
    assert is_basis_bijection(associator(ab_c, a_bc))[0]


def test_tensor_field_mismatch():
    with pytest.raises(FieldMismatchError):
        tensor(k_cat(), k_cat(field=GF(2)))


# --------------------------------------------------------------------------
# path object


def test_path_object_of_k():
    k = k_cat()
    P = path_object(k)
    x = P.obj_of("1_X")
    assert P.basis(x, x, 0) == ("a:1_X", "b:1_X")
    assert P.basis(x, x, 1) == ("h:1_X",)
    d = P.d(P.basis_mor(x, x, 0, 0))
    a, b, h = P.split(d)
    assert a.is_zero() and b.is_zero() and h.coeffs == (1,)
    d = P.d(P.basis_mor(x, x, 0, 1))
    assert P.split(d)[2].coeffs == (-1,)
    assert h0(P).dim(x, x) == 1


@pytest.mark.parametrize("make", [k_cat, dual_cat, acyc_cat, arrow_cat, iso_cat])
def test_path_object_lemma(make):
    B = make()
    roster = []
    if B.name == "iso":
        roster = [("u", B.gen("u")), ("v", B.gen("v"))]
    P = path_object(B, roster)
    assert check_axioms(P) == []
    assert is_quasi_equivalence(P.i_functor()).verdict == PASS
    assert all(r["surjective"] for r in P.surjectivity_certificate())
    assert functors_equal(compose_functors(P.p0p1(), P.i_functor()), P.diagonal())


def test_lift_contraction_on_acyclic_algebra():
    A = acyc_cat()
    P = path_object(A)
    c = A.gen("c")
    x = P.obj_of("1_X")
    lift = P.lift_contraction(x, c, c)
    assert P.d(lift) == P.identity(x)
    a, b, h = P.split(lift)
    assert h == A.compose_many(c, A.identity("X"), c)


def test_lift_contraction_in_a_quotient():
    Q = drinfeld_quotient(arrow_cat(), ["X", "Y"])
    P = path_object(Q)
    for X in ("X", "Y"):
        lift = P.lift_contraction(P.obj_of(f"1_{X}"), Q.h(X), Q.h(X))
        assert P.d(lift) == P.identity(P.obj_of(f"1_{X}"))


def test_lift_contraction_rejects_non_contraction():
    A = acyc_cat()
    P = path_object(A)
    c2 = A.basis_mor("X", "X", -2, 0)
    with pytest.raises(PreconditionError):
        P.lift_contraction(P.obj_of("1_X"), c2, c2)
    with pytest.raises(PreconditionError):
        P.lift_contraction(P.obj_of("1_X"), A.zero("X", "X", -1), A.gen("c"))


def test_path_roster_preconditions():
    D = dual_cat()
    with pytest.raises(PreconditionError):
        path_object(D, [("e", D.gen("e"))])
    A = acyc_cat()
    with pytest.raises(PreconditionError):
        path_object(A, [("c", A.gen("c"))])


# --------------------------------------------------------------------------
# functor categories and fiber products


def test_fun_from_k_recovers_the_target():
    for B in (dual_cat(), arrow_cat()):
        k = k_cat()
        roster = [functor_from_generators(k, B, {"X": b}, {}, name=b) for b in B.objects]
        Fn = fun_dg(k, B, roster)
        for s, F in Fn.functors.items():
            for t, G in Fn.functors.items():
                for n in Fn.degrees():
                    if B.known(n):
                        assert Fn.dim(s, t, n) == B.dim(F.obj("X"), G.obj("X"), n)
        assert check_axioms(Fn) == []


def test_natural_endomorphisms_of_identity_on_dual_numbers():
    D = dual_cat()
    Fn = fun_dg(D, D, [identity_functor(D)])
    x = Fn.objects[0]
    assert Fn.dim(x, x, 0) == 2
    one = Fn.identity(x)
    assert Fn.d(one).is_zero()
    fam = Fn.family(one)
    assert fam["X"] == D.identity("X")


def test_naturality_sign_in_odd_degree():
    # phi = c^m (degree -m) is natural for id_acyc iff c c^m = (-1)^(m) c^m c,
    # and c^(m+1) != 0 in the window, so only even m survive
    A = acyc_cat()
    Fn = fun_dg(A, A, [identity_functor(A)])
    x = Fn.objects[0]
    assert Fn.window == (-3, 1)
    for n in range(-3, 1):
        assert Fn.dim(x, x, n) == (1 if n % 2 == 0 else 0)


def test_fiber_over_identities_is_diagonal():
    D = dual_cat()
    I = identity_functor(D)
    Fb = fiber_product(I, I)
    assert len(Fb.objects) == 1
    x = Fb.objects[0]
    for n in Fb.degrees():
        assert Fb.dim(x, x, n) == D.dim("X", "X", n)
    assert check_axioms(Fb) == []


def test_fiber_of_counterexample_is_empty():
    A, B, O = k_cat(name="A"), k_cat(name="B"), zero_cat(obj="O")
    OA = disjoint_union(O, A)
    iA = OA.inclusion(2)
    g = functor_from_generators(B, OA, {"X": "O"}, {})
    Fb = fiber_product(g, iA)
    assert list(Fb.objects) == []


def test_fiber_product_needs_shared_target():
    with pytest.raises(StructuralError):
        fiber_product(identity_functor(k_cat()), identity_functor(dual_cat()))


# --------------------------------------------------------------------------
# Drinfeld quotient


def test_quotient_of_k_by_itself_is_acyclic():
    k = k_cat(window=(-9, 2))
    Q = drinfeld_quotient(k, ["X"])
    assert Q.status == COMPLETE
    oracle = word_complex_k_mod_k(-9)
    C = Q.hom_complex("X", "X")
    for n in range(-9, 0):
        assert Q.dim("X", "X", n) == 1
        assert sympy.Matrix(C.d_matrix(n)) == oracle[n]
    expected = word_complex_cohomology(-9, range(-8, 2))
    for n in range(-8, 2):
        assert cohomology(C, n).dim == expected[n] == 0


def test_quotient_kills_arrow_through_contracted_source():
    A = arrow_cat()
    Q = drinfeld_quotient(A, ["X"])
    u = Q.embed(A.gen("u"))
    uh = Q.compose(u, Q.h("X"))
    assert Q.d(uh) == u
    assert h0(Q).dim("X", "Y") == 0


def test_quotient_by_nothing_is_the_same_tabulation():
    for B in (dual_cat(), arrow_cat(), acyc_cat()):
        Q = drinfeld_quotient(B, [])
        assert canonical_form(Q) == canonical_form(B)


def test_quotient_contracts_adjoined_objects_and_embeds():
    for B, sub in ((arrow_cat(), ["Y"]), (dual_cat(), ["X"]), (iso_cat(), ["X"])):
        Q = drinfeld_quotient(B, sub)
        assert check_axioms(Q) == []
        for X in sub:
            w = is_contractible(Q, X)
            assert w.ok and w.witness == Q.h(X)
        E = Q.embedding()
        for x in B.objects:
            for y in B.objects:
                for n in B.degrees():
                    M = E.matrix(x, y, n)
                    if B.dim(x, y, n):
                        assert sympy.Matrix(M).rank() == B.dim(x, y, n)


def test_quotient_cap_too_small():
    with pytest.raises(CapExceededError):
        drinfeld_quotient(k_cat(window=(-6, 1)), ["X"], cap=2)


# --------------------------------------------------------------------------
# homotopies


def test_identity_homotopy_verifies():
    D = dual_cat()
    F = identity_functor(D)
    H = Homotopy(F, F, {"X": D.identity("X")}, {"e": D.zero("X", "X", -1)})
    assert verify_homotopy(H) == (True, [])


def test_scalar_homotopy_on_k():
    k = k_cat()
    F = identity_functor(k)
    H = Homotopy(F, F, {"X": k.identity("X").scale(QQ(5))}, {})
    assert verify_homotopy(H)[0]


def test_non_closed_eta_rejected():
    B = tabulate(presentation(["X"], [("a", "X", "X", 0), ("b", "X", "X", 1)], d={"a": "b"},
                              relations=["a*a = 0", "a*b = 0", "b*a = 0", "b*b = 0"], window=(-2, 2), cap=2))
    k = k_cat()
    F = functor_from_generators(k, B, {"X": "X"}, {})
    with pytest.raises(PreconditionError):
        verify_homotopy(Homotopy(F, F, {"X": B.gen("a")}, {}))


def test_find_homotopy_equal_functors():
    A = acyc_cat()
    k = k_cat()
    F = functor_from_generators(k, A, {"X": "X"}, {})
    status, H = find_homotopy(F, F)
    assert status == FOUND
    assert H.eta["X"] == A.identity("X")


def test_find_homotopy_different_components():
    k = k_cat()
    KK = disjoint_union(k, k_cat())
    F = functor_from_generators(k, KK, {"X": KK.objects[0]}, {})
    G = functor_from_generators(k, KK, {"X": KK.objects[1]}, {})
    assert find_homotopy(F, G) == (NONE, None)


def test_find_homotopy_needs_nonzero_h():
    A, B = arrow_cat(), parallel_pair()
    F = functor_from_generators(A, B, {"X": "X", "Y": "Y"}, {"u": B.gen("u0")})
    G = functor_from_generators(A, B, {"X": "X", "Y": "Y"}, {"u": B.gen("u1")})
    status, H = find_homotopy(F, G)
    assert status == FOUND
    assert verify_homotopy(H)[0]
    assert not H.h["u"].is_zero()
    # eta = identities forces h(u) = -t exactly
    H2 = Homotopy(F, G, {"X": B.identity("X"), "Y": B.identity("Y")}, {"u": B.gen("t").scale(-1)})
    assert verify_homotopy(H2)[0]
    H3 = Homotopy(F, G, {"X": B.identity("X"), "Y": B.identity("Y")}, {"u": B.gen("t")})
    ok, problems = verify_homotopy(H3)
    assert not ok and "homotopy equation fails on u" in problems


def test_find_homotopy_across_isomorphism():
    A, I = arrow_cat(), iso_cat()
    F = functor_from_generators(A, I, {"X": "X", "Y": "Y"}, {"u": I.gen("u")})
    G = functor_from_generators(A, I, {"X": "X", "Y": "X"}, {"u": I.identity("X")})
    status, H = find_homotopy(F, G)
    assert status == FOUND and verify_homotopy(H)[0]


def test_find_homotopy_inconclusive_when_eta_never_invertible():
    D = dual_cat()
    F = identity_functor(D)
    G = functor_from_generators(D, D, {"X": "X"}, {"e": D.expr("-e")})
    assert find_homotopy(F, G)[0] == INCONCLUSIVE


def test_empty_source_homotopy():
    E = empty_category(QQ)
    F = identity_functor(E)
    assert find_homotopy(F, F)[0] == FOUND

from __future__ import annotations

import pytest

from dgcalc.errors import PreconditionError, StructuralError
from dgcalc.dgcore.category import canonical_form, identity_functor
from dgcalc.dgcore.checks import FAIL, PASS, check_axioms, is_contractible
from dgcalc.dgcore.functor import DGFunctor, functor_from_generators
from dgcalc.dgcore.presentation import presentation, tabulate
from dgcalc.constructions.tensor import is_basis_bijection, left_unitor, tensor, tensor_label
from dgcalc.harness import monoidal_morphisms, round_trip, unit_law
from dgcalc.locpair import (
    PROXY_LABEL,
    F_embed,
    LocalizationPair,
    LpMorphism,
    check_q_fibrant_form,
    contractible_objects,
    empty_pair,
    eta,
    ev1,
    image_pair,
    is_q_weak_equivalence,
    lp_hom,
    lp_identity,
    lp_morphisms_equal,
    lp_tensor,
    q_functor,
    q_morphism,
    transpose,
    unit_pair,
    untranspose,
)

from _cats import acyc_cat, arrow_cat, dual_cat, k_cat, two_k, zero_cat


def uv_cat():
    return tabulate(presentation(["U", "V"], [], window=(-4, 1), name="uv"))


def with_zero(window=(-4, 1)):
    """k on X disjoint from a zero object O."""
    return tabulate(presentation(["X", "O"], [], relations=["1_O = 0"], window=window, name="kz"))


# --------------------------------------------------------------------------
# tensor of pairs


def test_tensor_subcategory_is_union_of_rows_and_columns():
    A = LocalizationPair(two_k(), ("X",), name="A")
    B = LocalizationPair(uv_cat(), ("U",), name="B")
    AB = lp_tensor(A, B)
    assert set(AB.sub) == {tensor_label("X", "U"), tensor_label("X", "V"), tensor_label("Y", "U")}
    assert AB.complement() == (tensor_label("Y", "V"),)
    assert AB.factors == (A, B)


def test_full_subcategory_absorbs():
    A = LocalizationPair(two_k(), ("X", "Y"), name="A")
    B = F_embed(uv_cat())
    AB = lp_tensor(A, B)
    assert set(AB.sub) == set(AB.ambient.objects)


def test_embedded_pairs_tensor_to_embedded_pair():
    A, B = dual_cat(), arrow_cat()
    AB = lp_tensor(F_embed(A), F_embed(B))
    assert AB.sub == ()
    assert canonical_form(ev1(AB)) == canonical_form(tensor(A, B))
    assert ev1(F_embed(A)) is A


def test_unit_tensor_is_isomorphic_to_the_pair():
    A = LocalizationPair(with_zero(), ("O",), name="A")
    UA = lp_tensor(unit_pair(), A)
    lam = left_unitor(UA.ambient)
    ok, problems = is_basis_bijection(lam)
    assert ok, problems
    assert sorted(lam.obj(x) for x in UA.sub) == ["O"]
    assert unit_law(A)["verdict"] == "pass"


def test_tensor_of_pairs_needs_complete_tabulations():
    T = tabulate(presentation(["X"], [("p", "X", "X", 1)], window=(-1, 3), cap=3))
    with pytest.raises(PreconditionError):
        lp_tensor(F_embed(T), unit_pair())


def test_image_pair():
    K, k = two_k(), k_cat()
    F = functor_from_generators(k, K, {"X": "Y"}, {})
    P = image_pair(F)
    assert P.sub == ("Y",)
    assert P.complement() == ("X",)


# --------------------------------------------------------------------------
# morphisms of pairs


def test_morphism_must_respect_subcategories():
    K = two_k()
    swap = functor_from_generators(K, K, {"X": "Y", "Y": "X"}, {})
    A = LocalizationPair(K, ("X",))
    with pytest.raises(PreconditionError):
        LpMorphism(A, A, swap)
    B = LocalizationPair(K, ("X", "Y"))
    assert LpMorphism(A, B, swap).functor is swap


def test_morphism_must_match_ambients():
    A = F_embed(k_cat())
    with pytest.raises(StructuralError):
        LpMorphism(A, A, identity_functor(k_cat()))


def test_identity_morphism_equals_itself():
    A = F_embed(dual_cat())
    assert lp_morphisms_equal(lp_identity(A), lp_identity(A))


# --------------------------------------------------------------------------
# internal Hom


def constant_roster(U: LocalizationPair, A: LocalizationPair):
    k, C = U.ambient, A.ambient
    return [DGFunctor(k, C, {"*": o}, lambda x, y, n, i, o=o: dict(C.identity(o).support()), name=f"at_{o}")
            for o in C.objects]


def test_hom_from_unit_recovers_the_pair():
    A = LocalizationPair(with_zero(), ("O",), name="A")
    U = unit_pair()
    H = lp_hom(U, A, constant_roster(U, A))
    assert len(H.pair.ambient.objects) == 2
    assert [H.functor_at(x).obj("*") for x in H.pair.sub] == ["O"]
    assert check_axioms(H.pair.ambient) == []


def test_hom_roster_precondition():
    K = two_k()
    A = LocalizationPair(K, ("X",))
    swap = functor_from_generators(K, K, {"X": "Y", "Y": "X"}, {})
    with pytest.raises(PreconditionError):
        lp_hom(A, A, [swap])


def test_hom_identity_object():
    D = F_embed(dual_cat())
    I = identity_functor(D.ambient)
    H = lp_hom(D, D, [I])
    x = H.object_of(I)
    assert H.pair.ambient.dim(x, x, 0) == 2
    with pytest.raises(StructuralError):
        H.object_of(functor_from_generators(D.ambient, D.ambient, {"X": "X"}, {"e": D.ambient.expr("-e")}))


# --------------------------------------------------------------------------
# transpose


@pytest.mark.parametrize("make", [k_cat, dual_cat, arrow_cat, zero_cat])
def test_structure_morphisms_round_trip(make):
    A = F_embed(make())
    for phi in monoidal_morphisms(A):
        r = round_trip(phi)
        assert r["untranspose_transpose"] and r["transpose_untranspose"], phi.name


def test_round_trip_with_nonempty_subcategory():
    A = LocalizationPair(with_zero(), ("O",), name="A")
    for phi in monoidal_morphisms(A):
        assert round_trip(phi)["verdict"] == "pass", phi.name


def test_transpose_of_unitor_is_the_coevaluation():
    A = F_embed(dual_cat())
    phi = monoidal_morphisms(A)[0]
    T, H = transpose(phi)
    ((obj,),) = [tuple(T.functor.obj_map.values())]
    G = H.functor_at(obj)
    assert G.obj("X") == "X"
    e = A.ambient.gen("e")
    assert G.apply(e) == e
    back = untranspose(T, H, phi.source)
    assert lp_morphisms_equal(back, phi)


def test_transpose_rejects_non_tensor_source():
    A = F_embed(k_cat())
    with pytest.raises(StructuralError):
        transpose(lp_identity(A))


# --------------------------------------------------------------------------
# Q and eta


def test_q_of_embedded_pair_is_the_category():
    D = dual_cat()
    Q = q_functor(F_embed(D))
    assert Q.sub == ()
    for n in D.degrees():
        assert Q.ambient.dim("X", "X", n) == D.dim("X", "X", n)
    assert Q.base.ambient is D


def test_quotient_makes_subcategory_contractible():
    A = LocalizationPair(arrow_cat(), ("X",))
    Q = q_functor(A)
    assert contractible_objects(Q.ambient) == ("X",)
    assert not is_contractible(Q.ambient, "Y").ok


def test_eta_is_injective_on_homs():
    A = LocalizationPair(arrow_cat(), ("X",))
    QA = q_functor(A)
    e = eta(A, QA)
    C = A.ambient
    for x in C.objects:
        for y in C.objects:
            for n in C.degrees():
                imgs = [e.functor.on_basis(x, y, n, i) for i in range(C.dim(x, y, n))]
                assert all(imgs)
                assert len(imgs) == len({tuple(sorted(v.items())) for v in imgs})


def test_eta_wrong_quotient():
    A = LocalizationPair(arrow_cat(), ("X",))
    with pytest.raises(StructuralError):
        eta(A, q_functor(LocalizationPair(arrow_cat(), ("X",))))


def test_q_weak_equivalence_of_identity_and_proxy_label():
    A = LocalizationPair(arrow_cat(), ("X",))
    v = is_q_weak_equivalence(lp_identity(A))
    assert v.verdict == PASS
    assert v.data["label"] == PROXY_LABEL


def test_q_weak_equivalence_killing_a_contractible_object():
    # (∅ ⊂ k) -> ({O} ⊂ k ⊔ 0): the added object is already contractible
    k = k_cat()
    A = F_embed(k)
    KZ = with_zero()
    B = LocalizationPair(KZ, ("O",))
    F = LpMorphism(A, B, functor_from_generators(k, KZ, {"X": "X"}, {}))
    assert is_q_weak_equivalence(F).verdict == PASS


def test_q_weak_equivalence_fails_when_missing_an_object():
    k = k_cat()
    K = two_k()
    F = LpMorphism(F_embed(k), F_embed(K), functor_from_generators(k, K, {"X": "X"}, {}))
    assert is_q_weak_equivalence(F).verdict == FAIL


def test_q_morphism_on_identity():
    A = LocalizationPair(arrow_cat(), ("X",))
    QA = q_functor(A)
    QF = q_morphism(lp_identity(A), QA, QA)
    u = QA.ambient.embed(A.ambient.gen("u"))
    assert QF.functor.apply(u) == u


# --------------------------------------------------------------------------
# fibrant form


def test_fibrant_form_accepts_contractible_subcategory():
    A = LocalizationPair(acyc_cat(), ("X",))
    v = check_q_fibrant_form(A)
    assert v.verdict == PASS
    assert v.data["clauses"]["Morita fibrancy of components"] == "NOT CHECKED"


def test_fibrant_form_rejects_missing_contractible():
    v = check_q_fibrant_form(F_embed(acyc_cat()))
    assert v.verdict == FAIL
    assert v.data["clauses"]["contractibles contained in subcategory"].startswith("FAIL")


def test_fibrant_form_rejects_non_contractible_member():
    v = check_q_fibrant_form(LocalizationPair(arrow_cat(), ("Y",)))
    assert v.verdict == FAIL
    assert v.data["clauses"]["subcategory objects contractible"].startswith("FAIL")


def test_fibrant_form_of_empty_pair():
    assert check_q_fibrant_form(empty_pair()).verdict == PASS
    assert check_q_fibrant_form(F_embed(k_cat())).verdict == PASS

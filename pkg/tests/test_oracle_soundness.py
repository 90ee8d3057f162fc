"""Quasi-equivalence verdicts against a brute-force oracle over F_2.

The oracle never calls the linear algebra layer: it enumerates every vector
of each hom space, reads cocycles and boundaries off the enumeration and
decides bijectivity of the induced maps and essential surjectivity on H^0
by exhaustive search.
"""

from __future__ import annotations

import itertools

import pytest

from dgcalc.exactlin import GF
from dgcalc.dgcore.category import Mor, empty_category, empty_functor, identity_functor
from dgcalc.dgcore.checks import FAIL, PASS, is_quasi_equivalence
from dgcalc.dgcore.functor import functor_from_generators
from dgcalc.dgcore.presentation import presentation, tabulate
from dgcalc.constructions.path import path_object

F2 = GF(2)
WINDOW = (-2, 1)
MAX_TOTAL_DIM = 12


def cat(objects, gens=(), d=None, rels=(), name="c"):
    return tabulate(presentation(list(objects), list(gens), d or {}, list(rels), field=F2, window=WINDOW, name=name))


def k():
    return cat(["X"], name="k")


def dual():
    return cat(["X"], [("e", "X", "X", 0)], rels=["e*e = 0"], name="dual")


def acyc():
    return cat(["X"], [("c", "X", "X", -1)], d={"c": "1_X"}, name="acyc")


def arrow():
    return cat(["X", "Y"], [("u", "X", "Y", 0)], name="arrow")


def iso():
    return cat(["X", "Y"], [("u", "X", "Y", 0), ("v", "Y", "X", 0)], rels=["v*u = 1_X", "u*v = 1_Y"], name="iso")


def zero():
    return cat(["O"], rels=["1_O = 0"], name="zero")


def cob():
    return cat(["X"], [("e", "X", "X", 0), ("t", "X", "X", -1)], d={"t": "e"},
               rels=["e*e = 0", "e*t = 0", "t*e = 0", "t*t = 0"], name="cob")


def _with_zeros(S, T, obj, imgs):
    out = {}
    for g, e in imgs.items():
        gg = S.presentation.gen[g]
        out[g] = T.zero(obj[gg.src], obj[gg.tgt], gg.deg) if e == "0" else T.expr(e)
    return out


def functor(S, T, obj, imgs=None):
    return functor_from_generators(S, T, obj, _with_zeros(S, T, obj, imgs or {}))


# --------------------------------------------------------------------------
# the oracle


def vectors(C, x, y, n):
    dim = C.dim(x, y, n) if C.known(n) else 0
    for bits in itertools.product((F2.zero, F2.one), repeat=dim):
        yield Mor(x, y, n, tuple(bits))


def cocycles(C, x, y, n):
    return [v for v in vectors(C, x, y, n) if C.d(v).is_zero()]


def boundaries(C, x, y, n):
    return {C.d(v).coeffs for v in vectors(C, x, y, n - 1)}


def add(a, b):
    return tuple(p + q for p, q in zip(a, b))


def cohomology_iso(F, x, y, n) -> bool:
    S, T = F.source, F.target
    fx, fy = F.obj(x), F.obj(y)
    zs, bs = cocycles(S, x, y, n), boundaries(S, x, y, n)
    zt, bt = cocycles(T, fx, fy, n), boundaries(T, fx, fy, n)
    # injective: F(z) a boundary forces z a boundary
    for z in zs:
        if F.apply(z).coeffs in bt and z.coeffs not in bs:
            return False
    # surjective: every target cocycle is F(z) plus a boundary
    images = {F.apply(z).coeffs for z in zs}
    for w in zt:
        if not any(add(w.coeffs, b) in images for b in bt):
            return False
    return True


def h0_isomorphic(C, a, b) -> bool:
    one_a, one_b = C.identity(a).coeffs, C.identity(b).coeffs
    ba, bb = boundaries(C, a, a, 0), boundaries(C, b, b, 0)
    for f in cocycles(C, a, b, 0):
        for g in cocycles(C, b, a, 0):
            if add(C.compose(g, f).coeffs, one_a) in ba and add(C.compose(f, g).coeffs, one_b) in bb:
                return True
    return False


def oracle(F) -> bool:
    S, T = F.source, F.target
    slo, shi = S.complex_window()
    tlo, thi = T.complex_window()
    lo, hi = max(slo, tlo), min(shi, thi)
    for x in S.objects:
        for y in S.objects:
            for n in range(lo + 1, hi):
                if not cohomology_iso(F, x, y, n):
                    return False
    for t in T.objects:
        if not any(h0_isomorphic(T, F.obj(s), t) for s in S.objects):
            return False
    return True


def total_dim(C) -> int:
    return sum(C.dim(x, y, n) for x in C.objects for y in C.objects for n in C.degrees() if C.known(n))


# --------------------------------------------------------------------------
# cases


def kk():
    return cat(["X1", "X2"], name="kk")


def acyc_plus_zero():
    return cat(["X", "O"], [("c", "X", "X", -1)], d={"c": "1_X"}, rels=["1_O = 0"], name="acyc+zero")


def _cases():
    out = []

    def case(name, F, expect):
        out.append(pytest.param(F, expect, id=name))

    for make in (k, dual, arrow, acyc, iso, cob, zero):
        C = make()
        case(f"id_{C.name}", identity_functor(C), True)
    K, D = k(), dual()
    case("k_to_dual", functor(K, D, {"X": "X"}), False)
    case("dual_to_k", functor(D, K, {"X": "X"}, {"e": "0"}), False)
    D = dual()
    case("dual_kill_e", functor(D, D, {"X": "X"}, {"e": "0"}), False)
    K, A = k(), arrow()
    case("k_to_arrow_source", functor(K, A, {"X": "X"}), False)
    case("arrow_to_k", functor(A, k(), {"X": "X", "Y": "X"}, {"u": "1_X"}), False)
    A = arrow()
    case("arrow_constant", functor(A, A, {"X": "Y", "Y": "Y"}, {"u": "1_Y"}), False)
    K, I = k(), iso()
    case("k_to_iso", functor(K, I, {"X": "X"}), True)
    I = iso()
    case("iso_to_k", functor(I, k(), {"X": "X", "Y": "X"}, {"u": "1_X", "v": "1_X"}), True)
    case("iso_swap", functor(I, I, {"X": "Y", "Y": "X"}, {"u": "v", "v": "u"}), True)
    Z, C = zero(), acyc()
    case("acyc_to_zero", functor(C, Z, {"X": "O"}, {"c": "0"}), True)
    # O is not in the image but is isomorphic to X in H^0 since both are contractible
    case("acyc_into_acyc_plus_zero", functor(acyc(), acyc_plus_zero(), {"X": "X"}, {"c": "c"}), True)
    case("k_to_acyc", functor(k(), acyc(), {"X": "X"}), False)
    case("empty_to_k", empty_functor(empty_category(F2, WINDOW), k()), False)
    U = kk()
    case("kk_swap", functor(U, U, {"X1": "X2", "X2": "X1"}), True)
    case("k_to_kk", functor(k(), kk(), {"X": "X1"}), False)
    case("kk_fold", functor(kk(), k(), {"X1": "X", "X2": "X"}), False)
    B = cob()
    case("cob_to_k", functor(B, k(), {"X": "X"}, {"e": "0", "t": "0"}), True)
    case("k_to_cob", functor(k(), cob(), {"X": "X"}), True)
    case("path_of_k", path_object(k()).i_functor(), True)
    case("path_of_zero", path_object(zero()).i_functor(), True)
    return out


CASES = _cases()


def test_case_mix():
    expects = [p.values[1] for p in CASES]
    assert len(CASES) >= 20
    assert expects.count(False) >= 5
    assert expects.count(True) >= 5


@pytest.mark.parametrize("F,expect", CASES)
def test_quasi_equivalence_agrees_with_brute_force(F, expect):
    assert total_dim(F.source) + total_dim(F.target) <= MAX_TOTAL_DIM
    brute = oracle(F)
    assert brute == expect
    v = is_quasi_equivalence(F)
    assert v.verdict == (PASS if brute else FAIL), v.reason

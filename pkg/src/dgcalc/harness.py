"""Named checks over parsed instances, with deterministic structured reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import DGCalcError, PreconditionError
from .exactlin import Fp
from .dgcore.category import COMPLETE, DGFunctor, Mor, compose_functors
from .dgcore.checks import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    YES,
    check_axioms,
    is_contractible,
    is_homotopy_equivalent,
    is_invertible_h0,
    is_quasi_equivalence,
    morita_proxy,
)
from .constructions.fun import fiber_product
from .constructions.path import path_object
from .constructions.quotient import drinfeld_quotient
from .constructions.tensor import is_basis_bijection, left_unitor, right_unitor, swap_functor
from .dgmod import b_plus, hat
from .instances import Built, Instance, build
from .locpair import (
    LocalizationPair,
    LpMorphism,
    check_q_fibrant_form,
    eta,
    is_q_weak_equivalence,
    lp_hom,
    lp_morphisms_equal,
    lp_tensor,
    q_functor,
    q_morphism,
    transpose,
    unit_pair,
    untranspose,
)

VERDICTS = ("pass", "fail", "inconclusive")


@dataclass
class CheckReport:
    check: str
    instance: str
    verdict: str
    proxy: bool = False
    certificate: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "check": self.check,
            "instance": self.instance,
            "verdict": self.verdict,
            "proxy": self.proxy,
            "certificate": jsonable(self.certificate),
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


def jsonable(x):
    """Plain JSON data: scalars become strings, morphisms become dicts."""
    if isinstance(x, Mor):
        return {"src": x.src, "tgt": x.tgt, "deg": x.deg, "coeffs": [str(c) for c in x.coeffs]}
    if isinstance(x, (Fraction, Fp)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def reports_json(reports: list[CheckReport], timing: bool = True) -> str:
    reports = sorted(reports, key=lambda r: (r.check, r.instance))
    return json.dumps([r.to_dict(timing) for r in reports], indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def reports_text(reports: list[CheckReport]) -> str:
    lines = []
    for r in sorted(reports, key=lambda r: (r.check, r.instance)):
        tag = " [proxy]" if r.proxy else ""
        lines.append(f"{r.verdict.upper():13s} {r.check:26s} {r.instance}{tag}")
        for item in r.certificate.get("items", []):
            if isinstance(item, dict) and item.get("verdict") not in (None, "pass"):
                lines.append(f"    {item.get('verdict')}: {item.get('name', '')} {item.get('reason', '')}".rstrip())
    return "\n".join(lines) + "\n"


def combine(verdicts) -> str:
    vs = list(verdicts)
    if any(v == "fail" for v in vs):
        return "fail"
    if any(v == "inconclusive" for v in vs):
        return "inconclusive"
    if vs and all(v == "skipped" for v in vs):
        return "inconclusive"
    return "pass"


def _lower(v: str) -> str:
    return {PASS: "pass", YES: "pass", FAIL: "fail", INCONCLUSIVE: "inconclusive"}.get(v, "fail")


# --------------------------------------------------------------------------
# checks


@dataclass
class Options:
    bplus_cap: int = 1
    shifts: tuple[int, ...] = (-1, 0, 1)


def check_axioms_all(b: Built, opts: Options):
    items = []
    for name, C in sorted(b.categories.items()):
        bad = check_axioms(C, limit=10)
        items.append({"name": name, "verdict": "pass" if not bad else "fail", "violations": bad})
    for name, P in sorted(b.pairs.items()):
        if P.sub and P.ambient.status == COMPLETE and P.ambient.top is not None and P.ambient.top <= 0:
            Q = drinfeld_quotient(P.ambient, P.sub)
            bad = check_axioms(Q, limit=10)
            items.append({"name": f"{name}:quotient", "verdict": "pass" if not bad else "fail", "violations": bad})
    return items, False


def path_roster(B) -> list[tuple[str, Mor]]:
    """Closed degree-0 generators that are invertible in H^0."""
    out = []
    gens = getattr(B, "presentation", None)
    if gens is None:
        return out
    for g in gens.generators:
        if g.deg != 0:
            continue
        f = B.gen(g.name)
        if B.d(f).is_zero() and is_invertible_h0(B, f):
            out.append((g.name, f))
    return out


def check_path_object(b: Built, opts: Options):
    items = []
    for name, B in sorted(b.categories.items()):
        P = path_object(B, path_roster(B))
        qe = is_quasi_equivalence(P.i_functor())
        surj = P.surjectivity_certificate()
        surj_ok = all(r["surjective"] for r in surj)
        lifts = []
        lift_ok = True
        for x, e in P.entries.items():
            cX, cY = is_contractible(B, e.mor.src), is_contractible(B, e.mor.tgt)
            if cX and cY:
                try:
                    lift = P.lift_contraction(x, cX.witness, cY.witness)
                    lifts.append({"object": x, "lift": lift})
                except (AssertionError, DGCalcError) as err:
                    lift_ok = False
                    lifts.append({"object": x, "error": str(err)})
        v = combine([_lower(qe.verdict), "pass" if surj_ok else "fail", "pass" if lift_ok else "fail"])
        items.append({
            "name": name, "verdict": v, "i_quasi_equivalence": _lower(qe.verdict), "reason": qe.reason,
            "rank_certificate": qe.data.get("ranks", []), "surjectivity": surj, "lifted_contractions": lifts,
        })
    return items, False


def check_quotient_contractibility(b: Built, opts: Options):
    items = []
    for name, P in sorted(b.pairs.items()):
        if not P.sub:
            continue
        Q = drinfeld_quotient(P.ambient, P.sub)
        for X in P.sub:
            h = Q.h(X)
            ok = Q.d(h) == Q.identity(X)
            c = is_contractible(Q, X)
            items.append({"name": f"{name}:{X}", "verdict": "pass" if ok and c.ok else "fail",
                          "witness": h, "d_witness_is_identity": ok})
    return items, False


def _componentwise_qe(F: LpMorphism) -> list[str]:
    out = []
    v1 = is_quasi_equivalence(F.functor)
    if v1.verdict != PASS:
        out.append(f"ambient functor: {v1.verdict} {v1.reason}")
    A0, B0 = F.source.sub_category, F.target.sub_category
    F0 = DGFunctor(A0, B0, {x: F.functor.obj(x) for x in A0.objects}, F.functor.on_basis, name=f"{F.name}_0")
    v0 = is_quasi_equivalence(F0)
    if v0.verdict != PASS:
        out.append(f"subcategory functor: {v0.verdict} {v0.reason}")
    return out


def check_a1(b: Built, opts: Options):
    items = []
    for name, F in sorted(b.morphisms.items()):
        if b.instance.morphisms[name].expect != "qe":
            continue
        bad = _componentwise_qe(F)
        if bad:
            items.append({"name": name, "verdict": "fail", "reason": "not a componentwise quasi-equivalence: "
                          + "; ".join(bad)})
            continue
        v = is_q_weak_equivalence(F)
        items.append({"name": name, "verdict": _lower(v.verdict), "reason": v.reason,
                      "rank_certificate": v.data.get("ranks", [])})
    return items, True


def _quotient_ready(P: LocalizationPair) -> bool:
    A = P.ambient
    return A.status == COMPLETE and (not P.sub or (A.top is not None and A.top <= 0))


def check_a2(b: Built, opts: Options):
    items = []
    for name, A in sorted(b.pairs.items()):
        if not _quotient_ready(A):
            items.append({"name": name, "verdict": "inconclusive", "reason": "quotient not exactly tabulable"})
            continue
        QA = q_functor(A)
        QQA = q_functor(QA)
        e1 = eta(QA, QQA)
        Qe = q_morphism(eta(A, QA), QA, QQA)
        v1 = morita_proxy(e1.functor)
        v2 = morita_proxy(Qe.functor)
        items.append({"name": name, "verdict": combine([_lower(v1.verdict), _lower(v2.verdict)]),
                      "eta_QA": _lower(v1.verdict), "Q_eta_A": _lower(v2.verdict),
                      "reason": "; ".join(r for r in (v1.reason, v2.reason) if r)})
    return items, True


def check_q_weak(b: Built, opts: Options):
    items = []
    for name, A in sorted(b.pairs.items()):
        if not _quotient_ready(A):
            items.append({"name": name, "verdict": "inconclusive", "reason": "quotient not exactly tabulable"})
            continue
        v = is_q_weak_equivalence(eta(A))
        items.append({"name": f"eta_{name}", "verdict": _lower(v.verdict), "reason": v.reason})
    for name, F in sorted(b.morphisms.items()):
        if b.instance.morphisms[name].expect != "qe":
            continue
        v = is_q_weak_equivalence(F)
        items.append({"name": name, "verdict": _lower(v.verdict), "reason": v.reason})
    return items, True


def _unit_for(A: LocalizationPair) -> LocalizationPair:
    return unit_pair(A.field, (-2, 2))


def monoidal_morphisms(A: LocalizationPair) -> list[LpMorphism]:
    """Structure morphisms out of tensor pairs built from ``A`` and the unit."""
    U = _unit_for(A)
    UA, AU = lp_tensor(U, A), lp_tensor(A, U)
    AA = lp_tensor(A, A)
    out = [
        LpMorphism(UA, A, left_unitor(UA.ambient), name=f"lambda_{A.name}"),
        LpMorphism(AU, A, right_unitor(AU.ambient), name=f"rho_{A.name}"),
        LpMorphism(AU, UA, swap_functor(AU.ambient, UA.ambient), name=f"swap_{A.name},unit"),
        LpMorphism(AA, AA, swap_functor(AA.ambient, AA.ambient), name=f"swap_{A.name},{A.name}"),
    ]
    return out


def round_trip(phi: LpMorphism) -> dict:
    T, H = transpose(phi)
    back = untranspose(T, H, phi.source)
    first = lp_morphisms_equal(back, phi)
    T2, _ = transpose(back, hom=H)
    second = lp_morphisms_equal(T2, T)
    return {"name": phi.name, "verdict": "pass" if first and second else "fail",
            "untranspose_transpose": first, "transpose_untranspose": second,
            "hom_objects": list(H.pair.ambient.objects)}


def _finite_ambient(A: LocalizationPair) -> bool:
    C = A.ambient
    return (C.top is not None and C.bottom is not None
            and C.lo <= C.bottom and C.top <= C.hi)


def check_monoidal(b: Built, opts: Options):
    # Transposes land in functor categories whose window shrinks by the
    # generator degrees, so only ambients finite in both directions fit.
    items = []
    for name, A in sorted(b.pairs.items()):
        if not _finite_ambient(A):
            items.append({"name": name, "verdict": "skipped", "reason": "ambient not finite inside its window"})
            continue
        for phi in monoidal_morphisms(A):
            items.append(round_trip(phi))
    return items, False


def unit_law(A: LocalizationPair) -> dict:
    U = _unit_for(A)
    UA = lp_tensor(U, A)
    lam = left_unitor(UA.ambient)
    ok, problems = is_basis_bijection(lam)
    image_sub = sorted(lam.obj(x) for x in UA.sub)
    sub_ok = image_sub == sorted(A.sub)
    k = U.ambient
    roster = []
    for o in A.ambient.objects:
        roster.append(DGFunctor(k, A.ambient, {"*": o},
                                lambda x, y, n, i, o=o: dict(A.ambient.identity(o).support()), name=f"at_{o}"))
    H = lp_hom(U, A, roster)
    ev = compose_functors(H.fun11.evaluation("*"), H.fiber.projection(1))
    hom_ok, hom_problems = is_basis_bijection(ev)
    hom_sub = sorted(ev.obj(x) for x in H.pair.sub) == sorted(A.sub)
    v = "pass" if ok and sub_ok and hom_ok and hom_sub else "fail"
    return {"name": A.name, "verdict": v, "tensor_bijection": ok, "tensor_problems": problems,
            "subcategory_preserved": sub_ok, "hom_bijection": hom_ok, "hom_problems": hom_problems,
            "hom_subcategory_preserved": hom_sub}


def check_unit_law(b: Built, opts: Options):
    items = []
    for name, A in sorted(b.pairs.items()):
        if A.ambient.top is None or A.ambient.top > A.ambient.hi:
            continue
        items.append(unit_law(A))
    return items, False


def check_fibrant(b: Built, opts: Options):
    items = []
    for name, A in sorted(b.pairs.items()):
        exp = b.instance.pairs[name].expect
        if exp is None:
            continue
        v = check_q_fibrant_form(A)
        want = PASS if exp == "fibrant" else FAIL
        items.append({"name": name, "verdict": "pass" if v.verdict == want else "fail", "expected": exp,
                      "form_verdict": _lower(v.verdict), "clauses": v.data["clauses"], "reason": v.reason})
    return items, True


def nonexample(iA: DGFunctor, g: DGFunctor) -> dict:
    """The pullback of ``iA`` along ``g`` and proxy verdicts on both."""
    fib = fiber_product(g, iA, name="pullback")
    pulled = fib.projection(0)
    v_inc = morita_proxy(iA)
    v_pull = morita_proxy(pulled)
    ok = v_inc.verdict == PASS and v_pull.verdict == FAIL
    return {"verdict": "pass" if ok else "fail", "inclusion": _lower(v_inc.verdict),
            "pulled_back": _lower(v_pull.verdict), "pullback_objects": list(fib.objects),
            "pulled_back_reason": v_pull.reason}


def check_nonexample(b: Built, opts: Options):
    items = []
    for name, N in sorted(b.instance.nonexamples.items()):
        r = nonexample(b.functors[N.inclusion], b.functors[N.base])
        r["name"] = name
        items.append(r)
    return items, True


def bplus_report(B, cap: int, shifts) -> dict:
    P = b_plus(B, cap, shifts)
    h = P.yoneda_functor()
    qe = is_quasi_equivalence(h)
    added = []
    ok = qe.verdict == PASS
    for x in P.objects:
        r = hat(P.root[x])
        if x == r:
            continue
        v = is_homotopy_equivalent(P, x, r)
        if v.verdict != YES:
            ok = False
        added.append({"object": x, "representable": r, "verdict": _lower(v.verdict),
                      "witness": list(v.witness) if v.witness else None})
    return {"name": f"{B.name}+(cap={cap})", "verdict": "pass" if ok else combine([_lower(qe.verdict), "fail"]),
            "h_quasi_equivalence": _lower(qe.verdict), "objects": len(P.objects), "added": added,
            "reason": qe.reason}


def check_bplus(b: Built, opts: Options):
    items = []
    for name, B in sorted(b.categories.items()):
        items.append(bplus_report(B, opts.bplus_cap, opts.shifts))
    return items, False


REGISTRY: dict[str, Callable] = {
    "axioms": check_axioms_all,
    "path-object": check_path_object,
    "quotient-contractibility": check_quotient_contractibility,
    "a1": check_a1,
    "a2": check_a2,
    "q-weak-characterization": check_q_weak,
    "monoidal-adjunction": check_monoidal,
    "unit-law": check_unit_law,
    "q-fibrant-form": check_fibrant,
    "non-example": check_nonexample,
    "b-plus": check_bplus,
}


def run_check(name: str, instance: Instance | Built, window: tuple[int, int] | None = None,
              cap: int | None = None, options: Options | None = None) -> CheckReport:
    if name not in REGISTRY:
        raise PreconditionError(f"unknown check {name!r}; known: {', '.join(sorted(REGISTRY))}")
    opts = options or Options()
    t0 = time.perf_counter()
    built = instance if isinstance(instance, Built) else build(instance, window, cap)
    try:
        items, proxy = REGISTRY[name](built, opts)
        verdict = combine(i["verdict"] for i in items)
        cert = {"items": items}
    except DGCalcError as e:
        verdict, proxy, cert = "inconclusive", False, {"error": f"{type(e).__name__}: {e}"}
    return CheckReport(name, built.instance.name, verdict, proxy, cert, time.perf_counter() - t0)


def run_instance(inst: Instance, checks: list[str] | None = None, window=None, cap=None,
                 options: Options | None = None) -> list[CheckReport]:
    built = build(inst, window, cap)
    names = inst.checks if checks is None else checks
    return [run_check(c, built, options=options) for c in names]


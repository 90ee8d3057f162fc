"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run directly with ``python tests/test_acceptance.py`` for just the summary.
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from dgcalc.cli import main as cli_main  # noqa: E402
from dgcalc.dgcore.category import canonical_form, identity_functor  # noqa: E402
from dgcalc.dgcore.checks import PASS, check_axioms, is_contractible, is_quasi_equivalence  # noqa: E402
from dgcalc.exactlin import cohomology  # noqa: E402
from dgcalc.constructions.fun import fun_dg  # noqa: E402
from dgcalc.constructions.path import path_object  # noqa: E402
from dgcalc.constructions.quotient import drinfeld_quotient  # noqa: E402
from dgcalc.constructions.tensor import tensor  # noqa: E402
from dgcalc.dgmod import b_plus  # noqa: E402
from dgcalc.harness import (  # noqa: E402
    _componentwise_qe,
    _finite_ambient,
    bplus_report,
    monoidal_morphisms,
    path_roster,
    round_trip,
    run_check,
    unit_law,
)
from dgcalc.instances import build, corpus_dir, corpus_files, parse  # noqa: E402
from dgcalc.locpair import (  # noqa: E402
    LocalizationPair,
    check_q_fibrant_form,
    contractible_objects,
    is_q_weak_equivalence,
)

from _oracles import word_complex_cohomology  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def corpus():
    return [build(parse(p)) for p in corpus_files()]


def report(n: int, ok: bool, detail: str, capsys=None) -> None:
    RESULTS[n] = (ok, detail)
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


# --------------------------------------------------------------------------
# 1. axioms on the corpus and on every construction


def criterion_1():
    t0 = time.perf_counter()
    checked, bad = 0, []

    def axioms(label, C):
        nonlocal checked
        checked += 1
        v = check_axioms(C)
        if v:
            bad.append(f"{label}: {v[0]}")

    for b in corpus():
        inst = b.instance.name
        cats = list(b.categories.items())
        for name, B in cats:
            axioms(f"{inst}/{name}", B)
            axioms(f"P({name})", path_object(B, path_roster(B)))
            roster = [identity_functor(B)] + [F for F in b.functors.values() if F.source is B and F.target is B]
            axioms(f"Fun({name},{name})", fun_dg(B, B, roster))
            # the axiom check is quartic in objects, so several objects get one shift
            shifts = (-1, 0, 1) if len(B.objects) == 1 else (0,)
            axioms(f"{name}+{list(shifts)}", b_plus(B, 1, shifts))
            for other, C in cats:
                axioms(f"{name}⊗{other}", tensor(B, C))
        for fname, F in b.functors.items():
            if F.source is not F.target:
                axioms(f"Fun[{fname}]", fun_dg(F.source, F.target, [F]))
        for pname, P in b.pairs.items():
            if P.sub:
                axioms(f"{pname} quotient", drinfeld_quotient(P.ambient, P.sub))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 60
    return ok, f"{checked} categories, {len(bad)} with violations, {secs:.1f}s" + (f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 2. path object


def criterion_2():
    bad, lifts, cats = [], 0, 0
    for b in corpus():
        for name, B in b.categories.items():
            cats += 1
            P = path_object(B, path_roster(B))
            qe = is_quasi_equivalence(P.i_functor())
            if qe.verdict != PASS:
                bad.append(f"{name}: i {qe.verdict} {qe.reason}")
            if not qe.data["ranks"]:
                bad.append(f"{name}: empty rank certificate")
            for r in P.surjectivity_certificate():
                if not r["surjective"]:
                    bad.append(f"{name}: p0 x p1 not surjective {r}")
            for x, e in P.entries.items():
                cx, cy = is_contractible(B, e.mor.src), is_contractible(B, e.mor.tgt)
                if cx and cy:
                    lift = P.lift_contraction(x, cx.witness, cy.witness)
                    lifts += 1
                    if P.d(lift) != P.identity(x):
                        bad.append(f"{name}: lift at {x} does not contract")
    ok = not bad and lifts > 0
    return ok, f"{cats} categories, {lifts} lifted contractions" + (f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 3. Drinfeld quotient


def criterion_3():
    bad = []
    k = build(parse(corpus_dir() / "k.dgc"), window=(-9, 2)).categories["k"]
    Q = drinfeld_quotient(k, ["X"])
    C = Q.hom_complex("X", "X")
    degrees = range(-8, 2)
    expected = word_complex_cohomology(-9, degrees)
    got = {n: cohomology(C, n).dim for n in degrees}
    if got != expected or any(expected.values()):
        bad.append(f"H^n(End) of k/k: {got} vs oracle {expected}")
    witnesses = 0
    for b in corpus():
        for pname, P in b.pairs.items():
            if not P.sub:
                continue
            Qp = drinfeld_quotient(P.ambient, P.sub)
            for X in P.sub:
                witnesses += 1
                if Qp.d(Qp.h(X)) != Qp.identity(X) or not is_contractible(Qp, X):
                    bad.append(f"{pname}: {X} not contracted by h_{X}")
        for name, B in b.categories.items():
            if canonical_form(drinfeld_quotient(B, [])) != canonical_form(B):
                bad.append(f"{name}/∅ differs from {name}")
    return not bad, f"H^n = 0 for n in [-8, 1], {witnesses} h_X witnesses" + (f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 4. A1 / A2


def criterion_4():
    bad, a2, a1 = [], 0, 0
    for b in corpus():
        r = run_check("a2", b)
        for item in r.certificate.get("items", []):
            a2 += 1
            if item["verdict"] != "pass":
                bad.append(f"A2 {item['name']}: {item['verdict']} {item.get('reason', '')}")
        if "error" in r.certificate:
            bad.append(r.certificate["error"])
        for name, F in b.morphisms.items():
            if _componentwise_qe(F):
                continue
            a1 += 1
            v = is_q_weak_equivalence(F)
            if v.verdict != PASS:
                bad.append(f"A1 {name}: {v.verdict} {v.reason}")
    ok = not bad and a1 > 0 and a2 > 0
    return ok, f"{a2} pairs for A2, {a1} componentwise quasi-equivalences for A1" + (f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 5. closed monoidal structure


def criterion_5():
    bad, trips, skipped, units = [], 0, [], 0
    for b in corpus():
        for name, A in b.pairs.items():
            units += 1
            u = unit_law(A)
            if u["verdict"] != "pass":
                bad.append(f"unit law {name}: {u}")
            if not _finite_ambient(A):
                skipped.append(name)
                continue
            for phi in monoidal_morphisms(A):
                trips += 1
                r = round_trip(phi)
                if r["verdict"] != "pass":
                    bad.append(f"round trip {phi.name}")
    ok = not bad and trips >= 10
    detail = f"{trips} exact round trips, {units} unit laws, skipped non-finite {sorted(skipped)}"
    return ok, detail + (f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 6. fibrant form


def criterion_6():
    bad, good, broken = [], 0, 0
    for b in corpus():
        for name, B in b.categories.items():
            P = LocalizationPair(B, contractible_objects(B), name=f"{name}_contr")
            good += 1
            v = check_q_fibrant_form(P)
            if v.verdict != PASS:
                bad.append(f"{P.name}: {v.reason}")
        for name, A in b.pairs.items():
            exp = b.instance.pairs[name].expect
            if exp != "broken":
                continue
            broken += 1
            v = check_q_fibrant_form(A)
            failing = [k for k, c in v.data["clauses"].items() if c.startswith("FAIL")]
            if v.verdict == PASS or not failing or not v.reason:
                bad.append(f"{name}: broken variant not rejected with a clause")
    ok = not bad and broken >= 2
    return ok, f"{good} contractible-subcategory pairs pass, {broken} broken variants rejected" + (
        f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 7. non-example


def criterion_7():
    b = build(parse(corpus_dir() / "counterexample.dgc"))
    (item,) = run_check("non-example", b).certificate["items"]
    ok = item["inclusion"] == "pass" and item["pulled_back"] == "fail" and item["pullback_objects"] == []
    return ok, f"i_A {item['inclusion']}, pulled back ∅ -> B {item['pulled_back']} ({item['pulled_back_reason']})"


# --------------------------------------------------------------------------
# 8. b_plus


def criterion_8():
    bad, added, cats = [], 0, 0
    for b in corpus():
        for name, B in b.categories.items():
            for cap in (1, 2):
                cats += 1
                r = bplus_report(B, cap, (-1, 0, 1))
                if r["verdict"] != "pass" or r["h_quasi_equivalence"] != "pass":
                    bad.append(f"{r['name']}: {r['verdict']} {r['reason']}")
                for a in r["added"]:
                    added += 1
                    if a["verdict"] != "pass" or not a["witness"]:
                        bad.append(f"{r['name']}: {a['object']} has no witness")
    return not bad, f"{cats} enlargements (cap 1 and 2), {added} added objects with witnesses" + (
        f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 9. oracle soundness


def criterion_9():
    from test_oracle_soundness import CASES, MAX_TOTAL_DIM, oracle, total_dim

    bad, neg = [], 0
    for p in CASES:
        F, expect = p.values
        if total_dim(F.source) + total_dim(F.target) > MAX_TOTAL_DIM:
            bad.append(f"{p.id}: too large for the oracle")
        brute = oracle(F)
        neg += not brute
        if (is_quasi_equivalence(F).verdict == PASS) != brute:
            bad.append(f"{p.id}: disagreement")
    ok = not bad and len(CASES) >= 20 and neg >= 5
    return ok, f"{len(CASES)} functor cases, {neg} negatives, {len(bad)} disagreements" + (
        f"; {bad[0]}" if bad else "")


# --------------------------------------------------------------------------
# 10. determinism


def criterion_10(tmp: Path):
    outs = []
    for k in range(2):
        out = tmp / f"run{k}.json"
        code = cli_main(["check", "--all", "--format", "json", "--out", str(out)])
        if code != 0:
            return False, f"run {k} exited with {code}"
        data = json.loads(out.read_text())
        for r in data:
            r.pop("seconds", None)
        outs.append(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    raw = []
    for k in range(2):
        out = tmp / f"bare{k}.json"
        cli_main(["check", "--all", "--format", "json", "--no-timing", "--out", str(out)])
        raw.append(out.read_bytes())
    ok = outs[0] == outs[1] and raw[0] == raw[1]
    return ok, f"two full runs, {len(raw[0])} bytes, identical apart from timing: {ok}"


# --------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, capsys):
    ok, detail = globals()[f"criterion_{n}"]()
    report(n, ok, detail, capsys)
    assert ok, detail


def test_criterion_10(tmp_path, capsys):
    ok, detail = criterion_10(tmp_path)
    report(10, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    for n in range(1, 10):
        report(n, *globals()[f"criterion_{n}"]())
    with tempfile.TemporaryDirectory() as d:
        report(10, *criterion_10(Path(d)))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)

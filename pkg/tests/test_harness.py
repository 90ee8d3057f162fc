from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from dgcalc.cli import main
from dgcalc.errors import ParseError, PreconditionError
from dgcalc.exactlin import GF
from dgcalc.harness import REGISTRY, combine, reports_json, run_check, run_instance
from dgcalc.instances import build, corpus_dir, corpus_files, parse, parse_text, serialize

DUAL = """\
name tiny
field Q
window -3:2
checks axioms

category dual
  objects X
  gen e : X -> X deg 0
  rel e*e = 0
end
"""


def corpus(name: str) -> Path:
    return corpus_dir() / name


# --------------------------------------------------------------------------
# parsing


def test_parse_dual_numbers():
    b = build(parse_text(DUAL))
    D = b.categories["dual"]
    assert D.basis("X", "X", 0) == ("1_X", "e")
    assert b.instance.checks == ["axioms"]


def test_wrong_degree_differential_names_the_generator():
    text = DUAL.replace("  rel e*e = 0\n", "  gen t : X -> X deg -1\n  d t = t\n")
    with pytest.raises(ParseError) as exc:
        build(parse_text(text))
    err = exc.value
    assert "t" in str(err)
    assert err.line == 6 and err.column is not None


@pytest.mark.parametrize("bad,needle", [
    ("  gen f : X -> Z deg 0\n", "Z"),
    ("  d q = e\n", "q"),
    ("  frobnicate\n", "frobnicate"),
])
def test_unknown_identifiers_report_a_position(bad, needle):
    text = DUAL.replace("  rel e*e = 0\n", "  rel e*e = 0\n" + bad)
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert exc.value.line == 10
    assert exc.value.column == bad.index(needle) + 1
    assert needle in str(exc.value)


def test_unclosed_block_and_duplicates():
    with pytest.raises(ParseError):
        parse_text(DUAL.replace("end\n", ""))
    with pytest.raises(ParseError):
        parse_text(DUAL + "\ncategory dual\n  objects Y\nend\n")


def test_unknown_category_in_pair():
    text = DUAL + "\npair p\n  ambient nope\n  sub\nend\n"
    with pytest.raises(ParseError) as exc:
        build(parse_text(text))
    assert "nope" in str(exc.value)


def test_field_override():
    inst = parse_text(DUAL, field_override=GF(2))
    assert inst.field == GF(2)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_serialize_is_idempotent(path):
    inst = parse(path)
    once = serialize(inst)
    assert serialize(parse_text(once)) == once


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        parse("/nonexistent/x.dgc")


# --------------------------------------------------------------------------
# checks


def test_unknown_check_name():
    with pytest.raises(PreconditionError):
        run_check("bogus", parse_text(DUAL))


def test_axioms_report():
    r = run_check("axioms", parse_text(DUAL))
    assert r.verdict == "pass"
    assert all(i["violations"] == [] for i in r.certificate["items"])


def test_path_object_report_carries_rank_certificate():
    r = run_check("path-object", parse(corpus("iso.dgc")))
    assert r.verdict == "pass"
    for item in r.certificate["items"]:
        assert item["rank_certificate"]
        assert all(s["surjective"] for s in item["surjectivity"])


def test_nonexample_report():
    (item,) = run_check("non-example", parse(corpus("counterexample.dgc"))).certificate["items"]
    assert item["inclusion"] == "pass"
    assert item["pulled_back"] == "fail"
    assert item["pullback_objects"] == []


def test_broken_pair_fails_fibrant_form_as_expected():
    r = run_check("q-fibrant-form", parse(corpus("acyclic.dgc")))
    items = {i["name"]: i for i in r.certificate["items"]}
    assert items["acyc_empty"]["form_verdict"] == "fail"
    assert items["acyc_X"]["form_verdict"] == "pass"
    assert r.verdict == "pass"


def test_every_registered_check_runs_on_its_corpus_instances():
    for path in corpus_files():
        inst = parse(path)
        for r in run_instance(inst):
            assert r.check in REGISTRY
            assert r.verdict == "pass", (path.name, r.check, r.certificate)


def test_combine_rules():
    assert combine(["pass", "pass"]) == "pass"
    assert combine(["pass", "inconclusive"]) == "inconclusive"
    assert combine(["inconclusive", "fail"]) == "fail"
    assert combine(["skipped", "pass"]) == "pass"
    assert combine(["skipped"]) == "inconclusive"


def test_reports_are_deterministic():
    a = reports_json(run_instance(parse(corpus("dual.dgc"))), timing=False)
    b = reports_json(run_instance(parse(corpus("dual.dgc"))), timing=False)
    assert a == b
    json.loads(a)


# --------------------------------------------------------------------------
# command line


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["check", "axioms", str(corpus("dual.dgc"))]) == 0
    assert main(["check", "axioms", str(tmp_path / "missing.dgc")]) == 64
    bad = tmp_path / "bad.dgc"
    bad.write_text("category c\n  objects X\n  gen u : X -> Y deg 0\nend\n")
    assert main(["check", "axioms", str(bad)]) == 64
    assert main(["check", "--window", "oops", "axioms"]) == 64
    assert main(["check", "no-such-check"]) == 64


def test_cli_options_between_positionals():
    assert main(["check", "axioms", "--field", "Fp:3", str(corpus("dual.dgc"))]) == 0


def test_cli_lists_checks(capsys):
    assert main(["check", "--list"]) == 0
    assert capsys.readouterr().out.split() == sorted(REGISTRY)


def test_cli_failure_exit_code(tmp_path):
    # the identity of k into a two-object category is not a quasi-equivalence
    f = tmp_path / "fail.dgc"
    f.write_text("""\
name fail
checks a1
category k
  objects X
end
category kk
  objects X Y
end
pair k0
  ambient k
  sub
end
pair kk0
  ambient kk
  sub
end
functor inc : k -> kk
  obj X -> X
end
morphism incp : k0 -> kk0
  functor inc
  expect qe
end
""")
    assert main(["check", "a1", str(f)]) == 1


def test_cli_quotient_output(capsys):
    assert main(["quotient", str(corpus("k.dgc")), "--sub", "X", "--window", "-9:2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["category"] == "k/{X}"
    (row,) = data["homs"]
    assert {int(n): v for n, v in row["dims"].items() if v} == {n: 1 for n in range(-9, 1)}
    assert set(row["cohomology"].values()) == {0}


def test_cli_json_check_output_is_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        assert main(["check", "axioms", str(corpus("dual.dgc")), "--format", "json",
                     "--no-timing", "--out", str(out)]) == 0
    assert out1.read_text() == out2.read_text()


def test_corpus_directory_from_environment(tmp_path):
    (tmp_path / "only.dgc").write_text(DUAL)
    env = dict(os.environ, DGCALC_CORPUS=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "dgcalc.cli", "check", "--all", "--format", "json", "--no-timing"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    data = json.loads(proc.stdout)
    assert [r["instance"] for r in data] == ["tiny"]

"""Command-line interface: ``dgcalc <subcommand> ...``.

Exit codes: 0 when every verdict passes, 1 on any failure, 2 when some
verdict is inconclusive and none fails, 64 for usage errors and unreadable
or invalid instance files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .errors import DGCalcError, ParseError, WindowError
from .exactlin import cohomology, field_from_name
from .dgcore.checks import check_axioms
from .constructions.path import path_object
from .constructions.quotient import drinfeld_quotient
from .constructions.tensor import tensor
from .dgcore.category import identity_functor
from .harness import (
    REGISTRY,
    CheckReport,
    Options,
    bplus_report,
    combine,
    jsonable,
    monoidal_morphisms,
    path_roster,
    reports_json,
    reports_text,
    round_trip,
    run_check,
)
from .instances import Built, build, corpus_dir, corpus_files, parse
from .locpair import lp_hom

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    _intermixing = False

    def parse_known_args(self, args=None, namespace=None):
        # subcommands take options between positionals, e.g. `check axioms --field Fp:3 f.dgc`
        if self._subparsers is not None or self._intermixing:
            return super().parse_known_args(args, namespace)
        self._intermixing = True
        try:
            return self.parse_known_intermixed_args(args, namespace)
        finally:
            self._intermixing = False

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be LO:HI, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _field(text: str):
    try:
        return field_from_name(text)
    except DGCalcError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def exit_code(verdicts: Sequence[str]) -> int:
    v = combine(verdicts)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(v, EXIT_INCONCLUSIVE)


# --------------------------------------------------------------------------
# input handling


def _expand(paths: Sequence[str]) -> list[Path]:
    if not paths:
        return corpus_files()
    out: list[Path] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            found = corpus_files(path)
            if not found:
                raise UsageError(f"no .dgc files in {path}")
            out.extend(found)
        elif path.is_file():
            out.append(path)
        else:
            raise UsageError(f"no such instance file: {path}")
    return out


def _load(path: str, args) -> Built:
    p = Path(path)
    if not p.is_file():
        alt = corpus_dir() / path
        if alt.is_file():
            p = alt
        else:
            raise UsageError(f"no such instance file: {path}")
    return build(parse(p, args.field), args.window, args.cap)


def _category(b: Built, name: str | None):
    if name is None:
        if not b.categories:
            raise UsageError(f"{b.instance.path}: no category blocks")
        return b.categories[next(iter(b.instance.categories))]
    if name not in b.categories:
        raise UsageError(f"unknown category {name!r}; known: {', '.join(sorted(b.categories))}")
    return b.categories[name]


def _pair(b: Built, name: str):
    if name not in b.pairs:
        raise UsageError(f"unknown pair {name!r}; known: {', '.join(sorted(b.pairs)) or 'none'}")
    return b.pairs[name]


# --------------------------------------------------------------------------
# tables


def hom_table(C, with_cohomology: bool = False) -> dict:
    """Dimensions of every hom space per degree, optionally with H^n."""
    rows = []
    for x in C.objects:
        for y in C.objects:
            dims = {n: C.dim(x, y, n) for n in C.degrees()}
            row = {"src": x, "tgt": y, "dims": dims}
            if with_cohomology:
                row["cohomology"] = _cohomology_row(C, x, y)
            rows.append(row)
    return {"category": C.name, "window": list(C.window), "objects": list(C.objects), "homs": rows}


def _cohomology_row(C, x, y) -> dict:
    cx = C.hom_complex(x, y)
    lo, hi = cx.window
    out = {}
    for n in range(lo + 1, hi):
        out[n] = cohomology(cx, n).dim
    return out


def _render_table(t: dict) -> list[str]:
    lines = [f"{t['category']}  window {t['window']}  objects {', '.join(t['objects'])}"]
    for row in t["homs"]:
        degs = sorted(row["dims"])
        lines.append(f"  Hom({row['src']},{row['tgt']})")
        lines.append("    n    " + " ".join(f"{n:>4d}" for n in degs))
        lines.append("    dim  " + " ".join(f"{row['dims'][n]:>4d}" for n in degs))
        if "cohomology" in row:
            h = row["cohomology"]
            lines.append("    H^n  " + " ".join(f"{h[n]:>4d}" if n in h else "   ." for n in degs))
    return lines


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out = json.dumps(jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    if args.list:
        sys.stdout.write("".join(f"{n}\n" for n in sorted(REGISTRY)))
        return 0
    names = [] if args.all else [args.name]
    if args.all and args.name is not None:
        args.paths.insert(0, args.name)
    if not args.all:
        if args.name is None:
            raise UsageError("check needs a check name or --all")
        if args.name not in REGISTRY:
            raise UsageError(f"unknown check {args.name!r}; known: {', '.join(sorted(REGISTRY))}")
    files = _expand(args.paths)
    opts = Options(bplus_cap=args.bplus_cap, shifts=args.shifts)
    reports: list[CheckReport] = []
    for f in files:
        b = build(parse(f, args.field), args.window, args.cap)
        for c in (b.instance.checks if args.all else names):
            reports.append(run_check(c, b, options=opts))
    out = reports_json(reports, timing=not args.no_timing) if args.format == "json" else reports_text(reports)
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return exit_code([r.verdict for r in reports])


def cmd_quotient(args) -> int:
    b = _load(args.file, args)
    A = _category(b, args.category)
    sub = [s for s in args.sub.split(",") if s]
    for s in sub:
        if s not in A.objects:
            raise UsageError(f"{s!r} is not an object of {A.name}")
    Q = drinfeld_quotient(A, sub, args.window or A.window, args.cap)
    t = hom_table(Q, with_cohomology=True)
    _emit(args, t, _render_table(t))
    return EXIT_OK


def cmd_cohomology(args) -> int:
    b = _load(args.file, args)
    C = _category(b, args.category)
    t = hom_table(C, with_cohomology=True)
    _emit(args, t, _render_table(t))
    return EXIT_OK


def cmd_path(args) -> int:
    b = _load(args.file, args)
    B = _category(b, args.category)
    P = path_object(B, path_roster(B))
    rep = run_check("path-object", _only(b, B), options=Options())
    t = hom_table(P)
    t["verdict"] = rep.verdict
    t["certificate"] = rep.certificate
    _emit(args, t, _render_table(t) + [f"path-object: {rep.verdict}"])
    return exit_code([rep.verdict])


def cmd_tensor(args) -> int:
    b = _load(args.file, args)
    A = _category(b, args.left)
    B = _category(b, args.right or args.left)
    T = tensor(A, B)
    problems = check_axioms(T, limit=20)
    t = hom_table(T)
    t["axiom_violations"] = problems
    v = "pass" if not problems else "fail"
    _emit(args, t, _render_table(t) + [f"axioms: {v}"] + [f"  {p}" for p in problems])
    return exit_code([v])


def cmd_hom(args) -> int:
    b = _load(args.file, args)
    A, B = _pair(b, args.source), _pair(b, args.target)
    roster = [F for F in b.functors.values() if F.source is A.ambient and F.target is B.ambient]
    if A.ambient is B.ambient and not roster:
        roster = [identity_functor(A.ambient)]
    if not roster:
        raise UsageError(f"no functor blocks from {A.ambient.name} to {B.ambient.name} to use as a roster")
    H = lp_hom(A, B, roster)
    C = H.pair.ambient
    problems = check_axioms(C, limit=20)
    t = hom_table(C)
    t["sub"] = list(H.pair.sub)
    t["axiom_violations"] = problems
    v = "pass" if not problems else "fail"
    _emit(args, t, _render_table(t) + [f"  subcategory: {', '.join(H.pair.sub) or '(empty)'}", f"axioms: {v}"])
    return exit_code([v])


def cmd_transpose(args) -> int:
    b = _load(args.file, args)
    names = [args.pair] if args.pair else sorted(b.pairs)
    items = []
    for n in names:
        for phi in monoidal_morphisms(_pair(b, n)):
            items.append(round_trip(phi))
    lines = [f"{i['verdict']:5s} {i['name']}" for i in items]
    _emit(args, {"items": items}, lines or ["no pairs"])
    return exit_code([i["verdict"] for i in items]) if items else EXIT_INCONCLUSIVE


def cmd_bplus(args) -> int:
    b = _load(args.file, args)
    B = _category(b, args.category)
    rep = bplus_report(B, args.size, args.shifts)
    lines = [f"{rep['verdict']:5s} {rep['name']}  objects {rep['objects']}  h: {rep['h_quasi_equivalence']}"]
    lines += [f"    {a['verdict']:5s} {a['object']} ~ {a['representable']}" for a in rep["added"]]
    _emit(args, rep, lines)
    return exit_code([rep["verdict"]])


def _only(b: Built, C) -> Built:
    """``b`` restricted to the single category ``C``."""
    cats = {k: v for k, v in b.categories.items() if v is C}
    return Built(b.instance, cats, {}, {}, {})


# --------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=_window, metavar="LO:HI", help="degree window override")
    common.add_argument("--cap", type=int, metavar="N", help="word-length cap override")
    common.add_argument("--field", type=_field, metavar="Q|Fp:P", help="coefficient field override")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    p = _Parser(prog="dgcalc", description="Exact computations with finite DG categories.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("check", parents=[common], help="run named checks on instance files")
    c.add_argument("name", nargs="?", help="check name (see --list)")
    c.add_argument("paths", nargs="*", help="instance files or directories (default: the corpus)")
    c.add_argument("--all", action="store_true", help="run every check each instance is tagged with")
    c.add_argument("--bplus-cap", type=int, default=1, metavar="N")
    c.add_argument("--shifts", type=_ints, default=(-1, 0, 1), metavar="S,...")
    c.add_argument("--no-timing", action="store_true", help="omit wall-clock times from json")
    c.add_argument("--list", action="store_true", help="print the registered check names and exit")
    c.set_defaults(func=cmd_check)

    q = sub.add_parser("quotient", parents=[common], help="hom dimensions of a Drinfeld quotient")
    q.add_argument("file")
    q.add_argument("--sub", required=True, metavar="X,...", help="objects to kill")
    q.add_argument("--category")
    q.set_defaults(func=cmd_quotient)

    h = sub.add_parser("cohomology", parents=[common], help="hom dimensions and cohomology of a category")
    h.add_argument("file")
    h.add_argument("--category")
    h.set_defaults(func=cmd_cohomology)

    pa = sub.add_parser("path", parents=[common], help="path object and its lemma checks")
    pa.add_argument("file")
    pa.add_argument("--category")
    pa.set_defaults(func=cmd_path)

    t = sub.add_parser("tensor", parents=[common], help="tensor product of two categories of a file")
    t.add_argument("file")
    t.add_argument("left", nargs="?")
    t.add_argument("right", nargs="?")
    t.set_defaults(func=cmd_tensor)

    hm = sub.add_parser("hom", parents=[common], help="internal Hom of two pairs of a file")
    hm.add_argument("file")
    hm.add_argument("source")
    hm.add_argument("target")
    hm.set_defaults(func=cmd_hom)

    tr = sub.add_parser("transpose", parents=[common], help="transpose/untranspose round trips")
    tr.add_argument("file")
    tr.add_argument("--pair")
    tr.set_defaults(func=cmd_transpose)

    bp = sub.add_parser("bplus", parents=[common], help="enlarge by cones and check h: B -> B+")
    bp.add_argument("file")
    bp.add_argument("--category")
    bp.add_argument("--size", type=int, default=1, metavar="N", help="maximal number of cone summands")
    bp.add_argument("--shifts", type=_ints, default=(-1, 0, 1), metavar="S,...")
    bp.set_defaults(func=cmd_bplus)
    return p


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # "--window -6:1" would otherwise read -6:1 as an option
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--window", "--shifts"):
            v = next(it, None)
            out.append(a if v is None else f"{a}={v}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"dgcalc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FileNotFoundError) as e:
        print(f"dgcalc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WindowError as e:
        print(f"dgcalc: inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())

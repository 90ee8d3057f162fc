"""Plain-text instance files (``.dgc``): parsing, canonical serialization, building.

A file is a sequence of top-level settings and blocks, one statement per
line, ``#`` starting a comment::

    name dual
    field Q                  # or F2, F3, ...
    window -4:2
    cap 8
    checks axioms path-object

    category D
      objects X
      gen e : X -> X deg 0
      d e = 0
      rel e*e = 0
    end

    pair D0
      ambient D
      sub X
      expect fibrant         # or broken; optional
    end

    functor neg : D -> D
      obj X -> X
      map e -> -e
    end

    morphism negp : D0 -> D0
      functor neg
      expect qe              # componentwise quasi-equivalence; optional
    end

    nonexample ne
      inclusion iA
      base g
    end
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .errors import DGCalcError, ParseError
from .exactlin import Field, QQ, field_from_name
from .dgcore.category import DGFunctor
from .dgcore.functor import functor_from_generators
from .dgcore.presentation import PresentedCategory, expr_str, parse_expr, presentation, tabulate
from .locpair import LocalizationPair, LpMorphism

IDENT = r"[A-Za-z_][A-Za-z0-9_'.]*"
_IDENT = re.compile(IDENT + r"$")
_WINDOW = re.compile(r"(-?\d+):(-?\d+)$")

EXPECT_PAIR = ("fibrant", "broken")
EXPECT_MORPHISM = ("qe",)


@dataclass
class CategorySpec:
    name: str
    objects: list[str] = dc_field(default_factory=list)
    gens: list[tuple[str, str, str, int]] = dc_field(default_factory=list)
    d: dict[str, str] = dc_field(default_factory=dict)
    rels: list[tuple[str, str]] = dc_field(default_factory=list)
    window: tuple[int, int] | None = None
    cap: int | None = None
    line: int = 0


@dataclass
class PairSpec:
    name: str
    ambient: str = ""
    sub: list[str] = dc_field(default_factory=list)
    expect: str | None = None
    line: int = 0


@dataclass
class FunctorSpec:
    name: str
    src: str
    tgt: str
    obj: dict[str, str] = dc_field(default_factory=dict)
    maps: dict[str, str] = dc_field(default_factory=dict)
    line: int = 0


@dataclass
class MorphismSpec:
    name: str
    src: str
    tgt: str
    functor: str = ""
    expect: str | None = None
    line: int = 0


@dataclass
class NonExampleSpec:
    name: str
    inclusion: str = ""
    base: str = ""
    line: int = 0


@dataclass
class Instance:
    name: str = ""
    field: Field = QQ
    window: tuple[int, int] = (-4, 2)
    cap: int = 8
    checks: list[str] = dc_field(default_factory=list)
    categories: dict[str, CategorySpec] = dc_field(default_factory=dict)
    pairs: dict[str, PairSpec] = dc_field(default_factory=dict)
    functors: dict[str, FunctorSpec] = dc_field(default_factory=dict)
    morphisms: dict[str, MorphismSpec] = dc_field(default_factory=dict)
    nonexamples: dict[str, NonExampleSpec] = dc_field(default_factory=dict)
    path: str | None = None


# --------------------------------------------------------------------------
# parsing


def _strip(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).rstrip()


def _col(raw: str, token: str, start: int = 0) -> int:
    i = raw.find(token, start)
    return (i if i >= 0 else 0) + 1


def _ident(tok: str, raw: str, ln: int, what: str) -> str:
    if not _IDENT.match(tok):
        raise ParseError(f"invalid {what} {tok!r}", ln, _col(raw, tok))
    return tok


def _window(tok: str, raw: str, ln: int) -> tuple[int, int]:
    m = _WINDOW.match(tok)
    if not m:
        raise ParseError(f"window must look like LO:HI, got {tok!r}", ln, _col(raw, tok))
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ParseError(f"empty window {tok}", ln, _col(raw, tok))
    return lo, hi


def _int(tok: str, raw: str, ln: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", ln, _col(raw, tok)) from None


def _field(tok: str, raw: str, ln: int) -> Field:
    try:
        return field_from_name(tok)
    except DGCalcError as e:
        raise ParseError(str(e), ln, _col(raw, tok)) from None


def _check_expr(text: str, fld: Field, raw: str, ln: int) -> str:
    """Canonical text of an expression, raising ParseError with its column."""
    col = _col(raw, text)
    e = parse_expr(text, fld, ln, col)
    return expr_str(e)


def parse_text(text: str, path: str | None = None, field_override: Field | None = None) -> Instance:
    inst = Instance(path=path)
    if path:
        inst.name = Path(path).stem
    lines = text.splitlines()
    # the field has to be known before expressions are read
    for ln, raw in enumerate(lines, 1):
        toks = _strip(raw).split()
        if toks and toks[0] == "field":
            if len(toks) != 2:
                raise ParseError("field takes one argument", ln, 1)
            inst.field = _field(toks[1], raw, ln)
    if field_override is not None:
        inst.field = field_override
    block = None
    kind = None
    seen_names: dict[str, int] = {}

    def register(name: str, ln: int, raw: str):
        if name in seen_names:
            raise ParseError(f"duplicate block name {name!r} (first defined on line {seen_names[name]})", ln,
                             _col(raw, name))
        seen_names[name] = ln

    for ln, raw in enumerate(lines, 1):
        line = _strip(raw)
        toks = line.split()
        if not toks:
            continue
        head = toks[0]
        if block is None:
            if head == "name":
                if len(toks) != 2:
                    raise ParseError("name takes one argument", ln, 1)
                inst.name = _ident(toks[1], raw, ln, "name")
            elif head == "field":
                pass
            elif head == "window":
                if len(toks) != 2:
                    raise ParseError("window takes one argument LO:HI", ln, 1)
                inst.window = _window(toks[1], raw, ln)
            elif head == "cap":
                if len(toks) != 2:
                    raise ParseError("cap takes one argument", ln, 1)
                inst.cap = _int(toks[1], raw, ln, "cap")
            elif head == "checks":
                for t in toks[1:]:
                    if t not in inst.checks:
                        inst.checks.append(t)
            elif head == "category":
                if len(toks) != 2:
                    raise ParseError("expected 'category NAME'", ln, 1)
                name = _ident(toks[1], raw, ln, "category name")
                register(name, ln, raw)
                block, kind = CategorySpec(name, line=ln), "category"
            elif head == "pair":
                if len(toks) != 2:
                    raise ParseError("expected 'pair NAME'", ln, 1)
                name = _ident(toks[1], raw, ln, "pair name")
                register(name, ln, raw)
                block, kind = PairSpec(name, line=ln), "pair"
            elif head in ("functor", "morphism"):
                m = re.match(rf"{head}\s+({IDENT})\s*:\s*({IDENT})\s*->\s*({IDENT})$", line.strip())
                if not m:
                    raise ParseError(f"expected '{head} NAME : SOURCE -> TARGET'", ln, 1)
                register(m.group(1), ln, raw)
                if head == "functor":
                    block, kind = FunctorSpec(m.group(1), m.group(2), m.group(3), line=ln), "functor"
                else:
                    block, kind = MorphismSpec(m.group(1), m.group(2), m.group(3), line=ln), "morphism"
            elif head == "nonexample":
                if len(toks) != 2:
                    raise ParseError("expected 'nonexample NAME'", ln, 1)
                name = _ident(toks[1], raw, ln, "name")
                register(name, ln, raw)
                block, kind = NonExampleSpec(name, line=ln), "nonexample"
            elif head == "end":
                raise ParseError("'end' outside a block", ln, _col(raw, "end"))
            else:
                raise ParseError(f"unknown statement {head!r}", ln, _col(raw, head))
            continue
        if head == "end":
            if len(toks) != 1:
                raise ParseError("'end' takes no arguments", ln, 1)
            getattr(inst, {"category": "categories", "pair": "pairs", "functor": "functors",
                           "morphism": "morphisms", "nonexample": "nonexamples"}[kind])[block.name] = block
            block = kind = None
            continue
        _block_line(inst, kind, block, toks, line, raw, ln)
    if block is not None:
        raise ParseError(f"block {block.name!r} opened on line {block.line} is not closed", len(lines) + 1, 1)
    return inst


def _block_line(inst: Instance, kind: str, block, toks: list[str], line: str, raw: str, ln: int) -> None:
    head = toks[0]
    fld = inst.field
    if kind == "category":
        B: CategorySpec = block
        if head == "objects":
            for t in toks[1:]:
                _ident(t, raw, ln, "object name")
                if t in B.objects:
                    raise ParseError(f"duplicate object {t!r}", ln, _col(raw, t))
                B.objects.append(t)
        elif head == "gen":
            m = re.match(rf"gen\s+({IDENT})\s*:\s*({IDENT})\s*->\s*({IDENT})\s+deg\s+(-?\d+)$", line.strip())
            if not m:
                raise ParseError("expected 'gen NAME : SRC -> TGT deg N'", ln, 1)
            name, s, t, n = m.group(1), m.group(2), m.group(3), int(m.group(4))
            if name.startswith("1_"):
                raise ParseError(f"generator name {name!r} clashes with identity notation", ln, _col(raw, name))
            for o in (s, t):
                if o not in B.objects:
                    raise ParseError(f"generator {name!r} uses unknown object {o!r}", ln, _col(raw, o, 4))
            if any(g[0] == name for g in B.gens):
                raise ParseError(f"duplicate generator {name!r}", ln, _col(raw, name))
            B.gens.append((name, s, t, n))
        elif head == "d":
            m = re.match(rf"d\s+({IDENT})\s*=\s*(.+)$", line.strip())
            if not m:
                raise ParseError("expected 'd GEN = EXPR'", ln, 1)
            g = m.group(1)
            if not any(x[0] == g for x in B.gens):
                raise ParseError(f"differential given for unknown generator {g!r}", ln, _col(raw, g, 1))
            B.d[g] = _check_expr(m.group(2), fld, raw, ln)
        elif head == "rel":
            body = line.strip()[3:]
            if body.count("=") != 1:
                raise ParseError("expected 'rel EXPR = EXPR'", ln, 1)
            lhs, rhs = body.split("=")
            B.rels.append((_check_expr(lhs.strip(), fld, raw, ln), _check_expr(rhs.strip(), fld, raw, ln)))
        elif head == "window":
            if len(toks) != 2:
                raise ParseError("window takes one argument", ln, 1)
            B.window = _window(toks[1], raw, ln)
        elif head == "cap":
            if len(toks) != 2:
                raise ParseError("cap takes one argument", ln, 1)
            B.cap = _int(toks[1], raw, ln, "cap")
        else:
            raise ParseError(f"unknown statement {head!r} in category block", ln, _col(raw, head))
    elif kind == "pair":
        P: PairSpec = block
        if head == "ambient" and len(toks) == 2:
            P.ambient = _ident(toks[1], raw, ln, "category name")
        elif head == "sub":
            P.sub.extend(_ident(t, raw, ln, "object name") for t in toks[1:])
        elif head == "expect" and len(toks) == 2:
            if toks[1] not in EXPECT_PAIR:
                raise ParseError(f"pair expectation must be one of {EXPECT_PAIR}", ln, _col(raw, toks[1]))
            P.expect = toks[1]
        else:
            raise ParseError(f"unknown statement {head!r} in pair block", ln, _col(raw, head))
    elif kind == "functor":
        F: FunctorSpec = block
        if head == "obj":
            m = re.match(rf"obj\s+({IDENT})\s*->\s*({IDENT})$", line.strip())
            if not m:
                raise ParseError("expected 'obj X -> Y'", ln, 1)
            F.obj[m.group(1)] = m.group(2)
        elif head == "map":
            m = re.match(rf"map\s+({IDENT})\s*->\s*(.+)$", line.strip())
            if not m:
                raise ParseError("expected 'map GEN -> EXPR'", ln, 1)
            F.maps[m.group(1)] = _check_expr(m.group(2), fld, raw, ln)
        else:
            raise ParseError(f"unknown statement {head!r} in functor block", ln, _col(raw, head))
    elif kind == "morphism":
        M: MorphismSpec = block
        if head == "functor" and len(toks) == 2:
            M.functor = _ident(toks[1], raw, ln, "functor name")
        elif head == "expect" and len(toks) == 2:
            if toks[1] not in EXPECT_MORPHISM:
                raise ParseError(f"morphism expectation must be one of {EXPECT_MORPHISM}", ln, _col(raw, toks[1]))
            M.expect = toks[1]
        else:
            raise ParseError(f"unknown statement {head!r} in morphism block", ln, _col(raw, head))
    elif kind == "nonexample":
        N: NonExampleSpec = block
        if head in ("inclusion", "base") and len(toks) == 2:
            setattr(N, head, _ident(toks[1], raw, ln, "functor name"))
        else:
            raise ParseError(f"unknown statement {head!r} in nonexample block", ln, _col(raw, head))


def parse(path: str | os.PathLike, field_override: Field | None = None) -> Instance:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise FileNotFoundError(f"cannot read instance file {p}: {e.strerror}") from None
    return parse_text(text, str(p), field_override)


# --------------------------------------------------------------------------
# canonical serialization


def serialize(inst: Instance) -> str:
    """Canonical text: settings, then blocks of each kind sorted by name."""
    out = []
    if inst.name:
        out.append(f"name {inst.name}")
    out.append(f"field {inst.field.name()}")
    out.append(f"window {inst.window[0]}:{inst.window[1]}")
    out.append(f"cap {inst.cap}")
    if inst.checks:
        out.append("checks " + " ".join(sorted(inst.checks)))
    for name in sorted(inst.categories):
        B = inst.categories[name]
        out.append("")
        out.append(f"category {name}")
        if B.objects:
            out.append("  objects " + " ".join(B.objects))
        if B.window is not None:
            out.append(f"  window {B.window[0]}:{B.window[1]}")
        if B.cap is not None:
            out.append(f"  cap {B.cap}")
        for g, s, t, n in B.gens:
            out.append(f"  gen {g} : {s} -> {t} deg {n}")
        for g, _, _, _ in B.gens:
            if g in B.d:
                out.append(f"  d {g} = {B.d[g]}")
        for lhs, rhs in B.rels:
            out.append(f"  rel {lhs} = {rhs}")
        out.append("end")
    for name in sorted(inst.pairs):
        P = inst.pairs[name]
        out.append("")
        out.append(f"pair {name}")
        out.append(f"  ambient {P.ambient}")
        out.append("  sub" + "".join(f" {x}" for x in P.sub))
        if P.expect:
            out.append(f"  expect {P.expect}")
        out.append("end")
    for name in sorted(inst.functors):
        F = inst.functors[name]
        out.append("")
        out.append(f"functor {name} : {F.src} -> {F.tgt}")
        for x in sorted(F.obj):
            out.append(f"  obj {x} -> {F.obj[x]}")
        for g in sorted(F.maps):
            out.append(f"  map {g} -> {F.maps[g]}")
        out.append("end")
    for name in sorted(inst.morphisms):
        M = inst.morphisms[name]
        out.append("")
        out.append(f"morphism {name} : {M.src} -> {M.tgt}")
        out.append(f"  functor {M.functor}")
        if M.expect:
            out.append(f"  expect {M.expect}")
        out.append("end")
    for name in sorted(inst.nonexamples):
        N = inst.nonexamples[name]
        out.append("")
        out.append(f"nonexample {name}")
        out.append(f"  inclusion {N.inclusion}")
        out.append(f"  base {N.base}")
        out.append("end")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# building


@dataclass
class Built:
    instance: Instance
    categories: dict[str, PresentedCategory]
    pairs: dict[str, LocalizationPair]
    functors: dict[str, DGFunctor]
    morphisms: dict[str, LpMorphism]


def build(inst: Instance, window: tuple[int, int] | None = None, cap: int | None = None) -> Built:
    """Tabulate every category and resolve pairs, functors and morphisms.

    ``window`` and ``cap`` override the values given in the file.
    Semantic problems are reported as :class:`ParseError` with the line of
    the offending block.
    """
    fld = inst.field
    cats: dict[str, PresentedCategory] = {}
    for name, B in inst.categories.items():
        try:
            P = presentation(
                B.objects, B.gens, B.d, list(B.rels), field=fld,
                window=window or B.window or inst.window,
                cap=cap if cap is not None else (B.cap if B.cap is not None else inst.cap), name=name,
            )
            cats[name] = tabulate(P)
        except ParseError:
            raise
        except DGCalcError as e:
            raise ParseError(f"category {name}: {e}", B.line, 1) from None
    pairs: dict[str, LocalizationPair] = {}
    for name, P in inst.pairs.items():
        if P.ambient not in cats:
            raise ParseError(f"pair {name}: unknown category {P.ambient!r}", P.line, 1)
        C = cats[P.ambient]
        for x in P.sub:
            if x not in C.objects:
                raise ParseError(f"pair {name}: {x!r} is not an object of {P.ambient}", P.line, 1)
        pairs[name] = LocalizationPair(C, tuple(P.sub), name=name)
    functors: dict[str, DGFunctor] = {}
    for name, F in inst.functors.items():
        for c in (F.src, F.tgt):
            if c not in cats:
                raise ParseError(f"functor {name}: unknown category {c!r}", F.line, 1)
        S, T = cats[F.src], cats[F.tgt]
        for x in S.objects:
            if x not in F.obj:
                raise ParseError(f"functor {name}: object {x!r} has no image", F.line, 1)
        for x, y in F.obj.items():
            if x not in S.objects:
                raise ParseError(f"functor {name}: {x!r} is not an object of {F.src}", F.line, 1)
            if y not in T.objects:
                raise ParseError(f"functor {name}: {y!r} is not an object of {F.tgt}", F.line, 1)
        images = {}
        for g, text in F.maps.items():
            if g not in S.presentation.gen:
                raise ParseError(f"functor {name}: {g!r} is not a generator of {F.src}", F.line, 1)
            images[g] = parse_expr(text, fld)
        for g in S.presentation.generators:
            if g.name not in images and S.lo <= g.deg <= S.hi:
                raise ParseError(f"functor {name}: generator {g.name!r} has no image", F.line, 1)
        try:
            imgs = {}
            for g, e in images.items():
                gg = S.presentation.gen[g]
                imgs[g] = T.expr(e) if e else T.zero(F.obj[gg.src], F.obj[gg.tgt], gg.deg)
            functors[name] = functor_from_generators(S, T, F.obj, imgs, name=name)
        except DGCalcError as e:
            raise ParseError(f"functor {name}: {e}", F.line, 1) from None
    morphisms: dict[str, LpMorphism] = {}
    for name, M in inst.morphisms.items():
        for p in (M.src, M.tgt):
            if p not in pairs:
                raise ParseError(f"morphism {name}: unknown pair {p!r}", M.line, 1)
        if M.functor not in functors:
            raise ParseError(f"morphism {name}: unknown functor {M.functor!r}", M.line, 1)
        try:
            morphisms[name] = LpMorphism(pairs[M.src], pairs[M.tgt], functors[M.functor], name=name)
        except DGCalcError as e:
            raise ParseError(f"morphism {name}: {e}", M.line, 1) from None
    for name, N in inst.nonexamples.items():
        for f in (N.inclusion, N.base):
            if f not in functors:
                raise ParseError(f"nonexample {name}: unknown functor {f!r}", N.line, 1)
        if functors[N.inclusion].target is not functors[N.base].target:
            raise ParseError(f"nonexample {name}: functors must share their target", N.line, 1)
    return Built(inst, cats, pairs, functors, morphisms)


def corpus_dir() -> Path:
    env = os.environ.get("DGCALC_CORPUS")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "corpus"


def corpus_files(directory: str | os.PathLike | None = None) -> list[Path]:
    d = Path(directory) if directory is not None else corpus_dir()
    return sorted(d.glob("*.dgc"))

"""Finitely presented DG categories and their windowed tabulation.

A presentation consists of objects, homogeneous generators, the value of
``d`` on each generator and homogeneous relations.  Words are written
left to right in composition order: ``u*h`` means ``u . h`` (first h).

Tabulation enumerates composable words up to a length cap, takes the
two-sided ideal spanned by relation consequences ``u r v`` degree by
degree, and picks normal forms by exact row reduction: the basis of each
hom space consists of the smallest words in degree-lexicographic order
(length first, then generator names) that are independent modulo the
ideal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from ..errors import (
    CapExceededError,
    InconsistentPresentationError,
    ParseError,
    StructuralError,
)
from ..exactlin import Field, QQ, rref
from .category import COMPLETE, TRUNCATED, DGCategory, Mor

Word = tuple  # tuple of generator names; ("1_X",) is the identity of X
Expr = dict  # Word -> scalar


@dataclass(frozen=True)
class Generator:
    name: str
    src: str
    tgt: str
    deg: int


# --------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(
    r"\s*(?:(?P<name>1_[A-Za-z0-9_'.]+|[A-Za-z_][A-Za-z0-9_'.]*)|(?P<num>\d+(?:/\d+)?)|(?P<op>[*+\-]))"
)


def parse_expr(text: str, field: Field = QQ, line: int | None = None, col0: int = 1) -> Expr:
    """Parse ``"2 c*c - 3/2 c + 1_X"`` into ``{("c","c"): 2, ("c",): -3/2, ("1_X",): 1}``."""
    pos = 0
    toks: list[tuple[str, str, int]] = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", line, col0 + pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    out: Expr = {}
    i = 0
    if not toks:
        raise ParseError("empty expression", line, col0)
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(toks):
            raise ParseError("dangling sign", line, toks[-1][2])
        coeff = field.one
        have_num = False
        if toks[i][0] == "num":
            coeff = field.parse(toks[i][1])
            have_num = True
            i += 1
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
        word: list[str] = []
        while i < len(toks) and toks[i][0] == "name":
            word.append(toks[i][1])
            i += 1
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
                if i >= len(toks) or toks[i][0] != "name":
                    raise ParseError("expected a generator after '*'", line, toks[i - 1][2])
        if not word:
            if not have_num:
                raise ParseError(f"unexpected token {toks[i][1]!r}", line, toks[i][2])
            if coeff != 0:
                raise ParseError("bare nonzero scalar; write the identity as 1_X", line, toks[i - 1][2])
            continue
        if i < len(toks) and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            raise ParseError(f"unexpected token {toks[i][1]!r}", line, toks[i][2])
        w = tuple(word)
        out[w] = out.get(w, field.zero) + (coeff if sign == 1 else -coeff)
    return {w: c for w, c in out.items() if c != 0}


def expr_str(e: Expr) -> str:
    from ..exactlin import scalar_str

    if not e:
        return "0"
    parts = []
    for w, c in sorted(e.items(), key=lambda t: (len(t[0]), t[0])):
        s = scalar_str(c)
        neg = s.startswith("-")
        s = s.lstrip("-")
        body = "*".join(w) if s == "1" else f"{s} {'*'.join(w)}"
        parts.append(("- " if neg else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


# --------------------------------------------------------------------------
# presentations


@dataclass
class DGPresentation:
    """Objects, generators, differential and relations of a DG category."""

    field: Field
    objects: tuple[str, ...]
    generators: tuple[Generator, ...]
    differential: dict[str, Expr] = dc_field(default_factory=dict)
    relations: list[Expr] = dc_field(default_factory=list)
    window: tuple[int, int] = (-4, 1)
    cap: int = 8
    name: str = ""

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.generators = tuple(self.generators)
        if len(set(self.objects)) != len(self.objects):
            raise StructuralError("duplicate object labels")
        self.gen = {}
        for g in self.generators:
            if g.name in self.gen:
                raise StructuralError(f"duplicate generator {g.name!r}")
            if g.name.startswith("1_"):
                raise StructuralError(f"generator name {g.name!r} clashes with identity notation")
            for o in (g.src, g.tgt):
                if o not in self.objects:
                    raise StructuralError(f"generator {g.name!r} uses unknown object {o!r}")
            self.gen[g.name] = g
        d = {}
        for name, e in self.differential.items():
            if name not in self.gen:
                raise StructuralError(f"differential given for unknown generator {name!r}")
            g = self.gen[name]
            e = self.normalize(e)
            for w in e:
                s, t, n = self.word_type(w)
                if (s, t, n) != (g.src, g.tgt, g.deg + 1):
                    raise StructuralError(
                        f"d({name}) must lie in Hom^{g.deg + 1}({g.src},{g.tgt}); term {'*'.join(w)} "
                        f"lies in Hom^{n}({s},{t})"
                    )
            d[name] = e
        self.differential = d
        rels = []
        for r in self.relations:
            r = self.normalize(r)
            types = {self.word_type(w) for w in r}
            if len(types) > 1:
                raise StructuralError(f"relation {expr_str(r)} is not homogeneous: {sorted(types)}")
            if r:
                rels.append(r)
        self.relations = rels

    def word_type(self, w: Word) -> tuple[str, str, int]:
        """(source, target, degree) of a word; raises on non-composable words."""
        if len(w) == 1 and w[0].startswith("1_"):
            x = w[0][2:]
            if x not in self.objects:
                raise StructuralError(f"identity of unknown object {x!r}")
            return x, x, 0
        src = tgt = None
        deg = 0
        for name in reversed(w):
            if name not in self.gen:
                raise StructuralError(f"unknown generator {name!r}")
            g = self.gen[name]
            if tgt is not None and g.src != tgt:
                raise StructuralError(f"word {'*'.join(w)} is not composable at {name!r}")
            if src is None:
                src = g.src
            tgt = g.tgt
            deg += g.deg
        return src, tgt, deg

    def normalize(self, e: Expr) -> Expr:
        """Drop identity factors inside longer words and check composability."""
        out: Expr = {}
        for w, c in e.items():
            w = tuple(w)
            if len(w) > 1:
                ids = [t for t in w if t.startswith("1_")]
                rest = tuple(t for t in w if not t.startswith("1_"))
                if ids:
                    if not rest:
                        objs = {t[2:] for t in ids}
                        if len(objs) != 1:
                            raise StructuralError(f"word {'*'.join(w)} is not composable")
                        rest = (ids[0],)
                    else:
                        # check that each identity sits at the right object
                        k = len(w)
                        for pos, t in enumerate(w):
                            if t.startswith("1_"):
                                x = t[2:]
                                left = next((w[j] for j in range(pos + 1, k) if not w[j].startswith("1_")), None)
                                right = next((w[j] for j in range(pos - 1, -1, -1) if not w[j].startswith("1_")), None)
                                if left is not None and self.gen.get(left) and self.gen[left].tgt != x:
                                    raise StructuralError(f"word {'*'.join(w)} is not composable at {t}")
                                if right is not None and self.gen.get(right) and self.gen[right].src != x:
                                    raise StructuralError(f"word {'*'.join(w)} is not composable at {t}")
                w = rest
            self.word_type(w)
            c = self.field(c)
            out[w] = out.get(w, self.field.zero) + c
        return {w: c for w, c in out.items() if c != 0}


def presentation(
    objects: Sequence[str],
    generators: Iterable[tuple[str, str, str, int]],
    d: Mapping[str, str | Expr] | None = None,
    relations: Iterable[str | tuple[str, str] | Expr] = (),
    field: Field = QQ,
    window: tuple[int, int] = (-4, 1),
    cap: int = 8,
    name: str = "",
) -> DGPresentation:
    """Convenience constructor accepting string expressions."""

    def ex(v):
        return parse_expr(v, field) if isinstance(v, str) else dict(v)

    rels = []
    for r in relations:
        if isinstance(r, tuple):
            lhs, rhs = ex(r[0]), ex(r[1])
            e = dict(lhs)
            for w, c in rhs.items():
                e[w] = e.get(w, field.zero) - c
            rels.append(e)
        elif isinstance(r, str) and "=" in r:
            a, b = r.split("=", 1)
            lhs, rhs = ex(a), ex(b)
            e = dict(lhs)
            for w, c in rhs.items():
                e[w] = e.get(w, field.zero) - c
            rels.append(e)
        else:
            rels.append(ex(r))
    return DGPresentation(
        field, tuple(objects), tuple(Generator(*g) for g in generators),
        {k: ex(v) for k, v in (d or {}).items()}, rels, window, cap, name,
    )


# --------------------------------------------------------------------------
# tabulation


def _has_degree0_cycle(P: DGPresentation) -> bool:
    adj: dict[str, list[str]] = {x: [] for x in P.objects}
    for g in P.generators:
        if g.deg == 0:
            adj[g.src].append(g.tgt)
    state = {x: 0 for x in P.objects}

    def visit(x):
        state[x] = 1
        for y in adj[x]:
            if state[y] == 1 or (state[y] == 0 and visit(y)):
                return True
        state[x] = 2
        return False

    return any(state[x] == 0 and visit(x) for x in P.objects)


def _max_word_length(P: DGPresentation, budget: int) -> int:
    """Longest composable word of degree >= -budget (no degree-0 cycles, all degrees <= 0)."""
    out_edges: dict[str, list[Generator]] = {x: [] for x in P.objects}
    for g in P.generators:
        out_edges[g.src].append(g)

    @lru_cache(maxsize=None)
    def L(x: str, b: int) -> int:
        best = 0
        for g in out_edges[x]:
            if -g.deg <= b:
                best = max(best, 1 + L(g.tgt, b + g.deg))
        return best

    return max((L(x, budget) for x in P.objects), default=0)


def _min_degree(P: DGPresentation) -> int | None:
    """Lowest degree of any word, when the generator graph is acyclic."""
    adj: dict[str, list[Generator]] = {x: [] for x in P.objects}
    for g in P.generators:
        adj[g.src].append(g)
    state = {x: 0 for x in P.objects}
    order: list[str] = []

    def visit(x):
        state[x] = 1
        for g in adj[x]:
            if state[g.tgt] == 1 or (state[g.tgt] == 0 and visit(g.tgt)):
                return True
        state[x] = 2
        order.append(x)
        return False

    if any(state[x] == 0 and visit(x) for x in P.objects):
        return None
    low = {x: 0 for x in P.objects}
    for x in order:  # reverse topological: successors first
        for g in adj[x]:
            low[x] = min(low[x], g.deg + low[g.tgt])
    return min(low.values(), default=0)


def _deglex_key(gen_names: Sequence[str]):
    def key(w):
        return (len(w), tuple(gen_names[i] for i in w))

    return key


class PresentedCategory(DGCategory):
    """Tabulation of a :class:`DGPresentation` produced by :func:`tabulate`."""

    def __init__(self, P: DGPresentation, window: tuple[int, int], cap: int):
        self.presentation = P
        self.cap = cap
        gens = P.generators
        self._gidx = {g.name: i for i, g in enumerate(gens)}
        self._names = [g.name for g in gens]
        self._key = _deglex_key(self._names)
        lo, hi = window
        nonpos = all(g.deg <= 0 for g in gens)
        self._nonpos = nonpos
        cyc = _has_degree0_cycle(P) if nonpos else True
        self.certificate: dict = {}
        self.overflow = False
        if nonpos:
            lo_i, hi_i = min(lo, 0), max(hi, 0)
            top = 0
            bottom = 0 if all(g.deg == 0 for g in gens) else _min_degree(P)
            if not cyc:
                bound = _max_word_length(P, -lo_i)
                if bound > cap:
                    raise CapExceededError(
                        f"words of degree >= {lo_i} reach length {bound} > cap {cap} in {P.name or 'presentation'}"
                    )
                self.certificate = {"kind": "bounded word length", "bound": bound, "cap": cap}
        else:
            lo_i, hi_i = lo, hi
            top = bottom = None
        super().__init__(P.field, P.objects, (lo_i, hi_i), status=COMPLETE, top=top, bottom=bottom,
                         name=P.name)
        self._enumerate()
        self._reduce()
        self._gen_images()
        self._check_consistency()
        if not nonpos:
            self.status = TRUNCATED
            self.certificate = {"kind": "positive-degree generators", "cap": cap}
        elif cyc:
            self._certify()

    # ---- enumeration ----------------------------------------------------

    def _enumerate(self):
        P = self.presentation
        gens = P.generators
        lo = self.lo
        words: dict[tuple[str, str, int], list[tuple]] = {}
        for x in P.objects:
            words.setdefault((x, x, 0), []).append(())
        maxpos = max((g.deg for g in gens), default=0)
        layer = [((i,), g.src, g.tgt, g.deg) for i, g in enumerate(gens)]
        by_src: dict[str, list[int]] = {}
        for i, g in enumerate(gens):
            by_src.setdefault(g.src, []).append(i)
        length = 1
        while layer and length <= self.cap:
            nxt = []
            for w, s, t, n in layer:
                if self._nonpos and n < lo:
                    continue
                if not self._nonpos and n + (self.cap - length) * maxpos < lo:
                    continue
                words.setdefault((s, t, n), []).append(w)
                if length < self.cap:
                    for j in by_src.get(t, ()):
                        g = gens[j]
                        nxt.append(((j,) + w, s, g.tgt, n + g.deg))
            layer = nxt
            length += 1
        self._words = words
        self._word_group = {}
        for key, ws in words.items():
            for w in ws:
                self._word_group[(key[0], w)] = key

    def _word_key(self, src: str, w: tuple) -> tuple[str, str, int] | None:
        return self._word_group.get((src, w))

    def _internal(self, w: Word) -> tuple[str, tuple]:
        P = self.presentation
        s, _, _ = P.word_type(w)
        if len(w) == 1 and w[0].startswith("1_"):
            return s, ()
        return s, tuple(self._gidx[n] for n in w)

    # ---- reduction ------------------------------------------------------

    def _reduce(self):
        P = self.presentation
        F = self.field
        # relation consequences u r v, grouped by hom space
        rows: dict[tuple, list[dict]] = {}
        by_tgt_src: dict[tuple[str, str], list[tuple]] = {}
        for (s, t, n), ws in self._words.items():
            for w in ws:
                by_tgt_src.setdefault((s, t), []).append((w, n))
        for r in P.relations:
            terms = [(self._internal(w), c) for w, c in r.items()]
            x0, y0, m = P.word_type(next(iter(r)))
            rl = max(len(w) for (_, w), _ in terms)
            for x in P.objects:
                for v, nv in by_tgt_src.get((x, x0), ()):
                    if len(v) + rl > self.cap:
                        continue
                    for y in P.objects:
                        for u, nu in by_tgt_src.get((y0, y), ()):
                            if len(u) + len(v) + rl > self.cap:
                                continue
                            n = nu + m + nv
                            key = (x, y, n)
                            if key not in self._words:
                                continue
                            vec = {}
                            ok = True
                            for (_, w), c in terms:
                                ww = u + w + v
                                if self._word_key(x, ww) != key:
                                    ok = False
                                    break
                                vec[ww] = vec.get(ww, F.zero) + c
                            if ok:
                                rows.setdefault(key, []).append(vec)
        self._nf: dict[tuple, list[tuple]] = {}
        self._rho: dict[tuple, dict[tuple, dict[int, object]]] = {}
        for key, ws in self._words.items():
            cols = sorted(ws, key=self._key, reverse=True)
            col_of = {w: i for i, w in enumerate(cols)}
            M = []
            for vec in rows.get(key, ()):
                row = [F.zero] * len(cols)
                for w, c in vec.items():
                    row[col_of[w]] = row[col_of[w]] + c
                M.append(row)
            R, piv = rref(M, F, len(cols)) if M else ([], [])
            pivset = set(piv)
            free = [cols[i] for i in range(len(cols)) if i not in pivset]
            free.sort(key=self._key)
            fidx = {w: i for i, w in enumerate(free)}
            rho = {w: {fidx[w]: F.one} for w in free}
            for row, p in zip(R, piv):
                rho[cols[p]] = {fidx[cols[c]]: -row[c] for c in range(len(cols)) if c not in pivset and row[c] != 0}
            self._nf[key] = free
            self._rho[key] = rho
        self.max_nf_length = max((len(w) for ws in self._nf.values() for w in ws), default=0)

    def label(self, x: str, w: tuple) -> str:
        return f"1_{x}" if not w else "*".join(self._names[i] for i in w)

    # ---- products -------------------------------------------------------

    def _rho_word(self, src: str, w: tuple) -> tuple[tuple, dict] | None:
        key = self._word_key(src, w)
        if key is None:
            return None
        return key, self._rho[key][w]

    def _mult(self, ka, a: dict, kb, b: dict) -> dict:
        """Product of sparse NF vectors a in ka=(y,z,p) and b in kb=(x,y,q)."""
        x = kb[0]
        out: dict[int, object] = {}
        if not a or not b:
            return out
        na, nb = self._nf[ka], self._nf[kb]
        for i, ca in a.items():
            for j, cb in b.items():
                w = na[i] + nb[j]
                r = self._rho_word(x, w)
                vec = r[1] if r is not None else self._eval_long(x, w)
                ca_cb = ca * cb
                for k, e in vec.items():
                    out[k] = out.get(k, 0) + ca_cb * e
        return {k: c for k, c in out.items() if c}

    def _eval_long(self, src: str, w: tuple, depth: int = 0) -> dict:
        """Value of a composable word longer than the cap, one generator at a time."""
        if depth > 4 * self.cap + 8:
            self.overflow = True
            return {}
        tail = w[1:]
        r = self._rho_word(src, tail)
        if r is None:
            if not tail:
                return {}
            kt = (src, self._gens_tgt(tail, src), sum(self.presentation.generators[t].deg for t in tail))
            if kt not in self._nf:
                return {}
            vt = self._eval_long(src, tail, depth + 1)
        else:
            kt, vt = r
        kg, vg = self._gen_vec(w[0])
        out: dict[int, object] = {}
        ng, nt = self._nf[kg], self._nf[kt]
        for i, ca in vg.items():
            for j, cb in vt.items():
                ww = ng[i] + nt[j]
                rr = self._rho_word(src, ww)
                vec = rr[1] if rr is not None else self._eval_long(src, ww, depth + 1)
                for k, e in vec.items():
                    out[k] = out.get(k, 0) + ca * cb * e
        return {k: c for k, c in out.items() if c}

    def _gens_tgt(self, w: tuple, default: str) -> str:
        return self.presentation.generators[w[0]].tgt if w else default

    def _gen_vec(self, i: int) -> tuple[tuple, dict]:
        g = self.presentation.generators[i]
        r = self._rho_word(g.src, (i,))
        if r is None:
            raise StructuralError(f"generator {g.name!r} lies outside the tabulated degrees")
        return r

    def _eval_word(self, src: str, w: tuple) -> tuple[tuple, dict] | None:
        """Value of a free word in the tabulation (None when its degree is below the window)."""
        r = self._rho_word(src, w)
        if r is not None:
            return r
        if not w:
            return None
        deg = sum(self.presentation.generators[i].deg for i in w)
        key = (src, self._gens_tgt(w, src), deg)
        if key not in self._nf:
            return None
        return key, self._eval_long(src, w)

    def _eval_expr(self, e: Expr) -> tuple[tuple, dict] | None:
        P = self.presentation
        acc: dict[int, object] = {}
        key = None
        for w, c in e.items():
            s, t, n = P.word_type(w)
            key = (s, t, n)
            r = self._eval_word(*self._internal(w))
            if r is None:
                return None
            for k, v in r[1].items():
                acc[k] = acc.get(k, 0) + c * v
        return key, {k: c for k, c in acc.items() if c}

    # ---- differential ---------------------------------------------------

    def _gen_images(self):
        P = self.presentation
        self._dgen: dict[int, tuple[tuple, dict] | None] = {}
        for i, g in enumerate(P.generators):
            key = (g.src, g.tgt, g.deg + 1)
            e = P.differential.get(g.name, {})
            if not e:
                self._dgen[i] = (key, {})
                continue
            r = self._eval_expr(e)
            self._dgen[i] = r if r is None else (key, r[1])

    def _d_word(self, src: str, w: tuple) -> dict:
        """Leibniz expansion of d on a free word, evaluated in normal forms."""
        gens = self.presentation.generators
        out: dict[int, object] = {}
        sign_deg = 0
        for pos in range(len(w)):
            # w = prefix . g . suffix with prefix = w[:pos]
            pre, g, suf = w[:pos], w[pos], w[pos + 1:]
            dg = self._dgen.get(g)
            sgn = -1 if sign_deg % 2 else 1
            sign_deg += gens[g].deg
            if dg is None or not dg[1]:
                continue
            kg, vg = dg
            val_k, val = kg, vg
            if suf:
                rs = self._eval_word(src, suf)
                if rs is None:
                    continue
                val = self._mult(val_k, val, rs[0], rs[1])
                val_k = (src, kg[1], kg[2] + rs[0][2])
            if pre:
                mid_src = gens[g].tgt
                rp = self._eval_word(mid_src, pre)
                if rp is None:
                    continue
                val = self._mult(rp[0], rp[1], val_k, val)
            for k, c in val.items():
                out[k] = out.get(k, 0) + sgn * c
        return {k: c for k, c in out.items() if c}

    def _d_vec(self, key: tuple, vec: dict) -> dict:
        out: dict[int, object] = {}
        nf = self._nf[key]
        for i, c in vec.items():
            for k, e in self._d_word(key[0], nf[i]).items():
                out[k] = out.get(k, 0) + c * e
        return {k: c for k, c in out.items() if c}

    def _check_consistency(self):
        P = self.presentation
        problems = []
        for i, g in enumerate(P.generators):
            dg = self._dgen[i]
            if dg is None or not dg[1] or self.known_zero(g.deg + 2):
                continue
            if (g.src, g.tgt, g.deg + 2) not in self._nf and g.deg + 2 > self.hi:
                continue
            dd = self._d_vec(dg[0], dg[1])
            if dd:
                problems.append(f"d(d({g.name})) != 0")
        for r in P.relations:
            s, t, n = P.word_type(next(iter(r)))
            if n < self.lo or n + 1 > self.hi and not self.known_zero(n + 1):
                continue
            acc: dict[int, object] = {}
            for w, c in r.items():
                src, iw = self._internal(w)
                for k, e in self._d_word(src, iw).items():
                    acc[k] = acc.get(k, 0) + c * e
            if any(acc.values()):
                problems.append(f"d({expr_str(r)}) is not a consequence of the relations")
        if problems:
            raise InconsistentPresentationError("; ".join(problems))

    # ---- completeness certificate with degree-0 cycles -------------------

    def _certify(self):
        """COMPLETE iff the normal-form algebra is verified to be the presented one."""
        from .checks import check_axioms

        m = self.max_nf_length
        reasons = []
        if 2 * m + 1 > self.cap:
            reasons.append(f"cap {self.cap} < 2*{m}+1")
        else:
            P = self.presentation
            # iterated products of generator images reproduce every normal form
            for key, ws in self._nf.items():
                for idx, w in enumerate(ws):
                    if not w:
                        continue
                    kv = self._gen_vec(w[-1])
                    for gi in reversed(w[:-1]):
                        kg, vg = self._gen_vec(gi)
                        kv = ((key[0], kg[1], kg[2] + kv[0][2]), self._mult(kg, vg, kv[0], kv[1]))
                    if kv[1] != {idx: self.field.one}:
                        reasons.append(f"normal form {self.label(key[0], w)} not reproduced")
            for r in P.relations:
                acc: dict[int, object] = {}
                for w, c in r.items():
                    src, iw = self._internal(w)
                    if not iw:
                        kv = ((src, src, 0), dict(self._rho[(src, src, 0)][()]))
                    else:
                        kv = self._gen_vec(iw[-1])
                        for gi in reversed(iw[:-1]):
                            kg, vg = self._gen_vec(gi)
                            kv = ((src, kg[1], kg[2] + kv[0][2]), self._mult(kg, vg, kv[0], kv[1]))
                    for k, e in kv[1].items():
                        acc[k] = acc.get(k, 0) + c * e
                if any(acc.values()):
                    reasons.append(f"relation {expr_str(r)} not satisfied by normal forms")
            for i, g in enumerate(P.generators):
                if g.deg < self.lo:
                    continue
                kg, vg = self._gen_vec(i)
                dg = self._dgen[i]
                if dg is not None and g.deg + 1 <= self.hi and self._d_vec(kg, vg) != dg[1]:
                    reasons.append(f"d disagrees with normal form of {g.name}")
            if not reasons:
                viol = check_axioms(self)
                if viol:
                    reasons.append(f"{len(viol)} axiom violations, first: {viol[0]}")
        self.certificate = {"kind": "normal-form algebra verification", "max_normal_form_length": m,
                            "cap": self.cap, "passed": not reasons, "reasons": reasons}
        if reasons:
            self.status = TRUNCATED

    # ---- DGCategory interface ------------------------------------------

    def _basis(self, x, y, n):
        return tuple(self.label(x, w) for w in self._nf.get((x, y, n), ()))

    def _d(self, x, y, n, i):
        key = (x, y, n)
        return self._d_word(x, self._nf[key][i])

    def _compose(self, x, y, z, p, i, q, j):
        ka, kb = (y, z, p), (x, y, q)
        return self._mult(ka, {i: self.field.one}, kb, {j: self.field.one})

    def _identity(self, x):
        r = self._rho.get((x, x, 0), {}).get(())
        return dict(r) if r else {}

    def generators(self):
        out = []
        for i, g in enumerate(self.presentation.generators):
            if self.lo <= g.deg <= self.hi:
                key, vec = self._gen_vec(i)
                out.append(self.from_sparse(g.src, g.tgt, g.deg, vec))
        return out

    def gen(self, name: str) -> Mor:
        g = self.presentation.gen[name]
        key, vec = self._gen_vec(self._gidx[name])
        return self.from_sparse(g.src, g.tgt, g.deg, vec)

    def expr(self, e: Expr | str) -> Mor:
        """Evaluate an expression of words in this category."""
        P = self.presentation
        if isinstance(e, str):
            e = parse_expr(e, self.field)
        e = P.normalize(e)
        if not e:
            raise StructuralError("cannot infer hom space of the zero expression")
        r = self._eval_expr(e)
        s, t, n = P.word_type(next(iter(e)))
        if r is None:
            raise StructuralError(f"expression {expr_str(e)} lies below the window")
        return self.from_sparse(s, t, n, r[1])

    def witness_hints(self, x, y):
        out = []
        for i, g in enumerate(self.presentation.generators):
            if g.deg == 0 and g.src == x and g.tgt == y:
                f = self.gen(g.name)
                if self.hi >= 1 or self.known_zero(1):
                    if self.d(f).is_zero():
                        out.append(f)
        return out


def tabulate(P: DGPresentation, window: tuple[int, int] | None = None, cap: int | None = None) -> PresentedCategory:
    """Tabulate ``P`` on ``window`` with words of length at most ``cap``.

    The result is COMPLETE when every generator has degree <= 0 and either
    word length is bounded in the window (the bound must fit the cap, else
    :class:`CapExceededError`) or, with degree-0 loops, the normal-form
    algebra passes the verification in ``certificate``; otherwise TRUNCATED.
    When all generators have degree <= 0 the window is widened to contain 0.
    """
    return PresentedCategory(P, window or P.window, P.cap if cap is None else cap)

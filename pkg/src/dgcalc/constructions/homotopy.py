"""Homotopies between DG functors out of a presented category.

Data ``(eta, h)``: closed degree-0 ``eta_X: F X -> G X`` invertible in H^0,
and ``h(g): F(src g) -> G(tgt g)`` of degree ``|g| - 1`` on generators, with

    eta_Y F(g) - G(g) eta_X = d(h(g)) + h(d(g)),
    h(f g) = h(f) F(g) + (-1)^|f| G(f) h(g).

The second rule extends ``h`` from generators to all words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import PreconditionError
from ..exactlin import PrimeField, kernel
from ..dgcore.category import COMPLETE, DGCategory, DGFunctor, Mor, functors_equal
from ..dgcore.checks import INCONCLUSIVE, is_invertible_h0
from ..dgcore.presentation import PresentedCategory, expr_str

FOUND = "FOUND"
NONE = "NONE"


@dataclass
class Homotopy:
    F: DGFunctor
    G: DGFunctor
    eta: dict  # object -> Mor
    h: dict = field(default_factory=dict)  # generator name -> Mor


def _generator_table(A: DGCategory) -> list[tuple[str, str, str, int]]:
    """(name, src, tgt, degree) of generators inside the window."""
    if isinstance(A, PresentedCategory):
        return [(g.name, g.src, g.tgt, g.deg) for g in A.presentation.generators if A.lo <= g.deg <= A.hi]
    gens = A.generators()
    if gens == []:
        return []
    raise PreconditionError("homotopies need a presented source (or one without generators)")


def _check_identity_spanned(A: DGCategory) -> None:
    for x in A.objects:
        for y in A.objects:
            for n in A.degrees():
                if n != 0 or x != y:
                    if A.dim(x, y, n):
                        raise PreconditionError("source without generators must be spanned by identities")


class _Extension:
    """Evaluates ``h`` on words and expressions via the derivation rule."""

    def __init__(self, F: DGFunctor, G: DGFunctor, hvals: dict[str, Mor]):
        self.F, self.G, self.h = F, G, hvals
        self.A, self.B = F.source, F.target

    def zero(self, x: str, y: str, n: int) -> Mor:
        return self.B.zero(self.F.obj(x), self.G.obj(y), n - 1)

    def on_word(self, w: tuple[str, ...]) -> Mor:
        """h of the free word ``w`` (generator names, left = last applied)."""
        A: PresentedCategory = self.A  # type: ignore[assignment]
        B = self.B
        P = A.presentation
        s, t, n = P.word_type(w)
        if len(w) == 1 and w[0].startswith("1_"):
            return self.zero(s, t, 0)
        out = self.zero(s, t, n)
        # w = g_k ... g_1; term i: G(g_k..g_{i+1}) h(g_i) F(g_{i-1}..g_1)
        left_deg = 0
        for pos, name in enumerate(w):
            g = P.gen[name]
            pre, suf = w[:pos], w[pos + 1:]
            term = self.h[name]
            if suf:
                term = B.compose(term, self.F.apply(A.expr({suf: 1})))
            if pre:
                term = B.compose(self.G.apply(A.expr({pre: 1})), term)
            out = out - term if left_deg % 2 else out + term
            left_deg += g.deg
        return out

    def on_expr(self, e: dict, s: str, t: str, n: int) -> Mor:
        out = self.zero(s, t, n)
        for w, c in e.items():
            out = out + self.on_word(w).scale(c)
        return out

    def on_mor(self, f: Mor) -> Mor:
        """h of a morphism given in normal-form coordinates."""
        A: PresentedCategory = self.A  # type: ignore[assignment]
        out = self.zero(f.src, f.tgt, f.deg)
        nf = A._nf.get((f.src, f.tgt, f.deg), [])
        for i, c in f.support():
            w = nf[i]
            names = tuple(A._names[j] for j in w) if w else (f"1_{f.src}",)
            out = out + self.on_word(names).scale(c)
        return out


def verify_homotopy(H: Homotopy) -> tuple[bool, list[str]]:
    """Check closedness and invertibility of eta and both homotopy equations."""
    F, G = H.F, H.G
    if F.source is not G.source or F.target is not G.target:
        raise PreconditionError("functors must share source and target")
    A, B = F.source, F.target
    gens = _generator_table(A)
    if not gens:
        _check_identity_spanned(A)
    for x in A.objects:
        if x not in H.eta:
            raise PreconditionError(f"eta missing at {x}")
        e = H.eta[x]
        if (e.src, e.tgt, e.deg) != (F.obj(x), G.obj(x), 0):
            raise PreconditionError(f"eta_{x} has the wrong type")
        if not B.d(e).is_zero():
            raise PreconditionError(f"eta_{x} is not closed")
    for name, s, t, n in gens:
        if name not in H.h:
            raise PreconditionError(f"h missing on generator {name}")
        m = H.h[name]
        if (m.src, m.tgt, m.deg) != (F.obj(s), G.obj(t), n - 1):
            raise PreconditionError(f"h({name}) has the wrong type")
    problems = []
    for x in A.objects:
        if not is_invertible_h0(B, H.eta[x]):
            problems.append(f"eta_{x} is not invertible in H^0")
    ext = _Extension(F, G, H.h)
    for name, s, t, n in gens:
        g = A.gen(name)
        lhs = B.compose(H.eta[t], F.apply(g)) - B.compose(G.apply(g), H.eta[s])
        dg = A.presentation.differential.get(name, {})
        rhs = B.d(H.h[name]) + ext.on_expr(dg, s, t, n + 1) if dg else B.d(H.h[name])
        if lhs != rhs:
            problems.append(f"homotopy equation fails on {name}")
    P = A.presentation if gens else None
    if P is not None:
        for r in P.relations:
            s, t, n = P.word_type(next(iter(r)))
            if A.lo <= n <= A.hi and not ext.on_expr(r, s, t, n).is_zero():
                problems.append(f"h does not vanish on relation {expr_str(r)}")
        for f_name, s1, t1, n1 in gens:
            for g_name, s0, t0, n0 in gens:
                if t0 != s1 or not A.known(n0 + n1):
                    continue
                f, g = A.gen(f_name), A.gen(g_name)
                lhs = ext.on_mor(A.compose(f, g))
                rhs = B.compose(H.h[f_name], F.apply(g))
                t = B.compose(G.apply(f), H.h[g_name])
                rhs = rhs - t if n1 % 2 else rhs + t
                if lhs != rhs:
                    problems.append(f"derivation rule fails on ({f_name}, {g_name})")
    return not problems, problems


def find_homotopy(F: DGFunctor, G: DGFunctor, max_candidates: int = 2048) -> tuple[str, Homotopy | None]:
    """Solve the homotopy equations linearly, then sweep for invertible eta.

    Returns ``(FOUND, H)``, ``(NONE, None)`` when the only solution has
    ``eta = 0`` on a non-empty source, or ``(INCONCLUSIVE, None)``.
    """
    if F.source is not G.source or F.target is not G.target:
        raise PreconditionError("functors must share source and target")
    A, B = F.source, F.target
    if A.status != COMPLETE:
        raise PreconditionError("find_homotopy needs a COMPLETE source")
    gens = _generator_table(A)
    if not gens:
        _check_identity_spanned(A)
    if F.obj_map == G.obj_map and functors_equal(F, G):
        H = Homotopy(F, G, {x: B.identity(F.obj(x)) for x in A.objects},
                     {name: B.zero(F.obj(s), G.obj(t), n - 1) for name, s, t, n in gens})
        return FOUND, H
    # unknowns: eta_x coordinates, then h(g) coordinates
    slots = []
    for x in A.objects:
        slots.append(("eta", x, F.obj(x), G.obj(x), 0))
    for name, s, t, n in gens:
        slots.append(("h", name, F.obj(s), G.obj(t), n - 1))
    dims = [B.dim(a, b, n) for _, _, a, b, n in slots]
    offs = list(itertools.accumulate([0] + dims))
    total = offs[-1]

    def unpack(vec) -> Homotopy:
        eta, hv = {}, {}
        for (kind, key, a, b, n), o, dm in zip(slots, offs, dims):
            m = Mor(a, b, n, tuple(vec[o:o + dm]))
            (eta if kind == "eta" else hv)[key] = m
        return Homotopy(F, G, eta, hv)

    def equations(H: Homotopy) -> list:
        out = []
        ext = _Extension(F, G, H.h)
        for x in A.objects:
            out.extend(B.d(H.eta[x]).coeffs)
        for name, s, t, n in gens:
            g = A.gen(name)
            lhs = B.compose(H.eta[t], F.apply(g)) - B.compose(G.apply(g), H.eta[s])
            dg = A.presentation.differential.get(name, {})
            rhs = B.d(H.h[name]) + (ext.on_expr(dg, s, t, n + 1) if dg else B.zero(F.obj(s), G.obj(t), n))
            out.extend((lhs - rhs).coeffs)
        if gens:
            for r in A.presentation.relations:
                s, t, n = A.presentation.word_type(next(iter(r)))
                if A.lo <= n <= A.hi:
                    out.extend(ext.on_expr(r, s, t, n).coeffs)
        return out

    Fd = B.field
    cols = []
    for j in range(total):
        v = [Fd.zero] * total
        v[j] = Fd.one
        cols.append(equations(unpack(v)))
    rows = len(cols[0]) if cols else 0
    M = [[cols[j][i] for j in range(total)] for i in range(rows)]
    basis, _ = kernel(M, Fd, total) if total else ([], [])
    if not basis:
        return (NONE, None) if A.objects else (FOUND, Homotopy(F, G, {}, {}))
    if isinstance(Fd, PrimeField) and Fd.p ** len(basis) <= max_candidates:
        coeffs = list(Fd.elements())
    else:
        coeffs = [Fd(c) for c in (0, 1, -1, 2)]
    tried = 0
    for combo in itertools.product(coeffs, repeat=len(basis)):
        if not any(combo):
            continue
        tried += 1
        if tried > max_candidates:
            break
        vec = [Fd.zero] * total
        for c, b in zip(combo, basis):
            if c:
                vec = [v + c * e for v, e in zip(vec, b)]
        H = unpack(vec)
        if all(is_invertible_h0(B, H.eta[x]) for x in A.objects):
            return FOUND, H
    eta_dims = sum(dims[: len(A.objects)])
    if all(not any(b[:eta_dims]) for b in basis):
        return NONE, None
    return INCONCLUSIVE, None

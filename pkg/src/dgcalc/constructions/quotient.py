"""Drinfeld DG quotient: adjoin a contraction h_X with d(h_X) = 1_X for each X in a subset.

A basis word of Hom(x, y) is ``f_n h_{X_n} f_{n-1} ... h_{X_1} f_0`` with each
``f_i`` a basis morphism ``X_i -> X_{i+1}`` of the ambient category
(``X_0 = x``, ``X_{n+1} = y``); its degree is ``sum |f_i| - n``.  Words with
no contraction are labelled exactly as in the ambient category.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from ..errors import CapExceededError, PreconditionError, StructuralError
from ..dgcore.category import COMPLETE, TRUNCATED, DGCategory, DGFunctor, Mor


class DrinfeldQuotient(DGCategory):
    def __init__(
        self,
        A: DGCategory,
        sub: Sequence[str],
        window: tuple[int, int] | None = None,
        cap: int | None = None,
        symbol: str | None = None,
        name: str | None = None,
    ):
        sub_set = set(sub)
        for x in sub_set:
            A.check_object(x)
        self.A = A
        self.sub = tuple(x for x in A.objects if x in sub_set)
        self.depth = getattr(A, "quotient_depth", 0) + 1
        self.quotient_depth = self.depth
        self.symbol = symbol or "h" + "'" * (self.depth - 1)
        lo, hi = window or A.window
        if not self.sub:
            status, top, bottom, nmax = A.status, A.top, A.bottom, 0
        elif A.status == COMPLETE and A.top is not None and A.top <= 0:
            nmax = max(0, -lo)
            if cap is not None and cap < nmax:
                raise CapExceededError(f"quotient words of degree {lo} need {nmax} contractions; cap is {cap}")
            status, top, bottom = COMPLETE, A.top, None
        else:
            nmax = 4 if cap is None else cap
            status, top, bottom = TRUNCATED, None, None
        self.cap = nmax if cap is None else cap
        self.nmax = nmax
        super().__init__(A.field, A.objects, (lo, hi), status=status, top=top, bottom=bottom,
                         name=name or (A.name if not self.sub else f"{A.name}/{{{','.join(self.sub)}}}"))
        self._words: dict = {}
        self._widx: dict = {}

    # -- words ------------------------------------------------------------

    def _factor_degrees(self) -> tuple[int, int]:
        A = self.A
        pmin = A.bottom if A.bottom is not None and A.bottom >= A.lo else A.lo
        pmax = A.top if A.top is not None and A.top <= A.hi else A.hi
        return pmin, pmax

    def _enumerate(self, x: str, y: str, d: int) -> list[tuple]:
        A = self.A
        pmin, pmax = self._factor_degrees()
        out = []
        for n in range(0, self.nmax + 1):
            S = d + n
            if not (n + 1) * pmin <= S <= (n + 1) * pmax:
                continue
            for objs in itertools.product(self.sub, repeat=n):
                chain = (x,) + objs + (y,)

                def rec(i, rem, acc):
                    if i == n:
                        p = rem
                        if pmin <= p <= pmax:
                            dim = A.dim(chain[i], chain[i + 1], p)
                            for k in range(dim):
                                out.append((objs, tuple(acc + [(p, k)])))
                        return
                    r = n - i  # factors left after this one
                    for p in range(pmin, pmax + 1):
                        if not r * pmin <= rem - p <= r * pmax:
                            continue
                        dim = A.dim(chain[i], chain[i + 1], p)
                        for k in range(dim):
                            acc.append((p, k))
                            rec(i + 1, rem - p, acc)
                            acc.pop()

                rec(0, S, [])
        return out

    def words(self, x: str, y: str, d: int) -> list[tuple]:
        key = (x, y, d)
        w = self._words.get(key)
        if w is None:
            self.basis(x, y, d)
            w = self._words[key]
        return w

    def _lookup(self, x: str, y: str, d: int, word: tuple) -> int | None:
        if not self.known(d) or self.known_zero(d):
            return None
        self.basis(x, y, d)
        return self._widx[(x, y, d)].get(word)

    def word_label(self, x: str, y: str, word: tuple) -> str:
        objs, factors = word
        chain = (x,) + objs + (y,)
        parts = []
        for i in range(len(factors) - 1, -1, -1):
            p, k = factors[i]
            lab = self.A.basis(chain[i], chain[i + 1], p)[k]
            if len(factors) == 1 or not lab.startswith("1_"):
                parts.append(lab)
            if i > 0:
                parts.append(f"{self.symbol}_{objs[i - 1]}")
        return "*".join(parts)

    def _basis(self, x, y, d):
        ws = self._enumerate(x, y, d)
        self._words[(x, y, d)] = ws
        self._widx[(x, y, d)] = {w: i for i, w in enumerate(ws)}
        return tuple(self.word_label(x, y, w) for w in ws)

    # -- structure --------------------------------------------------------

    def _expand(self, x: str, y: str, d: int, objs: tuple, pre: tuple, vec: dict, p: int, post: tuple,
                coeff, out: dict) -> None:
        """Add ``coeff * (pre, vec at degree p, post)`` to ``out`` (words of Hom^d(x, y))."""
        for k, c in vec.items():
            w = (objs, pre + ((p, k),) + post)
            idx = self._lookup(x, y, d, w)
            if idx is None:
                continue
            out[idx] = out.get(idx, 0) + coeff * c

    def _d(self, x, y, d, i):
        A = self.A
        objs, factors = self.words(x, y, d)[i]
        n = len(objs)
        chain = (x,) + objs + (y,)
        out: dict[int, object] = {}
        acc = 0
        for pos in range(n, -1, -1):
            p, k = factors[pos]
            sign = -1 if acc % 2 else 1
            if A.known(p + 1):
                dv = A.d_basis(chain[pos], chain[pos + 1], p, k)
                self._expand(x, y, d + 1, objs, factors[:pos], dv, p + 1, factors[pos + 1:], sign, out)
            acc += p
            if pos >= 1:
                sign = -1 if acc % 2 else 1
                p0, k0 = factors[pos - 1]
                merged = A.compose_basis(chain[pos - 1], chain[pos], chain[pos + 1], p, k, p0, k0)
                nobjs = objs[:pos - 1] + objs[pos:]
                self._expand(x, y, d + 1, nobjs, factors[:pos - 1], merged, p + p0, factors[pos + 1:], sign, out)
                acc -= 1
        return {k: c for k, c in out.items() if c}

    def _compose(self, x, y, z, p, i, q, j):
        A = self.A
        objs2, f2 = self.words(y, z, p)[i]
        objs1, f1 = self.words(x, y, q)[j]
        a = (objs1[-1] if objs1 else x)
        b = (objs2[0] if objs2 else z)
        (pl, kl), (pr, kr) = f1[-1], f2[0]
        merged = A.compose_basis(a, y, b, pr, kr, pl, kl)
        out: dict[int, object] = {}
        self._expand(x, z, p + q, objs1 + objs2, f1[:-1], merged, pl + pr, f2[1:], 1, out)
        return out

    def _identity(self, x):
        out = {}
        for k, c in self.A._identity(x).items():
            idx = self._lookup(x, x, 0, ((), ((0, k),)))
            if idx is not None:
                out[idx] = c
        return out

    def h(self, X: str) -> Mor:
        """The adjoined contraction of ``X``."""
        if X not in self.sub:
            raise PreconditionError(f"{X!r} was not quotiented out")
        e = self.A._identity(X)
        vec = {}
        for i, a in e.items():
            for j, b in e.items():
                idx = self._lookup(X, X, -1, ((X,), ((0, j), (0, i))))
                if idx is not None:
                    vec[idx] = vec.get(idx, 0) + a * b
        return self.from_sparse(X, X, -1, vec)

    def embed(self, f: Mor) -> Mor:
        vec = {}
        for k, c in f.support():
            vec[self._lookup(f.src, f.tgt, f.deg, ((), ((f.deg, k),)))] = c
        return self.from_sparse(f.src, f.tgt, f.deg, vec)

    def generators(self):
        g = self.A.generators()
        if g is None:
            return None
        return [self.embed(f) for f in g if self.lo <= f.deg <= self.hi] + [self.h(X) for X in self.sub]

    def witness_hints(self, x, y):
        return [self.embed(f) for f in self.A.witness_hints(x, y)]

    def embedding(self, name: str = "eta") -> DGFunctor:
        """``A -> A/A0``, identity on objects, sending ``f`` to the word without contractions."""
        A = self.A

        def on_basis(x, y, n, k):
            idx = self._lookup(x, y, n, ((), ((n, k),)))
            return {} if idx is None else {idx: A.field.one}

        return DGFunctor(A, self, {x: x for x in A.objects}, on_basis, name=name)


def drinfeld_quotient(
    A: DGCategory,
    sub: Sequence[str],
    window: tuple[int, int] | None = None,
    cap: int | None = None,
    name: str | None = None,
) -> DrinfeldQuotient:
    return DrinfeldQuotient(A, sub, window, cap, name=name)


def quotient_functor(F: DGFunctor, QA: DrinfeldQuotient, QB: DrinfeldQuotient, name: str = "") -> DGFunctor:
    """``F`` applied factorwise to words, ``h_X -> h_{F X}``; needs ``F(A0) ⊆ B0``."""
    if F.source is not QA.A or F.target is not QB.A:
        raise StructuralError("quotient functor needs F: A1 -> B1 matching the two quotients")
    for X in QA.sub:
        if F.obj(X) not in QB.sub:
            raise PreconditionError(f"F sends {X} outside the quotiented subcategory of the target")
    A, B = QA.A, QB.A

    def on_basis(x, y, d, i):
        objs, factors = QA.words(x, y, d)[i]
        chain = (x,) + objs + (y,)
        fobjs = tuple(F.obj(X) for X in objs)
        images = [F.on_basis(chain[t], chain[t + 1], p, k) for t, (p, k) in enumerate(factors)]
        out: dict[int, object] = {}
        degs = [p for p, _ in factors]
        for combo in itertools.product(*[list(v.items()) for v in images]):
            coeff = B.field.one
            fac = []
            for (k, c), p in zip(combo, degs):
                coeff = coeff * c
                fac.append((p, k))
            idx = QB._lookup(F.obj(x), F.obj(y), d, (fobjs, tuple(fac)))
            if idx is not None:
                out[idx] = out.get(idx, 0) + coeff
        return {k: c for k, c in out.items() if c}

    return DGFunctor(QA, QB, {x: F.obj(x) for x in A.objects}, on_basis, name=name or f"Q({F.name})")

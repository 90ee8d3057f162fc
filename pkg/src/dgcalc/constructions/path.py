"""The path object P(B) on a roster of homotopy equivalences, with i, p0, p1.

An object of P(B) is a closed degree-0 morphism ``f: X -> Y`` invertible in
H^0(B).  For objects ``f: X -> Y`` and ``f': X' -> Y'``

    Hom^n = B^n(X,X') ⊕ B^n(Y,Y') ⊕ B^(n-1)(X,Y'),
    d(a, b, h) = (da, db, -dh + f'a - bf),
    (a', b', h') . (a, b, h) = (a'a, b'b, h'a + (-1)^|a'| b'h),

so that the third component is a homotopy between ``f'a`` and ``bf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import PreconditionError, StructuralError
from ..exactlin import rank, solve_linear
from ..dgcore.category import COMPLETE, DGCategory, DGFunctor, Mor, ProductCategory
from ..dgcore.checks import is_invertible_h0


@dataclass(frozen=True)
class RosterEntry:
    name: str
    mor: Mor
    inverse: Mor


def path_label(name: str) -> str:
    return f"({name})"


class PathObject(DGCategory):
    def __init__(self, B: DGCategory, roster: Sequence[tuple[str, Mor] | Mor] = (), name: str | None = None):
        self.base = B
        entries: list[RosterEntry] = []
        for x in B.objects:
            one = B.identity(x)
            entries.append(RosterEntry(f"1_{x}", one, one))
        seen = {e.name for e in entries}
        for k, item in enumerate(roster):
            nm, f = item if isinstance(item, tuple) else (f"f{k}", item)
            if f.deg != 0:
                raise PreconditionError(f"roster entry {nm} has degree {f.deg}, expected 0")
            if not B.d(f).is_zero():
                raise PreconditionError(f"roster entry {nm} is not closed")
            inv = is_invertible_h0(B, f)
            if not inv:
                raise PreconditionError(f"roster entry {nm} is not invertible in H^0: {inv.reason}")
            if nm in seen:
                if any(e.name == nm and e.mor == f for e in entries):
                    continue
                raise StructuralError(f"duplicate roster name {nm!r}")
            seen.add(nm)
            entries.append(RosterEntry(nm, f, inv.witness))
        self.entries = {path_label(e.name): e for e in entries}
        lo, hi = B.window
        top = B.top + 1 if B.top is not None else None
        if B.top is not None and B.top <= hi:
            hi += 1
        super().__init__(
            B.field, list(self.entries), (lo + 1, hi), status=B.status, top=top, bottom=B.bottom,
            name=name or f"P({B.name})",
        )

    def obj_of(self, name: str) -> str:
        return path_label(name)

    def _dims(self, x, y, n):
        e, e2 = self.entries[x], self.entries[y]
        B = self.base
        X, Y = e.mor.src, e.mor.tgt
        X2, Y2 = e2.mor.src, e2.mor.tgt
        return B.dim(X, X2, n), B.dim(Y, Y2, n), B.dim(X, Y2, n - 1)

    def _basis(self, x, y, n):
        e, e2 = self.entries[x], self.entries[y]
        B = self.base
        X, Y = e.mor.src, e.mor.tgt
        X2, Y2 = e2.mor.src, e2.mor.tgt
        return (
            tuple(f"a:{s}" for s in B.basis(X, X2, n))
            + tuple(f"b:{s}" for s in B.basis(Y, Y2, n))
            + tuple(f"h:{s}" for s in B.basis(X, Y2, n - 1))
        )

    def split(self, f: Mor) -> tuple[Mor, Mor, Mor]:
        """Components ``(a, b, h)`` of a morphism of P(B)."""
        e, e2 = self.entries[f.src], self.entries[f.tgt]
        X, Y, X2, Y2 = e.mor.src, e.mor.tgt, e2.mor.src, e2.mor.tgt
        da, db, dh = self._dims(f.src, f.tgt, f.deg)
        c = f.coeffs
        return (
            Mor(X, X2, f.deg, c[:da]),
            Mor(Y, Y2, f.deg, c[da:da + db]),
            Mor(X, Y2, f.deg - 1, c[da + db:da + db + dh]),
        )

    def join(self, x: str, y: str, a: Mor, b: Mor, h: Mor) -> Mor:
        if not (a.deg == b.deg == h.deg + 1):
            raise StructuralError("components of a path-object morphism have inconsistent degrees")
        return Mor(x, y, a.deg, a.coeffs + b.coeffs + h.coeffs)

    def _component(self, x, y, n, i):
        B = self.base
        e, e2 = self.entries[x], self.entries[y]
        X, Y, X2, Y2 = e.mor.src, e.mor.tgt, e2.mor.src, e2.mor.tgt
        da, db, dh = self._dims(x, y, n)
        Z = (B.zero(X, X2, n), B.zero(Y, Y2, n), B.zero(X, Y2, n - 1))
        if i < da:
            return B.basis_mor(X, X2, n, i), Z[1], Z[2]
        if i < da + db:
            return Z[0], B.basis_mor(Y, Y2, n, i - da), Z[2]
        return Z[0], Z[1], B.basis_mor(X, Y2, n - 1, i - da - db)

    def _d(self, x, y, n, i):
        B = self.base
        e, e2 = self.entries[x], self.entries[y]
        f, f2 = e.mor, e2.mor
        a, b, h = self._component(x, y, n, i)
        da_ = B.d(a)
        db_ = B.d(b)
        twist = B.compose(f2, a) - B.compose(b, f) - B.d(h)
        return dict(self.join(x, y, da_, db_, twist).support())

    def _compose(self, x, y, z, p, i, q, j):
        B = self.base
        a2, b2, h2 = self._component(y, z, p, i)
        a, b, h = self._component(x, y, q, j)
        third = B.compose(h2, a)
        t = B.compose(b2, h)
        third = third - t if p % 2 else third + t
        return dict(self.join(x, z, B.compose(a2, a), B.compose(b2, b), third).support())

    def _identity(self, x):
        B = self.base
        e = self.entries[x]
        X, Y = e.mor.src, e.mor.tgt
        return dict(self.join(x, x, B.identity(X), B.identity(Y), B.zero(X, Y, -1)).support())

    def generators(self):
        from ..dgcore.category import finite_basis_generators

        return finite_basis_generators(self)

    def witness_hints(self, x, y):
        """``(1, f, 0)`` from an identity object to ``(f)`` and a corrected inverse back."""
        B = self.base
        e, e2 = self.entries[x], self.entries[y]
        out = []
        f, f2 = e.mor, e2.mor
        if f.src == f2.src and f == B.identity(f.src) and self.known(-1):
            # (1_X) -> (f2: X -> Y2): (1_X, f2, 0) is closed
            out.append(self.join(x, y, B.identity(f.src), f2, B.zero(f.src, f2.tgt, -1)))
        if f.src == f2.src and f2 == B.identity(f2.src) and self.known(-1):
            # (f: X -> Y) -> (1_X): (1_X, g, h) with d(h) = 1 - g f
            g = e.inverse
            target = B.identity(f.src) - B.compose(g, f)
            h = _solve_d(B, f.src, f.src, -1, target)
            if h is not None:
                out.append(self.join(x, y, B.identity(f.src), g, h))
        return out

    # -- structure functors ----------------------------------------------

    def i_functor(self) -> DGFunctor:
        B = self.base
        obj = {x: path_label(f"1_{x}") for x in B.objects}

        def on_basis(x, y, n, k):
            f = B.basis_mor(x, y, n, k)
            return dict(self.join(obj[x], obj[y], f, f, B.zero(x, y, n - 1)).support())

        return DGFunctor(B, self, obj, on_basis, name="i")

    def p_functor(self, which: int) -> DGFunctor:
        B = self.base
        obj = {x: (e.mor.src if which == 0 else e.mor.tgt) for x, e in self.entries.items()}

        def on_basis(x, y, n, k):
            a, b, _ = self._component(x, y, n, k)
            return dict((a if which == 0 else b).support())

        return DGFunctor(self, B, obj, on_basis, name=f"p{which}")

    def product_target(self) -> ProductCategory:
        if not hasattr(self, "_bxb"):
            self._bxb = ProductCategory(self.base, self.base)
        return self._bxb

    def p0p1(self) -> DGFunctor:
        BB = self.product_target()
        obj = {x: BB.pair_label(e.mor.src, e.mor.tgt) for x, e in self.entries.items()}

        def on_basis(x, y, n, k):
            a, b, _ = self._component(x, y, n, k)
            return {i: c for i, c in enumerate(a.coeffs + b.coeffs) if c}

        return DGFunctor(self, BB, obj, on_basis, name="p0xp1")

    def diagonal(self) -> DGFunctor:
        B = self.base
        BB = self.product_target()
        obj = {x: BB.pair_label(x, x) for x in B.objects}

        def on_basis(x, y, n, k):
            d = B.dim(x, y, n)
            return {k: B.field.one, d + k: B.field.one}

        return DGFunctor(B, BB, obj, on_basis, name="diagonal")

    def surjectivity_certificate(self) -> list[dict]:
        """Rank of ``p0 x p1`` on every hom space of the roster, degree by degree."""
        P = self.p0p1()
        out = []
        for x in self.objects:
            for y in self.objects:
                for n in self.degrees():
                    if not self.base.known(n):
                        continue
                    M = P.matrix(x, y, n)
                    rows = len(M)
                    r = rank(M, self.field, self.dim(x, y, n)) if rows and self.dim(x, y, n) else 0
                    out.append({"source": x, "target": y, "degree": n, "rank": r, "target_dim": rows,
                                "surjective": r == rows})
        return out

    def lift_contraction(self, x: str, cX: Mor, cY: Mor) -> Mor:
        """The contraction ``(c_X, c_Y, c_Y f c_X)`` of the object ``x = (f)``."""
        B = self.base
        e = self.entries[x]
        f = e.mor
        for c, o in ((cX, f.src), (cY, f.tgt)):
            if (c.src, c.tgt, c.deg) != (o, o, -1) or B.d(c) != B.identity(o):
                raise PreconditionError(f"given morphism is not a contraction of {o}")
        h = B.compose_many(cY, f, cX)
        lift = self.join(x, x, cX, cY, h)
        if self.d(lift) != self.identity(x):
            raise AssertionError("lifted contraction does not verify")
        return lift


def _solve_d(B: DGCategory, x: str, y: str, n: int, target: Mor) -> Mor | None:
    """Some ``h`` in Hom^n(x, y) with d(h) = target, if one exists."""
    F = B.field
    cols = B.dim(x, y, n)
    rows = B.dim(x, y, n + 1)
    A = [[F.zero] * cols for _ in range(rows)]
    for j in range(cols):
        for k, c in B.d(B.basis_mor(x, y, n, j)).support():
            A[k][j] = c
    sol = solve_linear(A, list(target.coeffs), F, cols)
    return None if sol is None else Mor(x, y, n, tuple(sol))


def path_object(B: DGCategory, roster: Sequence = (), name: str | None = None) -> PathObject:
    if B.status != COMPLETE:
        raise PreconditionError("path object needs a COMPLETE tabulation")
    return PathObject(B, roster, name)

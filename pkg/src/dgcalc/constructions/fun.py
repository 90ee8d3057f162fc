"""DG functor categories on a roster of functors, and strict fiber products."""

from __future__ import annotations

from typing import Sequence

from ..errors import PreconditionError, StructuralError
from ..exactlin import kernel, same_field
from ..dgcore.category import (
    COMPLETE,
    TRUNCATED,
    DGCategory,
    DGFunctor,
    Mor,
    finite_basis_generators,
)


class FunctorCategory(DGCategory):
    """Hom^n(F, G) = degree-n graded natural transformations F => G.

    A family ``(phi_X)`` is natural when ``G(g) phi_X = (-1)^(n|g|) phi_Y F(g)``
    for every generator ``g: X -> Y`` of the source (every basis morphism
    when no generating set is known).
    """

    def __init__(self, A: DGCategory, B: DGCategory, roster: Sequence[DGFunctor], name: str | None = None,
                 names: Sequence[str] | None = None):
        same_field(A.field, B.field)
        self.A, self.B = A, B
        labels = []
        for k, F in enumerate(roster):
            if F.source is not A or F.target is not B:
                raise StructuralError(f"roster functor {F.name or k} does not go from {A.name} to {B.name}")
            lab = names[k] if names is not None else (F.name or f"F{k}")
            if lab in labels:
                lab = f"{lab}#{k}"
            labels.append(lab)
        self.functors = dict(zip(labels, roster))
        gens = A.generators()
        truncated = False
        if gens is None:
            gens = finite_basis_generators(A)
            if gens is None:
                gens = []
                for x in A.objects:
                    for y in A.objects:
                        for n in A.degrees():
                            gens.extend(A.basis_mor(x, y, n, i) for i in range(A.dim(x, y, n)))
                truncated = True
        self.naturality_generators = [g for g in gens if not g.is_zero()]
        degs = [g.deg for g in self.naturality_generators]
        lo = B.lo + max([0] + [-m for m in degs])
        hi = B.hi
        if not (B.top is not None and B.top <= B.hi):
            hi = B.hi - max([0] + degs)
        if lo > hi:
            hi = lo
        status = COMPLETE if A.status == B.status == COMPLETE and not truncated else TRUNCATED
        super().__init__(A.field, labels, (lo, hi), status=status, top=B.top, bottom=B.bottom,
                         name=name or f"Fun({A.name},{B.name})")
        self._kernels: dict = {}

    def label_of(self, F: DGFunctor) -> str:
        for lab, G in self.functors.items():
            if G is F:
                return lab
        raise StructuralError("functor is not in the roster")

    def _blocks(self, F: DGFunctor, G: DGFunctor, n: int):
        offs = []
        off = 0
        for x in self.A.objects:
            d = self.B.dim(F.obj(x), G.obj(x), n)
            offs.append((x, off, d))
            off += d
        return offs, off

    def _kernel(self, s: str, t: str, n: int):
        key = (s, t, n)
        got = self._kernels.get(key)
        if got is not None:
            return got
        F, G = self.functors[s], self.functors[t]
        B = self.B
        blocks, total = self._blocks(F, G, n)
        where = {x: (off, d) for x, off, d in blocks}
        rows = []
        for g in self.naturality_generators:
            x, y, m = g.src, g.tgt, g.deg
            Fg, Gg = F.apply(g), G.apply(g)
            dim_out = B.dim(F.obj(x), G.obj(y), n + m)
            if dim_out == 0:
                continue
            sign = -1 if (n * m) % 2 else 1
            block_rows = [[B.field.zero] * total for _ in range(dim_out)]
            ox, dx = where[x]
            for j in range(dx):
                v = B.compose(Gg, B.basis_mor(F.obj(x), G.obj(x), n, j))
                for k, c in v.support():
                    block_rows[k][ox + j] = block_rows[k][ox + j] + c
            oy, dy = where[y]
            for j in range(dy):
                v = B.compose(B.basis_mor(F.obj(y), G.obj(y), n, j), Fg)
                for k, c in v.support():
                    block_rows[k][oy + j] = block_rows[k][oy + j] - sign * c
            rows.extend(block_rows)
        basis, free = kernel(rows, B.field, total)
        got = (blocks, total, basis, free)
        self._kernels[key] = got
        return got

    def family(self, f: Mor) -> dict[str, Mor]:
        """Components ``phi_X`` of a natural transformation."""
        F, G = self.functors[f.src], self.functors[f.tgt]
        blocks, total, basis, free = self._kernel(f.src, f.tgt, f.deg)
        vec = [self.field.zero] * total
        for k, c in f.support():
            for t, e in enumerate(basis[k]):
                if e:
                    vec[t] = vec[t] + c * e
        return {x: Mor(F.obj(x), G.obj(x), f.deg, tuple(vec[off:off + d])) for x, off, d in blocks}

    def from_family(self, s: str, t: str, n: int, comps: dict[str, Mor]) -> Mor:
        """Coordinates of a natural family; raises if it is not natural."""
        blocks, total, basis, free = self._kernel(s, t, n)
        vec = []
        for x, off, d in blocks:
            vec.extend(comps[x].coeffs if x in comps else (self.field.zero,) * d)
        coords = tuple(vec[c] for c in free)
        recon = [self.field.zero] * total
        for k, c in enumerate(coords):
            if c:
                for i, e in enumerate(basis[k]):
                    recon[i] = recon[i] + c * e
        if recon != vec:
            raise PreconditionError("family is not natural")
        return Mor(s, t, n, coords)

    def _basis(self, s, t, n):
        blocks, total, basis, free = self._kernel(s, t, n)
        labels = []
        F, G = self.functors[s], self.functors[t]
        names = []
        for x, off, d in blocks:
            lab = self.B.basis(F.obj(x), G.obj(x), n)
            names.extend(f"{x}:{b}" for b in lab)
        for k, c in enumerate(free):
            labels.append(f"<{names[c]}>")
        return tuple(labels)

    def _vec_of(self, s, t, n, comps: dict[str, Mor]) -> dict:
        return dict(self.from_family(s, t, n, comps).support())

    def _d(self, s, t, n, i):
        fam = self.family(self.basis_mor(s, t, n, i))
        return self._vec_of(s, t, n + 1, {x: self.B.d(m) for x, m in fam.items()})

    def _compose(self, r, s, t, p, i, q, j):
        psi = self.family(self.basis_mor(s, t, p, i))
        phi = self.family(self.basis_mor(r, s, q, j))
        return self._vec_of(r, t, p + q, {x: self.B.compose(psi[x], phi[x]) for x in self.A.objects})

    def _identity(self, s):
        F = self.functors[s]
        return self._vec_of(s, s, 0, {x: self.B.identity(F.obj(x)) for x in self.A.objects})

    def generators(self):
        return finite_basis_generators(self)

    def evaluation(self, x: str, name: str | None = None) -> DGFunctor:
        """``Fun(A, B) -> B``, ``F -> F(x)``."""
        self.A.check_object(x)
        obj = {s: F.obj(x) for s, F in self.functors.items()}

        def on_basis(s, t, n, i):
            return dict(self.family(self.basis_mor(s, t, n, i))[x].support())

        return DGFunctor(self, self.B, obj, on_basis, name=name or f"ev_{x}")


def fun_dg(A: DGCategory, B: DGCategory, roster: Sequence[DGFunctor], name: str | None = None,
           names: Sequence[str] | None = None) -> FunctorCategory:
    return FunctorCategory(A, B, roster, name, names)


class FiberProduct(DGCategory):
    """Strict pullback of ``F: A -> C`` and ``G: B -> C``."""

    def __init__(self, F: DGFunctor, G: DGFunctor, name: str | None = None):
        if F.target is not G.target:
            raise StructuralError("fiber product needs functors with the same target")
        same_field(F.source.field, G.source.field)
        self.F, self.G = F, G
        A, B = F.source, G.source
        self.pairs = {}
        for a in A.objects:
            for b in B.objects:
                if F.obj(a) == G.obj(b):
                    self.pairs[f"({a},{b})"] = (a, b)
        C = F.target
        lo = max(A.lo, B.lo, C.lo)
        hi = min(A.hi, B.hi)
        tops = [A.top, B.top]
        bots = [A.bottom, B.bottom]
        super().__init__(
            A.field, list(self.pairs), (lo, max(lo, hi)),
            status=COMPLETE if A.status == B.status == COMPLETE else TRUNCATED,
            top=max(tops) if None not in tops else None, bottom=min(bots) if None not in bots else None,
            name=name or f"({A.name} x_{C.name} {B.name})",
        )
        self._kernels: dict = {}

    def _kernel(self, x, y, n):
        key = (x, y, n)
        got = self._kernels.get(key)
        if got is not None:
            return got
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        A, B, C = self.F.source, self.G.source, self.F.target
        da, db = A.dim(a, a2, n), B.dim(b, b2, n)
        dc = C.dim(self.F.obj(a), self.F.obj(a2), n) if C.known(n) else 0
        M = [[C.field.zero] * (da + db) for _ in range(dc)]
        for j in range(da):
            for k, c in self.F.on_basis(a, a2, n, j).items():
                M[k][j] = c
        for j in range(db):
            for k, c in self.G.on_basis(b, b2, n, j).items():
                M[k][da + j] = -c
        basis, free = kernel(M, C.field, da + db)
        got = (da, db, basis, free)
        self._kernels[key] = got
        return got

    def components(self, f: Mor) -> tuple[Mor, Mor]:
        (a, b), (a2, b2) = self.pairs[f.src], self.pairs[f.tgt]
        da, db, basis, free = self._kernel(f.src, f.tgt, f.deg)
        vec = [self.field.zero] * (da + db)
        for k, c in f.support():
            for t, e in enumerate(basis[k]):
                if e:
                    vec[t] = vec[t] + c * e
        return Mor(a, a2, f.deg, tuple(vec[:da])), Mor(b, b2, f.deg, tuple(vec[da:]))

    def from_components(self, x: str, y: str, fa: Mor, fb: Mor) -> Mor:
        da, db, basis, free = self._kernel(x, y, fa.deg)
        vec = list(fa.coeffs) + list(fb.coeffs)
        coords = tuple(vec[c] for c in free)
        recon = [self.field.zero] * (da + db)
        for k, c in enumerate(coords):
            if c:
                for i, e in enumerate(basis[k]):
                    recon[i] = recon[i] + c * e
        if recon != vec:
            raise PreconditionError("components do not agree in the common target")
        return Mor(x, y, fa.deg, coords)

    def _basis(self, x, y, n):
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        da, db, basis, free = self._kernel(x, y, n)
        names = [f"{s}" for s in self.F.source.basis(a, a2, n)] + [f"{s}'" for s in self.G.source.basis(b, b2, n)]
        return tuple(f"<{names[c]}>" for c in free)

    def _d(self, x, y, n, i):
        fa, fb = self.components(self.basis_mor(x, y, n, i))
        return dict(self.from_components(x, y, self.F.source.d(fa), self.G.source.d(fb)).support())

    def _compose(self, x, y, z, p, i, q, j):
        ga, gb = self.components(self.basis_mor(y, z, p, i))
        fa, fb = self.components(self.basis_mor(x, y, q, j))
        A, B = self.F.source, self.G.source
        return dict(self.from_components(x, z, A.compose(ga, fa), B.compose(gb, fb)).support())

    def _identity(self, x):
        a, b = self.pairs[x]
        return dict(self.from_components(x, x, self.F.source.identity(a), self.G.source.identity(b)).support())

    def generators(self):
        return finite_basis_generators(self)

    def projection(self, side: int) -> DGFunctor:
        src = self.F.source if side == 0 else self.G.source
        obj = {x: ab[side] for x, ab in self.pairs.items()}

        def on_basis(x, y, n, i):
            return dict(self.components(self.basis_mor(x, y, n, i))[side].support())

        return DGFunctor(self, src, obj, on_basis, name=f"pr{side}")


def fiber_product(F: DGFunctor, G: DGFunctor, name: str | None = None) -> FiberProduct:
    return FiberProduct(F, G, name)

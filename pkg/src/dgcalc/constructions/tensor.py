"""Tensor product of DG categories with Koszul signs, and its coherence isomorphisms."""

from __future__ import annotations

from ..errors import PreconditionError
from ..exactlin import same_field
from ..dgcore.category import COMPLETE, TRUNCATED, DGCategory, DGFunctor, Mor


def tensor_label(a: str, b: str) -> str:
    return f"({a}⊗{b})"


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


class TensorCategory(DGCategory):
    """``A ⊗ B``: objects are pairs, homs are graded tensor products.

    ``d(f⊗g) = d(f)⊗g + (-1)^|f| f⊗d(g)`` and
    ``(f⊗g)(f'⊗g') = (-1)^(|g||f'|) ff'⊗gg'``.
    """

    def __init__(self, A: DGCategory, B: DGCategory, name: str | None = None):
        same_field(A.field, B.field)
        for c in (A, B):
            if c.top is None:
                raise PreconditionError(f"tensor needs homs of {c.name or 'category'} bounded above")
            if c.top > c.hi:
                raise PreconditionError(f"window of {c.name or 'category'} stops below its top degree")
        self.A, self.B = A, B
        self.pairs = {tensor_label(a, b): (a, b) for a in A.objects for b in B.objects}
        top = A.top + B.top
        lo_a = A.lo if A.bottom is None or A.bottom < A.lo else None
        lo_b = B.lo if B.bottom is None or B.bottom < B.lo else None
        cands = []
        if lo_a is not None:
            cands.append(lo_a + B.top)
        if lo_b is not None:
            cands.append(lo_b + A.top)
        if cands:
            lo = max(cands)
        else:
            lo = A.bottom + B.bottom
        hi = max(lo, top)
        bottom = A.bottom + B.bottom if A.bottom is not None and B.bottom is not None else None
        super().__init__(
            A.field, list(self.pairs), (lo, hi),
            status=COMPLETE if A.status == B.status == COMPLETE else TRUNCATED,
            top=top, bottom=bottom, name=name or f"{A.name}⊗{B.name}",
        )

    def _prange(self, n: int) -> range:
        A, B = self.A, self.B
        pmin = n - B.top
        if A.bottom is not None:
            pmin = max(pmin, A.bottom)
        pmax = A.top
        if B.bottom is not None:
            pmax = min(pmax, n - B.bottom)
        return range(pmin, pmax + 1)

    def _blocks(self, x: str, y: str, n: int):
        """[(p, offset, dimA, dimB)] describing the ordering of Hom^n basis."""
        key = ("blocks", x, y, n)
        cached = self._index_cache.get(key)
        if cached is not None:
            return cached
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        out = []
        off = 0
        for p in self._prange(n):
            da, db = self.A.dim(a, a2, p), self.B.dim(b, b2, n - p)
            if da and db:
                out.append((p, off, da, db))
                off += da * db
        self._index_cache[key] = out
        return out

    def _pos(self, x, y, n, p, i, j) -> int:
        for pp, off, da, db in self._blocks(x, y, n):
            if pp == p:
                return off + i * db + j
        raise KeyError((x, y, n, p))

    def _split(self, x, y, n, k):
        for p, off, da, db in self._blocks(x, y, n):
            if off <= k < off + da * db:
                i, j = divmod(k - off, db)
                return p, i, j
        raise IndexError(k)

    def _basis(self, x, y, n):
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        out = []
        for p, off, da, db in self._blocks(x, y, n):
            la, lb = self.A.basis(a, a2, p), self.B.basis(b, b2, n - p)
            out.extend(f"{s}⊗{t}" for s in la for t in lb)
        return tuple(out)

    def _d(self, x, y, n, k):
        p, i, j = self._split(x, y, n, k)
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        out: dict[int, object] = {}
        if self.A.known(p + 1):
            for i2, c in self.A.d_basis(a, a2, p, i).items():
                pos = self._pos(x, y, n + 1, p + 1, i2, j)
                out[pos] = out.get(pos, 0) + c
        s = _sign(p)
        for j2, c in self.B.d_basis(b, b2, n - p, j).items():
            pos = self._pos(x, y, n + 1, p, i, j2)
            out[pos] = out.get(pos, 0) + s * c
        return out

    def _compose(self, x, y, z, p, k, q, l):
        # (f⊗g) in Hom^p(y,z), (f'⊗g') in Hom^q(x,y)
        pf, i, j = self._split(y, z, p, k)
        pf2, i2, j2 = self._split(x, y, q, l)
        (a, b), (a2, b2), (a3, b3) = self.pairs[x], self.pairs[y], self.pairs[z]
        s = _sign((p - pf) * pf2)
        va = self.A.compose_basis(a, a2, a3, pf, i, pf2, i2)
        vb = self.B.compose_basis(b, b2, b3, p - pf, j, q - pf2, j2)
        out: dict[int, object] = {}
        for ia, ca in va.items():
            for jb, cb in vb.items():
                pos = self._pos(x, z, p + q, pf + pf2, ia, jb)
                out[pos] = out.get(pos, 0) + s * ca * cb
        return out

    def _identity(self, x):
        a, b = self.pairs[x]
        out = {}
        for i, ca in self.A._identity(a).items():
            for j, cb in self.B._identity(b).items():
                out[self._pos(x, x, 0, 0, i, j)] = ca * cb
        return out

    def pure(self, f: Mor, g: Mor) -> Mor:
        """The element ``f ⊗ g``."""
        x, y = tensor_label(f.src, g.src), tensor_label(f.tgt, g.tgt)
        n = f.deg + g.deg
        vec: dict[int, object] = {}
        for i, a in f.support():
            for j, b in g.support():
                pos = self._pos(x, y, n, f.deg, i, j)
                vec[pos] = vec.get(pos, 0) + a * b
        return self.from_sparse(x, y, n, vec)

    def generators(self):
        ga, gb = self.A.generators(), self.B.generators()
        if ga is None or gb is None:
            return None
        out = []
        for f in ga:
            for b in self.B.objects:
                out.append(self.pure(f, self.B.identity(b)))
        for g in gb:
            for a in self.A.objects:
                out.append(self.pure(self.A.identity(a), g))
        return out

    def witness_hints(self, x, y):
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        out = []
        for f in self.A.witness_hints(a, a2) or ([self.A.identity(a)] if a == a2 else []):
            for g in self.B.witness_hints(b, b2) or ([self.B.identity(b)] if b == b2 else []):
                out.append(self.pure(f, g))
        return out


def tensor(A: DGCategory, B: DGCategory, name: str | None = None) -> TensorCategory:
    return TensorCategory(A, B, name)


def _block_functor(src: TensorCategory, tgt: DGCategory, obj_map, term):
    """Functor sending each pure basis tensor to ``sign * basis vector`` of the target.

    ``term(x, y, n, p, i, j)`` returns ``{index: coeff}`` in the target.
    """

    def on_basis(x, y, n, k):
        p, i, j = src._split(x, y, n, k)
        return term(x, y, n, p, i, j)

    return DGFunctor(src, tgt, obj_map, on_basis)


def swap_functor(AB: TensorCategory, BA: TensorCategory) -> DGFunctor:
    """``A⊗B -> B⊗A``, ``f⊗g -> (-1)^(|f||g|) g⊗f``."""
    obj = {x: tensor_label(b, a) for x, (a, b) in AB.pairs.items()}

    def term(x, y, n, p, i, j):
        return {BA._pos(obj[x], obj[y], n, n - p, j, i): _sign(p * (n - p))}

    F = _block_functor(AB, BA, obj, term)
    F.name = "swap"
    return F


def left_unitor(kA: TensorCategory) -> DGFunctor:
    """``k⊗A -> A`` for a one-object unit ``k`` with basis ``{1}``."""
    k, A = kA.A, kA.B
    if len(k.objects) != 1:
        raise PreconditionError("left unit needs a one-object unit category")
    obj = {x: b for x, (a, b) in kA.pairs.items()}
    (u,) = k.objects
    one = k.identity(u)
    scale = dict(one.support())

    def term(x, y, n, p, i, j):
        return {j: scale[i]} if i in scale and p == 0 else {}

    F = _block_functor(kA, A, obj, term)
    F.name = "unitor"
    return F


def right_unitor(Ak: TensorCategory) -> DGFunctor:
    A, k = Ak.A, Ak.B
    if len(k.objects) != 1:
        raise PreconditionError("right unit needs a one-object unit category")
    obj = {x: a for x, (a, b) in Ak.pairs.items()}
    (u,) = k.objects
    scale = dict(k.identity(u).support())

    def term(x, y, n, p, i, j):
        return {i: scale[j]} if j in scale and n == p else {}

    F = _block_functor(Ak, A, obj, term)
    F.name = "right unitor"
    return F


def associator(AB_C: TensorCategory, A_BC: TensorCategory) -> DGFunctor:
    """``(A⊗B)⊗C -> A⊗(B⊗C)``, ``(f⊗g)⊗h -> f⊗(g⊗h)``."""
    AB = AB_C.A
    BC = A_BC.B
    obj = {}
    for x, (ab, c) in AB_C.pairs.items():
        a, b = AB.pairs[ab]
        obj[x] = tensor_label(a, tensor_label(b, c))

    def term(x, y, n, p, i, j):
        ab, c = AB_C.pairs[x]
        ab2, c2 = AB_C.pairs[y]
        pa, ia, ib = AB._split(ab, ab2, p, i)
        a, b = AB.pairs[ab]
        a2, b2 = AB.pairs[ab2]
        bc, bc2 = tensor_label(b, c), tensor_label(b2, c2)
        q = n - pa
        k = BC._pos(bc, bc2, q, p - pa, ib, j)
        return {A_BC._pos(obj[x], obj[y], n, pa, ia, k): 1}

    F = _block_functor(AB_C, A_BC, obj, term)
    F.name = "associator"
    return F


def is_basis_bijection(F: DGFunctor) -> tuple[bool, list[str]]:
    """Whether F is bijective on objects and sends each basis element to ±(distinct basis element)."""
    S, T = F.source, F.target
    problems = []
    if sorted(F.obj_map.values()) != sorted(T.objects) or len(set(F.obj_map.values())) != len(S.objects):
        problems.append("object map is not a bijection")
    one = S.field.one
    for x in S.objects:
        for y in S.objects:
            for n in S.degrees():
                if not T.known(n):
                    continue
                seen = set()
                ds, dt = S.dim(x, y, n), T.dim(F.obj(x), F.obj(y), n)
                if ds != dt:
                    problems.append(f"Hom^{n}({x},{y}) has dim {ds} but image hom has dim {dt}")
                    continue
                for i in range(ds):
                    v = F.on_basis(x, y, n, i)
                    if len(v) != 1:
                        problems.append(f"basis element {S.basis(x, y, n)[i]} is not sent to a signed basis element")
                        continue
                    (k, c), = v.items()
                    if c not in (one, -one) or k in seen:
                        problems.append(f"basis element {S.basis(x, y, n)[i]} breaks bijectivity")
                    seen.add(k)
    return not problems, problems

"""Windowed DG categories, morphisms and DG functors.

A :class:`DGCategory` knows its hom complexes exactly on a closed degree
window ``[lo, hi]``.  Optional amplitude bounds ``top``/``bottom`` record
that every hom vanishes above ``top`` (resp. below ``bottom``); degrees
covered by those bounds are known to be zero even outside the window.
Anything else outside the window raises :class:`WindowError`.

Conventions: differentials have degree +1, composition ``g . f`` means
"first f then g", and the Leibniz rule reads
``d(g f) = d(g) f + (-1)^|g| g d(f)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from ..errors import FieldMismatchError, PreconditionError, StructuralError, WindowError
from ..exactlin import CochainComplex, Field, GradedVectorSpace, rank, same_field

COMPLETE = "COMPLETE"
TRUNCATED = "TRUNCATED"


@dataclass(frozen=True)
class Mor:
    """A homogeneous morphism ``src -> tgt`` of degree ``deg``.

    ``coeffs`` are coordinates in the category's basis of ``Hom^deg(src, tgt)``.
    """

    src: str
    tgt: str
    deg: int
    coeffs: tuple

    def _same_hom(self, other: "Mor") -> None:
        if (self.src, self.tgt, self.deg) != (other.src, other.tgt, other.deg):
            raise StructuralError(
                f"cannot add morphisms in Hom^{self.deg}({self.src},{self.tgt}) "
                f"and Hom^{other.deg}({other.src},{other.tgt})"
            )

    def __add__(self, other: "Mor") -> "Mor":
        self._same_hom(other)
        return Mor(self.src, self.tgt, self.deg, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Mor") -> "Mor":
        self._same_hom(other)
        return Mor(self.src, self.tgt, self.deg, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Mor":
        return Mor(self.src, self.tgt, self.deg, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "Mor":
        return Mor(self.src, self.tgt, self.deg, tuple(c * a for a in self.coeffs))

    def __rmul__(self, c) -> "Mor":
        return self.scale(c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[tuple[int, object]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]


class DGCategory:
    """Abstract windowed DG category; subclasses supply basis, d and composition."""

    def __init__(
        self,
        field: Field,
        objects: Sequence[str],
        window: tuple[int, int],
        *,
        status: str = COMPLETE,
        top: int | None = None,
        bottom: int | None = None,
        name: str = "",
    ):
        lo, hi = window
        if lo > hi:
            raise StructuralError(f"empty window [{lo}, {hi}]")
        objects = tuple(objects)
        if len(set(objects)) != len(objects):
            raise StructuralError("duplicate object labels")
        self.field = field
        self.objects = objects
        self._objset = frozenset(objects)
        self.window = (lo, hi)
        self.status = status
        self.top = top
        self.bottom = bottom
        self.name = name
        self._basis_cache: dict = {}
        self._d_cache: dict = {}
        self._comp_cache: dict = {}
        self._index_cache: dict = {}

    # -- to be provided by subclasses -------------------------------------

    def _basis(self, x: str, y: str, n: int) -> tuple[str, ...]:
        raise NotImplementedError

    def _d(self, x: str, y: str, n: int, i: int) -> Mapping[int, object]:
        raise NotImplementedError

    def _compose(self, x: str, y: str, z: str, p: int, i: int, q: int, j: int) -> Mapping[int, object]:
        raise NotImplementedError

    def _identity(self, x: str) -> Mapping[int, object]:
        raise NotImplementedError

    def generators(self) -> list[Mor] | None:
        """Morphisms generating every hom under composition, if known."""
        return None

    def witness_hints(self, x: str, y: str) -> list[Mor]:
        """Candidate closed degree-0 morphisms ``x -> y`` worth trying as isomorphisms."""
        return []

    # -- windows ----------------------------------------------------------

    @property
    def lo(self) -> int:
        return self.window[0]

    @property
    def hi(self) -> int:
        return self.window[1]

    def known_zero(self, n: int) -> bool:
        return (self.top is not None and n > self.top) or (self.bottom is not None and n < self.bottom)

    def known(self, n: int) -> bool:
        return self.lo <= n <= self.hi or self.known_zero(n)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def check_object(self, x: str) -> None:
        if x not in self._objset:
            raise StructuralError(f"unknown object {x!r} in {self.name or 'category'}")

    # -- bases ------------------------------------------------------------

    def basis(self, x: str, y: str, n: int) -> tuple[str, ...]:
        key = (x, y, n)
        b = self._basis_cache.get(key)
        if b is not None:
            return b
        self.check_object(x)
        self.check_object(y)
        if self.known_zero(n):
            b = ()
        elif self.lo <= n <= self.hi:
            b = tuple(self._basis(x, y, n))
        else:
            raise WindowError(f"Hom^{n}({x},{y}) outside window {list(self.window)} of {self.name or 'category'}")
        self._basis_cache[key] = b
        return b

    def dim(self, x: str, y: str, n: int) -> int:
        return len(self.basis(x, y, n))

    def index(self, x: str, y: str, n: int, label: str) -> int:
        key = (x, y, n)
        idx = self._index_cache.get(key)
        if idx is None:
            idx = {lab: i for i, lab in enumerate(self.basis(x, y, n))}
            self._index_cache[key] = idx
        try:
            return idx[label]
        except KeyError:
            raise StructuralError(f"{label!r} is not a basis label of Hom^{n}({x},{y})") from None

    def zero(self, x: str, y: str, n: int) -> Mor:
        return Mor(x, y, n, (self.field.zero,) * self.dim(x, y, n))

    def from_sparse(self, x: str, y: str, n: int, vec: Mapping[int, object]) -> Mor:
        out = [self.field.zero] * self.dim(x, y, n)
        for i, c in vec.items():
            out[i] = out[i] + c
        return Mor(x, y, n, tuple(out))

    def basis_mor(self, x: str, y: str, n: int, i: int) -> Mor:
        return self.from_sparse(x, y, n, {i: self.field.one})

    def element(self, x: str, y: str, n: int, terms: Mapping[str, object]) -> Mor:
        vec = {self.index(x, y, n, lab): self.field(c) for lab, c in terms.items()}
        return self.from_sparse(x, y, n, vec)

    def coerce(self, f: Mor) -> Mor:
        if len(f.coeffs) != self.dim(f.src, f.tgt, f.deg):
            raise StructuralError("morphism does not match this category's basis")
        return f

    # -- structure --------------------------------------------------------

    def identity(self, x: str) -> Mor:
        self.check_object(x)
        return self.from_sparse(x, x, 0, self._identity(x))

    def d_basis(self, x: str, y: str, n: int, i: int) -> Mapping[int, object]:
        key = (x, y, n, i)
        v = self._d_cache.get(key)
        if v is None:
            if self.known_zero(n + 1):
                v = {}
            elif not self.known(n + 1) or not self.known(n):
                raise WindowError(f"d on Hom^{n}({x},{y}) needs degree {n + 1} (window {list(self.window)})")
            else:
                v = {k: c for k, c in self._d(x, y, n, i).items() if c}
            self._d_cache[key] = v
        return v

    def compose_basis(self, x: str, y: str, z: str, p: int, i: int, q: int, j: int) -> Mapping[int, object]:
        """Basis element ``i`` of Hom^p(y,z) composed with ``j`` of Hom^q(x,y)."""
        key = (x, y, z, p, i, q, j)
        v = self._comp_cache.get(key)
        if v is None:
            r = p + q
            if self.known_zero(r):
                v = {}
            elif not self.known(r):
                raise WindowError(f"composite of degree {r} outside window {list(self.window)}")
            else:
                v = {k: c for k, c in self._compose(x, y, z, p, i, q, j).items() if c}
            self._comp_cache[key] = v
        return v

    def d(self, f: Mor) -> Mor:
        acc: dict[int, object] = {}
        for i, c in f.support():
            for k, e in self.d_basis(f.src, f.tgt, f.deg, i).items():
                acc[k] = acc.get(k, 0) + c * e
        return self.from_sparse(f.src, f.tgt, f.deg + 1, acc)

    def compose(self, g: Mor, f: Mor) -> Mor:
        """``g . f``: first f, then g."""
        if g.src != f.tgt:
            raise StructuralError(f"cannot compose {g.src}->{g.tgt} after {f.src}->{f.tgt}")
        acc: dict[int, object] = {}
        gs = g.support()
        fs = f.support()
        for i, a in gs:
            for j, b in fs:
                ab = a * b
                for k, e in self.compose_basis(f.src, f.tgt, g.tgt, g.deg, i, f.deg, j).items():
                    acc[k] = acc.get(k, 0) + ab * e
        return self.from_sparse(f.src, g.tgt, f.deg + g.deg, acc)

    def compose_many(self, *fs: Mor) -> Mor:
        """``compose_many(h, g, f) = h . g . f``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def is_closed(self, f: Mor) -> bool:
        return self.d(f).is_zero()

    # -- derived views ----------------------------------------------------

    def complex_window(self) -> tuple[int, int]:
        lo, hi = self.window
        if self.top is not None and self.top <= hi:
            hi += 1
        if self.bottom is not None and self.bottom >= lo:
            lo -= 1
        return lo, hi

    def hom_complex(self, x: str, y: str, lo: int | None = None, hi: int | None = None) -> CochainComplex:
        clo, chi = self.complex_window()
        lo = clo if lo is None else lo
        hi = chi if hi is None else hi
        bases = {n: self.basis(x, y, n) for n in range(lo, hi + 1)}
        diff = {}
        for n in range(lo, hi):
            rows, cols = len(bases[n + 1]), len(bases[n])
            D = [[self.field.zero] * cols for _ in range(rows)]
            for j in range(cols):
                for k, c in self.d_basis(x, y, n, j).items():
                    D[k][j] = c
            diff[n] = D
        return CochainComplex(GradedVectorSpace(self.field, (lo, hi), bases), diff)

    def total_dimension(self) -> int:
        return sum(self.dim(x, y, n) for x in self.objects for y in self.objects for n in self.degrees())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name!r} objects={list(self.objects)} window={list(self.window)} {self.status}>"


# --------------------------------------------------------------------------
# explicit tables


class TableCategory(DGCategory):
    """A DG category stored as explicit bases, differential and composition tables.

    ``basis[(x, y, n)]`` lists labels; ``diff[(x, y, n)][i]`` and
    ``comp[(x, y, z, p, q)][(i, j)]`` are sparse vectors ``{index: coeff}``.
    Missing entries are zero.
    """

    def __init__(self, field, objects, window, basis, diff, comp, identity, *, generators=None, **kw):
        super().__init__(field, objects, window, **kw)
        self.basis_table = dict(basis)
        self.diff_table = {k: [dict(v) for v in vs] for k, vs in diff.items()}
        self.comp_table = {k: {ij: dict(v) for ij, v in t.items()} for k, t in comp.items()}
        self.identity_table = {x: dict(v) for x, v in identity.items()}
        self._generators = generators

    def _basis(self, x, y, n):
        return self.basis_table.get((x, y, n), ())

    def _d(self, x, y, n, i):
        rows = self.diff_table.get((x, y, n))
        return rows[i] if rows else {}

    def _compose(self, x, y, z, p, i, q, j):
        return self.comp_table.get((x, y, z, p, q), {}).get((i, j), {})

    def _identity(self, x):
        return self.identity_table.get(x, {})

    def generators(self):
        return self._generators


def iter_composable_degrees(cat: DGCategory) -> Iterable[tuple[int, int]]:
    """Degree pairs (p, q) with p, q and p + q all inside the window."""
    for p in cat.degrees():
        for q in cat.degrees():
            if cat.lo <= p + q <= cat.hi:
                yield p, q


def materialize(cat: DGCategory, name: str | None = None) -> TableCategory:
    """Snapshot every table entry inside the window."""
    basis, diff, comp, ident = {}, {}, {}, {}
    for x in cat.objects:
        ident[x] = dict(cat._identity(x)) if cat.known(0) else {}
        for y in cat.objects:
            for n in cat.degrees():
                b = cat.basis(x, y, n)
                if b:
                    basis[(x, y, n)] = b
                if n + 1 <= cat.hi or cat.known_zero(n + 1):
                    diff[(x, y, n)] = [dict(cat.d_basis(x, y, n, i)) for i in range(len(b))]
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                for p, q in iter_composable_degrees(cat):
                    t = {}
                    for i in range(cat.dim(y, z, p)):
                        for j in range(cat.dim(x, y, q)):
                            v = cat.compose_basis(x, y, z, p, i, q, j)
                            if v:
                                t[(i, j)] = dict(v)
                    if t:
                        comp[(x, y, z, p, q)] = t
    return TableCategory(
        cat.field, cat.objects, cat.window, basis, diff, comp, ident,
        generators=cat.generators(), status=cat.status, top=cat.top, bottom=cat.bottom,
        name=name if name is not None else cat.name,
    )


def canonical_form(cat: DGCategory) -> dict:
    """JSON-serialisable dump of all tables; equal dumps mean identical tabulations."""
    from ..exactlin import scalar_str

    def vec(v):
        return [[k, scalar_str(c)] for k, c in sorted(v.items())]

    T = materialize(cat)
    return {
        "field": cat.field.name(),
        "objects": list(T.objects),
        "window": list(T.window),
        "status": T.status,
        "top": T.top,
        "bottom": T.bottom,
        "basis": [[list(k), list(v)] for k, v in sorted(T.basis_table.items())],
        "d": [[list(k), [vec(r) for r in rows]] for k, rows in sorted(T.diff_table.items()) if rows],
        "comp": [
            [list(k), [[list(ij), vec(v)] for ij, v in sorted(t.items())]]
            for k, t in sorted(T.comp_table.items())
        ],
        "identity": [[x, vec(v)] for x, v in sorted(T.identity_table.items())],
    }


# --------------------------------------------------------------------------
# simple derived categories


class FullSubcategory(DGCategory):
    """Full DG subcategory on a subset of objects (same hom complexes)."""

    def __init__(self, parent: DGCategory, objects: Sequence[str], name: str | None = None):
        for x in objects:
            parent.check_object(x)
        keep = [x for x in parent.objects if x in set(objects)]
        super().__init__(
            parent.field, keep, parent.window, status=parent.status, top=parent.top,
            bottom=parent.bottom, name=name or f"{parent.name}|{','.join(keep)}",
        )
        self.parent = parent

    def _basis(self, x, y, n):
        return self.parent.basis(x, y, n)

    def _d(self, x, y, n, i):
        return self.parent.d_basis(x, y, n, i)

    def _compose(self, x, y, z, p, i, q, j):
        return self.parent.compose_basis(x, y, z, p, i, q, j)

    def _identity(self, x):
        return dict(self.parent._identity(x))

    def generators(self):
        return finite_basis_generators(self)

    def witness_hints(self, x, y):
        return self.parent.witness_hints(x, y)


def finite_basis_generators(cat: DGCategory) -> list[Mor] | None:
    """All basis morphisms, when the window covers every nonzero degree."""
    if cat.bottom is None or cat.bottom < cat.lo or cat.top is None or cat.top > cat.hi:
        return None
    out = []
    for x in cat.objects:
        for y in cat.objects:
            for n in range(cat.bottom, cat.top + 1):
                for i in range(cat.dim(x, y, n)):
                    out.append(cat.basis_mor(x, y, n, i))
    return out


def unit_category(field: Field, obj: str = "*", name: str = "k", window: tuple[int, int] = (-2, 2)) -> TableCategory:
    """One object whose endomorphism algebra is the ground field."""
    return TableCategory(
        field, (obj,), window, {(obj, obj, 0): (f"1_{obj}",)}, {(obj, obj, 0): [{}]},
        {(obj, obj, obj, 0, 0): {(0, 0): {0: field.one}}}, {obj: {0: field.one}},
        generators=[], top=0, bottom=0, name=name,
    )


def empty_category(field: Field, window: tuple[int, int] = (-2, 2), name: str = "empty") -> TableCategory:
    return TableCategory(field, (), window, {}, {}, {}, {}, generators=[], top=0, bottom=0, name=name)


def zero_category(field: Field, obj: str = "0", window: tuple[int, int] = (-2, 2), name: str = "0") -> TableCategory:
    """The terminal DG category: one object with zero endomorphism complex."""
    return TableCategory(field, (obj,), window, {}, {}, {}, {obj: {}}, generators=[], top=0, bottom=0, name=name)


class DisjointUnion(DGCategory):
    """Coproduct; objects are relabelled only when the two label sets clash."""

    def __init__(self, A: DGCategory, B: DGCategory, name: str | None = None):
        same_field(A.field, B.field)
        clash = set(A.objects) & set(B.objects)
        if clash:
            self.left = {x: f"{x}.1" for x in A.objects}
            self.right = {x: f"{x}.2" for x in B.objects}
        else:
            self.left = {x: x for x in A.objects}
            self.right = {x: x for x in B.objects}
        self.origin = {v: (A, k) for k, v in self.left.items()}
        self.origin.update({v: (B, k) for k, v in self.right.items()})
        lo = max(A.lo, B.lo) if A.objects and B.objects else (A.lo if A.objects else B.lo)
        hi = min(A.hi, B.hi) if A.objects and B.objects else (A.hi if A.objects else B.hi)
        if not A.objects and not B.objects:
            lo, hi = max(A.lo, B.lo), min(A.hi, B.hi)
        parts = [c for c in (A, B) if c.objects]
        top = max((c.top for c in parts), default=0) if all(c.top is not None for c in parts) else None
        bottom = min((c.bottom for c in parts), default=0) if all(c.bottom is not None for c in parts) else None
        status = COMPLETE if all(c.status == COMPLETE for c in parts) else TRUNCATED
        super().__init__(
            A.field, list(self.left.values()) + list(self.right.values()), (lo, hi),
            status=status, top=top, bottom=bottom, name=name or f"({A.name} + {B.name})",
        )
        self.A, self.B = A, B

    def _split(self, x, y):
        (cx, ox), (cy, oy) = self.origin[x], self.origin[y]
        return (cx, ox, oy) if cx is cy else (None, ox, oy)

    def _basis(self, x, y, n):
        c, ox, oy = self._split(x, y)
        return c.basis(ox, oy, n) if c is not None else ()

    def _d(self, x, y, n, i):
        c, ox, oy = self._split(x, y)
        return c.d_basis(ox, oy, n, i)

    def _compose(self, x, y, z, p, i, q, j):
        c, ox, oy = self._split(x, y)
        oz = self.origin[z][1]
        return c.compose_basis(ox, oy, oz, p, i, q, j)

    def _identity(self, x):
        c, ox = self.origin[x]
        return dict(c._identity(ox))

    def generators(self):
        ga, gb = self.A.generators(), self.B.generators()
        if ga is None or gb is None:
            return None
        return [Mor(self.left[f.src], self.left[f.tgt], f.deg, f.coeffs) for f in ga] + [
            Mor(self.right[f.src], self.right[f.tgt], f.deg, f.coeffs) for f in gb
        ]

    def inclusion(self, side: int) -> "DGFunctor":
        src, mapping = (self.A, self.left) if side == 1 else (self.B, self.right)
        return DGFunctor(src, self, mapping, lambda x, y, n, i: {i: self.field.one}, name=f"incl{side}")


def disjoint_union(A: DGCategory, B: DGCategory, name: str | None = None) -> DGCategory:
    """Coproduct ``A + B``; the empty category is a strict unit."""
    same_field(A.field, B.field)
    if not A.objects and not B.objects:
        return empty_category(A.field, (max(A.lo, B.lo), min(A.hi, B.hi)))
    if not A.objects:
        return B
    if not B.objects:
        return A
    return DisjointUnion(A, B, name)


class ProductCategory(DGCategory):
    """Cartesian product ``A x B``: objects are pairs, homs are direct sums."""

    def __init__(self, A: DGCategory, B: DGCategory, name: str | None = None):
        same_field(A.field, B.field)
        self.pairs = {f"({a},{b})": (a, b) for a in A.objects for b in B.objects}
        tops = [c.top for c in (A, B)]
        bots = [c.bottom for c in (A, B)]
        super().__init__(
            A.field, list(self.pairs), (max(A.lo, B.lo), min(A.hi, B.hi)),
            status=COMPLETE if A.status == B.status == COMPLETE else TRUNCATED,
            top=max(tops) if None not in tops else None, bottom=min(bots) if None not in bots else None,
            name=name or f"({A.name} x {B.name})",
        )
        self.A, self.B = A, B

    def pair_label(self, a: str, b: str) -> str:
        return f"({a},{b})"

    def _basis(self, x, y, n):
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        return tuple(f"<{s},0>" for s in self.A.basis(a, a2, n)) + tuple(f"<0,{s}>" for s in self.B.basis(b, b2, n))

    def _d(self, x, y, n, i):
        (a, b), (a2, b2) = self.pairs[x], self.pairs[y]
        da = self.A.dim(a, a2, n)
        if i < da:
            return dict(self.A.d_basis(a, a2, n, i))
        off = self.A.dim(a, a2, n + 1)
        return {off + k: c for k, c in self.B.d_basis(b, b2, n, i - da).items()}

    def _compose(self, x, y, z, p, i, q, j):
        (a, b), (a2, b2), (a3, b3) = self.pairs[x], self.pairs[y], self.pairs[z]
        dp, dq = self.A.dim(a2, a3, p), self.A.dim(a, a2, q)
        if i < dp and j < dq:
            return dict(self.A.compose_basis(a, a2, a3, p, i, q, j))
        if i >= dp and j >= dq:
            off = self.A.dim(a, a3, p + q)
            return {off + k: c for k, c in self.B.compose_basis(b, b2, b3, p, i - dp, q, j - dq).items()}
        return {}

    def _identity(self, x):
        a, b = self.pairs[x]
        out = dict(self.A._identity(a))
        off = self.A.dim(a, a, 0)
        out.update({off + k: c for k, c in self.B._identity(b).items()})
        return out


# --------------------------------------------------------------------------
# functors


class DGFunctor:
    """A DG functor given by an object map and its action on basis morphisms.

    ``on_basis(x, y, n, i)`` returns the image of basis element ``i`` of
    ``Hom^n(x, y)`` as a sparse vector in ``Hom^n(F x, F y)`` of the target.
    """

    def __init__(
        self,
        source: DGCategory,
        target: DGCategory,
        obj_map: Mapping[str, str],
        on_basis: Callable[[str, str, int, int], Mapping[int, object]],
        name: str = "",
    ):
        if source.field != target.field:
            raise FieldMismatchError("functor between categories over different fields")
        for x in source.objects:
            if x not in obj_map:
                raise StructuralError(f"object map of {name or 'functor'} misses {x!r}")
            target.check_object(obj_map[x])
        self.source = source
        self.target = target
        self.obj_map = {x: obj_map[x] for x in source.objects}
        self._on_basis = on_basis
        self._cache: dict = {}
        self.name = name

    def obj(self, x: str) -> str:
        return self.obj_map[x]

    def on_basis(self, x: str, y: str, n: int, i: int) -> Mapping[int, object]:
        key = (x, y, n, i)
        v = self._cache.get(key)
        if v is None:
            v = {k: c for k, c in self._on_basis(x, y, n, i).items() if c}
            self._cache[key] = v
        return v

    def apply(self, f: Mor) -> Mor:
        acc: dict[int, object] = {}
        for i, c in f.support():
            for k, e in self.on_basis(f.src, f.tgt, f.deg, i).items():
                acc[k] = acc.get(k, 0) + c * e
        return self.target.from_sparse(self.obj(f.src), self.obj(f.tgt), f.deg, acc)

    def matrix(self, x: str, y: str, n: int) -> list:
        """Columns are images of the basis of Hom^n(x, y)."""
        rows = self.target.dim(self.obj(x), self.obj(y), n)
        cols = self.source.dim(x, y, n)
        M = [[self.target.field.zero] * cols for _ in range(rows)]
        for j in range(cols):
            for k, c in self.on_basis(x, y, n, j).items():
                M[k][j] = c
        return M

    def __repr__(self):
        return f"<DGFunctor {self.name!r}: {self.source.name} -> {self.target.name}>"


def identity_functor(cat: DGCategory) -> DGFunctor:
    one = cat.field.one
    return DGFunctor(cat, cat, {x: x for x in cat.objects}, lambda x, y, n, i: {i: one}, name=f"id_{cat.name}")


def inclusion_functor(sub: FullSubcategory) -> DGFunctor:
    one = sub.field.one
    return DGFunctor(sub, sub.parent, {x: x for x in sub.objects}, lambda x, y, n, i: {i: one}, name="incl")


def compose_functors(G: DGFunctor, F: DGFunctor, name: str | None = None) -> DGFunctor:
    """``G . F``."""
    if G.source is not F.target:
        raise StructuralError("functors are not composable")

    def on_basis(x, y, n, i):
        return dict(enumerate(G.apply(F.target.from_sparse(F.obj(x), F.obj(y), n, F.on_basis(x, y, n, i))).coeffs))

    return DGFunctor(F.source, G.target, {x: G.obj(F.obj(x)) for x in F.source.objects}, on_basis,
                     name=name or f"{G.name}.{F.name}")


def empty_functor(source: DGCategory, target: DGCategory, name: str = "empty") -> DGFunctor:
    if source.objects:
        raise PreconditionError("empty functor needs an empty source")
    return DGFunctor(source, target, {}, lambda x, y, n, i: {}, name=name)


def functors_equal(F: DGFunctor, G: DGFunctor) -> bool:
    """Same object map and same action on generators (or on every basis element)."""
    if F.source is not G.source or F.target is not G.target:
        return False
    if F.obj_map != G.obj_map:
        return False
    gens = F.source.generators()
    src = F.source
    if gens is not None:
        return all(F.apply(g) == G.apply(g) for g in gens)
    for x in src.objects:
        for y in src.objects:
            for n in src.degrees():
                for i in range(src.dim(x, y, n)):
                    if F.on_basis(x, y, n, i) != G.on_basis(x, y, n, i):
                        return False
    return True


def check_functor(F: DGFunctor, window: tuple[int, int] | None = None) -> list[str]:
    """Violations of chain-map, multiplicativity and unit conditions on basis data."""
    S, T = F.source, F.target
    lo, hi = window or (max(S.lo, T.lo), min(S.hi, T.hi))
    out: list[str] = []
    for x in S.objects:
        if T.known(0) and F.apply(S.identity(x)) != T.identity(F.obj(x)):
            out.append(f"F(1_{x}) != 1_{F.obj(x)}")
        for y in S.objects:
            for n in range(lo, hi):
                for i in range(S.dim(x, y, n)):
                    f = S.basis_mor(x, y, n, i)
                    if F.apply(S.d(f)) != T.d(F.apply(f)):
                        out.append(f"F does not commute with d on {S.basis(x, y, n)[i]} in Hom^{n}({x},{y})")
    for x in S.objects:
        for y in S.objects:
            for z in S.objects:
                for p in range(lo, hi + 1):
                    for q in range(lo, hi + 1):
                        if not lo <= p + q <= hi:
                            continue
                        for i in range(S.dim(y, z, p)):
                            g = S.basis_mor(y, z, p, i)
                            for j in range(S.dim(x, y, q)):
                                f = S.basis_mor(x, y, q, j)
                                if F.apply(S.compose(g, f)) != T.compose(F.apply(g), F.apply(f)):
                                    out.append(f"F(g f) != F(g) F(f) for g={S.basis(y, z, p)[i]}, f={S.basis(x, y, q)[j]}")
    return out


def matrix_rank(M: list, field: Field, ncols: int) -> int:
    return rank(M, field, ncols)

"""Localization pairs (A0 ⊂ A1), their tensor product and internal Hom, Q and eta."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError, StructuralError
from .exactlin import Field, QQ, same_field
from .dgcore.category import (
    COMPLETE,
    DGCategory,
    DGFunctor,
    FullSubcategory,
    empty_category,
    functors_equal,
    identity_functor,
    unit_category,
)
from .dgcore.checks import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    YES,
    Verdict,
    is_contractible,
    is_homotopy_equivalent,
    morita_proxy,
)
from .constructions.fun import FiberProduct, FunctorCategory, fiber_product, fun_dg
from .constructions.quotient import DrinfeldQuotient, drinfeld_quotient, quotient_functor
from .constructions.tensor import TensorCategory, tensor, tensor_label

PROXY_LABEL = "PROXY: Morita equivalence approximated by quasi-equivalence up to contractible objects"


@dataclass(eq=False)
class LocalizationPair:
    ambient: DGCategory
    sub: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        wanted = set(self.sub)
        for x in wanted:
            self.ambient.check_object(x)
        self.sub = tuple(x for x in self.ambient.objects if x in wanted)
        self._subcat = None

    @property
    def sub_category(self) -> FullSubcategory:
        if self._subcat is None:
            self._subcat = FullSubcategory(self.ambient, self.sub, name=f"{self.ambient.name}_0")
        return self._subcat

    @property
    def field(self) -> Field:
        return self.ambient.field

    def complement(self) -> tuple[str, ...]:
        return tuple(x for x in self.ambient.objects if x not in set(self.sub))


@dataclass(eq=False)
class LpMorphism:
    """A DG functor ``A1 -> B1`` sending ``A0`` into ``B0``."""

    source: LocalizationPair
    target: LocalizationPair
    functor: DGFunctor
    name: str = ""

    def __post_init__(self):
        F = self.functor
        if F.source is not self.source.ambient or F.target is not self.target.ambient:
            raise StructuralError("functor does not match the ambient categories of the pairs")
        tsub = set(self.target.sub)
        for x in self.source.sub:
            if F.obj(x) not in tsub:
                raise PreconditionError(f"{x} is sent to {F.obj(x)}, outside the target subcategory")
        if not self.name:
            self.name = F.name


def lp_identity(A: LocalizationPair) -> LpMorphism:
    return LpMorphism(A, A, identity_functor(A.ambient), name=f"id_{A.name}")


# --------------------------------------------------------------------------
# unit, embedding, evaluation, image


def unit_pair(field: Field = QQ, window: tuple[int, int] = (-4, 2)) -> LocalizationPair:
    """The monoidal unit ``(∅ ⊂ k)``."""
    return LocalizationPair(unit_category(field, "*", "k", window), (), name="unit")


def F_embed(A: DGCategory, name: str | None = None) -> LocalizationPair:
    """``(∅ ⊂ A)``."""
    return LocalizationPair(A, (), name=name or A.name)


def ev1(A: LocalizationPair) -> DGCategory:
    return A.ambient


def image_pair(G: DGFunctor, name: str | None = None) -> LocalizationPair:
    """The target of ``G`` with the full subcategory on the object image of ``G``."""
    return LocalizationPair(G.target, tuple(set(G.obj_map.values())), name=name or f"Im({G.name})")


# --------------------------------------------------------------------------
# tensor product


def lp_tensor(A: LocalizationPair, B: LocalizationPair, name: str | None = None) -> LocalizationPair:
    """Ambient ``A1 ⊗ B1``; subcategory on ``(a⊗b)`` with ``a ∈ A0`` or ``b ∈ B0``."""
    same_field(A.field, B.field)
    for P in (A, B):
        if P.ambient.status != COMPLETE:
            raise PreconditionError("tensor of localization pairs needs COMPLETE tabulations")
    T = tensor(A.ambient, B.ambient)
    a0, b0 = set(A.sub), set(B.sub)
    sub = [x for x, (a, b) in T.pairs.items() if a in a0 or b in b0]
    P = LocalizationPair(T, tuple(sub), name=name or f"{A.name}⊗{B.name}")
    P.factors = (A, B)  # type: ignore[attr-defined]
    return P


# --------------------------------------------------------------------------
# internal Hom


def _restrict(G: DGFunctor, source: DGCategory, target: DGCategory, name: str) -> DGFunctor:
    return DGFunctor(source, target, {x: G.obj(x) for x in source.objects}, G.on_basis, name=name)


def _dedupe(functors: list[DGFunctor]) -> tuple[list[DGFunctor], list[int]]:
    """Distinct functors and, for each input, the index of its representative."""
    reps: list[DGFunctor] = []
    where = []
    for F in functors:
        for k, R in enumerate(reps):
            if R.obj_map == F.obj_map and functors_equal(R, F):
                where.append(k)
                break
        else:
            where.append(len(reps))
            reps.append(F)
    return reps, where


@dataclass(eq=False)
class InternalHom:
    """``Hom(A, B)``: the pair together with the functor categories it is built from."""

    A: LocalizationPair
    B: LocalizationPair
    roster: list[DGFunctor]
    pair: LocalizationPair = None  # type: ignore[assignment]
    fun00: FunctorCategory = None  # type: ignore[assignment]
    fun01: FunctorCategory = None  # type: ignore[assignment]
    fun11: FunctorCategory = None  # type: ignore[assignment]
    fiber: FiberProduct = None  # type: ignore[assignment]
    objects_of: dict = field(default_factory=dict)  # roster index -> fiber object

    def object_of(self, G: DGFunctor) -> str:
        for k, R in enumerate(self.roster):
            if R is G or (R.obj_map == G.obj_map and functors_equal(R, G)):
                return self.objects_of[k]
        raise StructuralError("functor is not in the roster of this internal Hom")

    def functor_at(self, obj: str) -> DGFunctor:
        """The ``A1 -> B1`` component of an object of Hom(A, B)."""
        a0, a1 = self.fiber.pairs[obj]
        return self.fun11.functors[a1]


def lp_hom(A: LocalizationPair, B: LocalizationPair, roster: Sequence[DGFunctor], name: str | None = None) -> InternalHom:
    """Internal Hom on a roster of functors ``A1 -> B1`` sending ``A0`` into ``B0``.

    The 1-component is the fiber product of ``Fun(A0,B0) -> Fun(A0,B1) <- Fun(A1,B1)``
    and the 0-component is the image of the roster functors landing in ``B0``.
    """
    same_field(A.field, B.field)
    roster = list(roster)
    b0 = set(B.sub)
    for G in roster:
        if G.source is not A.ambient or G.target is not B.ambient:
            raise StructuralError(f"roster functor {G.name} does not go from {A.ambient.name} to {B.ambient.name}")
        for x in A.sub:
            if G.obj(x) not in b0:
                raise PreconditionError(f"roster functor {G.name} sends {x} outside {B.name}_0")
    A0, B0 = A.sub_category, B.sub_category
    A1, B1 = A.ambient, B.ambient
    names = []
    for k, G in enumerate(roster):
        nm = G.name or f"G{k}"
        while nm in names:
            nm = f"{nm}'"
        names.append(nm)
    reps11, where11 = _dedupe(roster)
    names11 = [names[where11.index(k)] for k in range(len(reps11))]
    fun11 = fun_dg(A1, B1, reps11, names=names11)
    res01 = [_restrict(G, A0, B1, names11[k]) for k, G in enumerate(reps11)]
    reps01, where01 = _dedupe(res01)
    names01 = [names11[where01.index(k)] for k in range(len(reps01))]
    fun01 = fun_dg(A0, B1, reps01, names=names01)
    res00 = [_restrict(G, A0, B0, names11[k]) for k, G in enumerate(reps11)]
    reps00, where00 = _dedupe(res00)
    names00 = [names11[where00.index(k)] for k in range(len(reps00))]
    fun00 = fun_dg(A0, B0, reps00, names=names00)
    # postcomposition with B0 ⊂ B1 and restriction along A0 ⊂ A1
    inc_obj = {}
    for k, G in enumerate(reps00):
        G1 = _restrict(G, A0, B1, "")
        idx = next(j for j, R in enumerate(reps01) if R.obj_map == G1.obj_map and functors_equal(R, G1))
        inc_obj[names00[k]] = names01[idx]
    res_obj = {names11[k]: names01[where01[k]] for k in range(len(reps11))}

    def inc_on_basis(s, t, n, i):
        fam = fun00.family(fun00.basis_mor(s, t, n, i))
        return dict(fun01.from_family(inc_obj[s], inc_obj[t], n, fam).support())

    def res_on_basis(s, t, n, i):
        fam = fun11.family(fun11.basis_mor(s, t, n, i))
        return dict(fun01.from_family(res_obj[s], res_obj[t], n, {x: fam[x] for x in A0.objects}).support())

    L = DGFunctor(fun00, fun01, inc_obj, inc_on_basis, name="incl_*")
    R = DGFunctor(fun11, fun01, res_obj, res_on_basis, name="restr")
    fib = fiber_product(L, R, name=name or f"Hom({A.name},{B.name})")
    objects_of = {}
    for k in range(len(roster)):
        r11 = where11[k]
        n11 = names11[r11]
        r00 = where00[r11]
        objects_of[k] = f"({names00[r00]},{n11})"
        if objects_of[k] not in fib.pairs:
            raise StructuralError("internal: roster functor missing from the fiber product")
    sub = [objects_of[k] for k, G in enumerate(roster) if all(G.obj(x) in b0 for x in A1.objects)]
    pair = LocalizationPair(fib, tuple(sub), name=fib.name)
    return InternalHom(A, B, roster, pair, fun00, fun01, fun11, fib, objects_of)


def fiber_morphism(H: InternalHom, s: str, t: str, n: int, family1: dict) -> object:
    """Element of Hom(A,B) with 1-component ``family1`` (a natural family on A1)."""
    fib = H.fiber
    (s0, s1), (t0, t1) = fib.pairs[s], fib.pairs[t]
    phi1 = H.fun11.from_family(s1, t1, n, family1)
    phi0 = H.fun00.from_family(s0, t0, n, {x: family1[x] for x in H.A.sub_category.objects})
    return fib.from_components(s, t, phi0, phi1)


# --------------------------------------------------------------------------
# transposition


def slice_functor(phi: DGFunctor, a: str, name: str | None = None) -> DGFunctor:
    """``phi(a, -) : B1 -> C1`` for ``phi : A1 ⊗ B1 -> C1``."""
    T: TensorCategory = phi.source  # type: ignore[assignment]
    A, B = T.A, T.B
    one = A.identity(a)

    def on_basis(b, b2, n, j):
        return dict(phi.apply(T.pure(one, B.basis_mor(b, b2, n, j))).support())

    return DGFunctor(B, phi.target, {b: phi.obj(tensor_label(a, b)) for b in B.objects}, on_basis,
                     name=name or f"{phi.name}({a},-)")


def transpose(phi: LpMorphism, hom: InternalHom | None = None, roster: Sequence[DGFunctor] = ()):
    """``A ⊗ B -> C`` to ``A -> Hom(B, C)``.

    Returns ``(LpMorphism, InternalHom)``.  The roster of the internal Hom
    is ``hom``'s when it already contains every slice ``phi(a, -)``,
    otherwise the given roster extended by the missing slices.
    """
    AB = phi.source
    T = AB.ambient
    if not isinstance(T, TensorCategory):
        raise StructuralError("transpose needs a morphism out of a tensor product")
    A1, B1 = T.A, T.B
    C = phi.target
    slices = [slice_functor(phi.functor, a, name=f"{phi.name or 'phi'}({a},-)") for a in A1.objects]
    Apair, Bpair = _factor_pairs(AB)
    base: list[DGFunctor] = list(roster)
    if hom is not None:
        if hom.B is not C or hom.A is not Bpair:
            raise StructuralError("given internal Hom does not match the source and target pairs")
        try:
            objs = {a: hom.object_of(s) for a, s in zip(A1.objects, slices)}
        except StructuralError:
            base = list(hom.roster) + base
            hom = None
    if hom is None:
        extra = []
        for s in slices:
            if not any(s.obj_map == r.obj_map and functors_equal(s, r) for r in base + extra):
                extra.append(s)
        hom = lp_hom(Bpair, C, base + extra)
        objs = {a: hom.object_of(s) for a, s in zip(A1.objects, slices)}
    fib = hom.fiber
    Bc = B1

    def on_basis(a, a2, n, i):
        f = A1.basis_mor(a, a2, n, i)
        s, t = objs[a], objs[a2]
        fam = {b: phi.functor.apply(T.pure(f, Bc.identity(b))) for b in Bc.objects}
        return dict(fiber_morphism(hom, s, t, n, fam).support())

    F = DGFunctor(A1, fib, objs, on_basis, name=f"transpose({phi.name})")
    return LpMorphism(Apair, hom.pair, F, name=F.name), hom


def untranspose(psi: LpMorphism, hom: InternalHom, AB: LocalizationPair) -> LpMorphism:
    """``A -> Hom(B, C)`` to ``A ⊗ B -> C`` with ``f⊗g -> psi(f)_{b'} . psi(a)(g)``."""
    T = AB.ambient
    if not isinstance(T, TensorCategory):
        raise StructuralError("untranspose needs the tensor pair as target shape")
    A1, B1 = T.A, T.B
    C1 = hom.B.ambient
    fib = hom.fiber
    Psi = psi.functor
    obj = {}
    for x, (a, b) in T.pairs.items():
        obj[x] = hom.functor_at(Psi.obj(a)).obj(b)

    def on_basis(x, y, n, k):
        p, i, j = T._split(x, y, n, k)
        (a, b), (a2, b2) = T.pairs[x], T.pairs[y]
        f = A1.basis_mor(a, a2, p, i)
        g = B1.basis_mor(b, b2, n - p, j)
        G_a = hom.functor_at(Psi.obj(a))
        comp1 = fib.components(Psi.apply(f))[1]
        fam = hom.fun11.family(comp1)
        return dict(C1.compose(fam[b2], G_a.apply(g)).support())

    F = DGFunctor(T, C1, obj, on_basis, name=f"untranspose({psi.name})")
    return LpMorphism(AB, hom.B, F, name=F.name)


def _factor_pairs(AB: LocalizationPair) -> tuple[LocalizationPair, LocalizationPair]:
    if hasattr(AB, "factors"):
        return AB.factors  # type: ignore[attr-defined]
    raise StructuralError("tensor pair does not remember its factors; build it with lp_tensor")


def lp_morphisms_equal(F: LpMorphism, G: LpMorphism) -> bool:
    """Equal object maps and equal images of every basis morphism."""
    A, B = F.functor, G.functor
    if A.source is not B.source or A.target is not B.target or A.obj_map != B.obj_map:
        return False
    S = A.source
    for x in S.objects:
        for y in S.objects:
            for n in S.degrees():
                for i in range(S.dim(x, y, n)):
                    if A.on_basis(x, y, n, i) != B.on_basis(x, y, n, i):
                        return False
    return True


# --------------------------------------------------------------------------
# Q and eta


@dataclass(eq=False)
class QPair:
    pair: LocalizationPair
    quotient: DrinfeldQuotient
    source: LocalizationPair


def q_functor(A: LocalizationPair, window: tuple[int, int] | None = None, cap: int | None = None) -> LocalizationPair:
    """``(A0 ⊂ A1/A0)``; the quotient category records its source pair."""
    if A.ambient.status != COMPLETE:
        raise PreconditionError("Q needs a COMPLETE ambient category")
    Q = drinfeld_quotient(A.ambient, A.sub, window, cap)
    P = LocalizationPair(Q, A.sub, name=f"Q({A.name})")
    P.base = A  # type: ignore[attr-defined]
    return P


def eta(A: LocalizationPair, QA: LocalizationPair | None = None) -> LpMorphism:
    QA = QA or q_functor(A)
    Q: DrinfeldQuotient = QA.ambient  # type: ignore[assignment]
    if Q.A is not A.ambient:
        raise StructuralError("QA is not the quotient of A")
    return LpMorphism(A, QA, Q.embedding(name=f"eta_{A.name}"), name=f"eta_{A.name}")


def q_morphism(F: LpMorphism, QA: LocalizationPair | None = None, QB: LocalizationPair | None = None) -> LpMorphism:
    """``Q(F) : Q(A) -> Q(B)``."""
    QA = QA or q_functor(F.source)
    QB = QB or q_functor(F.target)
    G = quotient_functor(F.functor, QA.ambient, QB.ambient, name=f"Q({F.name})")  # type: ignore[arg-type]
    return LpMorphism(QA, QB, G, name=G.name)


def is_q_weak_equivalence(F: LpMorphism, window: tuple[int, int] | None = None,
                          QA: LocalizationPair | None = None, QB: LocalizationPair | None = None) -> Verdict:
    """Morita proxy applied to the induced functor of Drinfeld quotients."""
    QF = q_morphism(F, QA, QB)
    v = morita_proxy(QF.functor, window)
    v.data["label"] = PROXY_LABEL
    return v


# --------------------------------------------------------------------------
# fibrant form


def contractible_objects(C: DGCategory) -> tuple[str, ...]:
    return tuple(x for x in C.objects if is_contractible(C, x))


def check_q_fibrant_form(A: LocalizationPair) -> Verdict:
    """Whether ``A0`` is exactly the contractible objects and stable under homotopy equivalence.

    Morita fibrancy of the components is not decided and is reported as
    NOT CHECKED.
    """
    C = A.ambient
    sub = set(A.sub)
    contr = set(contractible_objects(C))
    clauses = {}
    bad = sorted(sub - contr)
    clauses["subcategory objects contractible"] = "PASS" if not bad else f"FAIL: {bad} not contractible"
    missing = sorted(contr - sub)
    clauses["contractibles contained in subcategory"] = (
        "PASS" if not missing else f"FAIL: contractible {missing} outside the subcategory"
    )
    leaks, unknown = [], []
    for x in A.sub:
        for y in A.complement():
            v = is_homotopy_equivalent(C, x, y)
            if v.verdict == YES:
                leaks.append((x, y))
            elif v.verdict == INCONCLUSIVE:
                unknown.append((x, y))
    if leaks:
        clauses["stable under homotopy equivalence"] = f"FAIL: {leaks} homotopy equivalent across the boundary"
    elif unknown:
        clauses["stable under homotopy equivalence"] = f"INCONCLUSIVE: {unknown}"
    else:
        clauses["stable under homotopy equivalence"] = "PASS"
    clauses["Morita fibrancy of components"] = "NOT CHECKED"
    decided = [v for k, v in clauses.items() if k != "Morita fibrancy of components"]
    if any(v.startswith("FAIL") for v in decided):
        verdict = FAIL
    elif any(v.startswith("INCONCLUSIVE") for v in decided):
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    reason = "; ".join(f"{k}: {v}" for k, v in clauses.items() if not v.startswith(("PASS", "NOT")))
    return Verdict(verdict, None, reason, {"clauses": clauses, "contractibles": sorted(contr)})


def empty_pair(field: Field = QQ) -> LocalizationPair:
    return LocalizationPair(empty_category(field), (), name="empty")

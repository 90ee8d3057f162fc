"""DG functors out of presented categories, given by generator images."""

from __future__ import annotations

from typing import Mapping

from ..errors import PreconditionError, StructuralError
from .category import DGCategory, DGFunctor, Mor
from .presentation import PresentedCategory, expr_str


def _as_mor(target: DGCategory, v) -> Mor:
    if isinstance(v, Mor):
        return target.coerce(v)
    if hasattr(target, "expr"):
        return target.expr(v)
    raise StructuralError("generator images must be morphisms unless the target is presented")


def functor_from_generators(
    source: PresentedCategory,
    target: DGCategory,
    obj_map: Mapping[str, str],
    images: Mapping[str, object],
    name: str = "",
    check: bool = True,
) -> DGFunctor:
    """Extend generator images multiplicatively to every normal-form word.

    With ``check`` the images must have the right hom space and degree,
    commute with ``d`` and kill every relation; otherwise a
    :class:`PreconditionError` lists the failures.
    """
    if not isinstance(source, PresentedCategory):
        raise StructuralError("functor_from_generators needs a presented source")
    P = source.presentation
    img: dict[int, Mor] = {}
    for g in P.generators:
        if not source.lo <= g.deg <= source.hi:
            continue
        if g.name not in images:
            raise StructuralError(f"no image given for generator {g.name!r}")
        f = _as_mor(target, images[g.name])
        want = (obj_map[g.src], obj_map[g.tgt], g.deg)
        if (f.src, f.tgt, f.deg) != want:
            raise StructuralError(
                f"image of {g.name} lies in Hom^{f.deg}({f.src},{f.tgt}), expected Hom^{want[2]}({want[0]},{want[1]})"
            )
        img[source._gidx[g.name]] = f
    for k in images:
        if k not in P.gen:
            raise StructuralError(f"image given for unknown generator {k!r}")

    def word_image(x: str, w: tuple) -> Mor:
        out = target.identity(obj_map[x])
        for gi in reversed(w):
            out = target.compose(img[gi], out)
        return out

    def on_basis(x, y, n, i):
        w = source._nf[(x, y, n)][i]
        return dict(enumerate(word_image(x, w).coeffs))

    F = DGFunctor(source, target, obj_map, on_basis, name=name)
    if check:
        problems = []
        for g in P.generators:
            gi = source._gidx.get(g.name)
            if gi not in img:
                continue
            if not (source.known(g.deg + 1) and target.known(g.deg + 1)):
                continue
            lhs = F.apply(source.d(source.gen(g.name)))
            rhs = target.d(img[gi])
            if lhs != rhs:
                problems.append(f"F(d {g.name}) != d F({g.name})")
        for r in P.relations:
            s, t, n = P.word_type(next(iter(r)))
            if not source.lo <= n <= source.hi:
                continue
            acc = target.zero(obj_map[s], obj_map[t], n)
            for w, c in r.items():
                src, iw = source._internal(w)
                acc = acc + word_image(src, iw).scale(c)
            if not acc.is_zero():
                problems.append(f"relation {expr_str(r)} not preserved")
        if problems:
            raise PreconditionError(f"invalid functor {name or ''}: " + "; ".join(problems))
    return F

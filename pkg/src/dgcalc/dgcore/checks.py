"""Axiom checks, H^0 categories and the equivalence/contractibility deciders."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from ..errors import PreconditionError, TruncatedError, WindowError
from ..exactlin import PrimeField, cohomology, rank, solve_linear
from .category import COMPLETE, DGCategory, DGFunctor, Mor

YES = "YES"
NO = "NO"
INCONCLUSIVE = "INCONCLUSIVE"
PASS = "PASS"
FAIL = "FAIL"


# --------------------------------------------------------------------------
# axioms


def _sp_add(acc: dict, vec, c) -> None:
    for k, e in vec.items():
        acc[k] = acc.get(k, 0) + c * e


def _sp_clean(acc: dict) -> dict:
    return {k: c for k, c in acc.items() if c}


def check_axioms(cat: DGCategory, limit: int | None = None) -> list[str]:
    """Every violated instance of d^2 = 0, Leibniz, unitality and associativity.

    Only instances whose degrees are all known are examined.  An empty
    list means the tabulation passes.  Works on sparse basis vectors with
    the category's cached products.
    """
    out: list[str] = []

    def report(msg: str) -> bool:
        out.append(msg)
        return limit is not None and len(out) >= limit

    objs = cat.objects
    degs = list(cat.degrees())
    kn = cat.known
    B = cat.basis
    dim = {}
    for x in objs:
        for y in objs:
            for n in degs:
                dim[(x, y, n)] = cat.dim(x, y, n)
    comp = cat.compose_basis
    dB = cat.d_basis

    def compose_sp(x, y, z, p, gv, q, fv):
        acc: dict = {}
        for i, a in gv.items():
            for j, b in fv.items():
                _sp_add(acc, comp(x, y, z, p, i, q, j), a * b)
        return _sp_clean(acc)

    def d_sp(x, y, n, v):
        acc: dict = {}
        for i, a in v.items():
            _sp_add(acc, dB(x, y, n, i), a)
        return _sp_clean(acc)

    ident = {x: dict(cat._identity(x)) for x in objs}
    ident = {x: _sp_clean(v) for x, v in ident.items()}
    for x in objs:
        if kn(1) and d_sp(x, x, 0, ident[x]):
            if report(f"d(1_{x}) != 0"):
                return out
        for y in objs:
            for n in degs:
                for i in range(dim[(x, y, n)]):
                    e = {i: cat.field.one}
                    if kn(n + 1) and kn(n + 2):
                        if d_sp(x, y, n + 1, dB(x, y, n, i)):
                            if report(f"d^2 != 0 on {B(x, y, n)[i]} in Hom^{n}({x},{y})"):
                                return out
                    if compose_sp(x, y, y, 0, ident[y], n, e) != e:
                        if report(f"1_{y} . {B(x, y, n)[i]} != {B(x, y, n)[i]} in Hom^{n}({x},{y})"):
                            return out
                    if compose_sp(x, x, y, n, e, 0, ident[x]) != e:
                        if report(f"{B(x, y, n)[i]} . 1_{x} != {B(x, y, n)[i]} in Hom^{n}({x},{y})"):
                            return out
    # nonzero hom spaces only; most (object, degree) combinations are empty
    nz = {(x, y): [n for n in degs if dim[(x, y, n)]] for x in objs for y in objs}
    for x in objs:
        for y in objs:
            for q in nz[(x, y)]:
                if not kn(q + 1):
                    continue
                for z in objs:
                    for p in nz[(y, z)]:
                        if not (kn(p + q) and kn(p + q + 1) and kn(p + 1)):
                            continue
                        sign = -1 if p % 2 else 1
                        for i in range(dim[(y, z, p)]):
                            dg = dB(y, z, p, i)
                            for j in range(dim[(x, y, q)]):
                                lhs = d_sp(x, z, p + q, comp(x, y, z, p, i, q, j))
                                rhs: dict = {}
                                for k, c in dg.items():
                                    _sp_add(rhs, comp(x, y, z, p + 1, k, q, j), c)
                                for k, c in dB(x, y, q, j).items():
                                    _sp_add(rhs, comp(x, y, z, p, i, q + 1, k), sign * c)
                                if lhs != _sp_clean(rhs):
                                    if report(
                                        f"Leibniz fails for (g, f) = ({B(y, z, p)[i]}, {B(x, y, q)[j]}) "
                                        f"in Hom({x},{y},{z})"
                                    ):
                                        return out
    for x in objs:
        for y in objs:
            for r in nz[(x, y)]:
                for z in objs:
                    for q in nz[(y, z)]:
                        if not kn(q + r):
                            continue
                        for w in objs:
                            for p in nz[(z, w)]:
                                if not (kn(p + q) and kn(p + q + r)):
                                    continue
                                for i in range(dim[(z, w, p)]):
                                    for j in range(dim[(y, z, q)]):
                                        hg = comp(y, z, w, p, i, q, j)
                                        for k in range(dim[(x, y, r)]):
                                            left: dict = {}
                                            for a, c in hg.items():
                                                _sp_add(left, comp(x, y, w, p + q, a, r, k), c)
                                            right: dict = {}
                                            for a, c in comp(x, y, z, q, j, r, k).items():
                                                _sp_add(right, comp(x, z, w, p, i, q + r, a), c)
                                            if _sp_clean(left) != _sp_clean(right):
                                                if report(
                                                    f"associativity fails for (h, g, f) = ({B(z, w, p)[i]}, "
                                                    f"{B(y, z, q)[j]}, {B(x, y, r)[k]}) in Hom({x},{y},{z},{w})"
                                                ):
                                                    return out
    return out


# --------------------------------------------------------------------------
# H^0


@dataclass
class H0Category:
    """Degree-0 cohomology of every hom complex with the induced composition."""

    cat: DGCategory
    homs: dict = field(default_factory=dict)

    def hom(self, x: str, y: str):
        H = self.homs.get((x, y))
        if H is None:
            H = cohomology(self.cat.hom_complex(x, y), 0)
            self.homs[(x, y)] = H
        return H

    def dim(self, x: str, y: str) -> int:
        return self.hom(x, y).dim

    def class_of(self, f: Mor) -> list:
        c = self.hom(f.src, f.tgt).coordinates(list(f.coeffs))
        if c is None:
            raise PreconditionError("morphism is not closed")
        return c

    def representative(self, x: str, y: str, k: int) -> Mor:
        return Mor(x, y, 0, tuple(self.hom(x, y).representatives[k]))

    def compose_classes(self, x: str, y: str, z: str, b: list, a: list) -> list:
        """Class of (b in H^0(y,z)) . (a in H^0(x,y))."""
        g = self.cat.zero(y, z, 0)
        for k, c in enumerate(b):
            if c:
                g = g + self.representative(y, z, k).scale(c)
        f = self.cat.zero(x, y, 0)
        for k, c in enumerate(a):
            if c:
                f = f + self.representative(x, y, k).scale(c)
        return self.class_of(self.cat.compose(g, f))

    def table(self, x: str, y: str, z: str) -> dict:
        """Structure constants: (i, j) -> class of rep_i(y,z) . rep_j(x,y)."""
        out = {}
        for i in range(self.dim(y, z)):
            for j in range(self.dim(x, y)):
                out[(i, j)] = self.class_of(self.cat.compose(self.representative(y, z, i), self.representative(x, y, j)))
        return out


def h0(cat: DGCategory) -> H0Category:
    for n in (-1, 0, 1):
        if not cat.known(n):
            raise WindowError(f"H^0 needs degrees -1..1; window is {list(cat.window)}")
    return H0Category(cat)


# --------------------------------------------------------------------------
# invertibility and contractibility


@dataclass
class Witnessed:
    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _need(cat: DGCategory, degrees: Iterable[int]) -> None:
    for n in degrees:
        if not cat.known(n):
            raise WindowError(f"degree {n} outside window {list(cat.window)} of {cat.name or 'category'}")


def _solve_inverse(cat: DGCategory, f: Mor, side: str) -> Mor | None:
    """Closed g with f.g = 1 + d(u) (side 'right') or g.f = 1 + d(u) (side 'left')."""
    x, y = f.src, f.tgt
    a, b = y, x  # g : y -> x
    F = cat.field
    e = y if side == "right" else x  # object carrying the identity
    ng = cat.dim(a, b, 0)
    nu = cat.dim(e, e, -1)
    n0 = cat.dim(e, e, 0)
    n1 = cat.dim(a, b, 1)
    rows = n0 + n1
    A = [[F.zero] * (ng + nu) for _ in range(rows)]
    for j in range(ng):
        g = cat.basis_mor(a, b, 0, j)
        prod = cat.compose(f, g) if side == "right" else cat.compose(g, f)
        for k, c in prod.support():
            A[k][j] = c
        for k, c in cat.d(g).support():
            A[n0 + k][j] = c
    for j in range(nu):
        du = cat.d(cat.basis_mor(e, e, -1, j))
        for k, c in du.support():
            A[k][ng + j] = -c
    rhs = list(cat.identity(e).coeffs) + [F.zero] * n1
    sol = solve_linear(A, rhs, F, ng + nu)
    if sol is None:
        return None
    return Mor(a, b, 0, tuple(sol[:ng]))


def is_invertible_h0(cat: DGCategory, f: Mor) -> Witnessed:
    """Whether a closed degree-0 ``f`` becomes invertible in H^0; witness is an inverse."""
    if f.deg != 0:
        raise PreconditionError(f"expected a degree-0 morphism, got degree {f.deg}")
    _need(cat, (-1, 0, 1))
    if not cat.d(f).is_zero():
        raise PreconditionError("morphism is not closed")
    gr = _solve_inverse(cat, f, "right")
    if gr is None:
        return Witnessed(False, None, "no right inverse in H^0")
    gl = _solve_inverse(cat, f, "left")
    if gl is None:
        return Witnessed(False, None, "no left inverse in H^0")
    return Witnessed(True, gr, "")


def is_contractible(cat: DGCategory, x: str) -> Witnessed:
    """Whether 1_x = d(c) for some degree -1 endomorphism c; witness is c."""
    _need(cat, (-1, 0))
    F = cat.field
    n = cat.dim(x, x, -1)
    m = cat.dim(x, x, 0)
    A = [[F.zero] * n for _ in range(m)]
    for j in range(n):
        for k, c in cat.d(cat.basis_mor(x, x, -1, j)).support():
            A[k][j] = c
    sol = solve_linear(A, list(cat.identity(x).coeffs), F, n)
    if sol is None:
        return Witnessed(False, None, f"1_{x} is not a coboundary")
    return Witnessed(True, Mor(x, x, -1, tuple(sol)), "")


# --------------------------------------------------------------------------
# homotopy equivalence of objects


@dataclass
class Verdict:
    verdict: str
    witness: object = None
    reason: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict in (YES, PASS)


GRID = (0, 1, -1, 2)


def _cohomology_dims(cat: DGCategory, x: str, y: str) -> dict[int, int]:
    C = cat.hom_complex(x, y)
    lo, hi = C.window
    return {n: cohomology(C, n).dim for n in range(lo + 1, hi)}


def is_homotopy_equivalent(
    cat: DGCategory,
    x: str,
    y: str,
    hints: Iterable[Mor] = (),
    max_candidates: int = 4096,
    grid: tuple = GRID,
) -> Verdict:
    """Three-valued decision whether ``x`` and ``y`` are isomorphic in H^0.

    YES carries ``(f, g)`` with ``g`` inverse to ``f`` in H^0.  NO is only
    returned with an exact obstruction.
    """
    _need(cat, (-1, 0, 1))
    F = cat.field
    if x == y:
        return Verdict(YES, (cat.identity(x), cat.identity(x)), "same object")
    cx, cy = is_contractible(cat, x), is_contractible(cat, y)
    if cx and cy:
        return Verdict(YES, (cat.zero(x, y, 0), cat.zero(y, x, 0)), "both contractible")
    if cx or cy:
        return Verdict(NO, None, f"{x if cx else y} is contractible, {y if cx else x} is not")

    def attempt(f: Mor):
        if not cat.d(f).is_zero():
            return None
        r = is_invertible_h0(cat, f)
        return Verdict(YES, (f, r.witness), "witness found") if r else None

    # hints are verified, so they go before the costlier obstruction search
    tried = 0
    for f in list(hints) + list(cat.witness_hints(x, y)):
        if (f.src, f.tgt, f.deg) == (x, y, 0):
            tried += 1
            v = attempt(f)
            if v:
                return v
    H = h0(cat)
    if H.dim(x, y) == 0 or H.dim(y, x) == 0:
        return Verdict(NO, None, "H^0 hom between the objects vanishes")
    for z in cat.objects:
        for a, b, tag in ((_cohomology_dims(cat, z, x), _cohomology_dims(cat, z, y), f"Hom({z},-)"),
                          (_cohomology_dims(cat, x, z), _cohomology_dims(cat, y, z), f"Hom(-,{z})")):
            for n in sorted(set(a) & set(b)):
                if a[n] != b[n]:
                    return Verdict(NO, None, f"dim H^{n} {tag} differs: {a[n]} vs {b[n]}")

    reps = [H.representative(x, y, k) for k in range(H.dim(x, y))]
    exhaustive = isinstance(F, PrimeField) and F.p ** len(reps) <= max_candidates
    coeffs = list(F.elements()) if exhaustive else [F(c) for c in grid]
    coeffs = list(dict.fromkeys(coeffs))
    count = 0
    for combo in itertools.product(coeffs, repeat=len(reps)):
        if not any(combo):
            continue
        count += 1
        if count > max_candidates:
            exhaustive = False
            break
        f = cat.zero(x, y, 0)
        for c, r in zip(combo, reps):
            if c:
                f = f + r.scale(c)
        v = attempt(f)
        if v:
            return v
    if exhaustive:
        return Verdict(NO, None, f"exhaustive search over all {F.p ** len(reps) - 1} nonzero classes")
    return Verdict(INCONCLUSIVE, None, f"no invertible class among {count + tried} candidates")


# --------------------------------------------------------------------------
# quasi-equivalences


def induced_cohomology_map(F: DGFunctor, x: str, y: str, n: int) -> tuple[int, int, int]:
    """(dim source H^n, dim target H^n, rank) of the map induced by F on Hom(x, y)."""
    S, T = F.source, F.target
    Hs = cohomology(S.hom_complex(x, y), n)
    Ht = cohomology(T.hom_complex(F.obj(x), F.obj(y)), n)
    cols = []
    for rep in Hs.representatives:
        img = F.apply(Mor(x, y, n, tuple(rep)))
        c = Ht.coordinates(list(img.coeffs))
        cols.append(c)
    if not cols or Ht.dim == 0:
        return Hs.dim, Ht.dim, 0
    M = [[cols[j][i] for j in range(len(cols))] for i in range(Ht.dim)]
    return Hs.dim, Ht.dim, rank(M, T.field, len(cols))


def is_quasi_equivalence(
    F: DGFunctor,
    window: tuple[int, int] | None = None,
    collapse_contractibles: bool = False,
) -> Verdict:
    """Quasi-equivalence test with per-pair rank certificates.

    Cohomology isomorphisms are checked for every degree strictly inside
    the hom-complex window.  With ``collapse_contractibles`` contractible
    target objects need not be reached; this is the Morita proxy and the
    verdict is labelled accordingly.
    """
    S, T = F.source, F.target
    for c in (S, T):
        if c.status != COMPLETE:
            raise TruncatedError(f"{c.name or 'category'} is TRUNCATED; quasi-equivalence needs exact homs")
    slo, shi = S.complex_window()
    tlo, thi = T.complex_window()
    lo, hi = max(slo, tlo), min(shi, thi)
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    ranks = []
    failures = []
    for x in S.objects:
        for y in S.objects:
            for n in range(lo + 1, hi):
                ds, dt, r = induced_cohomology_map(F, x, y, n)
                ranks.append({"source": x, "target": y, "degree": n, "dim_source": ds, "dim_target": dt, "rank": r})
                if not (ds == dt == r):
                    failures.append(f"H^{n}Hom({x},{y}) -> H^{n}Hom({F.obj(x)},{F.obj(y)}) has dims {ds}->{dt}, rank {r}")
    ess = []
    undecided = []
    image = set(F.obj_map.values())
    for t in T.objects:
        if t in image:
            ess.append({"object": t, "via": "image"})
            continue
        if collapse_contractibles and is_contractible(T, t):
            ess.append({"object": t, "via": "contractible"})
            continue
        found = None
        unknown = False
        for s in S.objects:
            v = is_homotopy_equivalent(T, F.obj(s), t)
            if v.verdict == YES:
                found = s
                break
            if v.verdict == INCONCLUSIVE:
                unknown = True
        if found is not None:
            ess.append({"object": t, "via": f"homotopy equivalent to F({found})"})
        elif unknown:
            undecided.append(t)
        else:
            failures.append(f"object {t} is not reached up to homotopy equivalence")
    cert = {"window": [lo, hi], "ranks": ranks, "essential_image": ess, "proxy": collapse_contractibles}
    if collapse_contractibles:
        cert["label"] = "PROXY: quasi-equivalence up to contractible objects"
    if failures:
        return Verdict(FAIL, None, "; ".join(failures), cert)
    if undecided:
        return Verdict(INCONCLUSIVE, None, f"undecided essential surjectivity at {undecided}", cert)
    return Verdict(PASS, None, "", cert)


def morita_proxy(F: DGFunctor, window: tuple[int, int] | None = None) -> Verdict:
    """Quasi-equivalence after collapsing contractible objects (labelled proxy)."""
    return is_quasi_equivalence(F, window, collapse_contractibles=True)

"""Right DG modules over a tabulated DG category, and the finite enlargement b_plus.

A right module assigns a graded space ``M(Z)`` to each object and acts by
``M(Z)^n x B^q(W, Z) -> M(W)^(n+q)``, written ``m.f``.  Conventions:

    d(m.f) = d(m).f + (-1)^|m| m.d(f),
    M[n]^k = M^(k+n) with differential (-1)^n d and the same action,
    cone(phi) = M[1] ⊕ N with d(m, x) = (-d m, phi(m) + d x).

Module maps satisfy ``phi(m.f) = phi(m).f``; the hom differential is
``d(phi) = d_N phi - (-1)^p phi d_M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, StructuralError, WindowError
from .exactlin import Field, kernel, same_field, solve_linear
from .dgcore.category import COMPLETE, TRUNCATED, DGCategory, DGFunctor, Mor
from .dgcore.checks import Witnessed


@dataclass(frozen=True)
class ModElem:
    obj: str
    deg: int
    coeffs: tuple

    def __add__(self, other: "ModElem") -> "ModElem":
        self._same(other)
        return ModElem(self.obj, self.deg, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ModElem") -> "ModElem":
        self._same(other)
        return ModElem(self.obj, self.deg, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "ModElem":
        return ModElem(self.obj, self.deg, tuple(c * a for a in self.coeffs))

    def _same(self, other: "ModElem") -> None:
        if (self.obj, self.deg) != (other.obj, other.deg):
            raise StructuralError(f"cannot add elements of M({self.obj})^{self.deg} and M({other.obj})^{other.deg}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[tuple[int, object]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]


class RightDGModule:
    """A right DG module given by bases, differential and action on basis elements.

    Subclasses implement ``_basis(Z, n)``, ``_d(Z, n, i)`` and
    ``_act(Z, W, n, i, q, j)`` (basis ``i`` of ``M(Z)^n`` times basis ``j``
    of ``B^q(W, Z)``).  Degrees outside ``window`` are zero; the data is
    exact when ``finite`` is true.
    """

    def __init__(self, base: DGCategory, window: tuple[int, int], finite: bool, name: str = ""):
        self.base = base
        self.window = window
        self.finite = finite
        self.name = name
        self._bcache: dict = {}
        self._dcache: dict = {}
        self._acache: dict = {}

    @property
    def field(self) -> Field:
        return self.base.field

    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def basis(self, Z: str, n: int) -> tuple[str, ...]:
        self.base.check_object(Z)
        if not self.window[0] <= n <= self.window[1]:
            return ()
        key = (Z, n)
        b = self._bcache.get(key)
        if b is None:
            b = tuple(self._basis(Z, n))
            self._bcache[key] = b
        return b

    def dim(self, Z: str, n: int) -> int:
        return len(self.basis(Z, n))

    def zero(self, Z: str, n: int) -> ModElem:
        return ModElem(Z, n, (self.field.zero,) * self.dim(Z, n))

    def from_sparse(self, Z: str, n: int, vec: Mapping[int, object]) -> ModElem:
        v = [self.field.zero] * self.dim(Z, n)
        for i, c in vec.items():
            v[i] = v[i] + c
        return ModElem(Z, n, tuple(v))

    def basis_elem(self, Z: str, n: int, i: int) -> ModElem:
        return self.from_sparse(Z, n, {i: self.field.one})

    def d_basis(self, Z: str, n: int, i: int) -> dict:
        key = (Z, n, i)
        v = self._dcache.get(key)
        if v is None:
            v = {k: c for k, c in self._d(Z, n, i).items() if c} if self.dim(Z, n + 1) else {}
            self._dcache[key] = v
        return v

    def act_basis(self, Z: str, W: str, n: int, i: int, q: int, j: int) -> dict:
        key = (Z, W, n, i, q, j)
        v = self._acache.get(key)
        if v is None:
            v = {k: c for k, c in self._act(Z, W, n, i, q, j).items() if c} if self.dim(W, n + q) else {}
            self._acache[key] = v
        return v

    def d(self, m: ModElem) -> ModElem:
        acc: dict = {}
        for i, c in m.support():
            for k, e in self.d_basis(m.obj, m.deg, i).items():
                acc[k] = acc.get(k, 0) + c * e
        return self.from_sparse(m.obj, m.deg + 1, acc)

    def act(self, m: ModElem, f: Mor) -> ModElem:
        """``m.f`` for ``m`` in ``M(Z)`` and ``f: W -> Z``."""
        if f.tgt != m.obj:
            raise StructuralError(f"cannot act on M({m.obj}) by a morphism into {f.tgt}")
        acc: dict = {}
        for i, c in m.support():
            for j, e in f.support():
                for k, v in self.act_basis(m.obj, f.src, m.deg, i, f.deg, j).items():
                    acc[k] = acc.get(k, 0) + c * e * v
        return self.from_sparse(f.src, m.deg + f.deg, acc)

    def total_dimension(self) -> int:
        return sum(self.dim(Z, n) for Z in self.base.objects for n in self.degrees())

    # subclass hooks
    def _basis(self, Z: str, n: int) -> Sequence[str]:
        raise NotImplementedError

    def _d(self, Z: str, n: int, i: int) -> Mapping[int, object]:
        raise NotImplementedError

    def _act(self, Z: str, W: str, n: int, i: int, q: int, j: int) -> Mapping[int, object]:
        raise NotImplementedError

    def __repr__(self):
        return f"<RightDGModule {self.name!r} over {self.base.name} window={list(self.window)}>"


def _finite_base(B: DGCategory) -> bool:
    return (B.status == COMPLETE and B.top is not None and B.bottom is not None
            and B.lo <= B.bottom and B.top <= B.hi)


class Yoneda(RightDGModule):
    """``X^ = Hom(-, X)`` acting by precomposition."""

    def __init__(self, B: DGCategory, X: str):
        B.check_object(X)
        self.X = X
        super().__init__(B, B.window, _finite_base(B), name=f"{X}^")

    def _basis(self, Z, n):
        return self.base.basis(Z, self.X, n)

    def _d(self, Z, n, i):
        if not self.base.known(n + 1):
            return {}
        return self.base.d_basis(Z, self.X, n, i)

    def _act(self, Z, W, n, i, q, j):
        if not self.base.known(n + q):
            return {}
        return self.base.compose_basis(W, Z, self.X, n, i, q, j)


def yoneda(B: DGCategory, X: str) -> Yoneda:
    return Yoneda(B, X)


class Shifted(RightDGModule):
    def __init__(self, M: RightDGModule, n: int):
        self.M, self.n = M, n
        lo, hi = M.window
        super().__init__(M.base, (lo - n, hi - n), M.finite, name=f"{M.name}[{n}]")

    def _basis(self, Z, k):
        return self.M.basis(Z, k + self.n)

    def _d(self, Z, k, i):
        s = -1 if self.n % 2 else 1
        return {a: s * c for a, c in self.M.d_basis(Z, k + self.n, i).items()}

    def _act(self, Z, W, k, i, q, j):
        return self.M.act_basis(Z, W, k + self.n, i, q, j)


def shift(M: RightDGModule, n: int) -> RightDGModule:
    if n == 0:
        return M
    if isinstance(M, Shifted) and M.n + n == 0:
        return M.M
    if isinstance(M, Shifted):
        return Shifted(M.M, M.n + n)
    return Shifted(M, n)


class DirectSum(RightDGModule):
    """``M_1 ⊕ ... ⊕ M_r``; a basis of the sum lists the summands in order."""

    def __init__(self, parts: Sequence[RightDGModule], name: str | None = None):
        if not parts:
            raise PreconditionError("direct sum of no modules")
        B = parts[0].base
        for P in parts:
            if P.base is not B:
                raise StructuralError("direct sum of modules over different categories")
        self.parts = list(parts)
        lo = min(P.window[0] for P in parts)
        hi = max(P.window[1] for P in parts)
        super().__init__(B, (lo, hi), all(P.finite for P in parts),
                         name=name or "⊕".join(P.name for P in parts))

    def offsets(self, Z: str, n: int) -> list[int]:
        out, off = [], 0
        for P in self.parts:
            out.append(off)
            off += P.dim(Z, n)
        return out

    def locate(self, Z: str, n: int, i: int) -> tuple[int, int]:
        offs = self.offsets(Z, n)
        for k in range(len(self.parts) - 1, -1, -1):
            if i >= offs[k]:
                return k, i - offs[k]
        raise IndexError(i)

    def _basis(self, Z, n):
        out = []
        for k, P in enumerate(self.parts):
            out.extend(f"{k}:{b}" for b in P.basis(Z, n))
        return out

    def _d(self, Z, n, i):
        k, a = self.locate(Z, n, i)
        off = self.offsets(Z, n + 1)[k]
        return {off + b: c for b, c in self.parts[k].d_basis(Z, n, a).items()}

    def _act(self, Z, W, n, i, q, j):
        k, a = self.locate(Z, n, i)
        off = self.offsets(W, n + q)[k]
        return {off + b: c for b, c in self.parts[k].act_basis(Z, W, n, a, q, j).items()}

    def inject(self, k: int, m: ModElem) -> ModElem:
        off = self.offsets(m.obj, m.deg)[k]
        return self.from_sparse(m.obj, m.deg, {off + i: c for i, c in m.support()})

    def component(self, k: int, m: ModElem) -> ModElem:
        off = self.offsets(m.obj, m.deg)[k]
        d = self.parts[k].dim(m.obj, m.deg)
        return ModElem(m.obj, m.deg, m.coeffs[off:off + d])


def direct_sum(*parts: RightDGModule) -> DirectSum:
    return DirectSum(parts)


# --------------------------------------------------------------------------
# module maps


@dataclass
class ModMap:
    """A degree-``deg`` map given on basis elements: ``(Z, n, i) -> sparse vector``."""

    src: RightDGModule
    tgt: RightDGModule
    deg: int
    images: dict

    def apply(self, m: ModElem) -> ModElem:
        acc: dict = {}
        for i, c in m.support():
            for k, e in self.images.get((m.obj, m.deg, i), {}).items():
                acc[k] = acc.get(k, 0) + c * e
        return self.tgt.from_sparse(m.obj, m.deg + self.deg, acc)


def _slots(M: RightDGModule) -> list[tuple[str, int, int]]:
    return [(Z, n, i) for Z in M.base.objects for n in M.degrees() for i in range(M.dim(Z, n))]


def identity_map(M: RightDGModule) -> ModMap:
    one = M.field.one
    return ModMap(M, M, 0, {(Z, n, i): {i: one} for Z, n, i in _slots(M)})


def scalar_map(M: RightDGModule, c) -> ModMap:
    c = M.field(c)
    return ModMap(M, M, 0, {(Z, n, i): {i: c} for Z, n, i in _slots(M) if c})


def zero_map(M: RightDGModule, N: RightDGModule, deg: int = 0) -> ModMap:
    return ModMap(M, N, deg, {})


def compose_maps(psi: ModMap, phi: ModMap) -> ModMap:
    if phi.tgt is not psi.src:
        raise StructuralError("module maps are not composable")
    out = {}
    for Z, n, i in _slots(phi.src):
        v = psi.apply(phi.apply(phi.src.basis_elem(Z, n, i)))
        if not v.is_zero():
            out[(Z, n, i)] = dict(v.support())
    return ModMap(phi.src, psi.tgt, phi.deg + psi.deg, out)


def map_differential(phi: ModMap) -> ModMap:
    """``d_N phi - (-1)^p phi d_M``."""
    M, N, p = phi.src, phi.tgt, phi.deg
    out = {}
    for Z, n, i in _slots(M):
        e = M.basis_elem(Z, n, i)
        a = N.d(phi.apply(e))
        b = phi.apply(M.d(e))
        v = a + b if p % 2 else a - b
        if not v.is_zero():
            out[(Z, n, i)] = dict(v.support())
    return ModMap(M, N, p + 1, out)


def maps_equal(phi: ModMap, psi: ModMap) -> bool:
    if phi.src is not psi.src or phi.tgt is not psi.tgt or phi.deg != psi.deg:
        return False
    for Z, n, i in _slots(phi.src):
        e = phi.src.basis_elem(Z, n, i)
        if phi.apply(e) != psi.apply(e):
            return False
    return True


def _action_generators(B: DGCategory) -> list[Mor]:
    gens = B.generators()
    if gens is not None:
        return [g for g in gens if not g.is_zero()]
    out = []
    for x in B.objects:
        for y in B.objects:
            for n in B.degrees():
                out.extend(B.basis_mor(x, y, n, i) for i in range(B.dim(x, y, n)))
    return out


def map_linearity_violations(phi: ModMap, gens: Iterable[Mor] | None = None) -> list[str]:
    M = phi.src
    out = []
    for f in (_action_generators(M.base) if gens is None else gens):
        for n in M.degrees():
            for i in range(M.dim(f.tgt, n)):
                m = M.basis_elem(f.tgt, n, i)
                if phi.apply(M.act(m, f)) != phi.tgt.act(phi.apply(m), f):
                    out.append(f"map is not linear on {M.basis(f.tgt, n)[i]} . {f}")
    return out


def is_closed_map(phi: ModMap) -> bool:
    d = map_differential(phi)
    return not any(d.images.values())


# --------------------------------------------------------------------------
# cones


class Cone(RightDGModule):
    """``M[1] ⊕ N`` with ``d(m, x) = (-d m, phi(m) + d x)``."""

    def __init__(self, phi: ModMap, check: bool = True):
        if phi.deg != 0:
            raise PreconditionError(f"cone needs a degree-0 map, got degree {phi.deg}")
        if check:
            if not is_closed_map(phi):
                raise PreconditionError("cone needs a closed map")
            bad = map_linearity_violations(phi)
            if bad:
                raise PreconditionError(bad[0])
        self.phi = phi
        M, N = phi.src, phi.tgt
        self.M, self.N = M, N
        lo = min(M.window[0] - 1, N.window[0])
        hi = max(M.window[1] - 1, N.window[1])
        super().__init__(M.base, (lo, hi), M.finite and N.finite, name=f"cone({M.name}->{N.name})")

    def _basis(self, Z, n):
        return tuple(f"m:{b}" for b in self.M.basis(Z, n + 1)) + tuple(f"n:{b}" for b in self.N.basis(Z, n))

    def _d(self, Z, n, i):
        dm = self.M.dim(Z, n + 1)
        M, N = self.M, self.N
        if i < dm:
            e = M.basis_elem(Z, n + 1, i)
            top = M.d(e)
            bot = self.phi.apply(e)
            off = M.dim(Z, n + 2)
            out = {k: -c for k, c in top.support()}
            out.update({off + k: c for k, c in bot.support()})
            return out
        off = M.dim(Z, n + 2)
        return {off + k: c for k, c in N.d_basis(Z, n, i - dm).items()}

    def _act(self, Z, W, n, i, q, j):
        dm = self.M.dim(Z, n + 1)
        if i < dm:
            return self.M.act_basis(Z, W, n + 1, i, q, j)
        off = self.M.dim(W, n + q + 1)
        return {off + k: c for k, c in self.N.act_basis(Z, W, n, i - dm, q, j).items()}


def cone(phi: ModMap) -> Cone:
    return Cone(phi)


# --------------------------------------------------------------------------
# axioms, hom complexes, contractibility


def check_module(M: RightDGModule, limit: int = 20) -> list[str]:
    """Violations of d^2 = 0, unitality, associativity and Leibniz on basis data."""
    B = M.base
    out: list[str] = []

    def report(msg):
        if len(out) < limit:
            out.append(msg)

    mors = {}
    for x in B.objects:
        for y in B.objects:
            for q in B.degrees():
                mors[(x, y, q)] = [B.basis_mor(x, y, q, j) for j in range(B.dim(x, y, q))]
    lo, hi = M.window

    def inside(*degs):
        # outside the window a non-finite module is unknown, not zero
        return M.finite or all(lo <= k <= hi for k in degs)

    for Z in B.objects:
        for n in M.degrees():
            for i in range(M.dim(Z, n)):
                m = M.basis_elem(Z, n, i)
                lab = M.basis(Z, n)[i]
                if inside(n + 2) and not M.d(M.d(m)).is_zero():
                    report(f"d^2 != 0 on {lab}")
                if M.act(m, B.identity(Z)) != m:
                    report(f"unit fails on {lab}")
                for W in B.objects:
                    for q in B.degrees():
                        for g in mors[(W, Z, q)]:
                            mg = M.act(m, g)
                            lhs = M.d(mg)
                            if B.known(q + 1) and inside(n + 1, n + q, n + q + 1):
                                t = M.act(m, B.d(g))
                                rhs = M.act(M.d(m), g) + (t.scale(-1) if n % 2 else t)
                                if lhs != rhs:
                                    report(f"Leibniz fails on {lab} . {g}")
                            for V in B.objects:
                                for r in B.degrees():
                                    if not B.known(q + r) or not inside(n + q + r):
                                        continue
                                    for f in mors[(V, W, r)]:
                                        if M.act(mg, f) != M.act(m, B.compose(g, f)):
                                            report(f"associativity fails on ({lab}, {g}, {f})")
    return out


def _require_finite(*mods: RightDGModule) -> None:
    for M in mods:
        if not M.finite:
            raise WindowError(f"module {M.name} is not known to vanish outside its window")


def module_hom(M: RightDGModule, N: RightDGModule, p: int) -> list[ModMap]:
    """Basis of degree-``p`` module maps, by solving linearity on all components at once."""
    _require_finite(M, N)
    same_field(M.field, N.field)
    F = M.field
    slots = _slots(M)
    cols = []  # unknown = (slot index, target coordinate)
    for s, (Z, n, i) in enumerate(slots):
        for k in range(N.dim(Z, n + p)):
            cols.append((s, k))
    where = {c: t for t, c in enumerate(cols)}
    slot_index = {sl: s for s, sl in enumerate(slots)}
    rows = []
    for f in _action_generators(M.base):
        W, Z, q = f.src, f.tgt, f.deg
        for n in M.degrees():
            for i in range(M.dim(Z, n)):
                # phi(m.f) - phi(m).f = 0 in N(W)^(n+q+p)
                dim = N.dim(W, n + q + p)
                if not dim:
                    continue
                block = [[F.zero] * len(cols) for _ in range(dim)]
                mf = M.act(M.basis_elem(Z, n, i), f)
                for a, c in mf.support():
                    s = slot_index[(W, n + q, a)]
                    for k in range(dim):
                        t = where[(s, k)]
                        block[k][t] = block[k][t] + c
                s = slot_index[(Z, n, i)]
                for k in range(N.dim(Z, n + p)):
                    img = N.act(N.basis_elem(Z, n + p, k), f)
                    t = where[(s, k)]
                    for r, c in img.support():
                        block[r][t] = block[r][t] - c
                rows.extend(block)
    basis, _ = kernel(rows, F, len(cols))
    out = []
    for v in basis:
        images: dict = {}
        for t, c in enumerate(v):
            if c:
                s, k = cols[t]
                images.setdefault(slots[s], {})[k] = c
        out.append(ModMap(M, N, p, images))
    return out


def _map_vector(phi: ModMap) -> list:
    M, N = phi.src, phi.tgt
    v = []
    for Z, n, i in _slots(M):
        img = phi.images.get((Z, n, i), {})
        v.extend(img.get(k, M.field.zero) for k in range(N.dim(Z, n + phi.deg)))
    return v


def module_contractible(M: RightDGModule) -> Witnessed:
    """Solve ``d(c) = 1_M`` for a degree -1 module endomorphism ``c``."""
    _require_finite(M)
    F = M.field
    basis = module_hom(M, M, -1)
    target = _map_vector(identity_map(M))
    cols = [_map_vector(map_differential(b)) for b in basis]
    A = [[cols[j][i] for j in range(len(cols))] for i in range(len(target))]
    sol = solve_linear(A, target, F, len(cols))
    if sol is None:
        return Witnessed(False, None, "1_M is not a boundary in the endomorphism complex")
    c = ModMap(M, M, -1, {})
    for coef, b in zip(sol, basis):
        if coef:
            for key, img in b.images.items():
                slot = c.images.setdefault(key, {})
                for k, e in img.items():
                    slot[k] = slot.get(k, 0) + coef * e
    if not maps_equal(map_differential(c), identity_map(M)):
        raise AssertionError("contraction does not verify")
    return Witnessed(True, c, "contraction found")


# --------------------------------------------------------------------------
# semi-free modules and b_plus


def hat(X: str) -> str:
    return f"{X}^"


@dataclass(frozen=True)
class SemiFreeForm:
    """``⊕_j X_j^[s_j]`` with twisting ``delta[(i, j)] in B^(1 - s_j + s_i)(X_j, X_i)``."""

    gens: tuple[tuple[str, int], ...]
    delta: tuple  # ((i, j), Mor) pairs


class SemiFreeModule(RightDGModule):
    """The module of a semi-free form: ``M(Z)^n = ⊕_j B^(n+s_j)(Z, X_j)``."""

    def __init__(self, B: DGCategory, form: SemiFreeForm, name: str = ""):
        self.form = form
        self.delta = dict(form.delta)
        shifts = [s for _, s in form.gens]
        lo = B.lo - max(shifts)
        hi = B.hi - min(shifts)
        super().__init__(B, (lo, hi), _finite_base(B), name=name)

    def _blocks(self, Z, n):
        out, off = [], 0
        for X, s in self.form.gens:
            d = self.base.dim(Z, X, n + s) if self.base.known(n + s) else 0
            out.append((off, d))
            off += d
        return out

    def _locate(self, Z, n, i):
        for j, (off, d) in enumerate(self._blocks(Z, n)):
            if off <= i < off + d:
                return j, i - off
        raise IndexError(i)

    def _basis(self, Z, n):
        out = []
        for j, (X, s) in enumerate(self.form.gens):
            if self.base.known(n + s):
                out.extend(f"e{j}.{b}" for b in self.base.basis(Z, X, n + s))
        return out

    def _d(self, Z, n, i):
        B = self.base
        j, a = self._locate(Z, n, i)
        X, s = self.form.gens[j]
        blocks = self._blocks(Z, n + 1)
        out: dict = {}
        if B.known(n + s + 1):
            sign = -1 if s % 2 else 1
            for k, c in B.d_basis(Z, X, n + s, a).items():
                out[blocks[j][0] + k] = out.get(blocks[j][0] + k, 0) + sign * c
        g = B.basis_mor(Z, X, n + s, a)
        for (r, jj), t in self.delta.items():
            if jj != j:
                continue
            Xr, sr = self.form.gens[r]
            if not B.known(n + 1 + sr):
                continue
            v = B.compose(t, g)
            for k, c in v.support():
                out[blocks[r][0] + k] = out.get(blocks[r][0] + k, 0) + c
        return out

    def _act(self, Z, W, n, i, q, j):
        B = self.base
        b, a = self._locate(Z, n, i)
        X, s = self.form.gens[b]
        if not B.known(n + s + q):
            return {}
        off = self._blocks(W, n + q)[b][0]
        return {off + k: c for k, c in B.compose_basis(W, Z, X, n + s, a, q, j).items()}


def cone_identity_form(X: str, n: int, one: Mor) -> SemiFreeForm:
    """``cone(1_{X^})[n]``: generators ``(X, 1+n), (X, n)`` twisted by ``(-1)^n 1_X``."""
    return SemiFreeForm(((X, 1 + n), (X, n)), (((1, 0), one if n % 2 == 0 else one.scale(-1)),))


def sum_forms(*forms: SemiFreeForm) -> SemiFreeForm:
    gens: list = []
    delta: list = []
    for f in forms:
        off = len(gens)
        gens.extend(f.gens)
        delta.extend(((i + off, j + off), t) for (i, j), t in f.delta)
    return SemiFreeForm(tuple(gens), tuple(delta))


class BPlus(DGCategory):
    """Representables plus full finite sums with shifted cones of identities.

    Objects are semi-free forms; for forms ``M = ⊕ X_j^[s_j]`` and
    ``N = ⊕ Y_k^[t_k]``

        Hom^p(M, N) = ⊕_(j,k) B^(p - s_j + t_k)(X_j, Y_k),
        (d phi)_kj = (-1)^t_k d(phi_kj) + Σ delta^N_kl phi_lj - (-1)^p Σ phi_ki delta^M_ij,
        (psi phi)_lj = Σ psi_lk phi_kj,

    which are the module hom complexes of the corresponding semi-free modules.
    """

    def __init__(self, B: DGCategory, cap: int, shifts: Iterable[int], name: str | None = None):
        shifts = sorted(set(shifts))
        if cap < 0:
            raise PreconditionError("cap must be non-negative")
        if cap > 0 and not shifts:
            raise PreconditionError("shift set is empty")
        if B.status != COMPLETE:
            raise PreconditionError("b_plus needs a COMPLETE tabulation")
        self.base = B
        self.cap = cap
        self.shifts = tuple(shifts)
        self.forms: dict[str, SemiFreeForm] = {}
        self.root: dict[str, str] = {}
        cones = [(Y, n) for Y in B.objects for n in shifts]
        for X in B.objects:
            lab = hat(X)
            self.forms[lab] = SemiFreeForm(((X, 0),), ())
            self.root[lab] = X
        for size in range(1, cap + 1):
            for combo in itertools.combinations_with_replacement(cones, size):
                for X in B.objects:
                    lab = hat(X) + "".join(f"⊕cone(1_{hat(Y)})[{n}]" for Y, n in combo)
                    parts = [self.forms[hat(X)]] + [cone_identity_form(Y, n, B.identity(Y)) for Y, n in combo]
                    self.forms[lab] = sum_forms(*parts)
                    self.root[lab] = X
        all_s = {s for f in self.forms.values() for _, s in f.gens}
        span = max(all_s) - min(all_s)
        lo, hi = B.lo + span, B.hi - span
        top = B.top + span if B.top is not None else None
        bottom = B.bottom - span if B.bottom is not None else None
        if B.bottom is not None and B.bottom >= B.lo:
            lo = min(B.lo, bottom)
        if B.top is not None and B.top <= B.hi:
            hi = max(B.hi, top)
        if lo > hi:
            raise WindowError(f"window of {B.name} is too narrow for shifts spanning {span} degrees")
        super().__init__(B.field, list(self.forms), (lo, hi), status=COMPLETE, top=top, bottom=bottom,
                         name=name or f"{B.name}+")
        for n in self.degrees():
            for d in range(-span, span + 1):
                if not B.known(n + d):
                    raise WindowError(f"b_plus degree {n} needs degree {n + d} of {B.name}")
        self._blocks_cache: dict = {}

    def _blocks(self, x, y, p):
        key = (x, y, p)
        got = self._blocks_cache.get(key)
        if got is None:
            M, N = self.forms[x], self.forms[y]
            got, off = [], 0
            for j, (X, s) in enumerate(M.gens):
                for k, (Y, t) in enumerate(N.gens):
                    q = p - s + t
                    d = self.base.dim(X, Y, q)
                    got.append((j, k, q, off, d))
                    off += d
            self._blocks_cache[key] = got
        return got

    def _basis(self, x, y, p):
        out = []
        for j, k, q, off, d in self._blocks(x, y, p):
            X, Y = self.forms[x].gens[j][0], self.forms[y].gens[k][0]
            out.extend(f"[{k},{j}]{b}" for b in self.base.basis(X, Y, q))
        return tuple(out)

    def entries(self, f: Mor) -> dict[tuple[int, int], Mor]:
        """Matrix entries ``(k, j) -> phi_kj`` of a morphism."""
        M, N = self.forms[f.src], self.forms[f.tgt]
        out = {}
        for j, k, q, off, d in self._blocks(f.src, f.tgt, f.deg):
            out[(k, j)] = Mor(M.gens[j][0], N.gens[k][0], q, f.coeffs[off:off + d])
        return out

    def from_entries(self, x: str, y: str, p: int, ent: Mapping[tuple[int, int], Mor]) -> Mor:
        vec = [self.field.zero] * self.dim(x, y, p)
        for j, k, q, off, d in self._blocks(x, y, p):
            m = ent.get((k, j))
            if m is None:
                continue
            if m.deg != q:
                raise StructuralError(f"entry ({k},{j}) has degree {m.deg}, expected {q}")
            vec[off:off + d] = m.coeffs
        return Mor(x, y, p, tuple(vec))

    def _entry_basis(self, x, y, p, i):
        for j, k, q, off, d in self._blocks(x, y, p):
            if off <= i < off + d:
                return j, k, q, i - off
        raise IndexError(i)

    def _d(self, x, y, p, i):
        B = self.base
        M, N = self.forms[x], self.forms[y]
        j, k, q, a = self._entry_basis(x, y, p, i)
        X, Y = M.gens[j][0], N.gens[k][0]
        t = N.gens[k][1]
        phi = B.basis_mor(X, Y, q, a)
        out: dict[tuple[int, int], Mor] = {}

        def add(key, m):
            out[key] = out[key] + m if key in out else m

        dphi = B.d(phi)
        add((k, j), dphi.scale(-1) if t % 2 else dphi)
        for (r, l), dl in dict(N.delta).items():
            if l == k:
                add((r, j), B.compose(dl, phi))
        for (l, r), dl in dict(M.delta).items():
            if l == j:
                m = B.compose(phi, dl)
                add((k, r), m if p % 2 else m.scale(-1))
        return dict(self.from_entries(x, y, p + 1, out).support())

    def _compose(self, x, y, z, p, i, q, j):
        B = self.base
        k2, l2, qa, a = self._entry_basis(y, z, p, i)  # psi entry (l2, k2)
        j1, k1, qb, b = self._entry_basis(x, y, q, j)  # phi entry (k1, j1)
        if k2 != k1:
            return {}
        Ymid = self.forms[y].gens[k1][0]
        psi = B.basis_mor(Ymid, self.forms[z].gens[l2][0], qa, a)
        phi = B.basis_mor(self.forms[x].gens[j1][0], Ymid, qb, b)
        return dict(self.from_entries(x, z, p + q, {(l2, j1): B.compose(psi, phi)}).support())

    def _identity(self, x):
        B = self.base
        M = self.forms[x]
        return dict(self.from_entries(x, x, 0, {(j, j): B.identity(X) for j, (X, s) in enumerate(M.gens)}).support())

    def generators(self):
        from .dgcore.category import finite_basis_generators

        return finite_basis_generators(self)

    # -- structure ---------------------------------------------------------

    def inclusion_of_root(self, x: str) -> Mor:
        """``X^ -> x`` onto the representable summand."""
        X = self.root[x]
        return self.from_entries(hat(X), x, 0, {(0, 0): self.base.identity(X)})

    def projection_to_root(self, x: str) -> Mor:
        X = self.root[x]
        return self.from_entries(x, hat(X), 0, {(0, 0): self.base.identity(X)})

    def witness_hints(self, x, y):
        if self.root[x] != self.root[y]:
            return []
        return [self.compose(self.inclusion_of_root(y), self.projection_to_root(x))]

    def as_module(self, x: str) -> SemiFreeModule:
        return SemiFreeModule(self.base, self.forms[x], name=x)

    def yoneda_functor(self) -> DGFunctor:
        """``h: B -> b_plus(B)``, ``X -> X^``."""
        B = self.base
        one = B.field.one
        return DGFunctor(B, self, {X: hat(X) for X in B.objects}, lambda x, y, n, i: {i: one}, name="h")


def b_plus(B: DGCategory, cap: int, shifts: Iterable[int] = (0,), name: str | None = None) -> BPlus:
    return BPlus(B, cap, shifts, name)


def module_of_bplus_morphism(P: BPlus, f: Mor, modules: dict | None = None) -> ModMap:
    """The module map between semi-free modules encoded by a b_plus morphism.

    Pass the same ``modules`` dict across calls to get maps that compose.
    """
    if modules is None:
        modules = {}
    for x in (f.src, f.tgt):
        if x not in modules:
            modules[x] = P.as_module(x)
    M, N = modules[f.src], modules[f.tgt]
    return _semi_free_map(P, f, M, N)


def _semi_free_map(P: BPlus, f: Mor, M: SemiFreeModule, N: SemiFreeModule) -> ModMap:
    B = P.base
    ent = P.entries(f)
    images = {}
    for Z, n, i in _slots(M):
        j, a = M._locate(Z, n, i)
        X, s = M.form.gens[j]
        g = B.basis_mor(Z, X, n + s, a)
        acc: dict = {}
        for (k, jj), phi in ent.items():
            if jj != j or phi.is_zero():
                continue
            t = N.form.gens[k][1]
            if not B.known(n + f.deg + t):
                continue
            v = B.compose(phi, g)
            off = N._blocks(Z, n + f.deg)[k][0]
            for r, c in v.support():
                acc[off + r] = acc.get(off + r, 0) + c
        acc = {r: c for r, c in acc.items() if c}
        if acc:
            images[(Z, n, i)] = acc
    return ModMap(M, N, f.deg, images)


__all__ = [
    "BPlus",
    "Cone",
    "DirectSum",
    "ModElem",
    "ModMap",
    "RightDGModule",
    "SemiFreeForm",
    "SemiFreeModule",
    "Shifted",
    "TRUNCATED",
    "Yoneda",
    "b_plus",
    "check_module",
    "compose_maps",
    "cone",
    "cone_identity_form",
    "direct_sum",
    "hat",
    "identity_map",
    "is_closed_map",
    "map_differential",
    "map_linearity_violations",
    "maps_equal",
    "module_contractible",
    "module_hom",
    "module_of_bplus_morphism",
    "scalar_map",
    "shift",
    "sum_forms",
    "yoneda",
    "zero_map",
]

"""Exact scalars, graded vector spaces, cochain complexes and linear algebra.

Two fields are supported: the rationals (``QQ``, scalars are
:class:`fractions.Fraction`) and prime fields (``GF(p)``, scalars are
:class:`Fp`).  Plain ``int`` values are accepted everywhere as the image of
the integers.  Matrices are lists of rows; vectors are lists or tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Sequence

from .errors import FieldMismatchError, StructuralError, WindowError


# --------------------------------------------------------------------------
# fields and scalars


class Fp:
    """Residue class modulo a prime."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldMismatchError(f"cannot combine F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, bool):
            return int(other)
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatchError(f"cannot combine F_{self.p} with a rational")
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def inverse(self) -> "Fp":
        if self.v == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Field:
    """Descriptor of the ground field; converts and recognises scalars."""

    characteristic: int = 0

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        """Parse ``"3"``, ``"-2/5"`` and similar into a scalar."""
        text = text.strip()
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructuralError(f"not a scalar: {text!r}") from exc
        return self.from_fraction(q)

    def from_fraction(self, q: Fraction):
        raise NotImplementedError

    def owns(self, x) -> bool:
        raise NotImplementedError

    def check(self, x):
        if not self.owns(x):
            raise FieldMismatchError(f"{x!r} is not an element of {self}")
        return x

    def to_str(self, x) -> str:
        return str(x)

    def name(self) -> str:
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fp):
            raise FieldMismatchError("cannot coerce an F_p element into Q")
        return Fraction(x)

    def from_fraction(self, q: Fraction):
        return q

    def owns(self, x) -> bool:
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

    def name(self) -> str:
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise StructuralError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldMismatchError(f"cannot coerce F_{x.p} into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        return Fp(int(x), self.p)

    def from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise StructuralError(f"{q} has no image in F_{self.p}")
        return Fp(q.numerator, self.p) / q.denominator

    def owns(self, x) -> bool:
        return (isinstance(x, Fp) and x.p == self.p) or (isinstance(x, int) and not isinstance(x, bool))

    def elements(self):
        return [Fp(v, self.p) for v in range(self.p)]

    def name(self) -> str:
        return f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """``"Q"``, ``"Fp:7"``, ``"Fp 7"``, ``"F7"`` or ``"GF(7)"``."""
    s = name.strip().replace(" ", ":")
    if s in ("Q", "QQ"):
        return QQ
    for prefix in ("Fp:", "GF(", "F"):
        if s.startswith(prefix):
            digits = s[len(prefix):].rstrip(")").lstrip(":")
            if digits.isdigit():
                return GF(int(digits))
    raise StructuralError(f"unknown field {name!r}; use Q or Fp:<prime>")


def same_field(a: Field, b: Field) -> Field:
    if a != b:
        raise FieldMismatchError(f"field mismatch: {a!r} vs {b!r}")
    return a


def scalar_str(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


# --------------------------------------------------------------------------
# matrices


Matrix = list  # list of rows


def zeros(m: int, n: int, field: Field) -> list:
    z = field.zero
    return [[z] * n for _ in range(m)]


def identity_matrix(n: int, field: Field) -> list:
    A = zeros(n, n, field)
    for i in range(n):
        A[i][i] = field.one
    return A


def _shape(A: Sequence[Sequence], ncols: int | None) -> tuple[int, int]:
    m = len(A)
    if m == 0:
        return 0, (ncols or 0)
    n = len(A[0])
    if any(len(row) != n for row in A):
        raise StructuralError("ragged matrix")
    if ncols is not None and ncols != n:
        raise StructuralError(f"matrix has {n} columns, expected {ncols}")
    return m, n


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], field: Field, inner: int | None = None,
           ncols: int | None = None) -> list:
    """``A B``; ``inner`` and ``ncols`` fix the shape when a factor has no rows."""
    m, k = _shape(A, inner)
    k2 = len(B)
    if k != k2:
        raise StructuralError(f"cannot multiply {m}x{k} by {k2}x?")
    n = len(B[0]) if B else (ncols or 0)
    z = field.zero
    out = []
    for row in A:
        acc = [z] * n
        for t, a in enumerate(row):
            if a:
                brow = B[t]
                for j in range(n):
                    b = brow[j]
                    if b:
                        acc[j] = acc[j] + a * b
        out.append(acc)
    return out


def matvec(A: Sequence[Sequence], x: Sequence, field: Field) -> list:
    _, n = _shape(A, len(x))
    z = field.zero
    out = []
    for row in A:
        s = z
        for a, b in zip(row, x):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def transpose(A: Sequence[Sequence], ncols: int | None = None) -> list:
    m, n = _shape(A, ncols)
    return [[A[i][j] for i in range(m)] for j in range(n)]


def rref(A: Sequence[Sequence], field: Field, ncols: int | None = None) -> tuple[list, list[int]]:
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Pivots are taken in column order, so the output is deterministic.
    Returns the nonzero rows of the reduced matrix and the pivot columns.
    """
    m, n = _shape(A, ncols)
    R = [[field(x) for x in row] for row in A]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = field.one / R[r][c]
        if inv != 1:
            R[r] = [x * inv for x in R[r]]
        prow = R[r]
        for i in range(m):
            if i != r:
                f = R[i][c]
                if f:
                    row = R[i]
                    R[i] = [a - f * b if b else a for a, b in zip(row, prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R[:r], pivots


def _bareiss_rank(rows: list[list[int]], n: int) -> int:
    M = [row[:] for row in rows]
    m = len(M)
    prev = 1
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, m):
            a = M[i][c]
            row = M[i]
            for j in range(c + 1, n):
                row[j] = (piv * row[j] - a * M[r][j]) // prev
            row[c] = 0
        prev = piv
        r += 1
        if r == m:
            break
    return r


def rank(A: Sequence[Sequence], field: Field, ncols: int | None = None) -> int:
    """Exact rank; fraction-free (Bareiss) over Q, plain elimination over F_p."""
    m, n = _shape(A, ncols)
    if m == 0 or n == 0:
        return 0
    if field.characteristic == 0:
        rows = []
        for row in A:
            q = [Fraction(x) for x in row]
            den = lcm(*(x.denominator for x in q)) if q else 1
            rows.append([int(x * den) for x in q])
        return _bareiss_rank(rows, n)
    return len(rref(A, field, ncols)[1])


def solve_linear(A: Sequence[Sequence], b: Sequence, field: Field, ncols: int | None = None) -> list | None:
    """Return some ``x`` with ``A x = b`` or ``None`` if the system is inconsistent.

    Free variables are set to zero, giving the first solution under the
    column pivot order.
    """
    m, n = _shape(A, ncols)
    if len(b) != m:
        raise StructuralError(f"right-hand side has length {len(b)}, expected {m}")
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug, field, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [field.zero] * n
    for row, c in zip(R, pivots):
        x[c] = row[n]
    return x


def kernel(A: Sequence[Sequence], field: Field, ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Null-space basis and its free columns.

    Basis vector ``k`` has a 1 at free column ``free[k]`` and 0 at every other
    free column, so coordinates of a kernel element are read off at ``free``.
    """
    m, n = _shape(A, ncols)
    R, pivots = rref(A, field, n) if m else ([], [])
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = []
    for j in free:
        v = [field.zero] * n
        v[j] = field.one
        for row, c in zip(R, pivots):
            if row[j]:
                v[c] = -row[j]
        basis.append(v)
    return basis, free


def column_space_basis(vectors: Sequence[Sequence], dim: int, field: Field) -> list[list]:
    """A basis (echelon rows) of the span of ``vectors`` inside ``field**dim``."""
    R, _ = rref([list(v) for v in vectors], field, dim) if vectors else ([], [])
    return R


def in_span(v: Sequence, vectors: Sequence[Sequence], field: Field) -> bool:
    n = len(v)
    if not any(v):
        return True
    if not vectors:
        return False
    return solve_linear(transpose(list(vectors), n), list(v), field, len(vectors)) is not None


def span_coordinates(v: Sequence, vectors: Sequence[Sequence], field: Field) -> list | None:
    """Coefficients expressing ``v`` in ``vectors`` (first solution), or None."""
    n = len(v)
    if not vectors:
        return [] if not any(v) else None
    return solve_linear(transpose(list(vectors), n), list(v), field, len(vectors))


# --------------------------------------------------------------------------
# graded spaces and complexes


def _check_window(lo: int, hi: int) -> None:
    if lo > hi:
        raise StructuralError(f"empty window [{lo}, {hi}]")


@dataclass(frozen=True)
class GradedVectorSpace:
    """Finite ordered bases per degree, known exactly on the closed window."""

    field: Field
    window: tuple[int, int]
    bases: Mapping[int, tuple[str, ...]]

    def __post_init__(self):
        _check_window(*self.window)
        for n, labels in self.bases.items():
            if len(set(labels)) != len(labels):
                raise StructuralError(f"duplicate basis labels in degree {n}")

    def basis(self, n: int) -> tuple[str, ...]:
        lo, hi = self.window
        if not lo <= n <= hi:
            raise WindowError(f"degree {n} outside window [{lo}, {hi}]")
        return tuple(self.bases.get(n, ()))

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)


@dataclass(frozen=True)
class CochainComplex:
    """A cochain complex with ``d: C^n -> C^(n+1)`` known for ``lo <= n < hi``.

    ``differential[n]`` is a matrix with ``dim C^(n+1)`` rows and
    ``dim C^n`` columns.
    """

    space: GradedVectorSpace
    differential: Mapping[int, list]

    def __post_init__(self):
        lo, hi = self.space.window
        for n in range(lo, hi):
            D = self.differential.get(n)
            rows, cols = self.space.dim(n + 1), self.space.dim(n)
            if D is None:
                if rows and cols:
                    raise StructuralError(f"missing differential in degree {n}")
                continue
            if len(D) != rows or any(len(r) != cols for r in D):
                raise StructuralError(f"differential in degree {n} has the wrong shape")

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def window(self) -> tuple[int, int]:
        return self.space.window

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def d_matrix(self, n: int) -> list:
        lo, hi = self.window
        if not lo <= n < hi:
            raise WindowError(f"differential out of degree {n} not tabulated in [{lo}, {hi}]")
        D = self.differential.get(n)
        if D is None:
            return zeros(self.dim(n + 1), self.dim(n), self.field)
        return D

    def d_squared_violations(self) -> list[tuple[int, int]]:
        """(degree, basis index) pairs where d(d(e)) != 0."""
        out = []
        lo, hi = self.window
        for n in range(lo, hi - 1):
            P = matmul(self.d_matrix(n + 1), self.d_matrix(n), self.field, self.dim(n + 1), self.dim(n))
            for j in range(self.dim(n)):
                if any(P[i][j] for i in range(len(P))):
                    out.append((n, j))
        return out


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dim: int
    representatives: list
    cocycles: list
    boundaries: list
    ambient_dim: int
    field: Field = dc_field(repr=False)

    def coordinates(self, v: Sequence) -> list | None:
        """Class of a cocycle ``v`` in the representative basis; None if not a cocycle."""
        basis = list(self.representatives) + list(self.boundaries)
        c = span_coordinates(v, basis, self.field)
        if c is None:
            return None
        return c[: self.dim]

    def is_coboundary(self, v: Sequence) -> bool:
        return in_span(v, self.boundaries, self.field)


def cohomology(C: CochainComplex, n: int) -> Cohomology:
    """``H^n(C)`` with explicit representative cocycles, computed exactly."""
    lo, hi = C.window
    if not (lo <= n - 1 and n + 1 <= hi):
        raise WindowError(f"H^{n} needs degrees {n - 1}..{n + 1} inside window [{lo}, {hi}]")
    F = C.field
    dn = C.d_matrix(n)
    dprev = C.d_matrix(n - 1)
    dim_n = C.dim(n)
    Z, _ = kernel(dn, F, dim_n)
    B = column_space_basis(transpose(dprev, C.dim(n - 1)), dim_n, F)
    reps: list = []
    span = list(B)
    for z in Z:
        if not in_span(z, span, F):
            reps.append(z)
            span.append(z)
    return Cohomology(n, len(reps), reps, Z, B, dim_n, F)


def euler_characteristic(C: CochainComplex) -> int:
    lo, hi = C.window
    return sum((-1) ** n * C.dim(n) for n in range(lo, hi + 1))


def sparse_to_dense(vec: Mapping[int, object], dim: int, field: Field) -> list:
    out = [field.zero] * dim
    for i, c in vec.items():
        out[i] = out[i] + c
    return out


def dense_to_sparse(vec: Iterable) -> dict[int, object]:
    return {i: c for i, c in enumerate(vec) if c}

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from dgcalc.errors import FieldMismatchError, StructuralError, WindowError
from dgcalc.exactlin import (
    GF,
    QQ,
    CochainComplex,
    Fp,
    GradedVectorSpace,
    cohomology,
    euler_characteristic,
    field_from_name,
    identity_matrix,
    kernel,
    matmul,
    matvec,
    rank,
    rref,
    solve_linear,
)


def complex_from(mats: dict, dims: dict, window, field=QQ) -> CochainComplex:
    bases = {n: tuple(f"e{n}_{i}" for i in range(d)) for n, d in dims.items()}
    return CochainComplex(GradedVectorSpace(field, window, bases),
                          {n: [[field(c) for c in row] for row in M] for n, M in mats.items()})


# --------------------------------------------------------------------------
# scalars


def test_rational_arithmetic_is_exact():
    a, b = Fraction(3, 7), Fraction(-5, 11)
    assert (a / b) * (b / a) == 1
    assert QQ(1) / 3 * 3 == 1


def test_prime_field_arithmetic():
    F = GF(7)
    x = F(3)
    assert x * (F.one / x) == F.one
    assert F(5) + F(4) == F(2)
    assert F(2) - 5 == F(4)
    assert F(3) / F(5) * F(5) == F(3)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        _ = Fp(1, 5) + Fp(1, 7)
    with pytest.raises(FieldMismatchError):
        _ = Fp(1, 5) + Fraction(1, 2)
    with pytest.raises(FieldMismatchError):
        QQ(Fp(1, 3))


def test_field_names_round_trip():
    for name in ("Q", "QQ", "Fp:7", "F7", "GF(7)"):
        f = field_from_name(name)
        assert field_from_name(f.name()) == f
    assert field_from_name("Fp:7") == GF(7)
    with pytest.raises(StructuralError):
        field_from_name("R")
    with pytest.raises(StructuralError):
        GF(9)


# --------------------------------------------------------------------------
# solve_linear


def test_solve_identity():
    assert solve_linear(identity_matrix(2, QQ), [3, 5], QQ) == [3, 5]


def test_solve_homogeneous_f2_first_solution():
    F = GF(2)
    assert solve_linear([[F(1), F(1)]], [F(0)], F) == [F(0), F(0)]


def test_solve_inconsistent():
    assert solve_linear([[1], [1]], [1, 0], QQ) is None


def test_solve_dimension_mismatch():
    with pytest.raises(StructuralError):
        solve_linear([[1, 0], [0, 1]], [1, 2, 3], QQ)


small_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(small_matrix, st.data())
def test_solution_verifies_on_remultiplication(A, data):
    b = data.draw(st.lists(st.integers(-3, 3), min_size=len(A), max_size=len(A)))
    x = solve_linear(A, b, QQ)
    consistent = sympy.Matrix(A).rank() == sympy.Matrix(A).row_join(sympy.Matrix(b)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert matvec(A, x, QQ) == [Fraction(v) for v in b]


# --------------------------------------------------------------------------
# rank


def test_rank_examples():
    assert rank(identity_matrix(3, QQ), QQ) == 3
    assert rank([[0, 0], [0, 0]], QQ) == 0
    assert rank([[1, 2], [2, 4]], QQ) == 1


@settings(max_examples=80, deadline=None)
@given(small_matrix)
def test_rank_matches_sympy(A):
    assert rank(A, QQ) == sympy.Matrix(A).rank()


@settings(max_examples=60, deadline=None)
@given(small_matrix)
def test_rank_over_f5_matches_sympy_modular(A):
    F = GF(5)
    M = DomainMatrix([[SGF(5)(v) for v in row] for row in A], (len(A), len(A[0])), SGF(5))
    expected = M.rank()
    assert rank([[F(v) for v in row] for row in A], F) == expected


@settings(max_examples=60, deadline=None)
@given(small_matrix)
def test_fraction_free_rank_agrees_with_rref(A):
    R, pivots = rref([[QQ(v) for v in row] for row in A], QQ)
    assert rank(A, QQ) == len(pivots)


@settings(max_examples=60, deadline=None)
@given(small_matrix)
def test_kernel_vectors_are_annihilated(A):
    basis, free = kernel(A, QQ, len(A[0]))
    assert len(basis) == len(A[0]) - sympy.Matrix(A).rank()
    for v in basis:
        assert all(c == 0 for c in matvec(A, v, QQ))


# --------------------------------------------------------------------------
# cohomology


def test_two_term_identity_complex_is_acyclic():
    C = complex_from({0: [[1]]}, {0: 1, 1: 1}, (-1, 2))
    assert cohomology(C, 0).dim == 0
    assert cohomology(C, 1).dim == 0


def test_single_k_in_degree_zero():
    C = complex_from({}, {0: 1}, (-1, 1))
    H = cohomology(C, 0)
    assert H.dim == 1
    assert H.representatives == [[1]]


def test_cohomology_outside_window_fails_loudly():
    C = complex_from({}, {0: 1}, (0, 1))
    with pytest.raises(WindowError):
        cohomology(C, 0)
    with pytest.raises(WindowError):
        cohomology(C, 5)


def test_graded_space_rejects_duplicate_labels():
    with pytest.raises(StructuralError):
        GradedVectorSpace(QQ, (0, 0), {0: ("a", "a")})


@st.composite
def bounded_complexes(draw):
    """Random complexes with d^2 = 0, built as d_n = P_n with P_{n+1} P_n = 0."""
    length = draw(st.integers(1, 4))
    dims = [draw(st.integers(0, 3)) for _ in range(length)]
    mats = {}
    prev = None
    for n in range(length - 1):
        rows, cols = dims[n + 1], dims[n]
        M = draw(st.lists(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
        if prev is not None and rows and cols:
            # project M onto matrices killing the image of prev
            P = sympy.Matrix(prev) if prev and prev[0] else None
            if P is not None and P.shape[1]:
                img = P.columnspace()
                if img:
                    Ker = sympy.Matrix.hstack(*img).T.nullspace()
                    if Ker:
                        K = sympy.Matrix.hstack(*Ker)
                        Pr = K * (K.T * K).inv() * K.T
                    else:
                        Pr = sympy.zeros(cols, cols)
                    M = (sympy.Matrix(M) * Pr).tolist()
        mats[n] = [[Fraction(sympy.Rational(c).p, sympy.Rational(c).q) for c in row] for row in M] if rows and cols else \
            [[Fraction(0)] * cols for _ in range(rows)]
        prev = mats[n]
    return dims, mats


@settings(max_examples=60, deadline=None)
@given(bounded_complexes())
def test_euler_characteristic_matches_cohomology(data):
    dims, mats = data
    n = len(dims)
    C = complex_from({i: mats[i] for i in mats}, {i: dims[i] for i in range(n)}, (-1, n))
    assert C.d_squared_violations() == []
    chi_h = sum((-1) ** i * cohomology(C, i).dim for i in range(n))
    assert euler_characteristic(C) == chi_h == sum((-1) ** i * dims[i] for i in range(n))


def test_matmul_shapes():
    assert matmul([[1, 2]], [[3], [4]], QQ) == [[11]]

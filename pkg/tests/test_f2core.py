import itertools

import pytest
from hypothesis import given, strategies as st

from cubeflow.f2core import (
    ExtElement,
    F2Matrix,
    SymIntMatrix,
    in_span,
    integer_det,
    kernel_basis,
    rank,
    rank_of_rows,
    row_reduce,
    signature_det_nullity,
    wedge,
    wedge_monomial_list,
)


@st.composite
def matrices(draw, max_dim=8):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return F2Matrix(r, c, tuple(rows))


@st.composite
def symmetric(draw, max_dim=6):
    n = draw(st.integers(0, max_dim))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = draw(st.integers(-3, 3))
    return SymIntMatrix.from_rows(rows)


def test_identity_and_zero():
    assert rank(F2Matrix.identity(5)) == 5
    assert rank(F2Matrix.zeros(3, 4)) == 0
    assert F2Matrix.zeros(2, 2).is_zero()


def test_from_dense_round_trip():
    dense = [[1, 0, 1], [0, 1, 1]]
    m = F2Matrix.from_dense(dense)
    assert m.to_dense() == dense
    assert m.entry(0, 2) == 1 and m.entry(1, 0) == 0


def test_rank_of_dependent_rows():
    assert rank_of_rows([0b011, 0b110, 0b101]) == 2


def test_in_span():
    assert in_span(0b101, [0b011, 0b110])
    assert not in_span(0b001, [0b011, 0b110])


@given(matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


@given(matrices())
def test_kernel_is_annihilated_and_has_right_size(m):
    ker = kernel_basis(m)
    assert len(ker) == m.ncols - rank(m)
    assert rank_of_rows(ker) == len(ker)
    for v in ker:
        assert m.apply(v) == 0


@given(matrices(), matrices())
def test_product_rank_bound(a, b):
    b = F2Matrix(a.ncols, b.ncols, tuple(b.rows[i] if i < b.nrows else 0 for i in range(a.ncols)))
    assert rank(a @ b) <= min(rank(a), rank(b))


@given(matrices())
def test_row_reduce_pivots_are_clean(m):
    pivots, cols = row_reduce(m.rows)
    assert len(pivots) == rank(m)
    for k, c in enumerate(cols):
        for j, p in enumerate(pivots):
            assert ((p >> c) & 1) == (j == k)


def test_wedge_basics():
    e0, e1 = ExtElement.basis(3, 0), ExtElement.basis(3, 1)
    assert not wedge(e0, e0)
    assert wedge(e0, e1) == wedge(e1, e0)
    assert wedge(ExtElement.one(3), e1) == e1
    with pytest.raises(ValueError):
        wedge(e0, ExtElement.basis(4, 0))
    with pytest.raises(ValueError):
        ExtElement.make(2, [0b100])


@given(st.lists(st.integers(0, 31), min_size=1, max_size=4))
def test_wedge_of_vectors_matches_expansion(vs):
    acc = ExtElement.one(5)
    for v in vs:
        acc = wedge(acc, ExtElement.vector(5, v))
    assert set(acc.terms) == wedge_monomial_list(vs)
    # the top wedge is nonzero exactly when the vectors are independent
    assert bool(acc) == (rank_of_rows(vs) == len(vs))


@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_wedge_associative(a, b, c):
    x, y, z = (ExtElement.make(6, [m]) + ExtElement.make(6, [m >> 1]) for m in (a, b, c))
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


def test_signature_small_cases():
    assert signature_det_nullity(SymIntMatrix.from_rows([[2, 1], [1, 2]])) == (2, 3, 0)
    assert signature_det_nullity(SymIntMatrix.from_rows([[0, 1], [1, 0]])) == (0, -1, 0)
    assert signature_det_nullity(SymIntMatrix.from_rows([[1, 1], [1, 1]])) == (1, 0, 1)
    assert signature_det_nullity(SymIntMatrix.from_rows([])) == (0, 1, 0)


def test_asymmetric_rejected():
    with pytest.raises(ValueError):
        SymIntMatrix.from_rows([[0, 1], [2, 0]])


@given(symmetric())
def test_signature_agrees_with_bareiss_and_bounds(a):
    s, det, nul = signature_det_nullity(a)
    assert det == integer_det(a.entries)
    assert (det == 0) == (nul > 0)
    assert abs(s) + nul <= a.n and (a.n - nul - s) % 2 == 0


@given(symmetric(5), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-2, 2)), max_size=6))
def test_signature_is_a_congruence_invariant(a, ops):
    n = a.n
    m = [list(r) for r in a.entries]
    for i, j, k in ops:
        if n == 0 or i >= n or j >= n or i == j:
            continue
        # add k times row/column j to row/column i
        for c in range(n):
            m[i][c] += k * m[j][c]
        for r in range(n):
            m[r][i] += k * m[r][j]
    b = SymIntMatrix.from_rows(m)
    assert signature_det_nullity(a) == signature_det_nullity(b)


def test_integer_det_permutation_sign():
    for perm in itertools.permutations(range(3)):
        rows = [[1 if perm[i] == j else 0 for j in range(3)] for i in range(3)]
        inversions = sum(1 for i in range(3) for j in range(i) if perm[j] > perm[i])
        assert integer_det(rows) == (-1) ** inversions

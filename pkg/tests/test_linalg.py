"""Exact scalar and sparse-matrix kernels, cross-checked against the dense
oracle in oracles.py."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphck.exact_linalg import (I_UNIT, ONE, ZERO, DimensionMismatch,
                                  RowReducer, Scalar, SparseMat, TensorElement,
                                  exact_rank, is_orthogonal_projection,
                                  is_partial_isometry, kron, matrix_unit,
                                  nullspace, span_closure)


class TestScalar:
    def test_construct_from_int_fraction_string(self):
        assert Scalar(2) == Scalar(Fraction(2)) == Scalar("2")
        assert Scalar("3/4").re == Fraction(3, 4)
        assert Scalar(1, -2).im == Fraction(-2)

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            Scalar(0.5)
        with pytest.raises(TypeError):
            Scalar.coerce(1.5)
        with pytest.raises(TypeError):
            Scalar.coerce(1 + 2j)
        with pytest.raises(ValueError):
            Scalar("0.5")

    def test_arithmetic(self):
        a = Scalar("1/2", "1/3")
        b = Scalar(2, -1)
        assert a + b == Scalar("5/2", "-2/3")
        assert a - b == Scalar("-3/2", "4/3")
        # (1/2 + i/3)(2 - i) = 1 + 1/3 + i(2/3 - 1/2)
        assert a * b == Scalar("4/3", "1/6")
        assert (a * b) / b == a
        assert -a == Scalar("-1/2", "-1/3")
        assert a.conj() == Scalar("1/2", "-1/3")
        assert I_UNIT * I_UNIT == Scalar(-1)

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ONE / Scalar(0)

    def test_fast_paths_do_not_depend_on_identity(self):
        # fresh Scalar(0)/Scalar(1) objects are distinct from the module
        # constants yet must behave identically
        zero, one = Scalar(0), Scalar(1)
        assert zero is not ZERO and one is not ONE
        a = Scalar("7/3", "-1/5")
        assert zero + a == a
        assert a + zero == a
        assert one * a == a
        assert a * one == a
        assert zero * a == Scalar(0)
        assert not zero
        assert one

    def test_pair_roundtrip(self):
        a = Scalar("-7/2", "5/9")
        assert Scalar.from_pair(*a.to_pair()) == a
        assert a.to_pair() == ("-7/2", "5/9")

    def test_complex_conversion(self):
        assert complex(Scalar("1/2", -2)) == 0.5 - 2j

    @given(st.fractions(max_denominator=20), st.fractions(max_denominator=20),
           st.fractions(max_denominator=20), st.fractions(max_denominator=20))
    def test_mul_matches_complex_model(self, ar, ai, br, bi):
        a, b = Scalar(ar, ai), Scalar(br, bi)
        want = (ar * br - ai * bi, ar * bi + ai * br)
        got = a * b
        assert (got.re, got.im) == want


def _sample_mat(rows: int, cols: int, seedlike: list) -> SparseMat:
    entries = {}
    for (i, j, re, im) in seedlike:
        entries[(i, j)] = Scalar(re, im)
    return SparseMat(rows, cols, entries)


scalars = st.fractions(min_value=-3, max_value=3, max_denominator=4)
small_dim = st.integers(min_value=1, max_value=4)


@st.composite
def sparse_mats(draw, rows=None, cols=None):
    r = rows if rows is not None else draw(small_dim)
    c = cols if cols is not None else draw(small_dim)
    entries = draw(st.dictionaries(
        st.tuples(st.integers(1, r), st.integers(1, c)),
        st.tuples(scalars, scalars), max_size=6))
    return SparseMat(r, c, {k: Scalar(re, im) for k, (re, im) in entries.items()})


class TestSparseMat:
    def test_no_stored_zeros(self):
        m = SparseMat(2, 2, {(1, 1): Scalar(0), (1, 2): ONE})
        assert m.nnz == 1
        assert m.entry(1, 1) == ZERO
        assert m.entry(1, 2) == ONE

    def test_bounds_validated(self):
        with pytest.raises(ValueError):
            SparseMat(2, 2, {(3, 1): ONE})
        with pytest.raises(ValueError):
            SparseMat(2, 2, {(0, 1): ONE})
        m = SparseMat(2, 2)
        with pytest.raises(ValueError):
            m.entry(5, 1)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            SparseMat.identity(2) + SparseMat.identity(3)
        with pytest.raises(DimensionMismatch):
            SparseMat.identity(2) @ SparseMat.identity(3)

    @given(sparse_mats(rows=3, cols=2), sparse_mats(rows=3, cols=2))
    def test_add_matches_oracle(self, a, b):
        got = oracles.from_sparse(a + b)
        want = oracles.mat_add(oracles.from_sparse(a), oracles.from_sparse(b))
        assert got == want

    @given(sparse_mats(rows=2, cols=3), sparse_mats(rows=3, cols=2))
    @settings(max_examples=60)
    def test_matmul_matches_oracle(self, a, b):
        got = oracles.from_sparse(a @ b)
        want = oracles.mat_mul(oracles.from_sparse(a), oracles.from_sparse(b))
        assert got == want

    @given(sparse_mats(rows=2, cols=2), sparse_mats(rows=3, cols=2))
    @settings(max_examples=60)
    def test_kron_matches_oracle(self, a, b):
        got = oracles.from_sparse(a.kron(b))
        want = oracles.kron(oracles.from_sparse(a), oracles.from_sparse(b))
        assert got == want

    @given(sparse_mats())
    def test_adjoint_is_conjugate_transpose(self, a):
        got = oracles.from_sparse(a.adjoint())
        assert got == oracles.adjoint(oracles.from_sparse(a))

    @given(sparse_mats())
    def test_adjoint_involutive(self, a):
        assert a.adjoint().adjoint() == a

    def test_kron_unit_convention(self):
        # E_{1,2} kron E_{2,1} lands at (2, 3) when the right factor has 2 rows
        e12 = matrix_unit(2, 1, 2)
        e21 = matrix_unit(2, 2, 1)
        assert e12.kron(e21) == matrix_unit(4, 2, 3)

    def test_trace(self):
        m = _sample_mat(2, 2, [(1, 1, 2, 0), (2, 2, "1/2", 1), (1, 2, 9, 9)])
        assert m.trace() == Scalar("5/2", 1)

    def test_window(self):
        m = _sample_mat(3, 3, [(1, 1, 1, 0), (3, 3, 1, 0), (1, 3, 1, 0)])
        w = m.window(2)
        assert (w.rows, w.cols) == (2, 2)
        assert w == SparseMat(2, 2, {(1, 1): ONE})

    def test_vectorize_roundtrip(self):
        m = _sample_mat(2, 3, [(1, 2, 1, 1), (2, 3, "1/2", 0)])
        vec = m.vectorize()
        assert SparseMat.from_vector(vec, 2, 3) == m
        # row-major 0-based position of (1,2) in a 2x3 matrix is 1
        assert vec[1] == Scalar(1, 1)

    def test_json_roundtrip_and_golden(self):
        m = _sample_mat(2, 2, [(1, 2, "1/2", "-3/4"), (2, 1, 1, 0)])
        payload = m.to_json_dict()
        assert payload == {
            "rows": 2, "cols": 2,
            "entries": [[1, 2, "1/2", "-3/4"], [2, 1, "1", "0"]],
        }
        assert SparseMat.from_json_dict(payload) == m

    def test_scale(self):
        m = matrix_unit(2, 1, 1)
        assert m.scale(Scalar("3/2")) == SparseMat(2, 2, {(1, 1): Scalar("3/2")})

    def test_predicates(self):
        e11 = matrix_unit(2, 1, 1)
        assert is_orthogonal_projection(e11)
        assert is_partial_isometry(e11)
        e12 = matrix_unit(2, 1, 2)
        assert is_partial_isometry(e12)
        assert not is_orthogonal_projection(e12)
        half = e11.scale(Scalar("1/2"))
        assert not is_orthogonal_projection(half)
        assert not is_partial_isometry(half)


class TestTensorElement:
    def test_flatten_matches_kron(self):
        left = matrix_unit(2, 1, 2)
        right = matrix_unit(2, 2, 1)
        t = TensorElement((2, 2), (2, 2), [(left, right)])
        assert t.flatten() == kron(left, right)

    def test_equality_is_bilinear(self):
        e11 = matrix_unit(2, 1, 1)
        e22 = matrix_unit(2, 2, 2)
        ident = SparseMat.identity(2)
        split = TensorElement((2, 2), (2, 2), [(e11, ident), (e22, ident)])
        joined = TensorElement((2, 2), (2, 2), [(ident, ident)])
        assert split == joined


class TestRowReduction:
    @given(st.lists(st.dictionaries(st.integers(0, 3),
                                    st.tuples(scalars, scalars), max_size=4),
                    max_size=5))
    @settings(max_examples=60)
    def test_rank_matches_oracle(self, raw_rows):
        rows = [{k: Scalar(re, im) for k, (re, im) in row.items() if (re, im) != (0, 0)}
                for row in raw_rows]
        reducer = RowReducer()
        for row in rows:
            reducer.add(row)
        dense = [[(row.get(c, ZERO).re, row.get(c, ZERO).im) for c in range(4)]
                 for row in rows]
        assert reducer.rank == (oracles.rank(dense) if dense else 0)

    def test_contains(self):
        reducer = RowReducer()
        reducer.add({0: ONE, 1: ONE})
        reducer.add({1: ONE})
        assert reducer.contains({0: Scalar(2)})
        assert not reducer.contains({2: ONE})

    @given(st.lists(st.dictionaries(st.integers(0, 3),
                                    st.tuples(scalars, scalars), max_size=4),
                    max_size=5))
    @settings(max_examples=60)
    def test_nullspace_annihilates_and_has_right_dimension(self, raw_rows):
        rows = [{k: Scalar(re, im) for k, (re, im) in row.items() if (re, im) != (0, 0)}
                for row in raw_rows]
        basis = nullspace(rows, 4)
        assert len(basis) == 4 - exact_rank(rows)
        for vec in basis:
            for row in rows:
                total = ZERO
                for k, c in row.items():
                    total = total + c * vec.get(k, ZERO)
                assert total == ZERO

    def test_nullspace_deterministic(self):
        rows = [{0: ONE, 2: Scalar(-1)}]
        assert nullspace(rows, 3) == nullspace(rows, 3)


class TestSpanClosure:
    def test_two_units_generate_full_m2(self):
        e11 = matrix_unit(2, 1, 1)
        e12 = matrix_unit(2, 1, 2)
        basis, dim, closed = span_closure([e11, e12])
        assert (dim, closed) == (4, True)
        assert len(basis) == 4

    def test_single_projection_is_closed(self):
        basis, dim, closed = span_closure([matrix_unit(3, 1, 1)])
        assert (dim, closed) == (1, True)

    def test_identity_only(self):
        _, dim, closed = span_closure([SparseMat.identity(3)])
        assert (dim, closed) == (1, True)

    def test_without_adjoints_can_be_smaller(self):
        e12 = matrix_unit(2, 1, 2)
        _, dim, closed = span_closure([e12], include_adjoints=False)
        assert (dim, closed) == (1, True)  # e12 squares to zero

    def test_shift_pair_generates_everything(self):
        s1 = SparseMat(4, 4, {(2 * k - 1, k): ONE for k in range(1, 3)})
        s2 = SparseMat(4, 4, {(2 * k, k): ONE for k in range(1, 3)})
        _, dim, closed = span_closure([s1, s2])
        assert closed
        assert dim == 16

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qext.errors import DimensionMismatch, FieldSpecError
from qext.linalg import (QQ, Echelonizer, Matrix, PrimeField, complement,
                         field_from_spec, image, intersect, kernel, rref,
                         solve, subspace)


def mat(rows, ncols=None, field=QQ):
    return Matrix.from_rows(field, [[field.of(x) for x in r] for r in rows],
                            ncols if ncols is not None else len(rows[0]))


def test_rref_identity():
    m = Matrix.identity(QQ, 2)
    r, piv = rref(m)
    assert r == m and piv == (0, 1)


def test_rref_zero():
    m = Matrix.zeros(QQ, 2, 3)
    r, piv = rref(m)
    assert r.is_zero() and piv == ()


def test_rref_rank_one():
    r, piv = rref(mat([[1, 2], [2, 4]]))
    assert piv == (0,)
    assert r.data[0] == [Fraction(1), Fraction(2)]
    assert r.data[1] == [Fraction(0), Fraction(0)]


def test_kernel_of_identity_is_empty():
    assert kernel(Matrix.identity(QQ, 3)).nrows == 0


def test_complement_standard_rule():
    u = mat([[1, 0]])
    c = complement(u)
    assert c.nrows == 1 and c.data[0] == [Fraction(0), Fraction(1)]


def test_complement_inside_subspace():
    v = mat([[1, 0, 0], [0, 1, 0]])
    u = mat([[1, 1, 0]])
    c = complement(u, v)
    assert c.nrows == 1
    # the complement stays inside the row space of v
    ech = Echelonizer(v)
    assert ech.contains(c.row(0))


def test_solve_back_substitution():
    a = mat([[1, 1], [0, 1]])
    x = solve(a, [QQ.of(3), QQ.of(1)])
    assert x == [Fraction(2), Fraction(1)]


def test_solve_inconsistent_none():
    a = mat([[1, 1], [1, 1]])
    assert solve(a, [QQ.of(0), QQ.of(1)]) is None


def test_intersect():
    u = mat([[1, 0, 0], [0, 1, 0]])
    w = mat([[0, 1, 0], [0, 0, 1]])
    i = intersect(u, w)
    assert i.nrows == 1 and i.data[0] == [Fraction(0), Fraction(1), Fraction(0)]


def test_subspace_dispatch():
    assert subspace("kernel", Matrix.identity(QQ, 2)).nrows == 0
    with pytest.raises(ValueError):
        subspace("frobnicate", Matrix.identity(QQ, 2))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat([[1, 2]]).mul(mat([[1, 2]]))


def test_prime_field_arithmetic():
    f = PrimeField(7)
    assert f.of(Fraction(1, 2)) == 4      # 1/2 = 4 mod 7
    assert f.mul(f.of(3), f.of(5)) == 1
    assert f.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        f.inv(7)


def test_field_spec():
    assert field_from_spec(None) is QQ
    assert field_from_spec("rationals") is QQ
    assert field_from_spec("5") == PrimeField(5)
    assert field_from_spec("gf(11)") == PrimeField(11)
    with pytest.raises(FieldSpecError):
        field_from_spec("6")
    with pytest.raises(FieldSpecError):
        field_from_spec("widgets")


small_entries = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, max_dim=5):
    m = draw(st.integers(min_value=1, max_value=max_dim))
    n = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(st.lists(st.lists(small_entries, min_size=n, max_size=n),
                         min_size=m, max_size=m))
    return mat(rows, ncols=n)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    _, piv = rref(m)
    assert len(piv) + kernel(m).nrows == m.ncols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_annihilates(m):
    ker = kernel(m)
    for r in range(ker.nrows):
        assert all(QQ.is_zero(x) for x in m.apply(ker.row(r)))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_complement_dimensions_and_independence(m):
    from qext.linalg import row_space, vstack
    c = complement(m)
    rs = row_space(m)
    assert rs.nrows + c.nrows == m.ncols
    joined = Matrix.from_rows(QQ, list(rs.data) + list(c.data), m.ncols)
    _, piv = rref(joined)
    assert len(piv) == m.ncols


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_determinism(m):
    r1, p1 = rref(m.copy())
    r2, p2 = rref(m.copy())
    assert r1 == r2 and p1 == p2
    assert kernel(m.copy()) == kernel(m.copy())


@settings(max_examples=40, deadline=None)
@given(matrices(max_dim=4))
def test_image_spans_columns(m):
    im = image(m)
    ech = Echelonizer(im) if im.nrows else None
    for c in range(m.ncols):
        col = [m.data[r][c] for r in range(m.nrows)]
        if any(not QQ.is_zero(x) for x in col):
            assert ech is not None and ech.contains(col)
        elif ech is None:
            assert all(QQ.is_zero(x) for x in col)


def test_echelonizer_coordinates():
    basis = mat([[1, 1, 0], [0, 1, 1]])
    ech = Echelonizer(basis)
    coords = ech.coordinates([QQ.of(1), QQ.of(3), QQ.of(2)])
    assert coords == [Fraction(1), Fraction(2)]
    assert ech.coordinates([QQ.of(1), QQ.of(0), QQ.of(1)]) is None

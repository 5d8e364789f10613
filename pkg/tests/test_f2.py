import pytest
from hypothesis import given, settings, strategies as st

from steenext.f2 import (BitMatrix, BitVector, Eliminator, complement_basis, kernel_basis, rank,
                         row_reduce, solve)


@st.composite
def matrices(draw, max_rows=12, max_cols=12):
    nr = draw(st.integers(0, max_rows))
    nc = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.integers(0, (1 << nc) - 1), min_size=nr, max_size=nr))
    return BitMatrix.from_ints(rows, nc)


def test_bitvector_basics():
    v = BitVector.from_list([1, 0, 1, 1])
    w = BitVector.from_string("0110")
    assert (v + w).to_list() == [1, 1, 0, 1]
    assert v.dot(w) == 1
    assert v.support() == [0, 2, 3]
    with pytest.raises(ValueError):
        BitVector(3, 0b1000)


def test_identity_and_transpose():
    m = BitMatrix.from_lists([[1, 0, 1], [0, 1, 1]])
    assert m.transpose().transpose() == m
    assert rank(BitMatrix.identity(5)) == 5
    x = BitVector.from_list([1, 1])
    assert m.vecmul(x).to_list() == [1, 1, 0]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_kernel_vectors_are_killed_and_rank_nullity(m):
    ker = kernel_basis(m)
    for v in ker:
        assert m.apply(v).is_zero()
    assert rank(m) + len(ker) == m.ncols


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_row_reduce_idempotent(m):
    ech = row_reduce(m)
    again = row_reduce(ech.basis)
    assert again == ech


@settings(max_examples=200, deadline=None)
@given(matrices(), st.integers(0, 1 << 12))
def test_solve_is_sound(m, t):
    target = BitVector(m.ncols, t & ((1 << m.ncols) - 1))
    x = solve(m, target)
    ech = row_reduce(m)
    if x is None:
        assert not ech.contains(target)
    else:
        assert m.vecmul(x) == target


def test_solve_rejects_bad_length():
    m = BitMatrix.from_lists([[1, 0]])
    with pytest.raises(ValueError):
        solve(m, BitVector(3, 0))


@settings(max_examples=100, deadline=None)
@given(matrices(), matrices())
def test_complement_basis_completes(a, b):
    if a.ncols != b.ncols:
        return
    sub = row_reduce(a)
    amb = row_reduce(BitMatrix.from_ints(a.row_ints() + b.row_ints(), a.ncols))
    comp = complement_basis(sub, amb)
    assert sub.dim + len(comp) == amb.dim
    joined = BitMatrix.from_ints([r.bits for r in sub.basis.rows] + [c.bits for c in comp], a.ncols)
    assert rank(joined) == amb.dim


def test_complement_basis_requires_containment():
    sub = row_reduce(BitMatrix.from_lists([[1, 0]]))
    amb = row_reduce(BitMatrix.from_lists([[0, 1]]))
    with pytest.raises(ValueError):
        complement_basis(sub, amb)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 255), st.integers(0, 3)), max_size=14), st.integers(0, 255),
       st.integers(0, 3))
def test_eliminator_levels(rows, v, w):
    rows = sorted(rows, key=lambda r: r[1])
    e = Eliminator()
    for i, (r, lvl) in enumerate(rows):
        e.add(r, 1 << i, lvl)
    low = [r for r, lvl in rows if lvl <= w]
    in_low = row_reduce(BitMatrix.from_ints(low, 8)).reduce(v) == 0
    combo = e.express(v, max_level=w)
    assert (combo is not None) == in_low
    if combo is not None:
        acc = 0
        for i, (r, lvl) in enumerate(rows):
            if (combo >> i) & 1:
                assert lvl <= w
                acc ^= r
        assert acc == v


def test_eliminator_reports_kernel():
    e = Eliminator()
    assert e.add(0b011, 0b001) is None
    assert e.add(0b110, 0b010) is None
    assert e.add(0b101, 0b100) == 0b111

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qflag.errors import NoSolution
from qflag.linalg import ExactMatrix, RowReducer
from qflag.qfield import ONE, Q, ZERO, LaurentRat, evaluate_at, qpow

POINTS = [Fraction(3), Fraction(-2, 7), Fraction(5, 3)]


def fraction_rank(rows):
    """Oracle: textbook Gaussian elimination over Fractions."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


entry = st.sampled_from([0, 0, 0, 1, -1, 2]).flatmap(
    lambda c: st.integers(-2, 2).map(lambda e: LaurentRat(c) * qpow(e) if c else ZERO)
)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    data = [[draw(entry) for _ in range(c)] for _ in range(r)]
    # sums of entries so that cancellations over Q(q) actually occur
    if r > 1 and draw(st.booleans()):
        data[-1] = [a + b for a, b in zip(data[0], data[1 % r])]
    return ExactMatrix.from_dense(data)


def specialize(m, p):
    return [[evaluate_at(m[i, j], p) for j in range(m.ncols)] for i in range(m.nrows)]


@given(matrices())
def test_rank_against_specializations(m):
    r = m.rank()
    spec = [fraction_rank(specialize(m, p)) for p in POINTS]
    assert all(s <= r for s in spec)
    assert max(spec) == r


@given(matrices())
def test_kernel_is_null_space(m):
    ker = m.kernel()
    assert len(ker) + m.rank() == m.ncols
    for v in ker:
        assert m.apply(v) == {}


@given(matrices())
def test_rref_pivot_structure(m):
    R = m.rref()
    pivots = []
    for i in range(R.nrows):
        row = R.row(i)
        if not row:
            continue
        c = min(row)
        assert row[c] == ONE
        pivots.append(c)
    assert pivots == sorted(pivots)
    for i, c in enumerate(pivots):
        col = R.column(c)
        assert col == {i: ONE}


@given(matrices(), st.data())
def test_solve_reproduces_rhs(m, data):
    x = {j: data.draw(entry) for j in range(m.ncols)}
    x = {j: v for j, v in x.items() if v}
    rhs = m.apply(x)
    sol = m.solve(rhs)
    assert m.apply(sol) == rhs


def test_solve_inconsistent():
    m = ExactMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(NoSolution):
        m.solve({0: ONE, 1: ONE + ONE})


def test_inverse_and_products():
    m = ExactMatrix.from_dense([[Q, ONE], [ONE, Q.inv()]]) + ExactMatrix.identity(2)
    inv = m.inverse()
    assert m @ inv == ExactMatrix.identity(2)
    assert inv @ m == ExactMatrix.identity(2)
    singular = ExactMatrix.from_dense([[Q, ONE], [Q * Q, Q]])
    with pytest.raises(NoSolution):
        singular.inverse()


def test_kron_and_transpose():
    a = ExactMatrix.from_dense([[1, 2], [3, 4]])
    b = ExactMatrix.from_dense([[0, 1], [1, 0]])
    k = a.kron(b)
    assert k[1, 0] == LaurentRat(1) and k[2, 1] == LaurentRat(3) and k[2, 3] == LaurentRat(4)
    assert (a @ b).T == b.T @ a.T


def test_row_reducer_incremental():
    red = RowReducer()
    assert red.add({0: ONE, 2: Q}) == 0
    assert red.add({0: ONE, 1: ONE}) == 1
    assert red.add({1: ONE, 2: -Q}) is None
    assert red.contains({0: Q, 1: Q, 2: ZERO})
    assert not red.contains({2: ONE})

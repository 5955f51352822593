import pytest
from hypothesis import given, settings, strategies as st

from qflag.coeffmodel import MCElement, mc, product, unit, verify_z_relations, z_generator
from qflag.errors import InvalidArgument
from qflag.flagcalc import build_context
from qflag.qfield import ONE, LaurentRat, qpow
from qflag.repkit import build_irrep

A1 = build_context("A", 1, 1)
A2 = build_context("A", 2, 1)


def eval_canonical(elem, rs, word):
    """Evaluate through the canonical form, on the model irreducibles only."""
    total = LaurentRat(0)
    for mu, block in elem.canonical().items():
        W = build_irrep(rs, mu)
        for (a, b), c in block.items():
            vec = {b: ONE}
            for kind, node in reversed(word):
                vec = W.generator(kind, node).apply(vec)
            total = total + c * vec.get(a, 0)
    return total


coeffs = st.integers(-2, 2).map(lambda k: qpow(k) if k else LaurentRat(0))


@st.composite
def elements(draw, ctx):
    """Products of one or two random coefficients of V or V*."""
    def factor():
        W = draw(st.sampled_from([ctx.V, ctx.Vd]))
        f = {i: draw(coeffs) for i in draw(st.sets(st.integers(0, W.dim - 1), min_size=1, max_size=2))}
        x = {i: draw(coeffs) for i in draw(st.sets(st.integers(0, W.dim - 1), min_size=1, max_size=2))}
        return mc(W, f, x)
    out = factor()
    if draw(st.booleans()):
        out = out * factor()
    return out


def words(rank):
    letter = st.tuples(st.sampled_from(["E", "F", "K", "Kinv"]), st.integers(0, rank - 1))
    return st.lists(letter, max_size=3).map(tuple)


@settings(max_examples=30)
@given(st.data())
def test_canonical_form_preserves_evaluation(data):
    ctx = data.draw(st.sampled_from([A1, A2]))
    elem = data.draw(elements(ctx))
    word = data.draw(words(ctx.rs.rank))
    assert elem.evaluate(word) == eval_canonical(elem, ctx.rs, word)


@settings(max_examples=20)
@given(st.data())
def test_product_associative_and_unital(data):
    a, b, c = (data.draw(elements(A1)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    one = unit(A1.rs)
    assert one * a == a and a * one == a
    assert (a * b).counit() == a.counit() * b.counit()


@settings(max_examples=20)
@given(st.data())
def test_evaluation_is_linear(data):
    a, b = data.draw(elements(A2)), data.draw(elements(A2))
    word = data.draw(words(2))
    assert (a + b).evaluate(word) == a.evaluate(word) + b.evaluate(word)
    assert (a - a).is_zero()


def test_a1_product_support():
    V = A1.V
    for i in range(2):
        for j in range(2):
            p = product(mc(V, {i: ONE}, {0: ONE}), mc(V, {j: ONE}, {1: ONE}))
            assert set(p.canonical()) <= {(2,), (0,)}
    both = product(mc(V, {0: ONE}, {0: ONE}), mc(V, {1: ONE}, {1: ONE}))
    assert set(both.canonical()) == {(2,), (0,)}


def test_unit():
    one = unit(A2.rs)
    assert one.counit() == ONE
    assert one.evaluate((("E", 0),)) == 0
    assert one.evaluate((("K", 1),)) == ONE


def test_z_generator_counit():
    n = A2.N
    for i in range(n):
        for j in range(n):
            want = ONE if i == j == n - 1 else 0
            assert z_generator(A2, i, j).counit() == want


def test_bad_generator():
    with pytest.raises(InvalidArgument):
        mc(A1.V, {0: ONE}, {0: ONE}).evaluate((("X", 0),))


def test_scalar_multiplication():
    a = mc(A1.V, {0: ONE}, {1: ONE})
    assert (a * qpow(2)).counit() == a.counit() * qpow(2)
    assert (a * 0).is_zero()
    assert MCElement().is_zero()


@pytest.mark.parametrize("key", [("A", 1, 1), ("A", 2, 1), ("A", 2, 2)])
def test_z_relations_hold(key):
    rep = verify_z_relations(build_context(*key))
    assert rep.passed, rep.witness
    n = build_context(*key).N
    assert rep.details["family_a"] > 0 and rep.details["family_b"] > 0
    assert rep.details["family_a"] <= n**4


def _bump(M, r, c, delta):
    rows = {i: dict(M.row(i)) for i in range(M.nrows)}
    rows[r][c] = rows[r].get(c, LaurentRat(0)) + delta
    return type(M)(M.nrows, M.ncols, rows)


def _first_entry(M):
    return next(iter(M.entries()))[:2]


@pytest.mark.parametrize("name", ["P_hat", "ra", "rgm", "C"])
def test_mutated_matrices_fail(name):
    fam = A2.rfamily
    M = getattr(fam, name)
    r, c = _first_entry(M)
    rep = verify_z_relations(A2, {name: _bump(M, r, c, qpow(1))})
    assert not rep.passed


def test_wrong_inverse_reading_fails():
    fam = A2.rfamily
    assert not verify_z_relations(A2, {"ra": fam.ram.inverse()}).passed
    assert not verify_z_relations(A2, {"ra": fam.ra.transpose()}).passed


def test_unknown_override():
    with pytest.raises(InvalidArgument):
        verify_z_relations(A1, {"rh": A1.rfamily.rh})

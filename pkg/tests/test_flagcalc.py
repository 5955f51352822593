from fractions import Fraction
from math import comb

import pytest
from oracles import brute_force_dims, specialize

from qflag.errors import InvalidArgument, NotIrreducibleFlag
from qflag.flagcalc import (
    build_context,
    central_check,
    coordinate_relations,
    counit_of_z_relation,
    derham_dims,
    expected_dims,
    fiber_presentation,
    graded_commutation_check,
    levi_invariance_check,
    mixed_algebra,
    restricted_check,
    spectrum_check,
    sqgp_relations,
    volume_form_check,
)
from qflag.linalg import ExactMatrix
from qflag.qfield import ONE
from qflag.quadalg import QuadraticAlgebra, central_degree3_check, graded_dims

Q0 = Fraction(5, 3)


def test_context_fields():
    a1 = build_context("A", 1, 1)
    assert (a1.N, a1.M) == (2, 1)
    a2 = build_context("A", 2, 1)
    assert (a2.N, a2.M) == (3, 2)
    a3 = build_context("A", 3, 2)
    assert (a3.N, a3.M, len(a3.I1)) == (6, 4, 4)
    b2 = build_context("B", 2, 1)
    assert (b2.N, b2.M) == (5, 3)
    assert build_context("a", 2, 1) is a2


def test_context_structure(ctx):
    # the last basis vector carries the highest weight, level one has weight lambda - beta
    assert ctx.V.weights[ctx.N - 1] == tuple(ctx.lam)
    rs = ctx.rs
    for beta, i in ctx.root_index.items():
        want = tuple(a - b for a, b in zip(ctx.lam, rs.root_weight(beta)))
        assert ctx.V.weights[i] == want
    assert ctx.N - 1 not in ctx.I1


def test_root_pairing_matches_root_gram(ctx):
    G = ctx.rs.root_gram
    for b in ctx.par.complement:
        for g in ctx.par.complement:
            want = sum(b[i] * G[i][j] * g[j] for i in range(len(b)) for j in range(len(g)))
            assert ctx.root_pairing(b, g) == want


def test_not_irreducible():
    with pytest.raises(NotIrreducibleFlag):
        build_context("B", 2, 2)
    with pytest.raises(InvalidArgument):
        build_context("A", 2, 3)


def test_sqgp_dims_follow_weyl_dimensions(ctx):
    f_alg, v_alg = sqgp_relations(ctx)
    rs = ctx.rs
    want = [rs.weyl_dimension(tuple(k * c for c in ctx.lam)) for k in range(4)]
    assert graded_dims(f_alg, 3).dims == want
    assert graded_dims(v_alg, 3).dims == want
    assert f_alg.relation_dim == ctx.N**2 - want[2]


def test_sqgp_small_cases():
    f_alg, _ = sqgp_relations(build_context("A", 1, 1))
    assert graded_dims(f_alg, 3).dims == [1, 2, 3, 4]
    f_alg, _ = sqgp_relations(build_context("A", 2, 1))
    assert graded_dims(f_alg, 3).dims == [1, 3, 6, 10]


def test_coordinate_relations_counit(ctx):
    fam_a, fam_b, norm = coordinate_relations(ctx)
    n = ctx.N
    assert fam_a and fam_b
    for rel in fam_a + fam_b:
        assert counit_of_z_relation(rel, n) == 0
    assert norm.get((n - 1) * n + (n - 1), 0) == ONE


def test_fiber_dims_match_binomials(ctx):
    M = ctx.M
    for which, top in (("del", M), ("delbar", M), ("d", 2 * M)):
        got = derham_dims(ctx, which, top + 1).dims
        assert got == [comb(top, k) for k in range(top + 2)]
        assert got == expected_dims(ctx, which, top + 1)


def test_fiber_dims_against_specialized_oracle(ctx):
    for which in ("del", "delbar", "d"):
        A = fiber_presentation(ctx, which).algebra
        maxdeg = 3 if A.n <= 6 else 2
        rels = specialize(A.relation_pairs(), Q0)
        assert brute_force_dims(A.n, rels, maxdeg) == graded_dims(A, maxdeg).dims


def test_relation_dims(ctx):
    M = ctx.M
    assert fiber_presentation(ctx, "del").relation_dims == {"S": M * (M + 1) // 2}
    assert fiber_presentation(ctx, "delbar").relation_dims == {"S": M * (M + 1) // 2}
    d = fiber_presentation(ctx, "d").relation_dims
    assert d["S_del"] == d["S_delbar"] == M * (M + 1) // 2
    assert d["J"] == M * M
    assert d["total"] == M * (M + 1) + M * M


def test_unknown_calculus():
    with pytest.raises(InvalidArgument):
        fiber_presentation(build_context("A", 1, 1), "dd")


def test_quadratic_dual_is_symmetric(ctx):
    # R-perp in V (x) V generates a quadratic algebra of dims C(M+k-1, k)
    A = fiber_presentation(ctx, "del").algebra
    n = A.n
    mat = ExactMatrix(len(A.relations), n * n, dict(enumerate(A.relations)))
    perp = [{divmod(j, n): v for j, v in vec.items()} for vec in mat.kernel()]
    dual = QuadraticAlgebra(n, perp)
    assert graded_dims(dual, 3).dims == [comb(n + k - 1, k) for k in range(4)]


def test_relations_are_weight_homogeneous(ctx):
    for which in ("del", "delbar", "d"):
        pres = fiber_presentation(ctx, which)
        n = pres.algebra.n
        for row in pres.algebra.relations:
            tags = set()
            for flat in row:
                a, b = divmod(flat, n)
                tags.add(tuple(x + y for x, y in zip(pres.weights[a], pres.weights[b])))
            assert len(tags) == 1


def test_generator_weights(ctx):
    pres = fiber_presentation(ctx, "d")
    rs = ctx.rs
    for (kind, beta), w in zip(pres.generators, pres.weights):
        bw = tuple(rs.root_weight(beta))
        assert w == (bw if kind == "x" else tuple(-c for c in bw))


def _expected_graded_failures(ctx):
    """Pairs where the stated pure exponents cannot hold: distinct roots with nonzero pairing."""
    roots = ctx.par.complement
    return sum(
        1 for b in roots for g in roots
        if sum(g) <= sum(b) and b != g and ctx.root_pairing(b, g) != 0
    )


def test_graded_stated_fails_only_on_pure_families(ctx):
    rep = graded_commutation_check(ctx, "d", "stated")
    bad = _expected_graded_failures(ctx)
    assert rep.details["xx"]["failed"] == bad
    assert rep.details["yy"]["failed"] == bad
    assert rep.details["yx"]["failed"] == 0
    assert rep.details["yx"]["checked"] == ctx.M**2
    assert rep.passed == (bad == 0)
    if not rep.passed:
        fam, beta, gamma = rep.witness
        assert fam in ("xx", "yy") and beta != gamma


def test_graded_opposite_passes(ctx):
    for which in ("del", "delbar", "d"):
        assert graded_commutation_check(ctx, which, "opposite").passed


def test_graded_failure_counts():
    counts = {k: _expected_graded_failures(build_context(*k))
              for k in [("A", 1, 1), ("A", 2, 1), ("A", 3, 2), ("B", 2, 1)]}
    assert counts == {("A", 1, 1): 0, ("A", 2, 1): 1, ("A", 3, 2): 4, ("B", 2, 1): 2}


def test_graded_bad_convention():
    with pytest.raises(InvalidArgument):
        graded_commutation_check(build_context("A", 1, 1), "d", "reversed")


@pytest.mark.parametrize("which", ["del", "delbar", "d"])
def test_levi_invariance(ctx, which):
    assert levi_invariance_check(ctx, which).passed


def test_volume_form(ctx):
    rep = volume_form_check(ctx)
    assert rep.passed, rep.witness
    assert rep.details["top_dim"] == 1 and rep.details["above_top"] == 0
    assert not any(rep.details["top_weight"])
    # the holomorphic top line has weight 2 rho of the nilradical
    rs = ctx.rs
    want = [0] * rs.rank
    for beta in ctx.par.complement:
        want = [a + b for a, b in zip(want, rs.root_weight(beta))]
    assert rep.details["del_top_weight"] == tuple(want)


def test_spectrum(ctx):
    rep = spectrum_check(ctx)
    assert rep.passed
    rs = ctx.rs
    two_lam = tuple(2 * c for c in ctx.lam)
    assert rep.details["plus"] == rs.weyl_dimension(two_lam)


def test_central(ctx):
    assert central_check(ctx).passed


def test_non_central_element():
    ctx = build_context("A", 2, 1)
    alg, c = mixed_algebra(ctx)
    n = ctx.N
    partial = {(n, 0): ONE}
    assert not all(central_degree3_check(alg, partial, g) for g in range(alg.n))


def test_restricted(ctx):
    rep = restricted_check(ctx)
    assert rep.passed
    assert rep.details["component_dim"] >= 1

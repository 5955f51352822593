from fractions import Fraction

import pytest

from qflag.braiding import (
    EXPECTED_SYMBOLS,
    braid,
    intertwiner_failures,
    levi_form,
    restricted_braid_check,
    triangularity_symbols,
    verify_crels,
    verify_ybe,
)
from qflag.flagcalc import build_context, restricted_check, spectrum_check
from qflag.linalg import ExactMatrix, RowReducer
from qflag.qfield import ONE, ZERO, qpow
from qflag.repkit import build_irrep, isotypic_decomposition, levi_components, tensor
from qflag.rootdata import build_root_system

from conftest import CTX

SYMBOL_ZERO = {
    # entries (i,j),(k,l) outside the swap i=l, j=k that are allowed to be nonzero
    "<": lambda wi, wj, wk, wl, gt: gt(wj, wk) and gt(wl, wi),
}


def commutant_braiding(V):
    """Oracle: solve for X on V (x) V with Delta(u) X = X Delta(u) for all
    generators, X[(i,j),(k,l)] = 0 unless (i,j)=(l,k) or the '<' rule allows it,
    and X fixing v_top (x) v_top with eigenvalue q^{(lam,lam)}."""
    rs = V.rs
    n = V.dim
    T = tensor(V, V)
    n2 = n * n

    def gt(a, b):
        return a != b and rs.dominates(a, b)

    allowed = []
    for r in range(n2):
        i, j = divmod(r, n)
        for c in range(n2):
            k, l = divmod(c, n)
            w = (V.weights[i], V.weights[j], V.weights[k], V.weights[l])
            if (i == l and j == k) or SYMBOL_ZERO["<"](*w, gt):
                wij = tuple(a + b for a, b in zip(V.weights[i], V.weights[j]))
                wkl = tuple(a + b for a, b in zip(V.weights[k], V.weights[l]))
                if wij == wkl:
                    allowed.append((r, c))
    index = {rc: t for t, rc in enumerate(allowed)}
    red = RowReducer()
    gens = [T.E[i] for i in range(rs.rank)] + [T.F[i] for i in range(rs.rank)]
    cols_of = [g.columns() for g in gens]
    for g, gcols in zip(gens, cols_of):
        # (g X - X g)[r, c] = sum_s g[r,s] X[s,c] - sum_s X[r,s] g[s,c]
        eqs = {}
        for (s, c), t in index.items():
            for r, v in gcols[s].items():
                eqs.setdefault((r, c), {})
                eqs[(r, c)][t] = eqs[(r, c)].get(t, ZERO) + v
        for (r, s), t in index.items():
            for c, v in g.row(s).items():
                eqs.setdefault((r, c), {})
                eqs[(r, c)][t] = eqs[(r, c)].get(t, ZERO) - v
        for eq in eqs.values():
            red.add({k: v for k, v in eq.items() if v})
    top = V.hw
    lam = V.weights[top]
    tt = top * n + top
    rhs_col = len(allowed)
    red.add({index[(tt, tt)]: ONE, rhs_col: -qpow(rs.pairing(lam, lam))})
    assert rhs_col not in red.pivots
    free = [t for t in range(len(allowed)) if t not in red.pivots]
    assert not free, "braiding not pinned down"
    rows = {}
    for t, (r, c) in enumerate(allowed):
        v = -red.pivots[t].get(rhs_col, ZERO)
        if v:
            rows.setdefault(r, {})[c] = v
    return ExactMatrix(n2, n2, rows)


@pytest.mark.parametrize("key", [("A", 1, 1), ("A", 2, 1), ("A", 2, 2)])
def test_braiding_matches_commutant_oracle(key):
    ctx = build_context(*key)
    assert ctx.rfamily.rh == commutant_braiding(ctx.V)


def test_sl2_braiding_closed_form():
    # V(1) of U_q(sl2), basis (lower, top); package q is the square root of the usual q
    ctx = build_context("A", 1, 1)
    R = ctx.rfamily.rh
    q = qpow
    expected = ExactMatrix.from_dense([
        [q(1), ZERO, ZERO, ZERO],
        [ZERO, q(1) - q(-3), q(-1), ZERO],
        [ZERO, q(-1), ZERO, ZERO],
        [ZERO, ZERO, ZERO, q(1)],
    ])
    assert R == expected


@pytest.mark.parametrize("key", CTX)
def test_family_is_intertwining_and_triangular(key):
    ctx = build_context(*key)
    fam = ctx.rfamily
    for op in fam.ops.values():
        assert intertwiner_failures(op) == []
    symbols = fam.symbols()
    for name, sym in EXPECTED_SYMBOLS.items():
        assert sym in symbols[name], (name, symbols[name])
    n2 = ctx.N**2
    assert fam.rh @ fam.rhm == ExactMatrix.identity(n2)
    assert fam.ra @ fam.rgm == ExactMatrix.identity(n2)
    assert fam.rg @ fam.ram == ExactMatrix.identity(n2)


@pytest.mark.parametrize("key", CTX)
def test_yang_baxter_and_crels(key):
    ctx = build_context(*key)
    assert verify_ybe(ctx.rfamily, mixed=ctx.N <= 5).passed
    assert verify_crels(ctx.rfamily).passed


def test_ybe_detects_perturbation():
    fam = build_context("A", 2, 1).rfamily
    rows = {r: dict(row) for r, row in fam.rh.rows.items()}
    r, c, v = next(iter(fam.rh.entries()))
    rows[r][c] = v + ONE
    bad = ExactMatrix(fam.rh.nrows, fam.rh.ncols, rows)
    assert not verify_ybe(fam, rh=bad).passed


@pytest.mark.parametrize("key", CTX)
def test_spectrum_against_decomposition(key):
    ctx = build_context(*key)
    rep = spectrum_check(ctx)
    assert rep.passed, rep.details
    rs = ctx.rs
    two = tuple(2 * c for c in ctx.lam)
    lower = tuple(a - b for a, b in zip(two, rs.simple_root(ctx.par.node)))
    assert rep.details["plus"] == rs.weyl_dimension(two)
    assert rep.details["minus"] == rs.weyl_dimension(lower)


def projected_levi_form(rs, nodes, mu, nu):
    """Oracle: ambient form of the orthogonal projections onto the Levi roots."""
    nodes = list(nodes)
    if not nodes:
        return Fraction(0)
    G = [[Fraction(rs.root_gram[a][b]) for b in nodes] for a in nodes]
    # solve G c = ((mu, alpha_a))_a for the projection coefficients
    def coeffs(w):
        rhs = [Fraction(rs.pairing_with_simple(w, a)) for a in nodes]
        k = len(nodes)
        aug = [G[r][:] + [rhs[r]] for r in range(k)]
        for c in range(k):
            p = next(r for r in range(c, k) if aug[r][c] != 0)
            aug[c], aug[p] = aug[p], aug[c]
            aug[c] = [x / aug[c][c] for x in aug[c]]
            for r in range(k):
                if r != c:
                    aug[r] = [x - aug[r][c] * y for x, y in zip(aug[r], aug[c])]
        return [aug[r][k] for r in range(k)]
    cm, cn = coeffs(mu), coeffs(nu)
    return sum(cm[a] * G[a][b] * cn[b] for a in range(len(nodes)) for b in range(len(nodes)))


@pytest.mark.parametrize("key", CTX)
def test_levi_form_oracle(key):
    ctx = build_context(*key)
    for w in set(ctx.V.weights):
        for w2 in set(ctx.V.weights):
            assert levi_form(ctx.rs, ctx.levi_nodes, w, w2) == projected_levi_form(
                ctx.rs, ctx.levi_nodes, w, w2)


def test_restricted_braiding_projective_plane():
    ctx = build_context("A", 2, 1)
    rep = restricted_check(ctx)
    assert rep.passed
    assert rep.details["component_dim"] == 2
    # highest weight of the 2-dim component is lam - alpha_1
    nu = tuple(a - b for a, b in zip(ctx.lam, ctx.rs.simple_root(0)))
    expected = Fraction(ctx.rs.pairing(nu, nu)) - projected_levi_form(ctx.rs, ctx.levi_nodes, nu, nu)
    assert rep.details["scalar_exponent"] == expected == Fraction(1, 2)


@pytest.mark.parametrize("key", CTX)
def test_restricted_braiding_all_component_pairs(key):
    ctx = build_context(*key)
    comps = levi_components(ctx.V, ctx.levi_nodes)
    for cv in comps:
        for cw in comps:
            assert restricted_braid_check(ctx.V, ctx.V, cv, cw, ctx.levi_nodes).passed


def test_torus_only_levi():
    # A1: the Levi is the torus, both sides are diagonal
    ctx = build_context("A", 1, 1)
    rep = restricted_check(ctx)
    assert rep.passed and rep.details["dims"] == (1, 1)
    assert rep.details["scalar_exponent"] == ctx.rs.pairing((-1,), (-1,))


def test_braid_between_different_modules():
    rs = build_root_system("B", 2)
    V = build_irrep(rs, (1, 0))
    W = build_irrep(rs, (0, 1))
    op = braid(V, W)
    assert intertwiner_failures(op) == []
    assert op.matrix.rank() == V.dim * W.dim

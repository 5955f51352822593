"""Relation data and verification suites for one irreducible flag manifold.

A ``FlagContext`` fixes a Lie type, a crossed node s with lambda = omega_s, the
module V = V(lambda) with its highest weight vector moved to the last basis
position, the dual module, and the braiding matrices built from them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb

from .braiding import RFamily, restricted_braid_check, verify_crels, verify_ybe
from .errors import InvalidArgument, RankMismatch
from .linalg import ExactMatrix, RowReducer, vec_axpy
from .qfield import ONE, qpow
from .quadalg import (
    QuadraticAlgebra,
    filtered_relation_check,
    graded_dims,
    pair_filtration,
)
from .report import CheckReport
from .repkit import build_irrep, dual_module, isotypic_decomposition, levi_components, tensor
from .rootdata import build_root_system, parabolic

__all__ = [
    "FlagContext",
    "CalculusPresentation",
    "build_context",
    "coordinate_relations",
    "sqgp_relations",
    "mixed_algebra",
    "fiber_presentation",
    "derham_dims",
    "graded_commutation_check",
    "volume_form_check",
    "spectrum_check",
    "restricted_check",
    "levi_invariance_check",
    "expected_dims",
]


class FlagContext:
    """All derived data for a Lie type and crossed node."""

    def __init__(self, kind, rank, s):
        self.rs = build_root_system(kind, rank)
        self.par = parabolic(self.rs, s)
        rs = self.rs
        k = self.par.node
        self.lam = rs.fundamental_weight(k)
        base = build_irrep(rs, self.lam)
        order = list(range(1, base.dim)) + [0]
        self.V = base.reordered(order, hw=base.dim - 1, name=f"V{list(self.lam)}")
        self.Vd = dual_module(self.V)
        self.N = self.V.dim
        self.lam_sq = rs.pairing(self.lam, self.lam)
        self.alpha_sq = rs.root_gram[k][k]
        # beta -> index i with wt(v_i) = lambda - beta
        by_weight = {w: i for i, w in enumerate(self.V.weights)}
        self.root_index = {}
        for beta in self.par.complement:
            bw = rs.root_weight(beta)
            target = tuple(a - b for a, b in zip(self.lam, bw))
            if target not in by_weight:
                raise RankMismatch(f"no basis vector of weight lambda - {beta}")
            self.root_index[beta] = by_weight[target]
        self.I1 = [self.root_index[beta] for beta in self.par.complement]
        if len(set(self.I1)) != self.M:
            raise RankMismatch("roots of the complement do not index distinct basis vectors")

    @property
    def key(self):
        return (self.rs.kind, self.rs.rank, self.par.s)

    @property
    def label(self):
        return f"{self.rs.kind}{self.rs.rank},s={self.par.s}"

    @property
    def M(self):
        return self.par.M

    @property
    def levi_nodes(self):
        return self.par.levi_nodes

    @cached_property
    def rfamily(self):
        return RFamily(self.V, self.Vd, self.lam_sq, self.alpha_sq)

    def root_pairing(self, beta, gamma):
        rs = self.rs
        return rs.pairing(rs.root_weight(beta), rs.root_weight(gamma))


def build_context(kind, rank, s):
    return _cached_context(str(kind).upper(), rank, s)


@lru_cache(maxsize=None)
def _cached_context(kind, rank, s):
    return FlagContext(kind, rank, s)


# ------------------------------------------------------ coordinate relations


def _entry(M, n, a, b, c, d):
    return M[a * n + b, c * n + d]


def coordinate_relations(ctx):
    """Relations among the z_ij, indexed by z = i * N + j.

    Returns ``(family_a, family_b, normalization)``: two lists of quadratic
    relations ``{(z1, z2): coeff}`` (one per index quadruple, zero ones
    dropped) and the linear form ``{z: coeff}`` which equals 1.
    """
    fam = ctx.rfamily
    return _z_relations(ctx.N, fam.P_hat, fam.P_check, fam.ra, fam.C, ctx.lam_sq)


def _z_relations(n, P_hat, P_check, ra, C, lam_sq):
    ra_rows = ra.rows
    fam_a = []
    fam_b = []
    for i in range(n):
        for j in range(n):
            phat_row = P_hat.row(i * n + j)
            for k in range(n):
                for l in range(n):
                    # sum P^{ij}_{nm} ra^{mk}_{pt} z_np z_tl
                    rel = {}
                    for col, pv in phat_row.items():
                        nn, m = divmod(col, n)
                        for c2, rv in ra_rows.get(m * n + k, {}).items():
                            p, t = divmod(c2, n)
                            key = (nn * n + p, t * n + l)
                            vec_axpy(rel, pv * rv, {key: ONE})
                    if rel:
                        fam_a.append(rel)
    for k in range(n):
        for l in range(n):
            pcheck_row = P_check.row(k * n + l)
            for i in range(n):
                for j in range(n):
                    # sum Pcheck^{kl}_{mt} ra^{jm}_{np} z_in z_pt
                    rel = {}
                    for col, pv in pcheck_row.items():
                        m, t = divmod(col, n)
                        for c2, rv in ra_rows.get(j * n + m, {}).items():
                            nn, p = divmod(c2, n)
                            key = (i * n + nn, p * n + t)
                            vec_axpy(rel, pv * rv, {key: ONE})
                    if rel:
                        fam_b.append(rel)
    scale = qpow(lam_sq)
    norm = {}
    for i, j, v in C.entries():
        norm[i * n + j] = scale * v
    return fam_a, fam_b, norm


def counit_of_z_relation(rel, n):
    """Value of the counit z_ij -> delta_iN delta_jN on a quadratic z-relation."""
    top = (n - 1) * n + (n - 1)
    return rel.get((top, top), 0)


# ------------------------------------------------------- quadratic algebras


def _weight_tag(w):
    return tuple(w)


def sqgp_relations(ctx):
    """Presentations on f_1..f_N and on v_1..v_N."""
    fam = ctx.rfamily
    n = ctx.N

    def rows_of(M):
        return [{divmod(c, n): v for c, v in M.row(r).items()} for r in range(n * n) if M.row(r)]

    f_alg = QuadraticAlgebra(
        n, rows_of(fam.P_hat), labels=[f"f{i + 1}" for i in range(n)],
        grading=[_weight_tag(w) for w in ctx.Vd.weights],
    )
    v_alg = QuadraticAlgebra(
        n, rows_of(fam.P_check), labels=[f"v{i + 1}" for i in range(n)],
        grading=[_weight_tag(w) for w in ctx.V.weights],
    )
    return f_alg, v_alg


def mixed_algebra(ctx):
    """Algebra on f_1..f_N, v_1..v_N and the candidate central element c."""
    fam = ctx.rfamily
    n = ctx.N
    rels = []
    for r in range(n * n):
        row = fam.P_hat.row(r)
        if row:
            rels.append({divmod(c, n): v for c, v in row.items()})
        row = fam.P_check.row(r)
        if row:
            rels.append({(a + n, b + n): v for (a, b), v in
                         ((divmod(c, n), v) for c, v in row.items())})
    scale = qpow(ctx.lam_sq)
    for i in range(n):
        for j in range(n):
            rel = {(n + i, j): ONE}
            for c, v in fam.rgm.row(i * n + j).items():
                k, l = divmod(c, n)
                vec_axpy(rel, -scale * v, {(k, n + l): ONE})
            rels.append(rel)
    grading = [(1, 0) + tuple(w) for w in ctx.Vd.weights] + [(0, 1) + tuple(w) for w in ctx.V.weights]
    labels = [f"f{i + 1}" for i in range(n)] + [f"v{i + 1}" for i in range(n)]
    alg = QuadraticAlgebra(2 * n, rels, labels=labels, grading=grading)
    c = {(n + i, i): ONE for i in range(n)}
    return alg, c


# ------------------------------------------------------------------ fibers


@dataclass
class CalculusPresentation:
    which: str
    algebra: QuadraticAlgebra
    generators: list  # (kind, beta) with kind "x" or "y"
    relation_dims: dict
    action: dict = field(repr=False)  # ("E"|"F", j) -> ExactMatrix on generators
    weights: list = field(repr=False, default=None)


_WHICH = {"del": "del", "∂": "del", "delbar": "delbar", "∂̄": "delbar", "d": "d"}


def _normalize_which(which):
    try:
        return _WHICH[which]
    except KeyError:
        raise InvalidArgument(f"unknown calculus {which!r}; use del, delbar or d") from None


def _restricted_rows(M, n, I1, pos, offset_a=0, offset_b=0):
    rows = []
    I1set = set(I1)
    for r in range(n * n):
        rel = {}
        for c, v in M.row(r).items():
            k, l = divmod(c, n)
            if k in I1set and l in I1set:
                rel[(offset_a + pos[k], offset_b + pos[l])] = v
        if rel:
            rows.append(rel)
    return rows


def _span_dim(rows):
    red = RowReducer()
    for rel in rows:
        red.add({a * 100003 + b: v for (a, b), v in rel.items()})
    return len(red)


def _fiber_dual_action(ctx):
    """Levi E_j, F_j on the x generators: V* restricted to level one, dualized
    with the inverse antipode, E -> -(K^{-1} E)^T and F -> -(F K)^T."""
    V = ctx.V
    I1 = ctx.I1
    out = {}
    for j in ctx.levi_nodes:
        E = (V.E[j].transpose() @ V.Kinv[j]).scale(-ONE)
        F = (V.K[j] @ V.F[j].transpose()).scale(-ONE)
        out[("E", j)] = E.submatrix(I1, I1)
        out[("F", j)] = F.submatrix(I1, I1)
    return out


@lru_cache(maxsize=None)
def _fiber(ctx_key, which):
    ctx = build_context(*ctx_key)
    fam = ctx.rfamily
    n = ctx.N
    M = ctx.M
    I1 = ctx.I1
    pos = {i: p for p, i in enumerate(I1)}
    rs = ctx.rs
    roots = list(ctx.par.complement)
    # x_beta carries weight beta and y_beta weight -beta
    xw = [tuple(rs.root_weight(beta)) for beta in roots]
    yw = [tuple(-c for c in w) for w in xw]
    fil = [(1, -sum(beta)) for beta in roots]
    dims = {}
    if which in ("del", "delbar"):
        M_use = fam.Q_hat if which == "del" else fam.Q_check
        rows = _restricted_rows(M_use, n, I1, pos)
        dims["S"] = _span_dim(rows)
        if dims["S"] != M * (M + 1) // 2:
            raise RankMismatch(f"{which} relation space has dimension {dims['S']}, expected {M * (M + 1) // 2}")
        kind = "x" if which == "del" else "y"
        weights = xw if which == "del" else yw
        if which == "del":
            action = _fiber_dual_action(ctx)
        else:
            action = {}
            for j in ctx.levi_nodes:
                action[("E", j)] = ctx.V.E[j].submatrix(I1, I1)
                action[("F", j)] = ctx.V.F[j].submatrix(I1, I1)
        alg = QuadraticAlgebra(
            M, rows, labels=[f"{kind}{p + 1}" for p in range(M)],
            grading=[tuple(w) for w in weights], filtration=fil,
        )
        gens = [(kind, beta) for beta in roots]
        return CalculusPresentation(which, alg, gens, dims, action, weights)
    # total calculus: x_1..x_M then y_1..y_M
    rows_x = _restricted_rows(fam.Q_hat, n, I1, pos)
    rows_y = _restricted_rows(fam.Q_check, n, I1, pos, M, M)
    scale = qpow(ctx.lam_sq - ctx.alpha_sq)
    rows_j = []
    for i in I1:
        for j in I1:
            rel = {(M + pos[i], pos[j]): ONE}
            for c, v in fam.rgm.row(i * n + j).items():
                k, l = divmod(c, n)
                if k in pos and l in pos:
                    vec_axpy(rel, scale * v, {(pos[k], M + pos[l]): ONE})
            rows_j.append(rel)
    dims["S_del"] = _span_dim(rows_x)
    dims["S_delbar"] = _span_dim(rows_y)
    dims["J"] = _span_dim(rows_j)
    expected = {"S_del": M * (M + 1) // 2, "S_delbar": M * (M + 1) // 2, "J": M * M}
    for key, val in expected.items():
        if dims[key] != val:
            raise RankMismatch(f"{key} has dimension {dims[key]}, expected {val}")
    xact = _fiber_dual_action(ctx)
    action = {}
    for j in ctx.levi_nodes:
        for name in ("E", "F"):
            X = xact[(name, j)]
            Y = getattr(ctx.V, name)[j].submatrix(I1, I1)
            rows = {}
            for r, c, v in X.entries():
                rows.setdefault(r, {})[c] = v
            for r, c, v in Y.entries():
                rows.setdefault(M + r, {})[M + c] = v
            action[(name, j)] = ExactMatrix(2 * M, 2 * M, rows)
    grading = [(1, 0) + tuple(w) for w in xw] + [(0, 1) + tuple(w) for w in yw]
    alg = QuadraticAlgebra(
        2 * M, rows_x + rows_y + rows_j,
        labels=[f"x{p + 1}" for p in range(M)] + [f"y{p + 1}" for p in range(M)],
        grading=grading, filtration=fil + fil,
    )
    if alg.relation_dim != sum(expected.values()):
        raise RankMismatch(f"relation sum is not direct: {alg.relation_dim}")
    dims["total"] = alg.relation_dim
    gens = [("x", beta) for beta in roots] + [("y", beta) for beta in roots]
    return CalculusPresentation("d", alg, gens, dims, action, xw + yw)


def fiber_presentation(ctx, which):
    return _fiber(ctx.key, _normalize_which(which))


def derham_dims(ctx, which, maxdeg):
    return graded_dims(fiber_presentation(ctx, which).algebra, maxdeg)


def expected_dims(ctx, which, maxdeg):
    which = _normalize_which(which)
    top = 2 * ctx.M if which == "d" else ctx.M
    return [comb(top, k) for k in range(maxdeg + 1)]


# --------------------------------------------------------- graded relations


def graded_commutation_check(ctx, which, exponents="stated"):
    """q-commutation of fiber generators modulo lower filtration terms.

    For ht(gamma) <= ht(beta) the pure relations tested are
    x_b x_g + q^{(b,g)} x_g x_b and y_b y_g + q^{-(b,g)} y_g y_b, and for all
    pairs y_b x_g + q^{-(b,g)} x_g y_b.  ``exponents="opposite"`` negates the
    exponents of the two pure families and leaves the mixed one alone.
    """
    which = _normalize_which(which)
    if exponents not in ("stated", "opposite"):
        raise InvalidArgument(f"unknown exponent convention {exponents!r}")
    flip = -1 if exponents == "opposite" else 1
    pres = fiber_presentation(ctx, which)
    A = pres.algebra
    M = ctx.M
    roots = list(ctx.par.complement)
    failures = []
    counts = {}

    def test(family, beta, gamma, a, b, e):
        tally = counts.setdefault(family, [0, 0])
        tally[0] += 1
        t = {(a, b): ONE}
        vec_axpy(t, qpow(e), {(b, a): ONE})
        if not filtered_relation_check(A, t, pair_filtration(A, a, b)):
            tally[1] += 1
            failures.append((family, beta, gamma))

    ordered = [
        (p, r) for p, beta in enumerate(roots) for r, gamma in enumerate(roots)
        if sum(gamma) <= sum(beta)
    ]
    if which in ("del", "d"):
        for p, r in ordered:
            e = ctx.root_pairing(roots[p], roots[r])
            test("xx", roots[p], roots[r], p, r, flip * e)
    if which in ("delbar", "d"):
        off = M if which == "d" else 0
        for p, r in ordered:
            e = ctx.root_pairing(roots[p], roots[r])
            test("yy", roots[p], roots[r], off + p, off + r, -flip * e)
    if which == "d":
        for p in range(M):
            for r in range(M):
                e = ctx.root_pairing(roots[p], roots[r])
                test("yx", roots[p], roots[r], M + p, r, -e)
    details = {fam: {"checked": c, "failed": f} for fam, (c, f) in counts.items()}
    return CheckReport(
        f"graded-{which}", not failures, failures[0] if failures else None, details
    )


# ------------------------------------------------------------ Levi actions


def _apply_coproduct(pres, ctx, name, j, word):
    """Opposite iterated coproduct of E_j or F_j applied to a word of generators.

    The fiber algebras are module algebras for the co-opposite Hopf algebra:
    words transform under K (x) E + E (x) 1 and 1 (x) F + F (x) K^{-1}, and the
    x generators carry the matching dual action (see ``_fiber_dual_action``).
    """
    rs = ctx.rs
    X = pres.action[(name, j)]
    cols = X.columns()
    kexp = [rs.pairing_with_simple(w, j) for w in pres.weights]
    out = {}
    n = len(word)
    for p in range(n):
        if name == "E":
            factor = qpow(sum(kexp[g] for g in word[:p]))
        else:
            factor = qpow(-sum(kexp[g] for g in word[p + 1:]))
        for g2, v in cols[word[p]].items():
            key = word[:p] + (g2,) + word[p + 1:]
            out[key] = out[key] + factor * v if key in out else factor * v
    return out


def levi_invariance_check(ctx, which):
    """Every relation maps into the relation space under the Levi E_j, F_j."""
    pres = fiber_presentation(ctx, which)
    A = pres.algebra
    red = RowReducer()
    n = A.n
    for row in A.relations:
        red.add(row)
    for row in A.relations:
        for j in ctx.levi_nodes:
            for name in ("E", "F"):
                img = {}
                for flat, c in row.items():
                    word = divmod(flat, n)
                    for w2, v in _apply_coproduct(pres, ctx, name, j, word).items():
                        vec_axpy(img, c * v, {w2[0] * n + w2[1]: ONE})
                if not red.contains(img):
                    return CheckReport("levi-invariance", False, (name, j + 1))
    return CheckReport("levi-invariance", True)


def volume_form_check(ctx):
    """Top degree of the total fiber is a trivial Levi line; the del top line is not."""
    M = ctx.M
    rs = ctx.rs
    pres = fiber_presentation(ctx, "d")
    A = pres.algebra
    dims = graded_dims(A, 2 * M + 1).dims
    details = {"top_dim": dims[2 * M], "above_top": dims[2 * M + 1]}
    ok = dims[2 * M] == 1 and dims[2 * M + 1] == 0
    witness = None
    if ok:
        top = A.standard_monomials(2 * M)[0]
        weight = [0] * rs.rank
        for g in top:
            weight = [a + b for a, b in zip(weight, pres.weights[g])]
        details["top_weight"] = tuple(weight)
        if any(weight):
            ok = False
            witness = ("weight", tuple(weight))
        for j in ctx.levi_nodes:
            for name in ("E", "F"):
                img = _apply_coproduct(pres, ctx, name, j, top)
                if A.normal_form(img):
                    ok = False
                    witness = witness or (name, j + 1)
    dpres = fiber_presentation(ctx, "del")
    ddims = graded_dims(dpres.algebra, M + 1).dims
    details["del_top_dim"] = ddims[M]
    if ddims[M] == 1:
        top = dpres.algebra.standard_monomials(M)[0]
        weight = [0] * rs.rank
        for g in top:
            weight = [a + b for a, b in zip(weight, dpres.weights[g])]
        details["del_top_weight"] = tuple(weight)
        if not any(weight):
            ok = False
            witness = witness or ("del-weight-zero",)
    else:
        ok = False
        witness = witness or ("del-top-dim", ddims[M])
    return CheckReport("volume", ok, witness, details)


# ------------------------------------------------------------- other suites


def spectrum_check(ctx):
    """Eigenspace dimensions of rh against the decomposition of V (x) V."""
    fam = ctx.rfamily
    n2 = ctx.N**2
    plus = n2 - fam.P_hat.rank()
    minus = n2 - fam.Q_hat.rank()
    dec = isotypic_decomposition(tensor(ctx.V, ctx.V))
    dims = {w: m * cs[0].model.dim for w, m, cs in dec}
    rs = ctx.rs
    two_lam = tuple(2 * c for c in ctx.lam)
    alpha = rs.simple_root(ctx.par.node)
    second = tuple(a - b for a, b in zip(two_lam, alpha))
    expected_plus = dims.get(two_lam, 0)
    expected_minus = dims.get(second, 0)
    ok = plus == expected_plus and minus == expected_minus
    return CheckReport(
        "spectrum", ok, None if ok else (plus, minus),
        {"plus": plus, "minus": minus, "dim_V2lam": expected_plus,
         "dim_V2lam_minus_alpha": expected_minus},
    )


def restricted_check(ctx):
    """Restricted braiding on the level-one Levi component of V, paired with itself."""
    comps = levi_components(ctx.V, ctx.levi_nodes)
    I1 = set(ctx.I1)
    chosen = None
    for comp in comps:
        support = set()
        for col in comp.embedding.columns():
            support.update(col)
        if support <= I1:
            chosen = comp
            break
    if chosen is None:
        return CheckReport("restricted", False, "no level-one component")
    rep = restricted_braid_check(ctx.V, ctx.V, chosen, chosen, ctx.levi_nodes)
    rep.details["component_dim"] = chosen.model.dim
    return rep


def ybe_check(ctx):
    return verify_ybe(ctx.rfamily)


def crels_check(ctx):
    return verify_crels(ctx.rfamily)


def central_check(ctx):
    from .quadalg import central_degree3_check

    alg, c = mixed_algebra(ctx)
    bad = [g for g in range(alg.n) if not central_degree3_check(alg, c, g)]
    return CheckReport("central", not bad, alg.labels[bad[0]] if bad else None,
                       {"generators": alg.n})


def graded_check(ctx, exponents="stated"):
    reports = [graded_commutation_check(ctx, w, exponents) for w in ("del", "delbar", "d")]
    bad = [r for r in reports if not r.passed]
    return CheckReport(
        "graded", not bad, (bad[0].name, bad[0].witness) if bad else None,
        {r.name: r.details for r in reports},
    )


def dims_check(ctx):
    M = ctx.M
    out = {}
    ok = True
    for which, top in (("del", M + 1), ("delbar", M + 1), ("d", 2 * M + 1)):
        got = derham_dims(ctx, which, top).dims
        exp = expected_dims(ctx, which, top)
        out[which] = got
        ok = ok and got == exp
    return CheckReport("dims", ok, None if ok else out, out)

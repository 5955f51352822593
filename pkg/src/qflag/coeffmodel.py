"""Matrix coefficients c_{f,x}(u) = f(u x) of finite-dimensional modules.

Products follow c_{f,x} c_{g,y} = c_{f (x) g, x (x) y} on the tensor product
module.  Equality is decided by a canonical form: each module is split into
irreducible components, and an element becomes, for every highest weight mu, a
tensor in V(mu)* (x) V(mu) written in the fixed basis of ``build_irrep``.
Matrix coefficients of distinct irreducibles are linearly independent, so two
elements agree as functionals iff their canonical forms agree.
"""

from __future__ import annotations

from .errors import InvalidArgument
from .linalg import vec_axpy
from .qfield import ONE, LaurentRat, qpow
from .report import CheckReport
from .repkit import build_irrep, isotypic_decomposition, tensor

__all__ = [
    "MCElement",
    "mc",
    "product",
    "unit",
    "z_generator",
    "verify_z_relations",
    "verify_c_straightening",
]

_TENSOR_CACHE = {}


def _tensor(V, W):
    key = (id(V), id(W))
    hit = _TENSOR_CACHE.get(key)
    if hit is None or hit[0] is not V or hit[1] is not W:
        hit = (V, W, tensor(V, W))
        _TENSOR_CACHE[key] = hit
    return hit[2]


def _clean(vec):
    return {k: (v if isinstance(v, LaurentRat) else LaurentRat(v)) for k, v in vec.items() if v}


class MCElement:
    """Finite sum of matrix coefficients ``c * c_{f,x}`` over weight modules.

    Summands are ``(W, f, x)`` with ``f`` a sparse vector in dual-basis
    coordinates of W* and ``x`` a sparse vector in W.
    """

    __slots__ = ("summands", "_canonical")

    def __init__(self, summands=()):
        self.summands = [(W, _clean(f), _clean(x)) for W, f, x in summands]
        self.summands = [s for s in self.summands if s[1] and s[2]]
        self._canonical = None

    def __add__(self, other):
        return MCElement(self.summands + other.summands)

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MCElement):
            return product(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        c = c if isinstance(c, LaurentRat) else LaurentRat(c)
        if not c:
            return MCElement()
        return MCElement([(W, {k: c * v for k, v in f.items()}, x) for W, f, x in self.summands])

    def evaluate(self, word=()):
        """Value on a word of generators ``(kind, node)``, kind in E, F, K, Kinv.

        The word acts on x from the right end first.
        """
        total = LaurentRat(0)
        for W, f, x in self.summands:
            vec = dict(x)
            for kind, node in reversed(tuple(word)):
                if kind not in ("E", "F", "K", "Kinv"):
                    raise InvalidArgument(f"unknown generator {kind!r}")
                vec = W.generator(kind, node).apply(vec)
            for k, v in vec.items():
                if k in f:
                    total = total + f[k] * v
        return total

    def counit(self):
        return self.evaluate(())

    def canonical(self):
        """``{mu: {(a, b): coeff}}`` meaning sum coeff * e_a^* (x) e_b in V(mu)* (x) V(mu)."""
        if self._canonical is not None:
            return self._canonical
        grouped = {}
        for W, f, x in self.summands:
            key = (id(W), tuple(sorted(x.items(), key=lambda kv: kv[0])))
            if key in grouped:
                vec_axpy(grouped[key][1], ONE, f)
            else:
                grouped[key] = (W, dict(f), x)
        out = {}
        for W, f, x in grouped.values():
            if not f:
                continue
            for mu, _mult, comps in isotypic_decomposition(W):
                for comp in comps:
                    px = comp.projection.apply(x)
                    if not px:
                        continue
                    fe = comp.embedding.apply_left(f)
                    if not fe:
                        continue
                    block = out.setdefault(mu, {})
                    for a, u in fe.items():
                        for b, v in px.items():
                            vec_axpy(block, u * v, {(a, b): ONE})
        self._canonical = {mu: blk for mu, blk in out.items() if blk}
        return self._canonical

    def is_zero(self):
        return not self.canonical()

    def __eq__(self, other):
        if not isinstance(other, MCElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"MCElement({len(self.summands)} summands)"


def mc(W, f, x):
    return MCElement([(W, f, x)])


def product(a, b):
    out = []
    for W, f, x in a.summands:
        for W2, g, y in b.summands:
            T = _tensor(W, W2)
            n2 = W2.dim
            fg = {i * n2 + j: u * v for i, u in f.items() for j, v in g.items()}
            xy = {i * n2 + j: u * v for i, u in x.items() for j, v in y.items()}
            out.append((T, fg, xy))
    return MCElement(out)


def unit(rs):
    """The constant function 1, as the coefficient of the trivial module."""
    triv = build_irrep(rs, tuple([0] * rs.rank))
    return mc(triv, {0: ONE}, {0: ONE})


# ------------------------------------------------------------- z-generators


def _coeff_v(ctx, i, j):
    """c^V_{f_i, v_j}."""
    return mc(ctx.V, {i: ONE}, {j: ONE})


def _coeff_vd(ctx, i, j):
    """c^{V*}_{v_i, f_j}: the functional v_i on V* paired with f_j."""
    return mc(ctx.Vd, {i: ONE}, {j: ONE})


def z_generator(ctx, i, j):
    """z_ij = c^V_{f_i, v_N} c^{V*}_{v_j, f_N}."""
    top = ctx.N - 1
    return product(_coeff_v(ctx, i, top), _coeff_vd(ctx, j, top))


def _quadratic(ctx, rel, cache):
    """Sum of coeff * z_a z_b for a relation ``{(a, b): coeff}`` over flat z-indices."""
    n = ctx.N
    summands = []
    for (a, b), c in rel.items():
        key = (a, b)
        if key not in cache:
            cache[key] = product(z_generator(ctx, *divmod(a, n)), z_generator(ctx, *divmod(b, n)))
        summands.extend(cache[key].scale(c).summands)
    return MCElement(summands)


def verify_c_straightening(ctx, rgm=None):
    """c^{V*}_{v_i,f_N} c^V_{f_j,v_N} = q^{(lam,lam)} sum rg^-[(i,j),(k,l)] c^V_{f_k,v_N} c^{V*}_{v_l,f_N}."""
    n = ctx.N
    top = n - 1
    rgm = ctx.rfamily.rgm if rgm is None else rgm
    scale = qpow(ctx.lam_sq)
    for i in range(n):
        for j in range(n):
            lhs = product(_coeff_vd(ctx, i, top), _coeff_v(ctx, j, top))
            rhs = MCElement()
            for col, v in rgm.row(i * n + j).items():
                k, l = divmod(col, n)
                rhs = rhs + product(_coeff_v(ctx, k, top), _coeff_vd(ctx, l, top)).scale(scale * v)
            if lhs != rhs:
                return CheckReport("c-straightening", False, (i + 1, j + 1))
    return CheckReport("c-straightening", True, None, {"pairs": n * n})


def verify_z_relations(ctx, override=None):
    """Check every z-relation as an identity of matrix coefficients.

    ``override`` maps matrix names (P_hat, P_check, ra, C, rgm) to replacement
    matrices; it exists so that a perturbed braiding can be shown to fail.
    """
    from .flagcalc import _z_relations

    fam = ctx.rfamily
    mats = {
        "P_hat": fam.P_hat,
        "P_check": fam.P_check,
        "ra": fam.ra,
        "C": fam.C,
        "rgm": fam.rgm,
    }
    if override:
        unknown = set(override) - set(mats)
        if unknown:
            raise InvalidArgument(f"cannot override {sorted(unknown)}")
        mats.update(override)
    n = ctx.N
    details = {}
    # counit of the generators
    for i in range(n):
        for j in range(n):
            val = z_generator(ctx, i, j).counit()
            if val != (ONE if i == j == n - 1 else 0):
                return CheckReport("z-relations", False, ("counit", i + 1, j + 1))
    fam_a, fam_b, norm = _z_relations(
        n, mats["P_hat"], mats["P_check"], mats["ra"], mats["C"], ctx.lam_sq
    )
    details["family_a"] = len(fam_a)
    details["family_b"] = len(fam_b)
    cache = {}
    for label, family in (("a", fam_a), ("b", fam_b)):
        for idx, rel in enumerate(family):
            if not _quadratic(ctx, rel, cache).is_zero():
                return CheckReport("z-relations", False, (label, idx), details)
    lin = MCElement()
    for z, c in norm.items():
        lin = lin + z_generator(ctx, *divmod(z, n)).scale(c)
    if lin != unit(ctx.rs):
        return CheckReport("z-relations", False, ("normalization",), details)
    straight = verify_c_straightening(ctx, mats["rgm"])
    if not straight.passed:
        return CheckReport("z-relations", False, ("c-straightening",) + straight.witness, details)
    return CheckReport("z-relations", True, None, details)

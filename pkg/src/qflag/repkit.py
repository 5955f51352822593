"""Finite-dimensional type-1 modules of the quantized enveloping algebra.

A ``WeightModule`` is a weight basis plus exact action matrices for every
``E_i``, ``F_i``, ``K_i`` and ``K_i^{-1}``.  Irreducible modules are built
weight space by weight space from words ``F_{i1} ... F_{ik} v`` and the
contravariant form ``<F_i x, y> = <x, E_i y>``; a word survives when its
column of the form is independent of the earlier ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DecompositionIncomplete, InvalidArgument, NonDominantWeight
from .linalg import ExactMatrix, RowReducer, vec_axpy
from .qfield import ONE, ZERO, qbinom, qint, qpow

__all__ = [
    "WeightModule",
    "LeviAction",
    "Component",
    "build_irrep",
    "dual_module",
    "tensor",
    "submodule",
    "highest_weight_vectors",
    "isotypic_decomposition",
    "levi_restriction",
    "levi_components",
    "relation_failures",
    "apply_word",
]


class WeightModule:
    """Weight basis with action matrices ``E[i]``, ``F[i]``, ``K[i]``, ``Kinv[i]``."""

    def __init__(self, rs, weights, E, F, labels=None, hw=None, name=""):
        self.rs = rs
        self.weights = [tuple(w) for w in weights]
        self.E = list(E)
        self.F = list(F)
        n = len(self.weights)
        self.K = []
        self.Kinv = []
        for i in range(rs.rank):
            exps = [rs.pairing_with_simple(w, i) for w in self.weights]
            self.K.append(ExactMatrix.diagonal(qpow(e) for e in exps))
            self.Kinv.append(ExactMatrix.diagonal(qpow(-e) for e in exps))
        self.labels = list(labels) if labels else [f"b{k}" for k in range(n)]
        self.hw = hw
        self.name = name
        self._decomposition = None

    @property
    def dim(self):
        return len(self.weights)

    def __repr__(self):
        return f"WeightModule({self.name or '?'}, dim={self.dim})"

    def k_exponent(self, index, node):
        """Exponent e with K_node acting on basis vector ``index`` by q**e."""
        return self.rs.pairing_with_simple(self.weights[index], node)

    def weight_spaces(self):
        spaces = {}
        for k, w in enumerate(self.weights):
            spaces.setdefault(w, []).append(k)
        return spaces

    def generator(self, kind, node):
        return {"E": self.E, "F": self.F, "K": self.K, "Kinv": self.Kinv}[kind][node]

    def highest_weight(self):
        if self.hw is None:
            raise InvalidArgument("module has no designated highest weight vector")
        return self.weights[self.hw]

    def reordered(self, order, hw=None, name=None):
        """Same module in the basis ``[b[order[0]], b[order[1]], ...]``."""
        pos = {old: new for new, old in enumerate(order)}

        def perm(m):
            return ExactMatrix(
                m.nrows, m.ncols,
                {pos[i]: {pos[j]: v for j, v in r.items()} for i, r in m.rows.items()},
            )

        return WeightModule(
            self.rs,
            [self.weights[k] for k in order],
            [perm(m) for m in self.E],
            [perm(m) for m in self.F],
            labels=[self.labels[k] for k in order],
            hw=pos[self.hw] if hw is None and self.hw is not None else hw,
            name=name or self.name,
        )

    def to_record(self):
        """Plain data with scalars in wire format."""
        def mat(m):
            return [[i, j, str(v)] for i, j, v in m.entries()]

        return {
            "name": self.name,
            "dimension": self.dim,
            "labels": self.labels,
            "weights": [list(w) for w in self.weights],
            "highest_weight_index": self.hw,
            "E": [mat(m) for m in self.E],
            "F": [mat(m) for m in self.F],
            "K": [mat(m) for m in self.K],
        }


@dataclass(frozen=True)
class LeviAction:
    """Action of the Levi subalgebra: E_j, F_j for j in ``nodes`` plus all K_i."""

    module: WeightModule
    nodes: tuple
    E: dict = field(repr=False)
    F: dict = field(repr=False)
    K: tuple = field(repr=False)
    Kinv: tuple = field(repr=False)


def levi_restriction(V, nodes):
    nodes = tuple(sorted(nodes))
    return LeviAction(
        module=V,
        nodes=nodes,
        E={j: V.E[j] for j in nodes},
        F={j: V.F[j] for j in nodes},
        K=tuple(V.K),
        Kinv=tuple(V.Kinv),
    )


# --------------------------------------------------------------- irreducibles


def _word_label(word):
    if not word:
        return "v"
    return "".join(f"F{i + 1}" for i in word) + "v"


@lru_cache(maxsize=None)
def build_irrep(rs, mu):
    """Irreducible module with highest weight ``mu`` (fundamental-weight coordinates)."""
    mu = tuple(mu)
    if not rs.is_dominant(mu):
        raise NonDominantWeight(f"{list(mu)} is not a dominant weight of {rs.label}")
    mu = tuple(int(c) for c in mu)
    r = rs.rank
    alpha = [rs.simple_root(i) for i in range(r)]

    def shift(w, i, sign):
        return tuple(a + sign * b for a, b in zip(w, alpha[i]))

    # per weight: basis words, Gram matrix on the basis, F- and E-coordinates
    basis = {mu: [()]}
    gram = {mu: ExactMatrix.identity(1)}
    fco = {}  # (weight, idx, i) -> coords of F_i b in basis[weight - alpha_i]
    eco = {}  # (weight, idx, i) -> coords of E_i b in basis[weight + alpha_i]
    levels = [[mu]]

    def gram_inner(weight, left, right_vec):
        """<basis[weight][left], y> for y given by coordinates."""
        row = gram[weight].row(left)
        total = ZERO
        for t, c in right_vec.items():
            g = row.get(t)
            if g is not None:
                total = total + g * c
        return total

    while True:
        targets = {}
        for w in levels[-1]:
            for i in range(r):
                nu = shift(w, i, -1)
                targets.setdefault(nu, None)
        new_level = []
        for nu in sorted(targets, key=lambda w: tuple(-c for c in w)):
            cands = []
            for i in range(r):
                up = shift(nu, i, +1)
                if up in basis:
                    for idx in range(len(basis[up])):
                        cands.append((i, idx))
            cands.sort(key=lambda c: ((c[0],) + basis[shift(nu, c[0], 1)][c[1]]))
            n = len(cands)
            G = [[ZERO] * n for _ in range(n)]
            for a in range(n):
                i, bi = cands[a]
                wi = shift(nu, i, 1)
                for b in range(a, n):
                    j, bj = cands[b]
                    wj = shift(nu, j, 1)
                    # y = E_i F_j b_j expressed in basis[wi]
                    y = {}
                    top = shift(wj, i, 1)
                    e_coords = eco.get((wj, bj, i))
                    if e_coords and top in basis:
                        for t, c in e_coords.items():
                            f_coords = fco.get((top, t, j), {})
                            vec_axpy(y, c, f_coords)
                    if i == j:
                        h = wj[i]
                        k = qint(h, rs.d[i])
                        if k:
                            vec_axpy(y, k, {bj: ONE})
                    val = gram_inner(wi, bi, y)
                    G[a][b] = val
                    G[b][a] = val
            red = RowReducer()
            chosen = []
            for a in range(n):
                col = {b: G[b][a] for b in range(n) if G[b][a]}
                if red.add(col) is not None:
                    chosen.append(a)
            if not chosen:
                continue
            new_level.append(nu)
            words = [(cands[a][0],) + basis[shift(nu, cands[a][0], 1)][cands[a][1]] for a in chosen]
            basis[nu] = words
            gbb = ExactMatrix(
                len(chosen), len(chosen),
                {x: {y: G[a][b] for y, b in enumerate(chosen)} for x, a in enumerate(chosen)},
            )
            gram[nu] = gbb
            # F-coordinates: G_BB a = G_{B,c}
            rhs = [{x: G[a][c] for x, a in enumerate(chosen) if G[a][c]} for c in range(n)]
            sols = gbb.solve_many(rhs)
            for c, (i, bidx) in enumerate(cands):
                fco[(shift(nu, i, 1), bidx, i)] = sols[c]
            # E-coordinates of each new basis vector
            for x, a in enumerate(chosen):
                for i in range(r):
                    up = shift(nu, i, 1)
                    if up not in basis:
                        continue
                    rhs_vec = {}
                    for t in range(len(basis[up])):
                        c = cands.index((i, t))
                        if G[c][a]:
                            rhs_vec[t] = G[c][a]
                    if rhs_vec:
                        eco[(nu, x, i)] = gram[up].solve(rhs_vec)
        if not new_level:
            break
        levels.append(new_level)

    # global basis: by depth, then lexicographic word
    entries = []
    for depth, lvl in enumerate(levels):
        for w in lvl:
            for idx, word in enumerate(basis[w]):
                entries.append((depth, word, w, idx))
    entries.sort(key=lambda e: (e[0], e[1]))
    index = {(e[2], e[3]): k for k, e in enumerate(entries)}
    dim = len(entries)
    expected = rs.weyl_dimension(mu)
    if dim != expected:
        raise DecompositionIncomplete(
            f"irrep {list(mu)} of {rs.label}: built dimension {dim}, expected {expected}"
        )
    E_rows = [dict() for _ in range(r)]
    F_rows = [dict() for _ in range(r)]
    for (w, idx, i), coords in fco.items():
        if w not in basis:
            continue
        src = index[(w, idx)]
        low = shift(w, i, -1)
        for t, c in coords.items():
            F_rows[i].setdefault(index[(low, t)], {})[src] = c
    for (w, idx, i), coords in eco.items():
        src = index[(w, idx)]
        up = shift(w, i, 1)
        for t, c in coords.items():
            E_rows[i].setdefault(index[(up, t)], {})[src] = c
    E = [ExactMatrix(dim, dim, E_rows[i]) for i in range(r)]
    F = [ExactMatrix(dim, dim, F_rows[i]) for i in range(r)]
    weights = [e[2] for e in entries]
    labels = [_word_label(e[1]) for e in entries]
    return WeightModule(rs, weights, E, F, labels=labels, hw=0,
                        name=f"V{list(mu)}")


# ----------------------------------------------------------- dual and tensor


def dual_module(V):
    """Dual module with dual basis f_i(v_j) = delta_ij.

    u acts by the transpose of its antipode image:
    E -> -K^{-1} E^T, F -> -F^T K, K -> K^{-1}.
    """
    rs = V.rs
    E = []
    F = []
    for i in range(rs.rank):
        E.append((V.Kinv[i] @ V.E[i].transpose()).scale(-ONE))
        F.append((V.F[i].transpose() @ V.K[i]).scale(-ONE))
    weights = [tuple(-c for c in w) for w in V.weights]
    labels = [f"{lab}*" for lab in V.labels]
    D = WeightModule(rs, weights, E, F, labels=labels, name=f"({V.name})*")
    D.hw = _basis_highest_vector(D)
    return D


def _basis_highest_vector(V):
    """Index of the basis vector spanning the top weight space, if unique."""
    hws = highest_weight_vectors(V)
    if len(hws) != 1 or len(hws[0][1]) != 1:
        return None
    vec = hws[0][1][0]
    if len(vec) != 1:
        return None
    return next(iter(vec))


def tensor(V, W):
    """Tensor product with Delta(E)=E(x)K+1(x)E, Delta(F)=F(x)1+K^{-1}(x)F."""
    if V.rs != W.rs:
        raise InvalidArgument("tensor factors over different root systems")
    rs = V.rs
    IV = ExactMatrix.identity(V.dim)
    IW = ExactMatrix.identity(W.dim)
    E = []
    F = []
    for i in range(rs.rank):
        E.append(V.E[i].kron(W.K[i]) + IV.kron(W.E[i]))
        F.append(V.F[i].kron(IW) + V.Kinv[i].kron(W.F[i]))
    weights = [tuple(a + b for a, b in zip(v, w)) for v in V.weights for w in W.weights]
    labels = [f"{a}(x){b}" for a in V.labels for b in W.labels]
    return WeightModule(rs, weights, E, F, labels=labels,
                        name=f"{V.name}(x){W.name}")


def submodule(V, vectors, hw=0, name="", nodes=None):
    """Module structure on the span of ``vectors`` (sparse weight vectors).

    The span must be invariant under E_j, F_j for j in ``nodes`` (all nodes by
    default); the other E_i, F_i are set to zero, so the result is only a
    module for the subalgebra those nodes generate.
    """
    if nodes is None:
        nodes = range(V.rs.rank)
    nodes = set(nodes)
    n = len(vectors)
    weights = []
    for vec in vectors:
        ws = {V.weights[k] for k in vec}
        if len(ws) != 1:
            raise InvalidArgument("submodule basis vectors must be weight vectors")
        weights.append(ws.pop())
    emb = ExactMatrix.from_columns(V.dim, vectors)
    E = []
    F = []
    for i in range(V.rs.rank):
        for store, gen in ((E, V.E[i]), (F, V.F[i])):
            if i not in nodes:
                store.append(ExactMatrix.zeros(n, n))
                continue
            images = [gen.apply(v) for v in vectors]
            coords = emb.solve_many(images)
            store.append(ExactMatrix(n, n, _columns_to_rows(coords)))
    return WeightModule(V.rs, weights, E, F, hw=hw, name=name)


def _columns_to_rows(cols):
    rows = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return rows


# ----------------------------------------------------- highest weight vectors


def _weight_order_key(rs, w):
    """Higher weights first: by total root-coordinate sum, then lexicographically."""
    return (-sum(rs.weight_to_root_coeffs(w)), tuple(-c for c in w))


def highest_weight_vectors(V, nodes=None):
    """Per weight, a basis of the joint kernel of the E_j (j in ``nodes``)."""
    if nodes is None:
        nodes = range(V.rs.rank)
    nodes = tuple(nodes)
    out = []
    spaces = V.weight_spaces()
    everything = list(range(V.dim))
    for w in sorted(spaces, key=lambda w: _weight_order_key(V.rs, w)):
        idx = spaces[w]
        rows = {}
        r = 0
        for j in nodes:
            for row in V.E[j].submatrix(everything, idx).rows.values():
                rows[r] = row
                r += 1
        ker = ExactMatrix(max(r, 1), len(idx), rows).kernel()
        if ker:
            out.append((w, [{idx[c]: v for c, v in vec.items()} for vec in ker]))
    return out


@dataclass
class Component:
    """One irreducible summand: highest weight, model, embedding and projection."""

    weight: tuple
    model: WeightModule
    embedding: ExactMatrix  # V -> columns of the ambient module
    projection: ExactMatrix = None  # ambient -> model coordinates


def apply_word(V, word, vec):
    """Apply F_{i1} ... F_{ik} (rightmost first) to a sparse vector."""
    for i in reversed(word):
        vec = V.F[i].apply(vec)
    return vec


def _word_of_label(label):
    word = []
    body = label[:-1]
    while body:
        assert body[0] == "F"
        k = 1
        while k < len(body) and body[k] != "F":
            k += 1
        word.append(int(body[1:k]) - 1)
        body = body[k:]
    return tuple(word)


def _model_words(model):
    return [_word_of_label(lab) for lab in model.labels]


def _attach_projections(V, comps):
    columns = []
    for c in comps:
        columns.extend(c.embedding.columns())
    if len(columns) != V.dim:
        raise DecompositionIncomplete(
            f"components span {len(columns)} of {V.dim} dimensions"
        )
    full = ExactMatrix.from_columns(V.dim, columns)
    try:
        inv = full.inverse()
    except Exception as exc:
        raise DecompositionIncomplete("component images are not independent") from exc
    start = 0
    for c in comps:
        d = c.embedding.ncols
        c.projection = inv.submatrix(list(range(start, start + d)), list(range(V.dim)))
        start += d
    return comps


def isotypic_decomposition(V):
    """Irreducible components of V as ``[(mu, multiplicity, [Component, ...])]``."""
    if V._decomposition is not None:
        return V._decomposition
    comps = []
    for w, vecs in highest_weight_vectors(V):
        model = build_irrep(V.rs, w)
        words = _model_words(model)
        for vec in vecs:
            cols = [apply_word(V, word, vec) for word in words]
            comps.append(Component(w, model, ExactMatrix.from_columns(V.dim, cols)))
    _attach_projections(V, comps)
    grouped = {}
    for c in comps:
        grouped.setdefault(c.weight, []).append(c)
    result = [(w, len(cs), cs) for w, cs in grouped.items()]
    V._decomposition = result
    return result


def levi_components(V, nodes):
    """Decomposition of V under the Levi subalgebra generated by ``nodes``.

    Each component's model is the submodule spanned by the closure of its
    highest weight vector under the retained F_j; its first basis vector is
    that highest weight vector.
    """
    nodes = tuple(sorted(nodes))
    comps = []
    for w, vecs in highest_weight_vectors(V, nodes):
        for vec in vecs:
            span = [vec]
            red = RowReducer()
            red.add(vec)
            frontier = [vec]
            while frontier:
                nxt = []
                for v in frontier:
                    for j in nodes:
                        img = V.F[j].apply(v)
                        if img and red.add(img) is not None:
                            span.append(img)
                            nxt.append(img)
                frontier = nxt
            emb = ExactMatrix.from_columns(V.dim, span)
            model = submodule(V, span, hw=0, name=f"L{list(w)}", nodes=nodes)
            comps.append(Component(w, model, emb))
    return _attach_projections(V, comps)


# ------------------------------------------------------------ relation check


def _commutator(a, b):
    return a @ b - b @ a


def relation_failures(V, nodes=None, first_only=False):
    """Names of defining relations violated by the action matrices.

    With ``nodes`` given only E_j, F_j for j in ``nodes`` (and all K_i) are
    checked, which is the Levi restriction.
    """
    rs = V.rs
    r = rs.rank
    nodes = tuple(range(r)) if nodes is None else tuple(nodes)
    I = ExactMatrix.identity(V.dim)
    bad = []

    def fail(name):
        bad.append(name)
        return first_only

    for i in range(r):
        if V.K[i] @ V.Kinv[i] != I and fail(f"K{i + 1}Kinv{i + 1}"):
            return bad
        for j in range(r):
            if _commutator(V.K[i], V.K[j]).rows and fail(f"K{i + 1}K{j + 1}"):
                return bad
    for j in nodes:
        for i in range(r):
            c = qpow(rs.root_gram[i][j])
            if V.K[i] @ V.E[j] != (V.E[j] @ V.K[i]).scale(c) and fail(f"K{i + 1}E{j + 1}"):
                return bad
            if V.K[i] @ V.F[j] != (V.F[j] @ V.K[i]).scale(c.inv()) and fail(f"K{i + 1}F{j + 1}"):
                return bad
    for i in nodes:
        qi = qpow(rs.d[i])
        for j in nodes:
            lhs = V.E[i] @ V.F[j] - V.F[j] @ V.E[i]
            if i == j:
                rhs = (V.K[i] - V.Kinv[i]).scale((qi - qi.inv()).inv())
            else:
                rhs = ExactMatrix.zeros(V.dim, V.dim)
            if lhs != rhs and fail(f"E{i + 1}F{j + 1}"):
                return bad
    for i in nodes:
        for j in nodes:
            if i == j:
                continue
            m = 1 - rs.cartan[i][j]
            for name, X in (("E", V.E), ("F", V.F)):
                total = ExactMatrix.zeros(V.dim, V.dim)
                for k in range(m + 1):
                    coeff = qbinom(m, k, rs.d[i])
                    if k % 2:
                        coeff = -coeff
                    term = ExactMatrix.identity(V.dim)
                    for _ in range(m - k):
                        term = term @ X[i]
                    term = term @ X[j]
                    for _ in range(k):
                        term = term @ X[i]
                    total = total + term.scale(coeff)
                if total.rows and fail(f"Serre{name}{i + 1}{j + 1}"):
                    return bad
    return bad

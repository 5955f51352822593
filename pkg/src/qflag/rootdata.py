"""Finite root systems, the integrally rescaled form on the weight lattice, and
parabolic bookkeeping for irreducible flag manifolds.

Weights are integer tuples in fundamental-weight coordinates.  Roots are kept
as tuples of simple-root coefficients; ``root_weight`` converts them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidArgument, NotInPositiveCone, NotIrreducibleFlag

__all__ = [
    "RootSystem",
    "ParabolicData",
    "build_root_system",
    "pairing",
    "parabolic",
    "height",
    "LIE_ALGEBRA_DIMENSION",
]


def _lie_dimension(kind, n):
    if kind == "A":
        return n * (n + 2)
    if kind in "BC":
        return n * (2 * n + 1)
    if kind == "D":
        return n * (2 * n - 1)
    return {("E", 6): 78, ("E", 7): 133, ("E", 8): 248, ("F", 4): 52, ("G", 2): 14}[
        (kind, n)
    ]


LIE_ALGEBRA_DIMENSION = _lie_dimension


def _simple_root_gram(kind, n):
    """Gram matrix of the simple roots, long roots of square length 2."""
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }
    if kind not in valid or not valid[kind]:
        raise InvalidArgument(f"no finite root system of type {kind}{n}")
    g = [[Fraction(0)] * n for _ in range(n)]

    def link(i, j, value):
        g[i][j] = g[j][i] = Fraction(value)

    if kind in "ABCD":
        for i in range(n):
            g[i][i] = Fraction(2)
        for i in range(n - 1):
            link(i, i + 1, -1)
        if kind == "B":
            g[n - 1][n - 1] = Fraction(1)
            link(n - 2, n - 1, Fraction(-1, 1))
        elif kind == "C":
            for i in range(n - 1):
                g[i][i] = Fraction(1)
            for i in range(n - 2):
                link(i, i + 1, Fraction(-1, 2))
            link(n - 2, n - 1, -1)
        elif kind == "D":
            link(n - 2, n - 1, 0)
            link(n - 3, n - 1, -1)
    elif kind == "E":
        # Bourbaki labelling: 1-3-4-5-...-n with 2 attached to 4
        for i in range(n):
            g[i][i] = Fraction(2)
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif kind == "F":
        for i, v in enumerate((2, 2, 1, 1)):
            g[i][i] = Fraction(v)
        link(0, 1, -1)
        link(1, 2, -1)
        link(2, 3, Fraction(-1, 2))
    elif kind == "G":
        g[0][0] = Fraction(2, 3)
        g[1][1] = Fraction(2)
        link(0, 1, -1)
    return g


def _invert(m):
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Root data of a finite-type simple Lie algebra."""

    kind: str
    rank: int
    cartan: tuple
    half_lengths: tuple  # d_i before rescaling, long roots have d_i = 1
    rescale: int
    weight_gram: tuple  # rescaled (omega_i, omega_j), integers
    root_gram: tuple  # rescaled (alpha_i, alpha_j), integers
    d: tuple  # rescaled half square lengths, q_i = q**d[i]
    positive_roots: tuple  # simple-root coefficient tuples
    highest_root: tuple
    _cartan_inverse: tuple = field(repr=False)

    @property
    def label(self):
        return f"{self.kind}{self.rank}"

    def __hash__(self):
        return hash((self.kind, self.rank))

    def __eq__(self, other):
        return (
            isinstance(other, RootSystem)
            and (self.kind, self.rank) == (other.kind, other.rank)
        )

    def __reduce__(self):
        return (build_root_system, (self.kind, self.rank))

    # --------------------------------------------------------------- weights

    def simple_root(self, i):
        """alpha_i in fundamental-weight coordinates (column i of the Cartan matrix)."""
        return tuple(self.cartan[k][i] for k in range(self.rank))

    def fundamental_weight(self, i):
        return tuple(int(k == i) for k in range(self.rank))

    def root_weight(self, coeffs):
        """Weight of sum_j coeffs[j] alpha_j."""
        r = self.rank
        return tuple(
            sum(self.cartan[k][j] * coeffs[j] for j in range(r)) for k in range(r)
        )

    def weight_to_root_coeffs(self, weight):
        """Simple-root coefficients of a weight (rational in general)."""
        inv = self._cartan_inverse
        r = self.rank
        return tuple(sum(inv[j][k] * weight[k] for k in range(r)) for j in range(r))

    def pairing(self, mu, nu):
        g = self.weight_gram
        r = self.rank
        return sum(mu[i] * g[i][j] * nu[j] for i in range(r) for j in range(r) if mu[i] and nu[j])

    def pairing_with_simple(self, mu, i):
        """(mu, alpha_i) = d_i * <mu, alpha_i^vee>."""
        return self.d[i] * mu[i]

    def dominates(self, mu, nu):
        """True iff mu - nu is a nonnegative integer combination of simple roots."""
        diff = tuple(a - b for a, b in zip(mu, nu))
        coeffs = self.weight_to_root_coeffs(diff)
        return all(c >= 0 and c.denominator == 1 for c in coeffs)

    def depth(self, mu, nu):
        """Height of mu - nu, assumed to lie in the root lattice."""
        return int(sum(self.weight_to_root_coeffs(tuple(a - b for a, b in zip(mu, nu)))))

    def is_dominant(self, mu):
        return len(mu) == self.rank and all(int(c) == c and c >= 0 for c in mu)

    def rho(self):
        return tuple([1] * self.rank)

    def weyl_dimension(self, mu):
        """Dimension of the irreducible module of highest weight mu."""
        rho = self.rho()
        shifted = tuple(a + b for a, b in zip(mu, rho))
        num = Fraction(1)
        for beta in self.positive_roots:
            b = self.root_weight(beta)
            num *= Fraction(self.pairing(shifted, b), self.pairing(rho, b))
        return int(num)

    def height(self, coeffs):
        return height(self, coeffs)


@lru_cache(maxsize=None)
def build_root_system(kind, rank):
    """Root data for type ``kind`` (one of A-G) and the given rank."""
    kind = str(kind).upper()
    if not isinstance(rank, int) or rank < 1:
        raise InvalidArgument(f"rank must be a positive integer, got {rank!r}")
    gram = _simple_root_gram(kind, rank)
    n = rank
    cartan = tuple(
        tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(n)) for i in range(n)
    )
    half = [gram[i][i] / 2 for i in range(n)]
    cinv = _invert(cartan)
    # omega_i = sum_j (A^{-1})_{ji} alpha_j, hence (omega_i, omega_j) = (A^{-1})_{ji} d_j
    wgram = [[cinv[j][i] * half[j] for j in range(n)] for i in range(n)]
    rescale = 1
    for row in wgram + gram:
        for v in row:
            rescale = math.lcm(rescale, v.denominator)
    weight_gram = tuple(tuple(int(v * rescale) for v in row) for row in wgram)
    root_gram = tuple(tuple(int(v * rescale) for v in row) for row in gram)
    d = tuple(int(h * rescale) for h in half)

    simple = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            bw = [sum(cartan[k][j] * beta[j] for j in range(n)) for k in range(n)]
            for i in range(n):
                # alpha_i-string through beta: beta - p alpha_i, ..., beta + r alpha_i
                p = 0
                while True:
                    cand = tuple(b - (p + 1) * (k == i) for k, b in enumerate(beta))
                    if cand in roots:
                        p += 1
                    else:
                        break
                r = p - bw[i]
                if r > 0:
                    up = tuple(b + (k == i) for k, b in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        new.append(up)
        frontier = new
    positive = tuple(sorted(roots, key=lambda b: (sum(b), b)))
    top = positive[-1]
    return RootSystem(
        kind=kind,
        rank=n,
        cartan=cartan,
        half_lengths=tuple(half),
        rescale=rescale,
        weight_gram=weight_gram,
        root_gram=root_gram,
        d=d,
        positive_roots=positive,
        highest_root=top,
        _cartan_inverse=tuple(tuple(r) for r in cinv),
    )


def pairing(rs, mu, nu):
    return rs.pairing(mu, nu)


def height(rs, coeffs):
    """Height of a nonnegative combination of simple roots."""
    if len(coeffs) != rs.rank or any(c < 0 or int(c) != c for c in coeffs):
        raise NotInPositiveCone(f"{tuple(coeffs)} is not in the positive root cone")
    return int(sum(coeffs))


@dataclass(frozen=True)
class ParabolicData:
    """Crossed node ``s`` (1-based) and the induced root bookkeeping."""

    s: int
    levi_nodes: tuple  # 0-based indices of the retained simple roots
    levi_roots: tuple
    complement: tuple  # positive roots with alpha_s coefficient 1, canonical order
    heights: tuple

    @property
    def node(self):
        """0-based index of the crossed node."""
        return self.s - 1

    @property
    def M(self):
        return len(self.complement)


def parabolic(rs, s):
    """Parabolic data for crossing out the simple root alpha_s (1 <= s <= rank)."""
    if not isinstance(s, int) or not 1 <= s <= rs.rank:
        raise InvalidArgument(f"node {s!r} out of range 1..{rs.rank}")
    k = s - 1
    if rs.highest_root[k] != 1:
        raise NotIrreducibleFlag(
            f"{rs.label} with node {s}: the highest root has coefficient "
            f"{rs.highest_root[k]} at the crossed node"
        )
    levi = tuple(beta for beta in rs.positive_roots if beta[k] == 0)
    comp = tuple(beta for beta in rs.positive_roots if beta[k] != 0)
    return ParabolicData(
        s=s,
        levi_nodes=tuple(i for i in range(rs.rank) if i != k),
        levi_roots=levi,
        complement=comp,
        heights=tuple(sum(b) for b in comp),
    )

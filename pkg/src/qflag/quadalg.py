"""Quadratic algebras T(V)/(R): graded dimensions, normal forms, membership.

The degree-k component is built from degree k-1 as the cokernel of
A_{k-2} (x) R -> A_{k-1} (x) V.  Each step row-reduces the image; the pivot
columns are rewritten in terms of the free ones, and the free columns are the
standard monomials of degree k.  Reducing a word letter by letter with these
rewrite tables gives its normal form, and a tensor lies in the ideal iff its
normal form vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegreeMismatch, FiltrationUnset, InvalidArgument
from .linalg import RowReducer, vec_axpy
from .qfield import ONE, LaurentRat

__all__ = [
    "QuadraticAlgebra",
    "DimensionReport",
    "graded_dims",
    "membership",
    "filtered_relation_check",
    "central_degree3_check",
    "normal_form",
]


def _as_scalar(v):
    return v if isinstance(v, LaurentRat) else LaurentRat(v)


@dataclass
class _Level:
    words: list  # standard monomials of this degree
    grades: list
    rewrite: dict = field(default_factory=dict)  # (prev index, generator) -> {index: coeff}


class QuadraticAlgebra:
    """Generators ``0..n-1`` and a space of quadratic relations.

    Relations are given as mappings from generator pairs ``(a, b)`` to
    coefficients and are stored in reduced echelon form on the flattened
    index ``a * n + b``.
    """

    def __init__(self, n, relations, labels=None, grading=None, filtration=None):
        self.n = n
        self.labels = list(labels) if labels else [f"x{k}" for k in range(n)]
        if len(self.labels) != n:
            raise InvalidArgument("label count differs from generator count")
        self.grading = [tuple(g) for g in grading] if grading else None
        self.filtration = [tuple(f) for f in filtration] if filtration else None
        red = RowReducer()
        for rel in relations:
            row = {}
            for key, c in rel.items():
                a, b = key if isinstance(key, tuple) else divmod(key, n)
                if not (0 <= a < n and 0 <= b < n):
                    raise InvalidArgument(f"relation index {key} out of range")
                vec_axpy(row, _as_scalar(c), {a * n + b: ONE})
            if self.grading is not None and row:
                tags = {self._pair_grade(*divmod(j, n)) for j in row}
                if len(tags) > 1:
                    raise InvalidArgument("relation is not homogeneous for the grading")
            red.add(row)
        self.relations = red.rows()
        self._levels = None

    def _pair_grade(self, a, b):
        g = self.grading
        return tuple(x + y for x, y in zip(g[a], g[b]))

    @property
    def relation_dim(self):
        return len(self.relations)

    def relation_pairs(self):
        """Relations as ``{(a, b): coeff}`` mappings."""
        n = self.n
        return [{divmod(j, n): v for j, v in row.items()} for row in self.relations]

    # ------------------------------------------------------------- levels

    def _grade_of(self, word):
        if self.grading is None:
            return ()
        total = [0] * len(self.grading[0]) if self.grading else []
        for g in word:
            total = [x + y for x, y in zip(total, self.grading[g])]
        return tuple(total)

    def _ensure(self, degree):
        n = self.n
        if self._levels is None:
            zero = self._grade_of(())
            self._levels = [
                _Level([()], [zero]),
                _Level([(g,) for g in range(n)], [self._grade_of((g,)) for g in range(n)],
                       {(0, g): {g: ONE} for g in range(n)}),
            ]
        while len(self._levels) <= degree:
            self._levels.append(self._next_level())

    def _next_level(self):
        n = self.n
        k = len(self._levels)
        prev = self._levels[k - 1]
        prev2 = self._levels[k - 2]
        red = RowReducer()
        if prev.words:
            for t in range(len(prev2.words)):
                for rel in self.relations:
                    row = {}
                    for j, c in rel.items():
                        a, b = divmod(j, n)
                        for s, x in prev.rewrite.get((t, a), {}).items():
                            vec_axpy(row, c * x, {s * n + b: ONE})
                    red.add(row)
        free = [col for col in range(len(prev.words) * n) if col not in red.pivots]
        pos = {col: idx for idx, col in enumerate(free)}
        words = []
        for col in free:
            s, g = divmod(col, n)
            words.append(prev.words[s] + (g,))
        rewrite = {}
        for col in range(len(prev.words) * n):
            s, g = divmod(col, n)
            if col in pos:
                rewrite[(s, g)] = {pos[col]: ONE}
            else:
                prow = red.pivots[col]
                rewrite[(s, g)] = {pos[j]: -v for j, v in prow.items() if j != col}
        return _Level(words, [self._grade_of(w) for w in words], rewrite)

    def standard_monomials(self, degree):
        self._ensure(degree)
        return list(self._levels[degree].words)

    def normal_form(self, tensor):
        """Coordinates of a homogeneous tensor ``{word: coeff}`` in the standard monomials."""
        degree = None
        for word in tensor:
            if degree is None:
                degree = len(word)
            elif len(word) != degree:
                raise DegreeMismatch("tensor mixes different degrees")
        if degree is None:
            return {}
        self._ensure(degree)
        out = {}
        cache = {(): {0: ONE}}
        for word, c in tensor.items():
            c = _as_scalar(c)
            if not c:
                continue
            vec = self._reduce_word(tuple(word), cache)
            vec_axpy(out, c, vec)
        return out

    def _reduce_word(self, word, cache):
        if word in cache:
            return cache[word]
        head = self._reduce_word(word[:-1], cache)
        level = self._levels[len(word)]
        g = word[-1]
        out = {}
        for s, x in head.items():
            vec_axpy(out, x, level.rewrite[(s, g)])
        cache[word] = out
        return out


@dataclass
class DimensionReport:
    """Graded dimensions ``dims[k]`` of an algebra up to some degree."""

    dims: list
    algebra: QuadraticAlgebra = field(repr=False, default=None)

    def render(self):
        return "\n".join(f"{k} {d}" for k, d in enumerate(self.dims))

    def __getitem__(self, k):
        return self.dims[k]


def graded_dims(A, maxdeg):
    if maxdeg < 0:
        raise InvalidArgument("maxdeg must be nonnegative")
    A._ensure(maxdeg)
    return DimensionReport([len(A._levels[k].words) for k in range(maxdeg + 1)], A)


def normal_form(A, tensor):
    return A.normal_form(tensor)


def membership(A, degree, tensor):
    """True iff the degree-``degree`` tensor ``{word: coeff}`` lies in the ideal (R)."""
    for word in tensor:
        if len(word) != degree:
            raise DegreeMismatch(f"word {word} does not have degree {degree}")
    return not A.normal_form(tensor)


def pair_filtration(A, a, b):
    """Filtration degree of x_a (x) x_b: the sorted pair of generator degrees."""
    return tuple(sorted((A.filtration[a], A.filtration[b])))


def filtered_relation_check(A, tensor, bound):
    """True iff ``tensor`` lies in R + span of basis tensors of filtration degree < ``bound``.

    ``tensor`` maps pairs ``(a, b)`` to coefficients.
    """
    if A.filtration is None:
        raise FiltrationUnset("the algebra carries no filtration degrees")
    n = A.n
    red = RowReducer()
    for row in A.relations:
        red.add(row)
    for a in range(n):
        for b in range(n):
            if pair_filtration(A, a, b) < bound:
                red.add({a * n + b: ONE})
    row = {}
    for key, c in tensor.items():
        a, b = key
        vec_axpy(row, _as_scalar(c), {a * n + b: ONE})
    return red.contains(row)


def central_degree3_check(A, c, g):
    """True iff c (x) x_g - x_g (x) c lies in the degree-3 part of the ideal."""
    if not 0 <= g < A.n:
        raise InvalidArgument(f"generator {g} out of range")
    t = {}
    for key, v in c.items():
        if len(key) != 2:
            raise DegreeMismatch("central candidate must be quadratic")
        a, b = key
        v = _as_scalar(v)
        t[(a, b, g)] = t.get((a, b, g), 0) + v
        t[(g, a, b)] = t.get((g, a, b), 0) - v
    return membership(A, 3, t)

"""Sparse exact linear algebra over Q(q).

Vectors are plain dicts ``{index: LaurentRat}`` holding nonzero entries only.
``ExactMatrix`` stores a dict of such rows.  Elimination is incremental: a
``RowReducer`` keeps a reduced row echelon form whose pivot column is always
the smallest column index of its row, so the final echelon form, rank, kernel
basis and solutions do not depend on the order rows are inserted.
"""

from __future__ import annotations

from .errors import InvalidArgument, NoSolution
from .qfield import ONE, ZERO, LaurentRat

__all__ = [
    "ExactMatrix",
    "RowReducer",
    "vec_add",
    "vec_scale",
    "vec_axpy",
    "rank",
    "kernel",
    "solve",
    "rref",
]


def vec_axpy(target, coeff, source):
    """In place ``target += coeff * source``."""
    for j, v in source.items():
        cur = target.get(j)
        new = coeff * v if cur is None else cur + coeff * v
        if new:
            target[j] = new
        elif cur is not None:
            del target[j]
    return target


def vec_add(a, b):
    out = dict(a)
    return vec_axpy(out, ONE, b)


def vec_scale(coeff, a):
    if not coeff:
        return {}
    return {j: coeff * v for j, v in a.items()}


class RowReducer:
    """Incrementally maintained reduced row echelon form.

    ``pivots`` maps a pivot column to its row (pivot entry normalized to 1).
    Pivot rows never contain another pivot column.
    """

    __slots__ = ("pivots", "_where")

    def __init__(self):
        self.pivots = {}
        self._where = {}  # column -> set of pivot columns whose rows use it

    def __len__(self):
        return len(self.pivots)

    def reduce(self, row):
        """Return ``row`` minus its projection on the current row space."""
        out = dict(row)
        hits = [c for c in out if c in self.pivots]
        for c in hits:
            coeff = out.pop(c)
            prow = self.pivots[c]
            for j, v in prow.items():
                if j == c:
                    continue
                cur = out.get(j)
                new = -coeff * v if cur is None else cur - coeff * v
                if new:
                    out[j] = new
                elif cur is not None:
                    del out[j]
        return out

    def add(self, row):
        """Insert ``row``; return its new pivot column or ``None`` if dependent."""
        red = self.reduce(row)
        if not red:
            return None
        col = min(red)
        scale = red[col].inv()
        if scale != ONE:
            red = {j: scale * v for j, v in red.items()}
        for pc in list(self._where.get(col, ())):
            prow = self.pivots[pc]
            coeff = prow.pop(col)
            for j, v in red.items():
                if j == col:
                    continue
                cur = prow.get(j)
                new = -coeff * v if cur is None else cur - coeff * v
                if new:
                    if cur is None:
                        self._where.setdefault(j, set()).add(pc)
                    prow[j] = new
                elif cur is not None:
                    del prow[j]
                    self._where[j].discard(pc)
        self._where.pop(col, None)
        self.pivots[col] = red
        for j in red:
            if j != col:
                self._where.setdefault(j, set()).add(col)
        return col

    def contains(self, row):
        return not self.reduce(row)

    def rows(self):
        """Pivot rows in increasing pivot-column order."""
        return [self.pivots[c] for c in sorted(self.pivots)]


class ExactMatrix:
    """Sparse matrix over Q(q) with ``rows[i][j]`` holding nonzero entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = {}
        if rows:
            for i, row in rows.items():
                clean = {j: v for j, v in row.items() if v}
                if clean:
                    self.rows[i] = clean

    # ----------------------------------------------------------- constructors

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n, scale=ONE):
        return cls(n, n, {i: {i: scale} for i in range(n)} if scale else None)

    @classmethod
    def diagonal(cls, values):
        values = list(values)
        return cls(len(values), len(values), {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, data):
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        rows = {}
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise InvalidArgument("ragged matrix rows")
            rows[i] = {j: LaurentRat(v) for j, v in enumerate(r) if v}
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, nrows, columns):
        rows = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                rows.setdefault(i, {})[j] = v
        return cls(nrows, len(columns), rows)

    # ----------------------------------------------------------------- access

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        i, j = key
        return self.rows.get(i, {}).get(j, ZERO)

    def row(self, i):
        return self.rows.get(i, {})

    def column(self, j):
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, r in self.rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def entries(self):
        for i in sorted(self.rows):
            r = self.rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self):
        return sum(len(r) for r in self.rows.values())

    def to_dense(self):
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def is_zero(self):
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(self.entries())))

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # ------------------------------------------------------------- arithmetic

    def _check_same(self, other):
        if self.shape != other.shape:
            raise InvalidArgument(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            vec_axpy(rows.setdefault(i, {}), ONE, r)
        return ExactMatrix(self.nrows, self.ncols, rows)

    def __sub__(self, other):
        return self + other.scale(-ONE)

    def __neg__(self):
        return self.scale(-ONE)

    def scale(self, c):
        c = LaurentRat(c)
        if not c:
            return ExactMatrix(self.nrows, self.ncols)
        return ExactMatrix(
            self.nrows, self.ncols,
            {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()},
        )

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise InvalidArgument(f"cannot multiply {self.shape} by {other.shape}")
        rows = {}
        orows = other.rows
        for i, r in self.rows.items():
            acc = {}
            for k, a in r.items():
                brow = orows.get(k)
                if brow:
                    vec_axpy(acc, a, brow)
            if acc:
                rows[i] = acc
        return ExactMatrix(self.nrows, other.ncols, rows)

    def apply(self, vec):
        """Matrix times a sparse column vector."""
        out = {}
        for i, r in self.rows.items():
            s = None
            for j, v in vec.items():
                a = r.get(j)
                if a is not None:
                    s = a * v if s is None else s + a * v
            if s:
                out[i] = s
        return out

    def apply_left(self, vec):
        """Sparse row vector times the matrix."""
        out = {}
        for i, c in vec.items():
            r = self.rows.get(i)
            if r:
                vec_axpy(out, c, r)
        return out

    def transpose(self):
        rows = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return ExactMatrix(self.ncols, self.nrows, rows)

    @property
    def T(self):
        return self.transpose()

    def kron(self, other):
        """Kronecker product with row-major index flattening."""
        rows = {}
        oc, orr = other.ncols, other.nrows
        for i, r in self.rows.items():
            for k, s in other.rows.items():
                out = {}
                for j, a in r.items():
                    base = j * oc
                    for l, b in s.items():
                        out[base + l] = a * b
                rows[i * orr + k] = out
        return ExactMatrix(self.nrows * orr, self.ncols * oc, rows)

    def submatrix(self, row_idx, col_idx):
        cpos = {c: n for n, c in enumerate(col_idx)}
        rows = {}
        for n, i in enumerate(row_idx):
            r = self.rows.get(i)
            if r:
                sub = {cpos[j]: v for j, v in r.items() if j in cpos}
                if sub:
                    rows[n] = sub
        return ExactMatrix(len(row_idx), len(col_idx), rows)

    # -------------------------------------------------------- linear algebra

    def _reducer(self):
        red = RowReducer()
        for i in sorted(self.rows):
            red.add(self.rows[i])
        return red

    def rank(self):
        return len(self._reducer())

    def rref(self):
        red = self._reducer()
        pivot_rows = red.rows()
        return ExactMatrix(
            self.nrows, self.ncols, {n: r for n, r in enumerate(pivot_rows)}
        )

    def kernel(self):
        """Basis of the right null space as a list of sparse column vectors."""
        red = self._reducer()
        basis = []
        for f in range(self.ncols):
            if f in red.pivots:
                continue
            vec = {f: ONE}
            for pc, prow in red.pivots.items():
                v = prow.get(f)
                if v is not None:
                    vec[pc] = -v
            basis.append(vec)
        return basis

    def solve(self, rhs):
        """Solve ``self @ x = rhs`` for one sparse right-hand side.

        Free variables are set to zero.  Raises ``NoSolution`` when
        inconsistent.
        """
        return self.solve_many([rhs])[0]

    def solve_many(self, rhs_list):
        n = self.ncols
        k = len(rhs_list)
        cols_by_row = {}
        for t, rhs in enumerate(rhs_list):
            for i, v in rhs.items():
                cols_by_row.setdefault(i, {})[n + t] = v
        red = RowReducer()
        for i in sorted(set(self.rows) | set(cols_by_row)):
            row = dict(self.rows.get(i, {}))
            row.update(cols_by_row.get(i, {}))
            red.add(row)
        for pc in red.pivots:
            if pc >= n:
                raise NoSolution("linear system is inconsistent")
        sols = [dict() for _ in range(k)]
        for pc, prow in red.pivots.items():
            for j, v in prow.items():
                if j >= n:
                    sols[j - n][pc] = v
        return sols

    def inverse(self):
        if self.nrows != self.ncols:
            raise InvalidArgument("only square matrices can be inverted")
        n = self.nrows
        red = RowReducer()
        for i in range(n):
            row = dict(self.rows.get(i, {}))
            row[n + i] = ONE
            red.add(row)
        if any(pc >= n for pc in red.pivots) or len(red.pivots) < n:
            raise NoSolution("matrix is singular")
        rows = {}
        for pc, prow in red.pivots.items():
            rows[pc] = {j - n: v for j, v in prow.items() if j >= n}
        return ExactMatrix(n, n, rows)


def rank(m):
    return m.rank()


def kernel(m):
    return m.kernel()


def solve(m, rhs):
    return m.solve(rhs)


def rref(m):
    return m.rref()

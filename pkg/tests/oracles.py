"""Independent reference computations shared by the tests (plain Fractions)."""

from fractions import Fraction
from itertools import product as iproduct

from qflag.qfield import LaurentRat, evaluate_at


def sparse_fraction_rank(rows):
    pivots = {}
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            col = min(row)
            if col not in pivots:
                c = row[col]
                pivots[col] = {k: v / c for k, v in row.items()}
                break
            f = row[col]
            for k, v in pivots[col].items():
                row[k] = row.get(k, 0) - f * v
                if row[k] == 0:
                    del row[k]
    return len(pivots)


def specialize(relations, q0):
    """Relations with LaurentRat coefficients evaluated at q = q0."""
    out = []
    for rel in relations:
        out.append({k: (evaluate_at(v, q0) if isinstance(v, LaurentRat) else Fraction(v))
                    for k, v in rel.items()})
    return out


def brute_force_dims(n, relations, maxdeg):
    """dim A_k = n^k - dim(sum_{a+b=k-2} V^a (x) R (x) V^b), relations {(x, y): c}."""
    dims = []
    for k in range(maxdeg + 1):
        if k < 2:
            dims.append(n**k)
            continue
        rows = []
        for a in range(k - 1):
            b = k - 2 - a
            for left in iproduct(range(n), repeat=a):
                for right in iproduct(range(n), repeat=b):
                    for rel in relations:
                        row = {}
                        for (x, y), c in rel.items():
                            idx = 0
                            for g in left + (x, y) + right:
                                idx = idx * n + g
                            row[idx] = row.get(idx, 0) + c
                        rows.append(row)
        dims.append(n**k - sparse_fraction_rank(rows))
    return dims

"""Independent reference computations used by the tests.

Nothing here calls the Smith normal form code: invariant factors come from
gcds of minors, computed by plain cofactor expansion.
"""

from itertools import combinations
from math import gcd


def det(m):
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def determinant_divisors(rows):
    """``d_k`` = gcd of all ``k x k`` minors, for ``k = 1 .. rank``."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for ri in combinations(range(m), k):
            for ci in combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(rows):
    ds = determinant_divisors(rows)
    prev = 1
    out = []
    for d in ds:
        out.append(d // prev)
        prev = d
    return out


def cokernel(rows, ambient):
    """``(free_rank, torsion)`` of ``Z^ambient / column span(rows)``."""
    factors = invariant_factors(rows) if rows and rows[0] else []
    return ambient - len(factors), tuple(f for f in factors if f > 1)


def cellular_homology(cells, boundaries):
    """Ranks and torsion of ``H_k`` from boundary matrices, via determinant divisors."""
    d = len(cells) - 1
    out = []
    for k in range(d + 1):
        dk = boundaries[k - 1] if k >= 1 else None
        dk1 = boundaries[k] if k < d else None
        rank_dk = len(determinant_divisors(dk)) if dk and dk[0] else 0
        if dk1 and dk1[0]:
            factors = invariant_factors(dk1)
        else:
            factors = []
        free = cells[k] - rank_dk - len(factors)
        out.append((free, tuple(f for f in factors if f > 1)))
    return out
